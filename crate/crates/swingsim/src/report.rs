//! Identity-check report: every superimposition and closure identity the
//! transformations rely on, each with its worst deviation, worst sample and
//! declared tolerance.

use serde::Serialize;

use crate::energy::{emte, igmte, imte, PeAnchor};
use crate::error::Result;
use crate::frames::{equivalent_machine, inner_group, to_reference, GroupSpec, ReferenceSpec};
use crate::model::SystemModel;
use crate::sim::Trajectory;
use crate::transforms::{
    ecim_energy, ecim_superposition_check, group_cross_term, rel_dev, tcim, EcimSeries,
};

/// Default tolerances for each named identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Weighted angle/speed sums over the system frame, absolute.
    pub coi_closure: f64,
    /// Kinetic superimposition of corrected machines, relative.
    pub ecim_ke: f64,
    /// Potential superimposition of corrected machines, relative.
    pub ecim_pe: f64,
    /// Total superimposition of corrected machines, relative.
    pub ecim_total: f64,
    /// Accumulated cross term of the group constraint, absolute.
    pub cross_term: f64,
    /// Scale-down of each trajectory-corrected machine, relative.
    pub tcim_scale: f64,
    /// Superimposition of the trajectory-corrected machines, relative.
    pub tcim_superposition: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            coi_closure: 1e-9,
            ecim_ke: 1e-10,
            ecim_pe: 1e-6,
            ecim_total: 1e-6,
            cross_term: 1e-12,
            tcim_scale: 1e-12,
            tcim_superposition: 1e-12,
        }
    }
}

impl Tolerances {
    /// Applies `name=value` overrides, e.g. `ecim_total=1e-5`.
    pub fn apply_override(&mut self, name: &str, value: f64) -> std::result::Result<(), String> {
        match name {
            "coi_closure" => self.coi_closure = value,
            "ecim_ke" => self.ecim_ke = value,
            "ecim_pe" => self.ecim_pe = value,
            "ecim_total" => self.ecim_total = value,
            "cross_term" => self.cross_term = value,
            "tcim_scale" => self.tcim_scale = value,
            "tcim_superposition" => self.tcim_superposition = value,
            other => return Err(format!("unknown tolerance {other:?}")),
        }
        Ok(())
    }
}

/// One named identity with its worst observed deviation.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub max_deviation: f64,
    pub worst_index: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// The full identity report; serializes to the JSON artifact.
#[derive(Debug, Clone, Serialize, Default)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn push(&mut self, name: impl Into<String>, dev: f64, worst: usize, tol: f64) {
        self.checks.push(IdentityCheck {
            name: name.into(),
            max_deviation: dev,
            worst_index: worst,
            tolerance: tol,
            pass: dev <= tol,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs every identity check on one trajectory and group.
pub fn run_identity_checks(
    model: &SystemModel,
    traj: &Trajectory,
    group: &GroupSpec,
    tol: &Tolerances,
) -> Result<IdentityReport> {
    let fs = to_reference(traj, model, &ReferenceSpec::system(model))?;
    let em = equivalent_machine(&fs, group)?;
    let ig = inner_group(&fs, group)?;
    let anchor = PeAnchor::for_frame(model, &fs)?;

    let mut report = IdentityReport::default();
    let t = fs.n_samples();

    // weighted closure of the system frame
    let mut worst_d = (0.0f64, 0usize);
    let mut worst_w = (0.0f64, 0usize);
    for k in 0..t {
        let mut sd = 0.0;
        let mut sw = 0.0;
        for (c, &mi) in fs.inertias.iter().enumerate() {
            sd += mi * fs.rel_angle[(k, c)];
            sw += mi * fs.rel_speed[(k, c)];
        }
        if sd.abs() > worst_d.0 {
            worst_d = (sd.abs(), k);
        }
        if sw.abs() > worst_w.0 {
            worst_w = (sw.abs(), k);
        }
    }
    report.push("coi_closure_angle", worst_d.0, worst_d.1, tol.coi_closure);
    report.push("coi_closure_speed", worst_w.0, worst_w.1, tol.coi_closure);

    // group energies and corrected machines
    let e_em = emte(&em, &anchor)?;
    let mut ecims: Vec<EcimSeries> = Vec::new();
    for &i in group.members() {
        let e_im = imte(&fs, i, &anchor)?;
        let e_ig = igmte(&ig, i, &anchor)?;
        ecims.push(ecim_energy(&e_im, &e_ig)?);
    }
    let sup = ecim_superposition_check(&ecims, &e_em, group)?;
    report.push("ecim_ke_superposition", sup.ke_dev, sup.ke_worst, tol.ecim_ke);
    report.push("ecim_pe_superposition", sup.pe_dev, sup.pe_worst, tol.ecim_pe);
    report.push(
        "ecim_total_superposition",
        sup.total_dev,
        sup.total_worst,
        tol.ecim_total,
    );

    let (cross, cross_idx) = group_cross_term(&ig, &em);
    report.push("group_cross_term", cross, cross_idx, tol.cross_term);

    // trajectory-corrected machines: scale-down and superimposition
    let mut scale_dev = (0.0f64, 0usize);
    let mut sup_dev = (0.0f64, 0usize);
    let tcs: Vec<_> = group
        .members()
        .iter()
        .map(|&i| tcim(&em, &e_em, i))
        .collect::<Result<_>>()?;
    for k in 0..t {
        let mut sum = 0.0;
        for tc in &tcs {
            let ratio = tc.inertia / em.inertia;
            let d = rel_dev(tc.total[k], ratio * e_em.total[k]);
            if d > scale_dev.0 {
                scale_dev = (d, k);
            }
            sum += tc.total[k];
        }
        let d = rel_dev(sum, e_em.total[k]);
        if d > sup_dev.0 {
            sup_dev = (d, k);
        }
    }
    report.push("tcim_scale_down", scale_dev.0, scale_dev.1, tol.tcim_scale);
    report.push(
        "tcim_superposition",
        sup_dev.0,
        sup_dev.1,
        tol.tcim_superposition,
    );

    Ok(report)
}
