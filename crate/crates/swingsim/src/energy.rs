//! Transient energy of machines, groups and derived entities: kinetic parts
//! from speeds, potential parts as path integrals of the post-fault
//! accelerating force, anchored at the post-fault stable equilibrium.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::frames::{EquivalentMachineSeries, FrameRef, FrameSeries, GroupSpec};
use crate::model::{accelerating_power, sep_solve, SystemModel};

/// Number of quadrature intervals on the straight-line path from the
/// equilibrium to the initial configuration.
pub const LEG_INTERVALS: usize = 2000;

/// What an energy series describes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntityTag {
    Machine(usize),
    EquivalentMachine,
    InnerGroup(usize),
    Superimposed,
    EnergyCorrected(usize),
    TrajectoryCorrected(usize),
}

impl std::fmt::Display for EntityTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EntityTag::Machine(i) => write!(f, "machine_{i}"),
            EntityTag::EquivalentMachine => write!(f, "equivalent_machine"),
            EntityTag::InnerGroup(i) => write!(f, "inner_group_{i}"),
            EntityTag::Superimposed => write!(f, "superimposed"),
            EntityTag::EnergyCorrected(i) => write!(f, "ecim_{i}"),
            EntityTag::TrajectoryCorrected(i) => write!(f, "tcim_{i}"),
        }
    }
}

/// Kinetic, potential and total transient energy over time for one entity.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySeries {
    pub entity: EntityTag,
    pub times: Vec<f64>,
    pub ke: Vec<f64>,
    pub pe: Vec<f64>,
    pub total: Vec<f64>,
}

impl EnergySeries {
    pub fn n_samples(&self) -> usize {
        self.times.len()
    }
}

/// Dynamic liberation point of one entity: the first post-clearing sample
/// where the restraining force turns accelerating while the angle advances.
#[derive(Debug, Clone, PartialEq)]
pub struct DlpReport {
    pub index: Option<usize>,
    pub time: Option<f64>,
    pub separated: bool,
}

/// Potential-energy anchor: the post-fault stable equilibrium plus the
/// precomputed force samples along the straight path from the equilibrium to
/// the initial configuration. All entity energies integrate their initial
/// offset over these shared samples so that the group superimposition
/// identities carry over to the offsets exactly.
#[derive(Debug, Clone)]
pub struct PeAnchor {
    sep_sys: Vec<f64>,
    delta0_sys: Vec<f64>,
    /// (K+1)×n post-fault relative forces along the path.
    leg_force_pf: DMatrix<f64>,
    /// Simpson weights over the path parameter, summing to one.
    weights: Vec<f64>,
    inertias: Vec<f64>,
}

impl PeAnchor {
    /// Builds the anchor from an explicit equilibrium and initial point, both
    /// in the system center-of-inertia frame.
    pub fn new(
        model: &SystemModel,
        sep_sys: &[f64],
        delta0_sys: &[f64],
        leg_intervals: usize,
    ) -> Result<Self> {
        let n = model.n_machines();
        if sep_sys.len() != n {
            return Err(Error::DimensionMismatch {
                context: "equilibrium angle vector",
                expected: n,
                got: sep_sys.len(),
            });
        }
        if delta0_sys.len() != n {
            return Err(Error::DimensionMismatch {
                context: "initial angle vector",
                expected: n,
                got: delta0_sys.len(),
            });
        }
        let k = leg_intervals.max(2) + leg_intervals.max(2) % 2; // even
        let m_total = model.total_inertia();
        let inertias = model.inertias();

        let mut leg_force_pf = DMatrix::zeros(k + 1, n);
        let mut point = vec![0.0; n];
        for row in 0..=k {
            let s = row as f64 / k as f64;
            for j in 0..n {
                point[j] = sep_sys[j] + s * (delta0_sys[j] - sep_sys[j]);
            }
            let p = accelerating_power(&point, &model.post_fault, &model.machines)?;
            let p_sum: f64 = p.iter().sum();
            for j in 0..n {
                leg_force_pf[(row, j)] = p[j] - inertias[j] / m_total * p_sum;
            }
        }

        let h = 1.0 / k as f64;
        let mut weights = vec![0.0; k + 1];
        for (row, w) in weights.iter_mut().enumerate() {
            *w = if row == 0 || row == k {
                h / 3.0
            } else if row % 2 == 1 {
                4.0 * h / 3.0
            } else {
                2.0 * h / 3.0
            };
        }

        Ok(Self {
            sep_sys: sep_sys.to_vec(),
            delta0_sys: delta0_sys.to_vec(),
            leg_force_pf,
            weights,
            inertias,
        })
    }

    /// Solves the post-fault equilibrium from the frame's initial sample and
    /// anchors there.
    pub fn for_frame(model: &SystemModel, fs: &FrameSeries) -> Result<Self> {
        let n = model.n_machines();
        if fs.machine_ids.len() != n {
            return Err(Error::DimensionMismatch {
                context: "frame machine count",
                expected: n,
                got: fs.machine_ids.len(),
            });
        }
        let delta0: Vec<f64> = (0..n).map(|j| fs.rel_angle[(0, j)]).collect();
        let sep = sep_solve(&model.post_fault, &model.machines, &delta0)?;
        Self::new(model, &sep, &delta0, LEG_INTERVALS)
    }

    /// Post-fault stable equilibrium in the system frame.
    pub fn sep_sys(&self) -> &[f64] {
        &self.sep_sys
    }

    fn delta_leg(&self, machine: usize) -> f64 {
        self.delta0_sys[machine] - self.sep_sys[machine]
    }

    /// Initial potential energy of one machine: line integral of its
    /// negated post-fault force from the equilibrium to the start point.
    pub fn machine_offset(&self, machine: usize) -> Result<f64> {
        if machine >= self.inertias.len() {
            return Err(Error::UnknownMachine(machine));
        }
        let dd = self.delta_leg(machine);
        let acc: f64 = self
            .weights
            .iter()
            .enumerate()
            .map(|(row, w)| w * -self.leg_force_pf[(row, machine)])
            .sum();
        Ok(acc * dd)
    }

    /// Initial potential energy of the group equivalent machine.
    pub fn group_offset(&self, group: &GroupSpec) -> Result<f64> {
        let m_cr = group.total_inertia();
        let mut dd = 0.0;
        for (&id, &mi) in group.members().iter().zip(group.inertias()) {
            if id >= self.inertias.len() {
                return Err(Error::UnknownMachine(id));
            }
            dd += mi / m_cr * self.delta_leg(id);
        }
        let acc: f64 = self
            .weights
            .iter()
            .enumerate()
            .map(|(row, w)| {
                let f_cr: f64 = group
                    .members()
                    .iter()
                    .map(|&id| self.leg_force_pf[(row, id)])
                    .sum();
                w * -f_cr
            })
            .sum();
        Ok(acc * dd)
    }

    /// Initial potential energy of one inner-group machine.
    pub fn inner_offset(&self, machine: usize, group: &GroupSpec) -> Result<f64> {
        if !group.contains(machine) {
            return Err(Error::UnknownMachine(machine));
        }
        let m_cr = group.total_inertia();
        let mi = self
            .inertias
            .get(machine)
            .copied()
            .ok_or(Error::UnknownMachine(machine))?;
        let share = mi / m_cr;
        let mut dd_cr = 0.0;
        for (&id, &mj) in group.members().iter().zip(group.inertias()) {
            dd_cr += mj / m_cr * self.delta_leg(id);
        }
        let dd = self.delta_leg(machine) - dd_cr;
        let acc: f64 = self
            .weights
            .iter()
            .enumerate()
            .map(|(row, w)| {
                let f_cr: f64 = group
                    .members()
                    .iter()
                    .map(|&id| self.leg_force_pf[(row, id)])
                    .sum();
                let f_inner = self.leg_force_pf[(row, machine)] - share * f_cr;
                w * -f_inner
            })
            .sum();
        Ok(acc * dd)
    }
}

/// Trapezoidal accumulation of `∫ -f dδ` along the sampled motion starting
/// from `offset`.
fn accumulate_pe(force: &[f64], angle: &[f64], offset: f64) -> Vec<f64> {
    let t = force.len();
    let mut pe = Vec::with_capacity(t);
    let mut acc = offset;
    pe.push(acc);
    for k in 1..t {
        acc -= 0.5 * (force[k - 1] + force[k]) * (angle[k] - angle[k - 1]);
        pe.push(acc);
    }
    pe
}

fn assemble(entity: EntityTag, times: Vec<f64>, ke: Vec<f64>, pe: Vec<f64>) -> EnergySeries {
    let total = ke.iter().zip(&pe).map(|(a, b)| a + b).collect();
    EnergySeries {
        entity,
        times,
        ke,
        pe,
        total,
    }
}

/// Individual-machine transient energy in the system frame.
pub fn imte(fs: &FrameSeries, machine: usize, anchor: &PeAnchor) -> Result<EnergySeries> {
    let col = fs.column_of(machine)?;
    let m_i = fs.inertias[col];
    let ke: Vec<f64> = fs
        .rel_speed
        .column(col)
        .iter()
        .map(|&w| 0.5 * m_i * w * w)
        .collect();
    let force: Vec<f64> = fs.rel_force_pf.column(col).iter().copied().collect();
    let angle: Vec<f64> = fs.rel_angle.column(col).iter().copied().collect();
    let pe = accumulate_pe(&force, &angle, anchor.machine_offset(machine)?);
    Ok(assemble(EntityTag::Machine(machine), fs.times.clone(), ke, pe))
}

/// Equivalent-machine transient energy of a group.
pub fn emte(em: &EquivalentMachineSeries, anchor: &PeAnchor) -> Result<EnergySeries> {
    let ke: Vec<f64> = em.speed.iter().map(|&w| 0.5 * em.inertia * w * w).collect();
    let pe = accumulate_pe(&em.force_pf, &em.angle, anchor.group_offset(&em.group)?);
    Ok(assemble(EntityTag::EquivalentMachine, em.times.clone(), ke, pe))
}

/// Inner-group-machine transient energy of one member, from a frame in the
/// group reference.
pub fn igmte(ig: &FrameSeries, machine: usize, anchor: &PeAnchor) -> Result<EnergySeries> {
    let group = match &ig.reference {
        FrameRef::Group(g) => g.clone(),
        FrameRef::Reference(_) => {
            return Err(Error::invariant(
                "inner-group energy needs a group frame",
                "frame is in a plain reference",
            ))
        }
    };
    let col = ig.column_of(machine)?;
    let m_i = ig.inertias[col];
    let ke: Vec<f64> = ig
        .rel_speed
        .column(col)
        .iter()
        .map(|&w| 0.5 * m_i * w * w)
        .collect();
    let force: Vec<f64> = ig.rel_force_pf.column(col).iter().copied().collect();
    let angle: Vec<f64> = ig.rel_angle.column(col).iter().copied().collect();
    let pe = accumulate_pe(&force, &angle, anchor.inner_offset(machine, &group)?);
    Ok(assemble(EntityTag::InnerGroup(machine), ig.times.clone(), ke, pe))
}

/// Superimposed-machine transient energy: elementwise sum of the given
/// series.
pub fn smte(series: &[EnergySeries]) -> Result<EnergySeries> {
    let first = series.first().ok_or(Error::EmptyReference)?;
    let t = first.n_samples();
    for s in series {
        if s.n_samples() != t {
            return Err(Error::GridMismatch {
                left: t,
                right: s.n_samples(),
            });
        }
    }
    let mut ke = vec![0.0; t];
    let mut pe = vec![0.0; t];
    for s in series {
        for k in 0..t {
            ke[k] += s.ke[k];
            pe[k] += s.pe[k];
        }
    }
    Ok(assemble(EntityTag::Superimposed, first.times.clone(), ke, pe))
}

/// Scans for the dynamic liberation point: the first sample after the
/// clearing index where the post-fault force crosses zero from negative to
/// positive while the angle is increasing. Absence is a valid outcome.
pub fn detect_dlp(
    force_pf: &[f64],
    angle: &[f64],
    times: &[f64],
    clear_index: usize,
) -> DlpReport {
    let t = force_pf.len().min(angle.len()).min(times.len());
    for k in clear_index..t.saturating_sub(1) {
        if force_pf[k] < 0.0 && force_pf[k + 1] >= 0.0 && angle[k + 1] > angle[k] {
            return DlpReport {
                index: Some(k + 1),
                time: Some(times[k + 1]),
                separated: true,
            };
        }
    }
    DlpReport {
        index: None,
        time: None,
        separated: false,
    }
}
