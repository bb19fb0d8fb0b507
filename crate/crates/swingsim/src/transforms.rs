//! Machine transformations between individual and equivalent machines:
//! energy correction (subtracting the inner-group energy, which breaks the
//! link to any trajectory) and trajectory correction (borrowing the
//! equivalent machine's motion, which preserves it).

use crate::energy::{EnergySeries, EntityTag};
use crate::error::{Error, Result};
use crate::frames::{EquivalentMachineSeries, FrameSeries, GroupSpec};

/// `|a - b| / max(1, |b|)`: the deviation measure used by every
/// superimposition check.
pub fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Energy-corrected individual machine: individual energy minus inner-group
/// energy, componentwise. The kinetic part may go negative; `valid` marks
/// where it does not.
#[derive(Debug, Clone, PartialEq)]
pub struct EcimSeries {
    pub machine: usize,
    pub times: Vec<f64>,
    pub ke: Vec<f64>,
    pub pe: Vec<f64>,
    pub total: Vec<f64>,
    /// True where the corrected kinetic energy is non-negative, i.e. where a
    /// velocity can be read back out of it.
    pub valid: Vec<bool>,
}

impl EcimSeries {
    pub fn n_samples(&self) -> usize {
        self.times.len()
    }

    pub fn as_energy_series(&self) -> EnergySeries {
        EnergySeries {
            entity: EntityTag::EnergyCorrected(self.machine),
            times: self.times.clone(),
            ke: self.ke.clone(),
            pe: self.pe.clone(),
            total: self.total.clone(),
        }
    }
}

/// Subtracts the inner-group energy from the individual energy.
pub fn ecim_energy(imte: &EnergySeries, igmte: &EnergySeries) -> Result<EcimSeries> {
    let machine = match (&imte.entity, &igmte.entity) {
        (EntityTag::Machine(a), EntityTag::InnerGroup(b)) if a == b => *a,
        (EntityTag::Machine(a), _) => *a,
        _ => {
            return Err(Error::invariant(
                "energy correction applies to an individual machine",
                format!("got {} minus {}", imte.entity, igmte.entity),
            ))
        }
    };
    let t = imte.n_samples();
    if igmte.n_samples() != t {
        return Err(Error::GridMismatch {
            left: t,
            right: igmte.n_samples(),
        });
    }
    let ke: Vec<f64> = imte.ke.iter().zip(&igmte.ke).map(|(a, b)| a - b).collect();
    let pe: Vec<f64> = imte.pe.iter().zip(&igmte.pe).map(|(a, b)| a - b).collect();
    let total: Vec<f64> = ke.iter().zip(&pe).map(|(a, b)| a + b).collect();
    let valid = ke.iter().map(|&v| v >= 0.0).collect();
    Ok(EcimSeries {
        machine,
        times: imte.times.clone(),
        ke,
        pe,
        total,
        valid,
    })
}

/// Worst-sample deviations of the energy-corrected superimposition against
/// the equivalent-machine energy, split by component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionCheck {
    pub total_dev: f64,
    pub total_worst: usize,
    pub ke_dev: f64,
    pub ke_worst: usize,
    pub pe_dev: f64,
    pub pe_worst: usize,
}

/// Checks that the summed corrected energies reproduce the equivalent
/// machine's energy, returning the largest relative deviation of the total
/// and of the kinetic and potential parts separately.
pub fn ecim_superposition_check(
    ecims: &[EcimSeries],
    emte: &EnergySeries,
    group: &GroupSpec,
) -> Result<SuperpositionCheck> {
    let mut covered: Vec<usize> = ecims.iter().map(|e| e.machine).collect();
    covered.sort_unstable();
    let mut wanted: Vec<usize> = group.members().to_vec();
    wanted.sort_unstable();
    if covered != wanted {
        return Err(Error::invariant(
            "corrected machines cover exactly the group",
            format!("got {covered:?}, group {wanted:?}"),
        ));
    }
    let t = emte.n_samples();
    for e in ecims {
        if e.n_samples() != t {
            return Err(Error::GridMismatch {
                left: t,
                right: e.n_samples(),
            });
        }
    }

    let mut check = SuperpositionCheck {
        total_dev: 0.0,
        total_worst: 0,
        ke_dev: 0.0,
        ke_worst: 0,
        pe_dev: 0.0,
        pe_worst: 0,
    };
    for k in 0..t {
        let sum_ke: f64 = ecims.iter().map(|e| e.ke[k]).sum();
        let sum_pe: f64 = ecims.iter().map(|e| e.pe[k]).sum();
        let d_ke = rel_dev(sum_ke, emte.ke[k]);
        let d_pe = rel_dev(sum_pe, emte.pe[k]);
        let d_total = rel_dev(sum_ke + sum_pe, emte.total[k]);
        if d_ke > check.ke_dev {
            check.ke_dev = d_ke;
            check.ke_worst = k;
        }
        if d_pe > check.pe_dev {
            check.pe_dev = d_pe;
            check.pe_worst = k;
        }
        if d_total > check.total_dev {
            check.total_dev = d_total;
            check.total_worst = k;
        }
    }
    Ok(check)
}

/// Running value of the cross term that the group angle constraint kills:
/// the inner-group path integral of the group force against the
/// inertia-weighted inner angles. Returns its largest magnitude over time.
pub fn group_cross_term(ig: &FrameSeries, em: &EquivalentMachineSeries) -> (f64, usize) {
    let m_cr = em.inertia;
    let t = ig.n_samples();
    let k_cols = ig.machine_ids.len();
    let mut acc = 0.0;
    let mut worst = 0.0;
    let mut worst_idx = 0;
    for k in 1..t {
        let scale = 0.5 * (em.force_pf[k - 1] + em.force_pf[k]) / m_cr;
        let mut weighted: f64 = 0.0;
        for (c, &mi) in ig.inertias.iter().enumerate().take(k_cols) {
            weighted += mi * (ig.rel_angle[(k, c)] - ig.rel_angle[(k - 1, c)]);
        }
        acc += scale * weighted;
        if acc.abs() > worst {
            worst = acc.abs();
            worst_idx = k;
        }
    }
    (worst, worst_idx)
}

/// A reconstructed trajectory read back out of corrected kinetic energy.
/// Samples where the corrected kinetic energy is negative have no velocity;
/// the march resumes from the last defined angle and the series is flagged
/// broken.
#[derive(Debug, Clone, PartialEq)]
pub struct EcimTrajectory {
    pub machine: usize,
    pub times: Vec<f64>,
    pub angle: Vec<f64>,
    pub velocity: Vec<f64>,
    pub valid: Vec<bool>,
    pub broken: bool,
}

impl EcimTrajectory {
    pub fn n_samples(&self) -> usize {
        self.times.len()
    }
}

/// Rebuilds a trajectory from kinetic energy alone: speed magnitude from
/// `sqrt(2·(imke - igmke)/M)`, sign borrowed from the machine's frame speed,
/// angle by an explicit Euler march from the machine's initial frame angle.
/// Undefined stretches (negative corrected kinetic energy) are data, not
/// errors.
pub fn ecim_reconstruct_trajectory(
    imte: &EnergySeries,
    igmte: &EnergySeries,
    fs: &FrameSeries,
    machine: usize,
) -> Result<EcimTrajectory> {
    let t = imte.n_samples();
    if igmte.n_samples() != t {
        return Err(Error::GridMismatch {
            left: t,
            right: igmte.n_samples(),
        });
    }
    if fs.n_samples() != t {
        return Err(Error::GridMismatch {
            left: t,
            right: fs.n_samples(),
        });
    }
    let col = fs.column_of(machine)?;
    let m_i = fs.inertias[col];
    let dt = fs.dt;

    let mut angle = vec![f64::NAN; t];
    let mut velocity = vec![f64::NAN; t];
    let mut valid = vec![false; t];
    let mut broken = false;

    let mut pos = fs.rel_angle[(0, col)];
    let mut last_defined = pos;
    for k in 0..t {
        let ke_ec = imte.ke[k] - igmte.ke[k];
        if ke_ec >= 0.0 {
            let v = fs.rel_speed[(k, col)].signum() * (2.0 * ke_ec / m_i).sqrt();
            angle[k] = pos;
            velocity[k] = v;
            valid[k] = true;
            last_defined = pos;
            pos += v * dt;
        } else {
            broken = true;
            pos = last_defined;
        }
    }

    Ok(EcimTrajectory {
        machine,
        times: imte.times.clone(),
        angle,
        velocity,
        valid,
        broken,
    })
}

/// Trajectory-corrected individual machine: the member inertia carried on
/// the equivalent machine's motion. Its energy is the `M_i/M_CR` scale-down
/// of the equivalent machine's.
#[derive(Debug, Clone, PartialEq)]
pub struct TcimSeries {
    pub machine: usize,
    pub inertia: f64,
    pub times: Vec<f64>,
    pub ke: Vec<f64>,
    pub pe: Vec<f64>,
    pub total: Vec<f64>,
    /// Borrowed motion: the equivalent machine's angle series.
    pub motion_angle: Vec<f64>,
    /// Borrowed motion: the equivalent machine's speed series.
    pub motion_speed: Vec<f64>,
    /// The machine's share of the equivalent machine's post-fault force.
    pub motion_force_pf: Vec<f64>,
    pub clear_index: usize,
}

impl TcimSeries {
    pub fn n_samples(&self) -> usize {
        self.times.len()
    }

    pub fn as_energy_series(&self) -> EnergySeries {
        EnergySeries {
            entity: EntityTag::TrajectoryCorrected(self.machine),
            times: self.times.clone(),
            ke: self.ke.clone(),
            pe: self.pe.clone(),
            total: self.total.clone(),
        }
    }
}

/// Builds the trajectory-corrected machine for one group member.
pub fn tcim(
    em: &EquivalentMachineSeries,
    em_energy: &EnergySeries,
    machine: usize,
) -> Result<TcimSeries> {
    if !em.group.contains(machine) {
        return Err(Error::UnknownMachine(machine));
    }
    let t = em.n_samples();
    if em_energy.n_samples() != t {
        return Err(Error::GridMismatch {
            left: t,
            right: em_energy.n_samples(),
        });
    }
    let idx = em
        .group
        .members()
        .iter()
        .position(|&id| id == machine)
        .expect("membership checked");
    let m_i = em.group.inertias()[idx];
    let ratio = m_i / em.inertia;

    let ke: Vec<f64> = em.speed.iter().map(|&w| 0.5 * m_i * w * w).collect();
    let pe: Vec<f64> = em_energy.pe.iter().map(|&v| ratio * v).collect();
    let total: Vec<f64> = ke.iter().zip(&pe).map(|(a, b)| a + b).collect();
    let motion_force_pf: Vec<f64> = em.force_pf.iter().map(|&f| ratio * f).collect();

    Ok(TcimSeries {
        machine,
        inertia: m_i,
        times: em.times.clone(),
        ke,
        pe,
        total,
        motion_angle: em.angle.clone(),
        motion_speed: em.speed.clone(),
        motion_force_pf,
        clear_index: em.clear_index,
    })
}

/// Energy shift produced by replacing a machine's own motion with the
/// equivalent machine's.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaVSeries {
    pub machine: usize,
    pub times: Vec<f64>,
    pub dke: Vec<f64>,
    pub dpe: Vec<f64>,
    pub dtotal: Vec<f64>,
}

/// Difference between the individual energy and the trajectory-corrected
/// energy, componentwise.
pub fn delta_v(imte: &EnergySeries, tcim: &TcimSeries) -> Result<DeltaVSeries> {
    let t = imte.n_samples();
    if tcim.n_samples() != t {
        return Err(Error::GridMismatch {
            left: t,
            right: tcim.n_samples(),
        });
    }
    let dke: Vec<f64> = imte.ke.iter().zip(&tcim.ke).map(|(a, b)| a - b).collect();
    let dpe: Vec<f64> = imte.pe.iter().zip(&tcim.pe).map(|(a, b)| a - b).collect();
    let dtotal: Vec<f64> = dke.iter().zip(&dpe).map(|(a, b)| a + b).collect();
    Ok(DeltaVSeries {
        machine: tcim.machine,
        times: imte.times.clone(),
        dke,
        dpe,
        dtotal,
    })
}
