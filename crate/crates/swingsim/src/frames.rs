//! Relative-motion references: expresses trajectories against an
//! inertia-weighted center, aggregates groups into an equivalent machine and
//! splits out the inner-group machine motions.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{accelerating_power, SystemModel};
use crate::sim::Trajectory;

/// Motion reference built from an inertia-weighted member set.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSpec {
    members: Vec<usize>,
    weights: Vec<f64>,
    total_inertia: f64,
}

impl ReferenceSpec {
    pub fn new(members: Vec<usize>, model: &SystemModel) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyReference);
        }
        let mut weights = Vec::with_capacity(members.len());
        for &id in &members {
            let m = model
                .machines
                .iter()
                .find(|m| m.id == id)
                .ok_or(Error::UnknownMachine(id))?;
            weights.push(m.inertia);
        }
        let total_inertia = weights.iter().sum();
        Ok(Self {
            members,
            weights,
            total_inertia,
        })
    }

    /// The whole-system center-of-inertia reference.
    pub fn system(model: &SystemModel) -> Self {
        Self::new((0..model.n_machines()).collect(), model).expect("validated model is nonempty")
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn total_inertia(&self) -> f64 {
        self.total_inertia
    }
}

/// A chosen machine group and its aggregate inertia.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    members: Vec<usize>,
    inertias: Vec<f64>,
    total_inertia: f64,
}

impl GroupSpec {
    pub fn new(members: Vec<usize>, model: &SystemModel) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyReference);
        }
        let mut inertias = Vec::with_capacity(members.len());
        for &id in &members {
            let m = model
                .machines
                .iter()
                .find(|m| m.id == id)
                .ok_or(Error::UnknownMachine(id))?;
            inertias.push(m.inertia);
        }
        let total_inertia = inertias.iter().sum();
        Ok(Self {
            members,
            inertias,
            total_inertia,
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn inertias(&self) -> &[f64] {
        &self.inertias
    }

    pub fn total_inertia(&self) -> f64 {
        self.total_inertia
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members.contains(&id)
    }
}

/// Which center a [`FrameSeries`] is measured against.
#[derive(Debug, Clone, PartialEq)]
pub enum FrameRef {
    /// Whole-system (or custom member set) center of inertia.
    Reference(ReferenceSpec),
    /// Group center of inertia.
    Group(GroupSpec),
}

/// Per-machine relative angle, speed and force series in a declared motion
/// reference. Forces are carried twice: as driven by the stage-correct
/// network (`rel_force`) and as recomputed on the post-fault network along
/// the whole trajectory (`rel_force_pf`), the potential-energy integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSeries {
    pub reference: FrameRef,
    pub machine_ids: Vec<usize>,
    pub inertias: Vec<f64>,
    pub times: Vec<f64>,
    pub clear_index: usize,
    pub dt: f64,
    /// T×k relative angles, rad.
    pub rel_angle: DMatrix<f64>,
    /// T×k relative speeds, rad/s.
    pub rel_speed: DMatrix<f64>,
    /// T×k relative accelerating forces, stage-correct network, pu.
    pub rel_force: DMatrix<f64>,
    /// T×k relative accelerating forces on the post-fault network, pu.
    pub rel_force_pf: DMatrix<f64>,
}

impl FrameSeries {
    pub fn n_samples(&self) -> usize {
        self.times.len()
    }

    /// Column index of a machine id.
    pub fn column_of(&self, id: usize) -> Result<usize> {
        self.machine_ids
            .iter()
            .position(|&m| m == id)
            .ok_or(Error::UnknownMachine(id))
    }

    pub fn angle_of(&self, id: usize) -> Result<Vec<f64>> {
        Ok(self.rel_angle.column(self.column_of(id)?).iter().copied().collect())
    }

    pub fn speed_of(&self, id: usize) -> Result<Vec<f64>> {
        Ok(self.rel_speed.column(self.column_of(id)?).iter().copied().collect())
    }

    pub fn force_pf_of(&self, id: usize) -> Result<Vec<f64>> {
        Ok(self
            .rel_force_pf
            .column(self.column_of(id)?)
            .iter()
            .copied()
            .collect())
    }

    pub fn inertia_of(&self, id: usize) -> Result<f64> {
        Ok(self.inertias[self.column_of(id)?])
    }
}

/// Aggregate motion of a group treated as one machine: inertia-weighted
/// angles and speeds, summed forces.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentMachineSeries {
    pub group: GroupSpec,
    pub inertia: f64,
    pub times: Vec<f64>,
    pub clear_index: usize,
    pub dt: f64,
    pub angle: Vec<f64>,
    pub speed: Vec<f64>,
    pub force: Vec<f64>,
    pub force_pf: Vec<f64>,
}

impl EquivalentMachineSeries {
    pub fn n_samples(&self) -> usize {
        self.times.len()
    }
}

/// Expresses a trajectory relative to the reference center: angles and
/// speeds lose the weighted mean, and each machine's accelerating power
/// sheds its inertia share of the reference total. Forces are recomputed
/// per sample from the stage-correct network and, separately, from the
/// post-fault network.
pub fn to_reference(
    traj: &Trajectory,
    model: &SystemModel,
    reference: &ReferenceSpec,
) -> Result<FrameSeries> {
    let n = model.n_machines();
    if traj.n_machines() != n {
        return Err(Error::DimensionMismatch {
            context: "trajectory machine count",
            expected: n,
            got: traj.n_machines(),
        });
    }
    for &id in reference.members() {
        if id >= n {
            return Err(Error::UnknownMachine(id));
        }
    }
    let t = traj.n_samples();
    let m_ref = reference.total_inertia();
    let inertias = model.inertias();

    let mut rel_angle = DMatrix::zeros(t, n);
    let mut rel_speed = DMatrix::zeros(t, n);
    let mut rel_force = DMatrix::zeros(t, n);
    let mut rel_force_pf = DMatrix::zeros(t, n);

    let mut row_angles = vec![0.0; n];
    for k in 0..t {
        for (j, a) in row_angles.iter_mut().enumerate() {
            *a = traj.angles[(k, j)];
        }
        let mut d_ref = 0.0;
        let mut w_ref = 0.0;
        // normalized weights keep the singleton reference exact (w = 1.0)
        for (&id, &w) in reference.members().iter().zip(&reference.weights) {
            let wn = w / m_ref;
            d_ref += wn * traj.angles[(k, id)];
            w_ref += wn * traj.speeds[(k, id)];
        }

        let p_stage = accelerating_power(&row_angles, traj.stage_net(model, k), &model.machines)?;
        let p_pf = accelerating_power(&row_angles, &model.post_fault, &model.machines)?;
        let p_ref_stage: f64 = reference.members().iter().map(|&id| p_stage[id]).sum();
        let p_ref_pf: f64 = reference.members().iter().map(|&id| p_pf[id]).sum();

        for j in 0..n {
            rel_angle[(k, j)] = traj.angles[(k, j)] - d_ref;
            rel_speed[(k, j)] = traj.speeds[(k, j)] - w_ref;
            let share = inertias[j] / m_ref;
            rel_force[(k, j)] = p_stage[j] - share * p_ref_stage;
            rel_force_pf[(k, j)] = p_pf[j] - share * p_ref_pf;
        }
    }

    Ok(FrameSeries {
        reference: FrameRef::Reference(reference.clone()),
        machine_ids: (0..n).collect(),
        inertias,
        times: traj.times.clone(),
        clear_index: traj.clear_index,
        dt: traj.dt,
        rel_angle,
        rel_speed,
        rel_force,
        rel_force_pf,
    })
}

/// Aggregates group member columns of a frame into the equivalent machine:
/// inertia-weighted mean angle and speed, summed forces.
pub fn equivalent_machine(fs: &FrameSeries, group: &GroupSpec) -> Result<EquivalentMachineSeries> {
    let cols: Vec<usize> = group
        .members()
        .iter()
        .map(|&id| fs.column_of(id))
        .collect::<Result<_>>()?;
    let m_cr = group.total_inertia();
    let t = fs.n_samples();

    let mut angle = vec![0.0; t];
    let mut speed = vec![0.0; t];
    let mut force = vec![0.0; t];
    let mut force_pf = vec![0.0; t];
    for k in 0..t {
        let mut d = 0.0;
        let mut w = 0.0;
        let mut f = 0.0;
        let mut f_pf = 0.0;
        // normalized weights keep the singleton group exact (w = 1.0)
        for (&col, &mi) in cols.iter().zip(group.inertias()) {
            let wn = mi / m_cr;
            d += wn * fs.rel_angle[(k, col)];
            w += wn * fs.rel_speed[(k, col)];
            f += fs.rel_force[(k, col)];
            f_pf += fs.rel_force_pf[(k, col)];
        }
        angle[k] = d;
        speed[k] = w;
        force[k] = f;
        force_pf[k] = f_pf;
    }

    Ok(EquivalentMachineSeries {
        group: group.clone(),
        inertia: m_cr,
        times: fs.times.clone(),
        clear_index: fs.clear_index,
        dt: fs.dt,
        angle,
        speed,
        force,
        force_pf,
    })
}

/// Re-expresses group members against their own group center: the
/// inner-group machine motions. Member angles and speeds lose the group
/// aggregate; forces shed the inertia share of the group force.
pub fn inner_group(fs: &FrameSeries, group: &GroupSpec) -> Result<FrameSeries> {
    let em = equivalent_machine(fs, group)?;
    let cols: Vec<usize> = group
        .members()
        .iter()
        .map(|&id| fs.column_of(id))
        .collect::<Result<_>>()?;
    let m_cr = group.total_inertia();
    let t = fs.n_samples();
    let k_cols = cols.len();

    let mut rel_angle = DMatrix::zeros(t, k_cols);
    let mut rel_speed = DMatrix::zeros(t, k_cols);
    let mut rel_force = DMatrix::zeros(t, k_cols);
    let mut rel_force_pf = DMatrix::zeros(t, k_cols);
    for k in 0..t {
        for (c, (&col, &mi)) in cols.iter().zip(group.inertias()).enumerate() {
            let share = mi / m_cr;
            rel_angle[(k, c)] = fs.rel_angle[(k, col)] - em.angle[k];
            rel_speed[(k, c)] = fs.rel_speed[(k, col)] - em.speed[k];
            rel_force[(k, c)] = fs.rel_force[(k, col)] - share * em.force[k];
            rel_force_pf[(k, c)] = fs.rel_force_pf[(k, col)] - share * em.force_pf[k];
        }
    }

    Ok(FrameSeries {
        reference: FrameRef::Group(group.clone()),
        machine_ids: group.members().to_vec(),
        inertias: group.inertias().to_vec(),
        times: fs.times.clone(),
        clear_index: fs.clear_index,
        dt: fs.dt,
        rel_angle,
        rel_speed,
        rel_force,
        rel_force_pf,
    })
}
