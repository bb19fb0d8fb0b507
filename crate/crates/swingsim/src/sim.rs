//! Fixed-step integration of the multi-machine swing equations through a
//! fault-on/fault-clear event, plus critical-clearing-time search.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{accelerating_power, ReducedNetwork, SystemModel};

/// Maximum pairwise angle spread (rad) beyond which a trajectory is
/// classified as having lost synchronism.
pub const SPREAD_LIMIT: f64 = 2.0 * std::f64::consts::PI;

/// A fault study: the model plus clearing time, horizon and step size.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub model: SystemModel,
    /// Fault clearing time, s. Must be a whole number of steps.
    pub clear_time: f64,
    /// Total simulated time, s.
    pub horizon: f64,
    /// Integration step, s.
    pub dt: f64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::invariant("dt > 0", format!("dt = {}", self.dt)));
        }
        if self.clear_time <= 0.0 || self.clear_time >= self.horizon {
            return Err(Error::invariant(
                "0 < clear_time < horizon",
                format!("clear_time = {}, horizon = {}", self.clear_time, self.horizon),
            ));
        }
        let steps = self.clear_time / self.dt;
        if (steps - steps.round()).abs() > 1e-6 {
            return Err(Error::invariant(
                "clear_time an integer multiple of dt",
                format!("clear_time/dt = {steps}"),
            ));
        }
        Ok(())
    }

    pub fn clear_index(&self) -> usize {
        (self.clear_time / self.dt).round() as usize
    }

    pub fn n_steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }
}

/// Fixed-step time series of machine angles and speed deviations in the
/// synchronous frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// T×n rotor angles, rad.
    pub angles: DMatrix<f64>,
    /// T×n speed deviations from synchronous, rad/s.
    pub speeds: DMatrix<f64>,
    /// Sample index of the fault clearing instant.
    pub clear_index: usize,
    pub dt: f64,
}

impl Trajectory {
    pub fn n_samples(&self) -> usize {
        self.times.len()
    }

    pub fn n_machines(&self) -> usize {
        self.angles.ncols()
    }

    /// Network stage in force for the force at sample `k`: the during-fault
    /// network strictly before the clearing index, the post-fault network
    /// from the clearing index on.
    pub fn stage_net<'a>(&self, model: &'a SystemModel, k: usize) -> &'a ReducedNetwork {
        if k < self.clear_index {
            &model.during_fault
        } else {
            &model.post_fault
        }
    }
}

/// Swing-equation right-hand side on one network stage: returns
/// (angle rates, speed rates) = (w, P_i/M_i).
pub fn swing_rhs(
    angles: &[f64],
    speeds: &[f64],
    net: &ReducedNetwork,
    model: &SystemModel,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = accelerating_power(angles, net, &model.machines)?;
    let dw: Vec<f64> = model
        .machines
        .iter()
        .zip(&p)
        .map(|(m, &pi)| pi / m.inertia)
        .collect();
    Ok((speeds.to_vec(), dw))
}

/// Integrates the scenario with classic fourth-order Runge-Kutta from the
/// pre-fault equilibrium. The during-fault network drives every step before
/// the clearing index; the post-fault network drives every step after it, so
/// the state is continuous across the switch.
pub fn simulate(sc: &Scenario) -> Result<Trajectory> {
    sc.validate()?;
    let model = &sc.model;
    let n = model.n_machines();
    let n_steps = sc.n_steps();
    let clear_index = sc.clear_index();
    let dt = sc.dt;

    let delta0 = crate::model::sep_solve(&model.pre_fault, &model.machines, &vec![0.0; n])?;

    let mut angles = DMatrix::zeros(n_steps + 1, n);
    let mut speeds = DMatrix::zeros(n_steps + 1, n);
    let mut d = delta0;
    let mut w = vec![0.0; n];
    for j in 0..n {
        angles[(0, j)] = d[j];
    }

    let mut times = Vec::with_capacity(n_steps + 1);
    times.push(0.0);

    for k in 0..n_steps {
        let net = if k < clear_index {
            &model.during_fault
        } else {
            &model.post_fault
        };
        let (kd1, kw1) = swing_rhs(&d, &w, net, model)?;
        let (d2, w2) = advance(&d, &w, &kd1, &kw1, 0.5 * dt);
        let (kd2, kw2) = swing_rhs(&d2, &w2, net, model)?;
        let (d3, w3) = advance(&d, &w, &kd2, &kw2, 0.5 * dt);
        let (kd3, kw3) = swing_rhs(&d3, &w3, net, model)?;
        let (d4, w4) = advance(&d, &w, &kd3, &kw3, dt);
        let (kd4, kw4) = swing_rhs(&d4, &w4, net, model)?;

        for j in 0..n {
            d[j] += dt / 6.0 * (kd1[j] + 2.0 * kd2[j] + 2.0 * kd3[j] + kd4[j]);
            w[j] += dt / 6.0 * (kw1[j] + 2.0 * kw2[j] + 2.0 * kw3[j] + kw4[j]);
            if !d[j].is_finite() || !w[j].is_finite() {
                return Err(Error::NonFiniteState {
                    step: k + 1,
                    time: (k + 1) as f64 * dt,
                });
            }
            angles[(k + 1, j)] = d[j];
            speeds[(k + 1, j)] = w[j];
        }
        times.push((k + 1) as f64 * dt);
    }

    Ok(Trajectory {
        times,
        angles,
        speeds,
        clear_index,
        dt,
    })
}

fn advance(
    d: &[f64],
    w: &[f64],
    kd: &[f64],
    kw: &[f64],
    h: f64,
) -> (Vec<f64>, Vec<f64>) {
    let dn = d.iter().zip(kd).map(|(&x, &k)| x + h * k).collect();
    let wn = w.iter().zip(kw).map(|(&x, &k)| x + h * k).collect();
    (dn, wn)
}

/// Largest pairwise rotor-angle spread over the whole trajectory, rad.
pub fn max_angle_spread(traj: &Trajectory) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..traj.n_samples() {
        let row = traj.angles.row(k);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &a in row.iter() {
            lo = lo.min(a);
            hi = hi.max(a);
        }
        worst = worst.max(hi - lo);
    }
    worst
}

/// True when the trajectory exceeds the synchronism spread limit.
pub fn is_unstable(traj: &Trajectory) -> bool {
    max_angle_spread(traj) > SPREAD_LIMIT
}

/// Finds the critical clearing time by bisection over whole steps of the
/// template scenario. Stability is judged by the pairwise angle-spread limit.
/// Returns the midpoint of the final stable/unstable bracket.
///
/// Errors when the one-step clearing is already unstable or when no unstable
/// clearing exists inside the horizon.
pub fn find_critical_clearing(template: &Scenario, tolerance: f64) -> Result<f64> {
    let dt = template.dt;
    let run = |steps: usize| -> Result<bool> {
        let sc = Scenario {
            model: template.model.clone(),
            clear_time: steps as f64 * dt,
            horizon: template.horizon,
            dt,
        };
        Ok(is_unstable(&simulate(&sc)?))
    };

    let max_steps = template.n_steps().saturating_sub(1);
    if max_steps < 2 {
        return Err(Error::NoBracket("horizon leaves no room to vary clearing".into()));
    }
    if run(1)? {
        return Err(Error::NoBracket("unstable at the one-step lower bracket".into()));
    }
    let mut lo = 1usize;
    let mut hi = None;
    let mut probe = 2usize;
    while probe <= max_steps {
        if run(probe)? {
            hi = Some(probe);
            break;
        }
        lo = probe;
        probe = (probe * 2).min(max_steps);
        if probe == lo {
            break;
        }
    }
    let mut hi = hi.ok_or_else(|| {
        Error::NoBracket("no unstable clearing found within the horizon".into())
    })?;

    while hi - lo > 1 && (hi - lo) as f64 * dt > tolerance {
        let mid = (lo + hi) / 2;
        if run(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi) as f64 * dt)
}
