//! Electrical system data model: classical-model machines, reduced
//! admittance networks, Kron reduction and the post-fault equilibrium solve.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Convergence target for [`sep_solve`] (residual infinity norm).
pub const SEP_TOLERANCE: f64 = 1e-10;

/// Maximum Newton iterations for [`sep_solve`].
pub const SEP_MAX_ITER: usize = 50;

/// Classical-model machine constants: constant EMF behind transient reactance.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineParams {
    pub id: usize,
    /// Inertia coefficient M = 2H/w_s, pu·s²/rad.
    pub inertia: f64,
    /// Mechanical input power, pu.
    pub mech_power: f64,
    /// Internal EMF magnitude, pu.
    pub emf_mag: f64,
}

/// Network reduced to the machine internal nodes, split into conductance
/// and susceptance parts.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedNetwork {
    conductance: DMatrix<f64>,
    susceptance: DMatrix<f64>,
}

impl ReducedNetwork {
    /// Builds a reduced network, checking squareness and symmetry (1e-12).
    pub fn new(conductance: DMatrix<f64>, susceptance: DMatrix<f64>) -> Result<Self> {
        let n = conductance.nrows();
        if conductance.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "conductance matrix",
                expected: n,
                got: conductance.ncols(),
            });
        }
        if susceptance.nrows() != n || susceptance.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "susceptance matrix",
                expected: n,
                got: susceptance.nrows(),
            });
        }
        check_symmetric(&conductance, 1e-12)?;
        check_symmetric(&susceptance, 1e-12)?;
        Ok(Self {
            conductance,
            susceptance,
        })
    }

    pub fn size(&self) -> usize {
        self.conductance.nrows()
    }

    pub fn conductance(&self) -> &DMatrix<f64> {
        &self.conductance
    }

    pub fn susceptance(&self) -> &DMatrix<f64> {
        &self.susceptance
    }

    /// All-zero network of the given size (used for bolted-fault stages).
    pub fn zeros(n: usize) -> Self {
        Self {
            conductance: DMatrix::zeros(n, n),
            susceptance: DMatrix::zeros(n, n),
        }
    }
}

fn check_symmetric(m: &DMatrix<f64>, tol: f64) -> Result<()> {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (m[(i, j)] - m[(j, i)]).abs();
            if d > tol {
                return Err(Error::NotSymmetric {
                    tol,
                    max: d,
                    row: i,
                    col: j,
                });
            }
        }
    }
    Ok(())
}

/// Series link from a machine internal node to its terminal bus.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineLink {
    pub machine: usize,
    pub bus: usize,
    /// Transient reactance, pu (the link admittance is 1/(jx)).
    pub reactance: f64,
}

/// Constant-impedance load attached to a bus.
#[derive(Debug, Clone, PartialEq)]
pub struct ShuntLoad {
    pub bus: usize,
    pub admittance: Complex64,
}

/// Bus-level network prior to reduction: bus admittance matrix, machine
/// internal-node links and constant-impedance loads. Buses listed in
/// `grounded_buses` are held at zero voltage (bolted fault) and removed
/// before elimination.
#[derive(Debug, Clone, PartialEq)]
pub struct RawNetwork {
    pub bus_admittance: DMatrix<Complex64>,
    pub links: Vec<MachineLink>,
    pub loads: Vec<ShuntLoad>,
    pub grounded_buses: Vec<usize>,
}

impl RawNetwork {
    pub fn n_buses(&self) -> usize {
        self.bus_admittance.nrows()
    }

    fn validate(&self, n_machines: usize) -> Result<()> {
        let nb = self.n_buses();
        if self.bus_admittance.ncols() != nb {
            return Err(Error::DimensionMismatch {
                context: "bus admittance matrix",
                expected: nb,
                got: self.bus_admittance.ncols(),
            });
        }
        let mut seen = vec![false; n_machines];
        for link in &self.links {
            if link.machine >= n_machines {
                return Err(Error::UnknownMachine(link.machine));
            }
            if seen[link.machine] {
                return Err(Error::invariant(
                    "one link per machine",
                    format!("machine {} linked twice", link.machine),
                ));
            }
            seen[link.machine] = true;
            if link.bus >= nb {
                return Err(Error::invariant(
                    "link bus in range",
                    format!("bus {} out of range 0..{}", link.bus, nb),
                ));
            }
        }
        if let Some(m) = seen.iter().position(|s| !s) {
            return Err(Error::invariant(
                "every machine linked",
                format!("machine {m} has no internal-node link"),
            ));
        }
        for load in &self.loads {
            if load.bus >= nb {
                return Err(Error::invariant(
                    "load bus in range",
                    format!("bus {} out of range 0..{}", load.bus, nb),
                ));
            }
        }
        for &b in &self.grounded_buses {
            if b >= nb {
                return Err(Error::invariant(
                    "grounded bus in range",
                    format!("bus {b} out of range 0..{nb}"),
                ));
            }
        }
        Ok(())
    }

    /// Assembles the augmented admittance matrix with machine internal nodes
    /// first, followed by the non-grounded buses. Loads enter the bus
    /// diagonals; a link to a grounded bus contributes only its internal-node
    /// shunt (the bus side is at zero volts).
    pub fn assemble(&self, n_machines: usize) -> Result<DMatrix<Complex64>> {
        self.validate(n_machines)?;
        let nb = self.n_buses();
        let kept: Vec<usize> = (0..nb).filter(|b| !self.grounded_buses.contains(b)).collect();
        let mut pos = vec![None; nb];
        for (k, &b) in kept.iter().enumerate() {
            pos[b] = Some(n_machines + k);
        }

        let dim = n_machines + kept.len();
        let mut y = DMatrix::<Complex64>::zeros(dim, dim);

        for (ki, &bi) in kept.iter().enumerate() {
            for (kj, &bj) in kept.iter().enumerate() {
                y[(n_machines + ki, n_machines + kj)] = self.bus_admittance[(bi, bj)];
            }
        }
        for load in &self.loads {
            if let Some(p) = pos[load.bus] {
                y[(p, p)] += load.admittance;
            }
        }
        for link in &self.links {
            let y_link = Complex64::new(0.0, -1.0 / link.reactance);
            let m = link.machine;
            y[(m, m)] += y_link;
            if let Some(p) = pos[link.bus] {
                y[(p, p)] += y_link;
                y[(m, p)] -= y_link;
                y[(p, m)] -= y_link;
            }
        }
        Ok(y)
    }

    /// Reduces this network to the machine internal nodes by Kron
    /// elimination of every bus.
    pub fn reduce(&self, n_machines: usize) -> Result<ReducedNetwork> {
        let y = self.assemble(n_machines)?;
        let y_red = kron_eliminate(&y, n_machines)?;
        let mut g = y_red.map(|v| v.re);
        let mut b = y_red.map(|v| v.im);
        symmetrize(&mut g);
        symmetrize(&mut b);
        ReducedNetwork::new(g, b)
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

/// Eliminates all nodes past the first `n_retained` by Kron reduction:
/// `Y_red = Y_mm - Y_mb · Y_bb⁻¹ · Y_bm`. With nothing to eliminate the
/// retained block is returned unchanged.
pub fn kron_eliminate(y: &DMatrix<Complex64>, n_retained: usize) -> Result<DMatrix<Complex64>> {
    let dim = y.nrows();
    if y.ncols() != dim {
        return Err(Error::DimensionMismatch {
            context: "admittance matrix",
            expected: dim,
            got: y.ncols(),
        });
    }
    if n_retained > dim {
        return Err(Error::DimensionMismatch {
            context: "retained node count",
            expected: dim,
            got: n_retained,
        });
    }
    let k = dim - n_retained;
    if k == 0 {
        return Ok(y.clone());
    }
    let y_mm = y.view((0, 0), (n_retained, n_retained)).into_owned();
    let y_mb = y.view((0, n_retained), (n_retained, k)).into_owned();
    let y_bm = y.view((n_retained, 0), (k, n_retained)).into_owned();
    let y_bb = y.view((n_retained, n_retained), (k, k)).into_owned();

    let lu = y_bb.lu();
    let x = lu.solve(&y_bm).ok_or(Error::SingularInterior)?;
    Ok(y_mm - y_mb * x)
}

/// Machine set plus the three network stages of a fault-on/fault-cleared study.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    pub machines: Vec<MachineParams>,
    pub pre_fault: ReducedNetwork,
    pub during_fault: ReducedNetwork,
    pub post_fault: ReducedNetwork,
    /// Nominal system frequency, Hz.
    pub base_freq: f64,
}

impl SystemModel {
    /// Validates machine invariants and that all three stages share the
    /// machine dimension.
    pub fn validate(&self) -> Result<()> {
        let n = self.machines.len();
        if n == 0 {
            return Err(Error::invariant("at least one machine", "machine list empty"));
        }
        let mut seen = vec![false; n];
        for m in &self.machines {
            if m.id >= n || seen[m.id] {
                return Err(Error::invariant(
                    "machine ids unique and dense 0..n-1",
                    format!("offending id {}", m.id),
                ));
            }
            seen[m.id] = true;
            if !m.inertia.is_finite() || m.inertia <= 0.0 {
                return Err(Error::invariant(
                    "inertia > 0",
                    format!("machine {} has M = {}", m.id, m.inertia),
                ));
            }
            if !m.emf_mag.is_finite() || m.emf_mag <= 0.0 {
                return Err(Error::invariant(
                    "emf_mag > 0",
                    format!("machine {} has E = {}", m.id, m.emf_mag),
                ));
            }
        }
        for (stage, net) in [
            ("pre-fault", &self.pre_fault),
            ("during-fault", &self.during_fault),
            ("post-fault", &self.post_fault),
        ] {
            if net.size() != n {
                return Err(Error::invariant(
                    "networks share the machine dimension",
                    format!("{stage} network is {}x{0}, expected {n}", net.size()),
                ));
            }
        }
        Ok(())
    }

    pub fn n_machines(&self) -> usize {
        self.machines.len()
    }

    pub fn total_inertia(&self) -> f64 {
        self.machines.iter().map(|m| m.inertia).sum()
    }

    pub fn inertias(&self) -> Vec<f64> {
        self.machines.iter().map(|m| m.inertia).collect()
    }
}

/// Electrical power injected at each machine internal node:
/// `P_ei = E_i²·G_ii + Σ_{j≠i} E_i·E_j·(G_ij·cos(d_i - d_j) + B_ij·sin(d_i - d_j))`.
pub fn electrical_power(
    angles: &[f64],
    net: &ReducedNetwork,
    machines: &[MachineParams],
) -> Result<Vec<f64>> {
    let n = machines.len();
    if angles.len() != n {
        return Err(Error::DimensionMismatch {
            context: "angle vector",
            expected: n,
            got: angles.len(),
        });
    }
    if net.size() != n {
        return Err(Error::DimensionMismatch {
            context: "reduced network",
            expected: n,
            got: net.size(),
        });
    }
    let g = net.conductance();
    let b = net.susceptance();
    let mut p = vec![0.0; n];
    for i in 0..n {
        let ei = machines[i].emf_mag;
        let mut acc = ei * ei * g[(i, i)];
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = angles[i] - angles[j];
            acc += ei * machines[j].emf_mag * (g[(i, j)] * d.cos() + b[(i, j)] * d.sin());
        }
        p[i] = acc;
    }
    Ok(p)
}

/// Accelerating power `P_i = P_mi - P_ei` for every machine.
pub fn accelerating_power(
    angles: &[f64],
    net: &ReducedNetwork,
    machines: &[MachineParams],
) -> Result<Vec<f64>> {
    let pe = electrical_power(angles, net, machines)?;
    Ok(machines
        .iter()
        .zip(pe)
        .map(|(m, p)| m.mech_power - p)
        .collect())
}

/// Jacobian of the electrical power vector with respect to the angles.
fn electrical_power_jacobian(
    angles: &[f64],
    net: &ReducedNetwork,
    machines: &[MachineParams],
) -> DMatrix<f64> {
    let n = machines.len();
    let g = net.conductance();
    let b = net.susceptance();
    let mut jac = DMatrix::zeros(n, n);
    for i in 0..n {
        let ei = machines[i].emf_mag;
        let mut diag = 0.0;
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = angles[i] - angles[j];
            let term = ei * machines[j].emf_mag * (-g[(i, j)] * d.sin() + b[(i, j)] * d.cos());
            diag += term;
            jac[(i, j)] = -term;
        }
        jac[(i, i)] = diag;
    }
    jac
}

/// Solves for the stable equilibrium of the COI-referenced swing equations on
/// the given network: `P_mi - P_ei - (M_i/M_T)·Σ_j(P_mj - P_ej) = 0` for all
/// machines, with the center of inertia pinned at zero (`Σ M_i·d_i = 0`).
///
/// Newton iteration with analytic Jacobian, half-step damping on residual
/// increase. Returns the input unchanged when it already satisfies both the
/// mismatch equations and the pin.
pub fn sep_solve(
    net: &ReducedNetwork,
    machines: &[MachineParams],
    initial_angles: &[f64],
) -> Result<Vec<f64>> {
    let n = machines.len();
    if initial_angles.len() != n {
        return Err(Error::DimensionMismatch {
            context: "initial angle vector",
            expected: n,
            got: initial_angles.len(),
        });
    }
    if n == 0 {
        return Err(Error::EmptyReference);
    }
    let m_total: f64 = machines.iter().map(|m| m.inertia).sum();

    let residual = |angles: &[f64]| -> Result<(DVector<f64>, f64)> {
        let p = accelerating_power(angles, net, machines)?;
        let p_coi: f64 = p.iter().sum();
        let mut f = DVector::zeros(n);
        for i in 0..n {
            f[i] = p[i] - machines[i].inertia / m_total * p_coi;
        }
        let pin: f64 = machines
            .iter()
            .zip(angles)
            .map(|(m, &d)| m.inertia * d)
            .sum();
        let norm = f.amax().max(pin.abs());
        // the last mismatch row is replaced by the COI pin in the solve
        f[n - 1] = pin;
        Ok((f, norm))
    };

    let mut angles = initial_angles.to_vec();
    let (mut f, mut norm) = residual(&angles)?;
    if norm <= SEP_TOLERANCE {
        return Ok(angles);
    }

    // iterate past the acceptance tolerance down to rounding, so that a
    // zero-disturbance simulation holds the returned point to ~1e-14
    const POLISH_FLOOR: f64 = 1e-15;

    for iter in 0..SEP_MAX_ITER {
        if norm <= POLISH_FLOOR {
            break;
        }
        let pe_jac = electrical_power_jacobian(&angles, net, machines);
        // rows: d/d_k of [P_i - (M_i/M_T)·Σ_j P_j], with row n-1 = COI pin
        let mut jac = DMatrix::zeros(n, n);
        let col_sums: Vec<f64> = (0..n).map(|k| pe_jac.column(k).sum()).collect();
        for i in 0..n - 1 {
            for k in 0..n {
                jac[(i, k)] = -pe_jac[(i, k)] + machines[i].inertia / m_total * col_sums[k];
            }
        }
        for k in 0..n {
            jac[(n - 1, k)] = machines[k].inertia;
        }

        let step = match jac.lu().solve(&(-&f)) {
            Some(s) => s,
            None if norm <= SEP_TOLERANCE => break,
            None => {
                return Err(Error::NoEquilibrium {
                    iterations: iter,
                    residual: norm,
                })
            }
        };

        // half-step damping on residual increase
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<f64> = angles
                .iter()
                .zip(step.iter())
                .map(|(&a, &s)| a + alpha * s)
                .collect();
            let (tf, tnorm) = residual(&trial)?;
            if tnorm < norm {
                angles = trial;
                f = tf;
                norm = tnorm;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            // stalled at rounding level; fine if the tolerance is already met
            break;
        }
    }
    if norm <= SEP_TOLERANCE {
        Ok(angles)
    } else {
        Err(Error::NoEquilibrium {
            iterations: SEP_MAX_ITER,
            residual: norm,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn machine(id: usize, inertia: f64, mech_power: f64, emf_mag: f64) -> MachineParams {
        MachineParams {
            id,
            inertia,
            mech_power,
            emf_mag,
        }
    }

    #[test]
    fn single_machine_diagonal_conductance_only() {
        let net = ReducedNetwork::new(
            DMatrix::from_row_slice(1, 1, &[0.5]),
            DMatrix::from_row_slice(1, 1, &[-2.0]),
        )
        .unwrap();
        let m = [machine(0, 0.1, 0.5, 1.0)];
        for delta in [-1.0, 0.0, 0.3, 2.4] {
            let p = electrical_power(&[delta], &net, &m).unwrap();
            assert_eq!(p[0], 0.5);
        }
    }

    #[test]
    fn identical_machines_same_angle_give_equal_power() {
        let g = DMatrix::from_row_slice(2, 2, &[0.3, 0.0, 0.0, 0.3]);
        let b = DMatrix::from_row_slice(2, 2, &[-4.0, 2.0, 2.0, -4.0]);
        let net = ReducedNetwork::new(g, b).unwrap();
        let m = [machine(0, 0.1, 0.4, 1.05), machine(1, 0.1, 0.4, 1.05)];
        let p = electrical_power(&[0.7, 0.7], &net, &m).unwrap();
        assert!((p[0] - p[1]).abs() < 1e-15);
    }

    #[test]
    fn power_sum_equals_conductance_loss() {
        let g = DMatrix::from_row_slice(3, 3, &[0.9, 0.2, 0.1, 0.2, 0.8, 0.3, 0.1, 0.3, 0.7]);
        let b = DMatrix::from_row_slice(3, 3, &[-5.0, 2.0, 1.5, 2.0, -6.0, 2.5, 1.5, 2.5, -5.5]);
        let net = ReducedNetwork::new(g.clone(), b).unwrap();
        let m = [
            machine(0, 0.1, 0.0, 1.02),
            machine(1, 0.2, 0.0, 0.98),
            machine(2, 0.3, 0.0, 1.1),
        ];
        let angles = [0.4, -0.2, 0.1];
        let p = electrical_power(&angles, &net, &m).unwrap();
        let total: f64 = p.iter().sum();
        // susceptance terms cancel pairwise; only conductance loss remains
        let mut loss = 0.0;
        for i in 0..3 {
            loss += m[i].emf_mag * m[i].emf_mag * g[(i, i)];
            for j in (i + 1)..3 {
                loss +=
                    2.0 * m[i].emf_mag * m[j].emf_mag * g[(i, j)] * (angles[i] - angles[j]).cos();
            }
        }
        assert!((total - loss).abs() < 1e-12, "{total} vs {loss}");
    }

    #[test]
    fn lossless_network_power_sums_to_zero() {
        let g = DMatrix::zeros(3, 3);
        let b = DMatrix::from_row_slice(3, 3, &[-5.0, 2.0, 1.5, 2.0, -6.0, 2.5, 1.5, 2.5, -5.5]);
        let net = ReducedNetwork::new(g, b).unwrap();
        let m = [
            machine(0, 0.1, 0.0, 1.02),
            machine(1, 0.2, 0.0, 0.98),
            machine(2, 0.3, 0.0, 1.1),
        ];
        let p = electrical_power(&[0.9, -0.8, 0.15], &net, &m).unwrap();
        assert!(p.iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn kron_nothing_to_eliminate_is_identity() {
        let y = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, -3.0),
                Complex64::new(-0.5, 1.0),
                Complex64::new(-0.5, 1.0),
                Complex64::new(0.8, -2.5),
            ],
        );
        let red = kron_eliminate(&y, 2).unwrap();
        assert_eq!(red, y);
    }

    #[test]
    fn kron_star_network_is_series_combination() {
        // two machines joined through one interior bus by pure reactances
        let x1 = 0.2;
        let x2 = 0.5;
        let raw = RawNetwork {
            bus_admittance: DMatrix::zeros(1, 1),
            links: vec![
                MachineLink {
                    machine: 0,
                    bus: 0,
                    reactance: x1,
                },
                MachineLink {
                    machine: 1,
                    bus: 0,
                    reactance: x2,
                },
            ],
            loads: vec![],
            grounded_buses: vec![],
        };
        let red = raw.reduce(2).unwrap();
        let b_series = -1.0 / (x1 + x2);
        assert!((red.susceptance()[(0, 0)] - b_series).abs() < 1e-14);
        assert!((red.susceptance()[(0, 1)] + b_series).abs() < 1e-14);
        assert!((red.susceptance()[(1, 1)] - b_series).abs() < 1e-14);
        assert!(red.conductance().amax() < 1e-14);
    }

    #[test]
    fn kron_singular_interior_is_reported() {
        // interior bus disconnected from everything
        let mut y = DMatrix::<Complex64>::zeros(3, 3);
        y[(0, 0)] = Complex64::new(0.0, -5.0);
        y[(1, 1)] = Complex64::new(0.0, -4.0);
        y[(0, 1)] = Complex64::new(0.0, 4.5);
        y[(1, 0)] = Complex64::new(0.0, 4.5);
        assert!(matches!(
            kron_eliminate(&y, 2),
            Err(Error::SingularInterior)
        ));
    }

    /// Kron reduction preserves the current/voltage relation on retained
    /// nodes: currents from the full matrix with interior voltages solved
    /// out equal `Y_red · v` for random retained voltages.
    #[test]
    fn kron_preserves_port_relation() {
        let mut y = DMatrix::<Complex64>::zeros(5, 5);
        // deterministic pseudo-random symmetric admittance with shunts
        let mut seed = 42u64;
        let mut rng = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as f64) / (u32::MAX as f64) - 0.5
        };
        for i in 0..5 {
            for j in (i + 1)..5 {
                let a = Complex64::new(0.2 * rng(), -(1.0 + rng().abs()));
                y[(i, j)] = -a;
                y[(j, i)] = -a;
                y[(i, i)] += a;
                y[(j, j)] += a;
            }
            y[(i, i)] += Complex64::new(0.05, 0.3 * rng());
        }
        let n_ret = 2;
        let red = kron_eliminate(&y, n_ret).unwrap();

        let v_m = DVector::from_fn(n_ret, |i, _| Complex64::new(1.0 + 0.1 * i as f64, 0.2 * rng()));
        // solve interior: Y_bb v_b = -Y_bm v_m
        let y_bb = y.view((n_ret, n_ret), (3, 3)).into_owned();
        let y_bm = y.view((n_ret, 0), (3, n_ret)).into_owned();
        let v_b = y_bb.lu().solve(&(-&y_bm * &v_m)).unwrap();
        let y_mm = y.view((0, 0), (n_ret, n_ret)).into_owned();
        let y_mb = y.view((0, n_ret), (n_ret, 3)).into_owned();
        let i_full = &y_mm * &v_m + &y_mb * &v_b;
        let i_red = &red * &v_m;
        for k in 0..n_ret {
            assert!((i_full[k] - i_red[k]).norm() < 1e-10);
        }
    }

    #[test]
    fn sep_solve_smib_matches_arcsin() {
        // one machine against a near-infinite bus through a pure reactance
        let x = 0.65;
        let b12 = 1.0 / x;
        let g = DMatrix::zeros(2, 2);
        let b = DMatrix::from_row_slice(2, 2, &[-b12, b12, b12, -b12]);
        let net = ReducedNetwork::new(g, b).unwrap();
        let p_m = 1.0;
        let m = [
            machine(0, 0.0265, p_m, 1.0),
            machine(1, 1.0e6, -p_m, 1.0),
        ];
        let sep = sep_solve(&net, &m, &[0.0, 0.0]).unwrap();
        let d12 = sep[0] - sep[1];
        let expected = (p_m * x).asin();
        assert!((d12 - expected).abs() < 1e-9, "{d12} vs {expected}");
        // COI pin
        let pin = m[0].inertia * sep[0] + m[1].inertia * sep[1];
        assert!(pin.abs() < 1e-9);
    }

    #[test]
    fn sep_solve_returns_equilibrium_input_unchanged() {
        let x = 0.65;
        let b12 = 1.0 / x;
        let net = ReducedNetwork::new(
            DMatrix::zeros(2, 2),
            DMatrix::from_row_slice(2, 2, &[-b12, b12, b12, -b12]),
        )
        .unwrap();
        let p_m = 1.0;
        let m = [machine(0, 0.0265, p_m, 1.0), machine(1, 1.0e6, -p_m, 1.0)];
        let sep = sep_solve(&net, &m, &[0.0, 0.0]).unwrap();
        let again = sep_solve(&net, &m, &sep).unwrap();
        assert_eq!(sep, again);
    }

    #[test]
    fn sep_solve_residual_reassertable_by_substitution() {
        let g = DMatrix::from_row_slice(2, 2, &[0.1, 0.05, 0.05, 0.2]);
        let b = DMatrix::from_row_slice(2, 2, &[-3.0, 2.4, 2.4, -3.5]);
        let net = ReducedNetwork::new(g, b).unwrap();
        let m = [machine(0, 0.05, 0.6, 1.05), machine(1, 0.08, -0.3, 1.0)];
        let sep = sep_solve(&net, &m, &[0.0, 0.0]).unwrap();
        let p = accelerating_power(&sep, &net, &m).unwrap();
        let p_coi: f64 = p.iter().sum();
        let m_t = m[0].inertia + m[1].inertia;
        for i in 0..2 {
            let res = p[i] - m[i].inertia / m_t * p_coi;
            assert!(res.abs() <= 1e-9, "machine {i} residual {res}");
        }
    }

    #[test]
    fn sep_solve_reports_nonconvergence() {
        // mechanical power beyond any transfer capability: no equilibrium
        let x = 1.0;
        let net = ReducedNetwork::new(
            DMatrix::zeros(2, 2),
            DMatrix::from_row_slice(2, 2, &[-1.0 / x, 1.0 / x, 1.0 / x, -1.0 / x]),
        )
        .unwrap();
        let m = [machine(0, 0.03, 5.0, 1.0), machine(1, 1.0e6, -5.0, 1.0)];
        assert!(matches!(
            sep_solve(&net, &m, &[0.0, 0.0]),
            Err(Error::NoEquilibrium { .. })
        ));
    }
}
