//! Regenerates the bundled WSCC 9-bus scenario files from first principles:
//! branch data to bus admittance matrices, constant-impedance loads from the
//! solved load flow, internal EMFs behind transient reactance, and mechanical
//! powers balanced exactly against the reduced pre-fault network.
//!
//! ```bash
//! cargo run --example build_wscc9
//! ```

use num_complex::Complex64;
use swingsim::scenario::{
    LinkEntry, LoadEntry, MachineEntry, NetworkEntry, NetworkStages, RawEntry, ScenarioFile,
};

/// Line/transformer record: from-bus, to-bus (0-based), r, x, total charging b.
const BRANCHES: [(usize, usize, f64, f64, f64); 9] = [
    (0, 3, 0.0, 0.0576, 0.0),      // step-up transformer, generator 1
    (1, 6, 0.0, 0.0625, 0.0),      // step-up transformer, generator 2
    (2, 8, 0.0, 0.0586, 0.0),      // step-up transformer, generator 3
    (3, 4, 0.010, 0.085, 0.176),   // 4-5
    (3, 5, 0.017, 0.092, 0.158),   // 4-6
    (4, 6, 0.032, 0.161, 0.306),   // 5-7
    (5, 8, 0.039, 0.170, 0.358),   // 6-9
    (6, 7, 0.0085, 0.072, 0.149),  // 7-8
    (7, 8, 0.0119, 0.1008, 0.209), // 8-9
];

/// Load-flow bus voltages: magnitude (pu) and angle (degrees).
const BUS_VOLTAGE: [(f64, f64); 9] = [
    (1.040, 0.0),
    (1.025, 9.28),
    (1.025, 4.66),
    (1.026, -2.22),
    (0.996, -3.99),
    (1.013, -3.69),
    (1.026, 3.72),
    (1.016, 0.73),
    (1.032, 1.97),
];

/// Constant-power loads at the solved operating point: bus, P, Q (pu).
const LOADS: [(usize, f64, f64); 3] = [(4, 1.25, 0.50), (5, 0.90, 0.30), (7, 1.00, 0.35)];

/// Generators: terminal bus, P, Q (pu), transient reactance, inertia H (s).
const GENERATORS: [(usize, f64, f64, f64, f64); 3] = [
    (0, 0.716, 0.27, 0.0608, 23.64),
    (1, 1.630, 0.067, 0.1198, 6.40),
    (2, 0.850, -0.109, 0.1813, 3.01),
];

const BASE_FREQ: f64 = 60.0;

fn bus_matrix(skip_branch: Option<(usize, usize)>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = 9;
    let mut y = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for &(i, j, r, x, b) in &BRANCHES {
        if skip_branch == Some((i, j)) {
            continue;
        }
        let series = 1.0 / Complex64::new(r, x);
        let half_charge = Complex64::new(0.0, b / 2.0);
        y[i][i] += series + half_charge;
        y[j][j] += series + half_charge;
        y[i][j] -= series;
        y[j][i] -= series;
    }
    let g = y.iter().map(|row| row.iter().map(|v| v.re).collect()).collect();
    let b = y.iter().map(|row| row.iter().map(|v| v.im).collect()).collect();
    (g, b)
}

fn load_entries() -> Vec<LoadEntry> {
    LOADS
        .iter()
        .map(|&(bus, p, q)| {
            let vm = BUS_VOLTAGE[bus].0;
            // constant-impedance conversion at the solved voltage
            LoadEntry {
                bus,
                g: p / (vm * vm),
                b: -q / (vm * vm),
            }
        })
        .collect()
}

fn link_entries() -> Vec<LinkEntry> {
    GENERATORS
        .iter()
        .enumerate()
        .map(|(m, &(bus, _, _, xdp, _))| LinkEntry {
            machine: m,
            bus,
            xdp,
        })
        .collect()
}

fn raw_entry(grounded: Vec<usize>, skip_branch: Option<(usize, usize)>) -> NetworkEntry {
    let (bus_g, bus_b) = bus_matrix(skip_branch);
    NetworkEntry::Raw(RawEntry {
        bus_g,
        bus_b,
        loads: load_entries(),
        links: link_entries(),
        grounded_buses: grounded,
    })
}

/// Internal EMF behind the transient reactance: `E = V + jx'·(S/V)*`.
fn internal_emfs() -> Vec<Complex64> {
    GENERATORS
        .iter()
        .map(|&(bus, p, q, xdp, _)| {
            let (vm, va_deg) = BUS_VOLTAGE[bus];
            let v = Complex64::from_polar(vm, va_deg.to_radians());
            let i = (Complex64::new(p, q) / v).conj();
            v + Complex64::new(0.0, xdp) * i
        })
        .collect()
}

fn build(clear_time: f64, horizon: f64, fault_bus: usize, trip: (usize, usize)) -> ScenarioFile {
    let emfs = internal_emfs();
    let omega_s = 2.0 * std::f64::consts::PI * BASE_FREQ;

    let mut machines: Vec<MachineEntry> = GENERATORS
        .iter()
        .enumerate()
        .map(|(m, &(_, _, _, _, h))| MachineEntry {
            id: m,
            inertia: 2.0 * h / omega_s,
            mech_power: 0.0,
            emf_mag: emfs[m].norm(),
        })
        .collect();

    let pre = raw_entry(vec![], None);
    let fault = raw_entry(vec![fault_bus], None);
    let post = raw_entry(vec![], Some(trip));

    // balance mechanical power against the reduced pre-fault network at the
    // load-flow internal angles, so the scenario starts at an exact
    // equilibrium of its own model
    let params: Vec<swingsim::model::MachineParams> = machines
        .iter()
        .map(|m| swingsim::model::MachineParams {
            id: m.id,
            inertia: m.inertia,
            mech_power: 0.0,
            emf_mag: m.emf_mag,
        })
        .collect();
    let reduced_pre = match &pre {
        NetworkEntry::Raw(raw) => raw.to_raw_network().unwrap().reduce(3).unwrap(),
        NetworkEntry::Reduced { .. } => unreachable!(),
    };
    let delta0: Vec<f64> = emfs.iter().map(|e| e.arg()).collect();
    let p_e = swingsim::model::electrical_power(&delta0, &reduced_pre, &params).unwrap();
    for (m, &p) in machines.iter_mut().zip(&p_e) {
        m.mech_power = p;
    }

    ScenarioFile {
        base_freq: BASE_FREQ,
        machines,
        networks: NetworkStages { pre, fault, post },
        clear_time,
        horizon,
        dt: 0.001,
        group: vec![1, 2],
    }
}

fn main() {
    let dir = format!("{}/data", env!("CARGO_MANIFEST_DIR"));
    std::fs::create_dir_all(&dir).unwrap();

    // stable reference case: fault at bus 7, five-ish cycles, trip line 5-7
    let stable = build(0.08, 2.0, 6, (4, 6));
    std::fs::write(
        format!("{dir}/wscc9.json"),
        serde_json::to_string_pretty(&stable).unwrap() + "\n",
    )
    .unwrap();
    println!("wrote {dir}/wscc9.json");

    // separating case: same fault held well past critical so that the study
    // group {1, 2} liberates from machine 0. The horizon stops short of the
    // point where the group trajectory sweeps through the reconstructed
    // energy-corrected angles, so the two stay distinguishable throughout.
    let sep = build(0.25, 0.55, 6, (4, 6));
    std::fs::write(
        format!("{dir}/wscc9_sep.json"),
        serde_json::to_string_pretty(&sep).unwrap() + "\n",
    )
    .unwrap();
    println!("wrote {dir}/wscc9_sep.json");
}
