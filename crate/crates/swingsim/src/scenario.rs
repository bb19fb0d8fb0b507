//! JSON scenario files. A scenario carries the machines, the three network
//! stages (pre-reduced matrices or bus-level raw sections, mixed freely),
//! the fault timing and an optional default study group. Raw sections are
//! reduced at load time; both paths produce the same in-memory model.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    MachineLink, MachineParams, RawNetwork, ReducedNetwork, ShuntLoad, SystemModel,
};
use crate::sim::Scenario;

/// On-disk scenario schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub base_freq: f64,
    pub machines: Vec<MachineEntry>,
    pub networks: NetworkStages,
    pub clear_time: f64,
    pub horizon: f64,
    pub dt: f64,
    /// Default study group for the transformation reports.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub group: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MachineEntry {
    pub id: usize,
    #[serde(rename = "M")]
    pub inertia: f64,
    #[serde(rename = "Pm")]
    pub mech_power: f64,
    #[serde(rename = "E")]
    pub emf_mag: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkStages {
    pub pre: NetworkEntry,
    pub fault: NetworkEntry,
    pub post: NetworkEntry,
}

/// One network stage: dense row-major reduced matrices, or a raw bus-level
/// section to be reduced at load time.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkEntry {
    Reduced { g: Vec<Vec<f64>>, b: Vec<Vec<f64>> },
    Raw(RawEntry),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawEntry {
    /// Bus admittance matrix, real part, row-major.
    pub bus_g: Vec<Vec<f64>>,
    /// Bus admittance matrix, imaginary part, row-major.
    pub bus_b: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loads: Vec<LoadEntry>,
    pub links: Vec<LinkEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grounded_buses: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoadEntry {
    pub bus: usize,
    pub g: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinkEntry {
    pub machine: usize,
    pub bus: usize,
    pub xdp: f64,
}

/// A parsed scenario plus its optional default group.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub group: Vec<usize>,
}

fn dense_matrix(rows: &[Vec<f64>], what: &'static str) -> Result<DMatrix<f64>> {
    let n = rows.len();
    for r in rows {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                context: what,
                expected: n,
                got: r.len(),
            });
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

impl NetworkEntry {
    fn to_reduced(&self, n_machines: usize) -> Result<ReducedNetwork> {
        match self {
            NetworkEntry::Reduced { g, b } => {
                let g = dense_matrix(g, "reduced conductance")?;
                let b = dense_matrix(b, "reduced susceptance")?;
                ReducedNetwork::new(g, b)
            }
            NetworkEntry::Raw(raw) => raw.to_raw_network()?.reduce(n_machines),
        }
    }

    /// Serializes an in-memory reduced network back to the dense form.
    pub fn from_reduced(net: &ReducedNetwork) -> Self {
        NetworkEntry::Reduced {
            g: matrix_rows(net.conductance()),
            b: matrix_rows(net.susceptance()),
        }
    }
}

impl RawEntry {
    pub fn to_raw_network(&self) -> Result<RawNetwork> {
        let g = dense_matrix(&self.bus_g, "raw bus conductance")?;
        let b = dense_matrix(&self.bus_b, "raw bus susceptance")?;
        if g.nrows() != b.nrows() {
            return Err(Error::DimensionMismatch {
                context: "raw bus matrices",
                expected: g.nrows(),
                got: b.nrows(),
            });
        }
        let n = g.nrows();
        let bus_admittance = DMatrix::from_fn(n, n, |i, j| Complex64::new(g[(i, j)], b[(i, j)]));
        Ok(RawNetwork {
            bus_admittance,
            links: self
                .links
                .iter()
                .map(|l| MachineLink {
                    machine: l.machine,
                    bus: l.bus,
                    reactance: l.xdp,
                })
                .collect(),
            loads: self
                .loads
                .iter()
                .map(|l| ShuntLoad {
                    bus: l.bus,
                    admittance: Complex64::new(l.g, l.b),
                })
                .collect(),
            grounded_buses: self.grounded_buses.clone(),
        })
    }
}

impl ScenarioFile {
    pub fn into_loaded(self) -> Result<LoadedScenario> {
        let n = self.machines.len();
        let machines: Vec<MachineParams> = self
            .machines
            .iter()
            .map(|m| MachineParams {
                id: m.id,
                inertia: m.inertia,
                mech_power: m.mech_power,
                emf_mag: m.emf_mag,
            })
            .collect();
        let model = SystemModel {
            machines,
            pre_fault: self.networks.pre.to_reduced(n)?,
            during_fault: self.networks.fault.to_reduced(n)?,
            post_fault: self.networks.post.to_reduced(n)?,
            base_freq: self.base_freq,
        };
        let scenario = Scenario {
            model,
            clear_time: self.clear_time,
            horizon: self.horizon,
            dt: self.dt,
        };
        scenario.validate()?;
        for &id in &self.group {
            if id >= n {
                return Err(Error::UnknownMachine(id));
            }
        }
        Ok(LoadedScenario {
            scenario,
            group: self.group,
        })
    }
}

/// Parses a scenario from JSON text.
pub fn parse_scenario(json: &str) -> Result<LoadedScenario> {
    let file: ScenarioFile = serde_json::from_str(json)?;
    file.into_loaded()
}

/// Loads a scenario from a JSON file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<LoadedScenario> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}
