//! CSV emission for trajectories, frames and energy series: header row,
//! 15-significant-digit decimals, newline-terminated, byte-deterministic.

use std::io::Write;
use std::path::Path;

use crate::energy::EnergySeries;
use crate::error::{Error, Result};
use crate::frames::{EquivalentMachineSeries, FrameSeries};
use crate::sim::Trajectory;
use crate::transforms::{DeltaVSeries, EcimSeries, EcimTrajectory, TcimSeries};

/// One CSV column: floats or a 0/1 flag column.
#[derive(Debug, Clone)]
pub enum Column {
    Float(String, Vec<f64>),
    Flag(String, Vec<bool>),
}

impl Column {
    fn name(&self) -> &str {
        match self {
            Column::Float(n, _) => n,
            Column::Flag(n, _) => n,
        }
    }

    fn len(&self) -> usize {
        match self {
            Column::Float(_, v) => v.len(),
            Column::Flag(_, v) => v.len(),
        }
    }

    fn cell(&self, row: usize) -> String {
        match self {
            Column::Float(_, v) => format_value(v[row]),
            Column::Flag(_, v) => if v[row] { "1" } else { "0" }.to_string(),
        }
    }
}

/// 15 significant digits, exponent form.
pub fn format_value(x: f64) -> String {
    format!("{x:.14e}")
}

/// Renders columns to CSV text.
pub fn csv_string(columns: &[Column]) -> Result<String> {
    let rows = columns.first().map(Column::len).unwrap_or(0);
    for c in columns {
        if c.len() != rows {
            return Err(Error::GridMismatch {
                left: rows,
                right: c.len(),
            });
        }
    }
    let mut out = String::new();
    let names: Vec<&str> = columns.iter().map(Column::name).collect();
    out.push_str(&names.join(","));
    out.push('\n');
    for row in 0..rows {
        let cells: Vec<String> = columns.iter().map(|c| c.cell(row)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Writes columns to a CSV file.
pub fn write_csv(path: impl AsRef<Path>, columns: &[Column]) -> Result<()> {
    let text = csv_string(columns)?;
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

/// Parses CSV text produced by [`csv_string`] back into float columns.
/// Flag columns come back as 0.0/1.0.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .unwrap_or("")
        .split(',')
        .map(|s| s.to_string())
        .collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(Error::invariant(
                "csv rows match the header width",
                format!("row {} has {} cells", lineno + 2, cells.len()),
            ));
        }
        for (c, cell) in cells.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                Error::invariant(
                    "csv cells parse as numbers",
                    format!("row {}, column {}: {cell:?}", lineno + 2, c + 1),
                )
            })?;
            columns[c].push(v);
        }
    }
    Ok((header, columns))
}

/// time, per-machine angles, per-machine speeds.
pub fn trajectory_columns(traj: &Trajectory) -> Vec<Column> {
    let n = traj.n_machines();
    let mut cols = vec![Column::Float("time".into(), traj.times.clone())];
    for j in 0..n {
        cols.push(Column::Float(
            format!("delta_{j}"),
            traj.angles.column(j).iter().copied().collect(),
        ));
    }
    for j in 0..n {
        cols.push(Column::Float(
            format!("omega_{j}"),
            traj.speeds.column(j).iter().copied().collect(),
        ));
    }
    cols
}

/// time, then relative angle, speed and force per frame member.
pub fn frame_columns(fs: &FrameSeries) -> Vec<Column> {
    let mut cols = vec![Column::Float("time".into(), fs.times.clone())];
    for (c, &id) in fs.machine_ids.iter().enumerate() {
        cols.push(Column::Float(
            format!("delta_{id}"),
            fs.rel_angle.column(c).iter().copied().collect(),
        ));
    }
    for (c, &id) in fs.machine_ids.iter().enumerate() {
        cols.push(Column::Float(
            format!("omega_{id}"),
            fs.rel_speed.column(c).iter().copied().collect(),
        ));
    }
    for (c, &id) in fs.machine_ids.iter().enumerate() {
        cols.push(Column::Float(
            format!("f_{id}"),
            fs.rel_force.column(c).iter().copied().collect(),
        ));
    }
    cols
}

/// time, aggregate angle, speed and force of the equivalent machine.
pub fn equivalent_machine_columns(em: &EquivalentMachineSeries) -> Vec<Column> {
    vec![
        Column::Float("time".into(), em.times.clone()),
        Column::Float("delta_cr".into(), em.angle.clone()),
        Column::Float("omega_cr".into(), em.speed.clone()),
        Column::Float("f_cr".into(), em.force.clone()),
    ]
}

/// time, ke, pe, total.
pub fn energy_columns(es: &EnergySeries) -> Vec<Column> {
    vec![
        Column::Float("time".into(), es.times.clone()),
        Column::Float("ke".into(), es.ke.clone()),
        Column::Float("pe".into(), es.pe.clone()),
        Column::Float("total".into(), es.total.clone()),
    ]
}

/// time, corrected energies and the validity mask.
pub fn ecim_columns(ec: &EcimSeries) -> Vec<Column> {
    vec![
        Column::Float("time".into(), ec.times.clone()),
        Column::Float("ke".into(), ec.ke.clone()),
        Column::Float("pe".into(), ec.pe.clone()),
        Column::Float("total".into(), ec.total.clone()),
        Column::Flag("valid".into(), ec.valid.clone()),
    ]
}

/// time, rebuilt angle and velocity with their validity mask.
pub fn ecim_trajectory_columns(tr: &EcimTrajectory) -> Vec<Column> {
    vec![
        Column::Float("time".into(), tr.times.clone()),
        Column::Float("delta_ec".into(), tr.angle.clone()),
        Column::Float("omega_ec".into(), tr.velocity.clone()),
        Column::Flag("valid".into(), tr.valid.clone()),
    ]
}

/// time, scaled energies of the trajectory-corrected machine.
pub fn tcim_columns(tc: &TcimSeries) -> Vec<Column> {
    vec![
        Column::Float("time".into(), tc.times.clone()),
        Column::Float("ke".into(), tc.ke.clone()),
        Column::Float("pe".into(), tc.pe.clone()),
        Column::Float("total".into(), tc.total.clone()),
        Column::Float("delta".into(), tc.motion_angle.clone()),
        Column::Float("omega".into(), tc.motion_speed.clone()),
    ]
}

/// time, energy shifts against the individual machine.
pub fn delta_v_columns(dv: &DeltaVSeries) -> Vec<Column> {
    vec![
        Column::Float("time".into(), dv.times.clone()),
        Column::Float("dke".into(), dv.dke.clone()),
        Column::Float("dpe".into(), dv.dpe.clone()),
        Column::Float("dtotal".into(), dv.dtotal.clone()),
    ]
}
