//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix not symmetric within {tol:e}: |a[{row},{col}] - a[{col},{row}]| = {max:e}")]
    NotSymmetric {
        tol: f64,
        max: f64,
        row: usize,
        col: usize,
    },

    #[error("interior admittance block is singular (islanded or degenerate network)")]
    SingularInterior,

    #[error("equilibrium solve did not converge after {iterations} iterations (residual {residual:e})")]
    NoEquilibrium { iterations: usize, residual: f64 },

    #[error("non-finite state at step {step} (t = {time} s)")]
    NonFiniteState { step: usize, time: f64 },

    #[error("stability bracket not established: {0}")]
    NoBracket(String),

    #[error("invariant violated: {invariant}: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },

    #[error("unknown machine id {0}")]
    UnknownMachine(usize),

    #[error("reference has no members")]
    EmptyReference,

    #[error("sample grids differ: {left} vs {right} samples")]
    GridMismatch { left: usize, right: usize },

    #[error("time {t} s outside the validity window [0, {t_impact}] s")]
    OutsideWindow { t: f64, t_impact: f64 },

    #[error("scenario parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            invariant,
            detail: detail.into(),
        }
    }
}
