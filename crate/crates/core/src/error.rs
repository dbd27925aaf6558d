use thiserror::Error;

use crate::matrix::SquareMatrix;

/// Errors produced by validation, solvers, and the simulation engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },

    #[error("entry ({i},{j}) = {value} is not 0/1")]
    NotBinary { i: usize, j: usize, value: u8 },

    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix size must be at least 1")]
    EmptyMatrix,

    #[error("line sums exceed 1: not a matching")]
    NotAMatching,

    #[error("expected {expected} matchings in a frame schedule, got {got}")]
    WrongScheduleLength { expected: usize, got: usize },

    #[error("matchings are not pairwise disjoint: position ({i},{j}) selected twice")]
    NotDisjoint { i: usize, j: usize },

    #[error("negative entry at ({i},{j})")]
    NegativeEntry { i: usize, j: usize },

    #[error("{kind} {index} has degree {degree}, exceeding the bound {bound}")]
    DegreeBound {
        kind: &'static str,
        index: usize,
        degree: usize,
        bound: usize,
    },

    #[error("switch config invalid: n and t must both be at least 1 (n={n}, t={t})")]
    BadConfig { n: usize, t: usize },

    #[error("circular-shift schedule requires t >= n (n={n}, t={t})")]
    FrameTooShort { n: usize, t: usize },

    #[error("slot index must be at least 1")]
    BadSlotIndex,

    #[error("instance exceeds the exact-oracle scale cap: n={n}, t={t} (max n={max_n}, t={max_t})")]
    ScaleCap {
        n: usize,
        t: usize,
        max_n: usize,
        max_t: usize,
    },

    #[error("state {state:#b} at slot {slot} is not part of the policy table")]
    UnknownPolicyState { slot: usize, state: u32 },

    #[error("internal linear program was infeasible")]
    LpInfeasible,

    #[error("internal linear program was unbounded")]
    LpUnbounded,

    #[error("solver output does not fit 64-bit rational arithmetic")]
    RationalOverflow,

    #[error(
        "utility maximization did not converge: duality gap {gap} after {iterations} iterations"
    )]
    NoConvergence {
        iterations: usize,
        gap: f64,
        /// Best feasible iterate found before giving up.
        best: Box<SquareMatrix<f64>>,
    },

    #[error("config error in field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("unknown experiment `{0}` (expected fig3a, fig3b, fig4, or fig5)")]
    UnknownExperiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
