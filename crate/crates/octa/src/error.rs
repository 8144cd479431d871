use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension d={0} unsupported, expected 1 <= d <= {max}", max = crate::model::MAX_DIMENSION)]
    InvalidDimension(usize),

    #[error("{what} {value} out of range [0, {bound})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        bound: u64,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("inconsistent delta: edge {edge} is {}present", if *present { "already " } else { "not " })]
    InconsistentDelta { edge: String, present: bool },

    #[error("degenerate point set: {points}")]
    Degenerate { points: String },

    #[error("rejection budget exhausted after {attempts} attempts (seed {seed})")]
    RejectionBudget { seed: u64, attempts: u64 },

    #[error("oracle infeasible for d={d}, max_edges={max_edges}: {msg}")]
    InfeasibleOracle {
        d: usize,
        max_edges: usize,
        msg: String,
    },

    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
