use thiserror::Error;

use crate::clustering::AlgorithmTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no points")]
    NoPoints,

    #[error("invalid point ({x}, {y})")]
    InvalidPoint { x: f64, y: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The clustering loop ran out of outer iterations with users left over.
    #[error("no convergence after {} outer iterations", .trace.iterations.len())]
    NoConvergence { trace: Box<AlgorithmTrace> },

    #[error("interference risk: clusters {first} and {second} share a user")]
    InterferenceRisk { first: usize, second: usize },

    #[error("infeasible packing: {0}")]
    InfeasiblePacking(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
