use thiserror::Error;

use crate::geodesic::Trajectory;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point outside the chart: K = {k} (must be > 0)")]
    DomainViolation { k: f64 },

    #[error("frame matrix is not invertible at this point")]
    SingularFrame,

    #[error("frame index {0} out of range 1..=7")]
    InvalidIndex(usize),

    #[error("inconclusive classification: {0}")]
    InconclusiveClassification(String),

    #[error("only {rows} rows of data for {fields} fields (rank {rank})")]
    InsufficientSamples { rows: usize, fields: usize, rank: usize },

    #[error("heisenberg mode requires m = 0 and l = 1, got m = {m}, l = {l}")]
    ModeMismatch { m: f64, l: f64 },

    #[error("flow left the domain K > 0 at step {step}")]
    DomainExit { step: usize, partial: Box<Trajectory> },

    #[error("non-finite state at step {step}")]
    StepRejected { step: usize },

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed polynomial: {0}")]
    MalformedPolynomial(String),

    #[error("reference table: {0}")]
    Table(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
