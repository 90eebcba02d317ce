use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no cycle certified within {steps} updates")]
    BudgetExceeded { steps: u64 },

    #[error("budget exceeded at k={k}: no cycle certified within {steps} updates")]
    BudgetExceededAt { k: u64, steps: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "configuration is not preconfined: vertex {vertex} holds {height} chips (limit {limit})"
    )]
    NotPreconfined {
        vertex: usize,
        height: u64,
        limit: u64,
    },

    #[error("vertex {vertex} holds {height} chips, above the reflection limit {limit}")]
    HeightTooLarge {
        vertex: usize,
        height: u64,
        limit: u64,
    },

    #[error("conjugation by j={j} makes vertex {vertex} negative")]
    NegativeHeight { vertex: usize, j: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid lift: {0}")]
    InvalidLift(String),

    #[error("invalid CDF: {0}")]
    InvalidCdf(String),

    #[error("CDF {0} is not polygonal; no exact lift exists")]
    NotPolygonal(String),

    #[error("stair {p}/{q} collapsed: width {width:e} below tolerance {tol:e}")]
    DegenerateStair {
        p: u64,
        q: u64,
        width: f64,
        tol: f64,
    },

    #[error("unknown law {0:?}")]
    UnknownLaw(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
