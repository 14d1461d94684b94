use thiserror::Error;

/// Errors produced by domain construction, catalog lookup and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid distance table: {0}")]
    InvalidTable(String),

    #[error("point {point} does not belong to domain {domain}")]
    DomainMismatch { point: String, domain: String },

    #[error("B-action arguments must be finite and nonnegative, got ({s}, {t})")]
    NegativeInput { s: f64, t: f64 },

    #[error("unknown {what} kind `{kind}`")]
    UnknownKind { what: &'static str, kind: String },

    #[error("invalid parameter for {kind}: {reason}")]
    InvalidParameter { kind: String, reason: String },

    #[error("invalid sample plan: {0}")]
    InvalidPlan(String),

    #[error("trace too short: {0}")]
    TraceTooShort(String),

    #[error("uniqueness probe needs at least two start points, got {0}")]
    NotEnoughStarts(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
