use thiserror::Error;

/// Errors raised by the bound calculators and the pairing-model simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "moment {moment} is outside the feasible range [0, {max}] (open range required: {open})"
    )]
    InfeasibleMoment { moment: f64, max: f64, open: bool },

    #[error("entropy problem needs at least two weights (T >= 1)")]
    DegenerateDimension,

    #[error("invalid entropy problem: {0}")]
    InvalidProblem(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("unsupported degree {0}: only 4, 6 and 8 are covered")]
    UnsupportedDelta(usize),

    #[error("degree must be an even integer >= 4, got {0}")]
    InvalidDelta(usize),

    #[error("no sign change on the search bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("point violates the feasible-set constraints: {0}")]
    InfeasiblePoint(String),

    #[error("feasible set X({alpha}, {gamma}) is empty")]
    EmptyFeasibleSet { alpha: f64, gamma: f64 },

    #[error("monotone bounding of G needs gamma_hi < delta*alpha_lo/4 ({gamma_hi} >= {limit})")]
    MonotoneGuardViolated { gamma_hi: f64, limit: f64 },

    #[error("n and delta must be positive even integers (n = {n}, delta = {delta})")]
    InvalidParity { n: usize, delta: usize },

    #[error("expansion is undefined for the empty set and the full vertex set")]
    EmptyOrFullSet,

    #[error("exact enumeration is limited to n <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
