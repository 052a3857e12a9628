use thiserror::Error;

/// Errors shared by all modules. Preconditions error, they never wrap or
/// silently truncate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not a discriminant: {0}")]
    NotADiscriminant(i64),

    #[error("fundamental solution above bound: discriminant {d0}, searched t0 <= {bound}")]
    PellBoundExceeded { d0: i64, bound: i64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("power-index consistency failure: trace {trace}, discriminant {d0}")]
    PowerIndexFailure { trace: i64, d0: i64 },

    #[error("spectrum truncated below X = {x} (coverage ends at {coverage})")]
    SpectrumTruncated { x: f64, coverage: f64 },

    #[error("{path}:{line}: {message}")]
    SpectrumFile {
        path: String,
        line: usize,
        message: String,
    },

    #[error("table truncated: T = {t} exceeds t_max = {t_max}")]
    TableTruncated { t: f64, t_max: f64 },

    #[error("tail truncation too large: need t_max >= 15 T = {required}, table has {t_max}")]
    TailTruncation { required: f64, t_max: f64 },

    #[error("pair-count guard exceeded: N(T) = {n} > {limit}; use the quadrature path")]
    PairGuardExceeded { n: usize, limit: usize },

    #[error("T outside explicit-formula range: T = {t}, valid range is 2 < T <= {upper}")]
    ExplicitRange { t: f64, upper: f64 },

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
