use std::path::PathBuf;
use thiserror::Error;

/// Errors produced by the solver library and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid spacing must be positive, got h = {0}")]
    NonPositiveSpacing(f64),

    #[error("invalid interval: require a < b, got [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("grid needs at least 4 cells, got {0}")]
    TooFewCells(usize),

    #[error("derivative order {0} is not available; the basis has only first and second derivatives")]
    UnsupportedDerivative(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("bandwidths must satisfy kl, ku < n (n = {n}, kl = {kl}, ku = {ku})")]
    InvalidBandwidth { n: usize, kl: usize, ku: usize },

    #[error("matrix is singular to working precision")]
    SingularMatrix,

    #[error("linear system became singular at time step {step} (t = {t})")]
    SingularStep { step: usize, t: f64 },

    #[error("evaluation point x = {x} lies outside [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("time step must be positive, got dt = {0}")]
    NonPositiveTimeStep(f64),

    #[error("dispersion coefficient mu must be nonzero")]
    ZeroDispersion,

    #[error("dissipation coefficient theta must be nonnegative, got {0}")]
    NegativeDissipation(f64),

    #[error("nonlinear coefficient epsilon must be nonzero for the conserved quantities")]
    ZeroEpsilon,

    #[error("record time {t} is not a multiple of dt = {dt}")]
    UnalignedRecordTime { t: f64, dt: f64 },

    #[error("record times must be strictly increasing and nonnegative")]
    UnorderedRecordTimes,

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status for the CLI: 2 for configuration problems,
    /// 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            Error::SingularMatrix | Error::SingularStep { .. } => 3,
            _ => 1,
        }
    }
}
