use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("NaN is not a valid extended real")]
    NotANumber,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("duplicate sample point at index {first} and {second}")]
    DuplicatePoint { first: usize, second: usize },

    #[error("lipschitz estimate undefined for a cloud with fewer than two points")]
    UndefinedEstimate,

    #[error("simplex stalled after {iterations} pivots")]
    SolverStalled { iterations: usize },

    #[error("envelope unavailable: {0}")]
    EnvelopeUnavailable(String),

    #[error("subgradient certificate unavailable: {0}")]
    CertificateUnavailable(String),

    #[error("ball of radius {radius} around the start point leaves the domain")]
    InvalidBall { radius: f64 },

    #[error("start point is not a point of convexity: {0}")]
    InvalidStart(String),

    #[error("bound unavailable: {0}")]
    BoundUnavailable(String),

    #[error("check unavailable: {0}")]
    CheckUnavailable(String),

    #[error("unknown function id `{0}`")]
    UnknownFunction(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("csv error: {0}")]
    Csv(String),
}

impl Error {
    /// True for failures of the numerical kernels rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SolverStalled { .. }
                | Error::EnvelopeUnavailable(_)
                | Error::CertificateUnavailable(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
