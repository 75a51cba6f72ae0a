use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is singular (|det| = {det:e})")]
    SingularInput { det: f64 },
    #[error("matrix is not proximal (log-modulus gap {gap:e} below tolerance)")]
    NotProximal { gap: f64 },
    #[error("degenerate pair: |theta(v)| = {value:e}")]
    DegeneratePair { value: f64 },
    #[error("zero vector cannot define a projective point")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown generator label `{0}`")]
    UnknownLabel(String),
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("generator `{0}` is singular")]
    SingularGenerator(String),
    #[error("representation is not certified: {0}")]
    NotCertified(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("pair measure is empty")]
    EmptyMeasure,
    #[error("functional is not certified interior to the limit cone (min value {min_value:e})")]
    InteriorUncertified { min_value: f64 },
    #[error("potential is not strictly positive (min value {min_value:e})")]
    NonPositivePotential { min_value: f64 },
    #[error("mean roof must be positive, got {0}")]
    NonPositiveRoof(f64),
    #[error("at least two positive periods are required, got {0}")]
    TooFewPeriods(usize),
    #[error("unknown builtin representation `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularInput { .. } => "SingularInput",
            Error::NotProximal { .. } => "NotProximal",
            Error::DegeneratePair { .. } => "DegeneratePair",
            Error::ZeroVector => "ZeroVector",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::ParseError { .. } => "ParseError",
            Error::SingularGenerator(_) => "SingularGenerator",
            Error::NotCertified(_) => "NotCertified",
            Error::InsufficientData(_) => "InsufficientData",
            Error::EmptyMeasure => "EmptyMeasure",
            Error::InteriorUncertified { .. } => "InteriorUncertified",
            Error::NonPositivePotential { .. } => "NonPositivePotential",
            Error::NonPositiveRoof(_) => "NonPositiveRoof",
            Error::TooFewPeriods(_) => "TooFewPeriods",
            Error::UnknownBuiltin(_) => "UnknownBuiltin",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::NoConvergence => "NoConvergence",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
