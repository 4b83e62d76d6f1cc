use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The variant names double as the machine-readable identifiers emitted by
/// the CLI and the C bindings.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A weighted coefficient series has no finite sum, so no truncation of
    /// it can be certified.
    #[error("weighted series diverges: {0}")]
    DivergentSeries(String),

    /// An index combination outside the range where the routine is defined.
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    /// The requested tolerance cannot be certified within the iteration cap.
    #[error("tolerance unreachable: {0}")]
    ToleranceUnreachable(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable identifier of the error kind.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivergentSeries(_) => "DivergentSeries",
            Error::UnsupportedRange(_) => "UnsupportedRange",
            Error::ToleranceUnreachable(_) => "ToleranceUnreachable",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
