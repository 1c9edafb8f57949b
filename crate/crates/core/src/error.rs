use thiserror::Error;

/// Errors raised by the kernel.
///
/// Capability and resolution errors are limits of the computation; every
/// other variant is a problem with the input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("coefficient backends do not match: {0}")]
    BackendMismatch(String),

    #[error("capability exceeded: {0}")]
    Capability(String),

    #[error("rank error: {0}")]
    Rank(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Usage(_) => "usage",
            Error::Domain(_) => "domain",
            Error::Validation(_) => "validation",
            Error::Data(_) => "data",
            Error::Precondition(_) => "precondition",
            Error::BackendMismatch(_) => "backend-mismatch",
            Error::Capability(_) => "capability",
            Error::Rank(_) => "rank",
            Error::Resolution(_) => "resolution",
            Error::Parse(_) => "parse",
        }
    }

    /// True for failures caused by the input rather than by a limit of the
    /// computation.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::Capability(_) | Error::Resolution(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
