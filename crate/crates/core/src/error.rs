use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("intersection pairing is degenerate over the rationals")]
    DegeneratePairing,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed rational {0:?}")]
    ParseRational(String),

    #[error("malformed class {0:?}: expected `d;m1,m2,...`")]
    ParseClass(String),

    #[error("class {0} is not numerically exceptional")]
    NotExceptional(String),

    #[error("exceptional set infinite; use is_exceptional_cp2 per class")]
    InfiniteExceptionalSet,

    #[error("d_omega is not certified: {0}")]
    Uncertified(String),

    #[error("hypotheses of the emptiness criterion not asserted: {0}")]
    HypothesesNotAsserted(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DegeneratePairing => "degenerate_pairing",
            Error::InvalidModel(_) => "invalid_model",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::ParseRational(_) => "parse_rational",
            Error::ParseClass(_) => "parse_class",
            Error::NotExceptional(_) => "not_exceptional",
            Error::InfiniteExceptionalSet => "infinite_exceptional_set",
            Error::Uncertified(_) => "uncertified",
            Error::HypothesesNotAsserted(_) => "hypotheses_not_asserted",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
