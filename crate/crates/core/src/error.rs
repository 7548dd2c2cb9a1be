use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("field too large: {p}^{e} does not fit the element encoding")]
    FieldTooLarge { p: u64, e: u32 },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("convention mismatch")]
    ConventionMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("generators {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("generator {0} is not nilpotent of order at most p")]
    NotNilpotent(usize),
    #[error("matrix is not nilpotent of order at most {0}")]
    NonNilpotentMatrix(usize),
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("map does not intertwine the generator actions")]
    NotIntertwiner,
    #[error("jordan types have different block caps ({0} vs {1})")]
    CapMismatch(usize, usize),
    #[error("characteristic mismatch: {0} vs {1}")]
    CharacteristicMismatch(u32, u32),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable name of the variant, used in structured error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NOT_PRIME",
            Error::InvalidDegree => "INVALID_DEGREE",
            Error::FieldTooLarge { .. } => "FIELD_TOO_LARGE",
            Error::FieldMismatch(..) => "FIELD_MISMATCH",
            Error::ConventionMismatch => "CONVENTION_MISMATCH",
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::NotCommuting(..) => "NOT_COMMUTING",
            Error::NotNilpotent(_) => "NOT_NILPOTENT",
            Error::NonNilpotentMatrix(_) => "NON_NILPOTENT_MATRIX",
            Error::Inconsistent => "INCONSISTENT",
            Error::NotIntertwiner => "NOT_INTERTWINER",
            Error::CapMismatch(..) => "CAP_MISMATCH",
            Error::CharacteristicMismatch(..) => "CHARACTERISTIC_MISMATCH",
            Error::InvalidParams(_) => "INVALID_PARAMS",
            Error::Unsupported(_) => "UNSUPPORTED",
            Error::Malformed(_) => "MALFORMED",
        }
    }
}
