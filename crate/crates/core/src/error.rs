use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live on different carriers")]
    CarrierMismatch,
    #[error("operands live on different pre-measure spaces")]
    SpaceMismatch,
    #[error("element `{0}` is not in the carrier")]
    UnknownElement(String),
    #[error("invalid carrier: {0}")]
    InvalidCarrier(String),
    #[error("complemented subset components overlap at `{0}`")]
    NotDisjoint(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid scalar literal `{0}`")]
    ParseScalar(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("no index represents {0}")]
    NoSuchIndex(String),
    #[error("family is not closed: {0}")]
    NotClosed(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("negative value {value} at `{element}`")]
    NegativeValue { element: String, value: String },
    #[error("sequence not stabilized within horizon {0}")]
    NotStabilized(usize),
    #[error("unsupported tail rule: {0}")]
    UnsupportedTail(String),
    #[error("tail certificate insufficient: {0}")]
    InsufficientCertificate(String),
    #[error("modulus violation: {0}")]
    ModulusViolation(String),
}
