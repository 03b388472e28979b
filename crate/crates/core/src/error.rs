use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero polynomial has no root set")]
    ZeroPolynomial,
    #[error("refinement width must be positive")]
    NonPositiveWidth,
    #[error("invalid real algebraic number: {0}")]
    InvalidRoot(String),
    #[error("invalid number field `{name}`: {reason}")]
    InvalidField { name: String, reason: String },
    #[error("empty ambient product")]
    EmptyAmbient,
    #[error("element does not live in this ambient: {0}")]
    AmbientMismatch(String),
    #[error("not module-finite; generator likely non-integral")]
    NotModuleFinite,
    #[error("primitive element search exhausted its bound for prime {prime}")]
    PrimitiveElementBound { prime: usize },
    #[error("presentation rejected: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("prime does not lie over the cone's support")]
    NotLyingOver,
    #[error("not essential: block {block} of the larger ring meets the smaller ring only in zero")]
    NotEssential { block: usize },
    #[error("membership undecidable for generated cones")]
    GeneratedConeMembership,
    #[error("polynomial must be monic of odd degree")]
    NotMonicOdd,
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
