use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("operands use different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("division by a value indistinguishable from zero")]
    DivisionByZero,
    #[error("cancellation consumed every known digit")]
    PrecisionExhausted,
    #[error("norm comparison against a value indistinguishable from zero")]
    Indeterminate,
    #[error("precision {have} is below the required {need} digits")]
    InsufficientPrecision { have: u32, need: u32 },
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("{0} requires a nonzero argument")]
    ZeroArgument(&'static str),
    #[error("{0}")]
    Unsupported(String),
    #[error("square root does not exist in Q_{0}")]
    NoSquareRoot(u64),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("root search exceeded {0} digit levels")]
    SearchDepthExceeded(u32),
    #[error("theta = {0} is excluded: {1}")]
    ThetaBoundary(String, &'static str),
    #[error("configuration count {count} exceeds the cap {cap}")]
    SizeGuard { count: u128, cap: u128 },
    #[error("partition function is zero")]
    DegenerateNormalization,
    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
