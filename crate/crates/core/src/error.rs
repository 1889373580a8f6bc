use thiserror::Error;

/// Errors raised by constructors, measures and the verification harnesses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one label")]
    EmptyAlphabet,

    #[error("duplicate label {0:?} in alphabet")]
    DuplicateLabel(String),

    #[error("label {0:?} is not in the alphabet")]
    UnknownLabel(String),

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("weight {index} is negative or not finite ({value})")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, not 1")]
    NotNormalized { sum: f64 },

    #[error("weights sum to zero; cannot normalize")]
    ZeroTotal,

    #[error("sample is empty")]
    EmptySample,

    #[error("alphabets do not match")]
    AlphabetMismatch,

    #[error("conditioning event {0:?} has probability zero")]
    ZeroConditioningEvent(String),

    #[error("channel row {row} sums to {sum}, not 1")]
    NotStochastic { row: usize, sum: f64 },

    #[error("entry {index} is zero; the point lies on the simplex boundary")]
    BoundaryPoint { index: usize },

    #[error("{count} types exceed the enumeration cap of {cap}")]
    EnumerationTooLarge { count: u128, cap: u128 },

    #[error("no parameter value on the search grid gives a finite objective")]
    NoFiniteObjective,

    #[error("parameter {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBox {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("alphabet of size {size} is too large for grid search (max {max})")]
    AlphabetTooLarge { size: usize, max: usize },

    #[error("channel row {row} is not a 0/1 indicator")]
    NotDeterministic { row: usize },

    #[error("channel must map an alphabet to itself")]
    NotEndomorphism,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
