use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision must be at least {min} bits, got {got}")]
    PrecisionTooLow { got: u32, min: u32 },

    #[error("q-integer [r]_q is only defined for r >= 1")]
    ZeroQInteger,

    #[error("empty grid")]
    EmptyGrid,

    #[error("grid point {0} is outside the open interval (0, 1)")]
    GridOutOfRange(String),

    #[error("series denominator has zero constant term: {0}")]
    DegenerateDenominator(String),

    #[error("q^{0} has a negative exponent and is not a power series")]
    NegativePower(i64),

    #[error("truncation orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),

    #[error("truncation order too small: {0}")]
    InsufficientOrder(String),

    #[error("chain parameters must be nonzero")]
    ZeroChainParameter,

    #[error("{0}")]
    NotDivisible(String),

    #[error("arithmetic weights are evaluated at r >= 1, got r = 0")]
    ZeroArgument,

    #[error("Re(s) = {0} must exceed 1 for an absolutely convergent L-series")]
    NotAbsolutelyConvergent(String),

    #[error("schedule has {len} points, the extrapolation needs at least {needed}")]
    ScheduleTooShort { len: usize, needed: usize },

    #[error("schedule must be nonempty, strictly increasing and start at n >= 1")]
    InvalidSchedule,

    #[error("invalid weight descriptor: {0}")]
    InvalidWeight(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("extrapolation system is singular")]
    SingularExtrapolation,

    #[error("outer limit failed at delta = {delta}: {source}")]
    Regularization { delta: String, source: Box<Error> },
}
