use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by model construction, parsing and the solvers.
///
/// Slot numbers carried by variants are 1-based, like everywhere else in the
/// public API.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("`{field}` has length {found}, expected {expected}")]
    LengthMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("`{field}` has a negative count at slot {slot}")]
    NegativeCount { field: &'static str, slot: usize },

    #[error("cumulative departures exceed cumulative arrivals at slot {slot}")]
    NegativeOccupancy { slot: usize },

    #[error("malformed input: {0}")]
    Syntax(String),

    #[error("capacity becomes negative at slot {slot}")]
    NegativeCapacity { slot: usize },

    #[error("model inconsistency at slot {slot}: {detail}")]
    ModelInconsistency { slot: usize, detail: String },

    #[error("big-M {big_m} is smaller than the total arrivals {required}")]
    BigMTooSmall { big_m: u64, required: u64 },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("value {value} of `{name}` is not integral")]
    NonIntegral { name: String, value: f64 },

    #[error("value {value} of `{name}` is negative")]
    NegativeValue { name: String, value: f64 },

    #[error("binary variable `{name}` has value {value}")]
    NotBinary { name: String, value: f64 },

    #[error("oracle refused the instance: {0}")]
    OracleRefused(String),

    #[error("instance is infeasible: {0}")]
    Infeasible(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

// f64 fields prevent a derived Eq; values always come from parsed text and
// never hold NaN.
impl Eq for Error {}
