use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the documented domain of the operation.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An evaluation point lies outside the tabulated or admissible range.
    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// A numerical procedure could not reach the requested accuracy.
    #[error("accuracy not reached: {0}")]
    Accuracy(String),

    /// A sieve window exceeds the configured memory budget.
    #[error("window of length {len} exceeds the budget of {budget} integers; split the range")]
    WindowTooLarge { len: u64, budget: u64 },

    /// A residue class is not coprime to its modulus.
    #[error("residue {residue} is not coprime to modulus {modulus}")]
    NotCoprime { residue: u64, modulus: u64 },

    /// A quantity is undefined on empty input.
    #[error("empty input: {0}")]
    Empty(&'static str),

    /// The Bohr set used for shift averaging is empty.
    #[error("Bohr set is empty for delta = {delta} ({frequencies} large-spectrum frequencies); raise delta")]
    EmptyBohrSet { delta: f64, frequencies: usize },

    /// A random generator exhausted its retry budget.
    #[error("generator failed after {retries} retries: {what}")]
    GeneratorExhausted { what: String, retries: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
