use alloc::string::String;
use core::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operand shapes do not line up.
    DimensionMismatch { expected: usize, got: usize },
    /// A precondition on an argument was violated.
    InvalidArgument(&'static str),
    /// Externally supplied data failed validation.
    InvalidInput(String),
    /// The requested co-rank cannot be reached with this dictionary.
    InfeasibleTarget { wanted: usize, available: usize },
    /// The signal is (numerically) zero, so no non-zero coefficient exists.
    DegenerateSignal,
    /// Exhaustive enumeration would exceed the configured budget.
    BudgetExceeded { subsets: u128, budget: u128 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::InfeasibleTarget { wanted, available } => write!(
                f,
                "infeasible target: need rank {wanted} but dictionary rank is {available}"
            ),
            Error::DegenerateSignal => write!(f, "degenerate signal: all coefficients are zero"),
            Error::BudgetExceeded { subsets, budget } => write!(
                f,
                "enumeration over {subsets} subsets exceeds budget {budget}; use the empirical mode"
            ),
        }
    }
}

impl core::error::Error for Error {}
