//! Error type shared by the estimator modules.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced while parsing inputs or evaluating the cost model.
#[derive(Debug, Error)]
pub enum Error {
    /// Text that does not parse (workload documents, circuit text, table rows).
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// Structurally valid input that violates a model invariant.
    #[error("{0}")]
    Invalid(String),

    /// Physical error rate at or above the code threshold: no finite
    /// distance can reach the target logical error rate.
    #[error("above threshold: physical error rate {p} >= threshold {p_th}")]
    AboveThreshold { p: f64, p_th: f64 },

    /// Decoder table lookup outside the tabulated range or policy.
    #[error("decoder lookup failed: {0}")]
    DecoderRange(String),

    /// Gate name or gate class with no energy assigned in the profile.
    #[error("missing gate-class energy: {0}")]
    MissingEnergy(String),
}

impl Error {
    pub fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }

    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    /// True for errors where the model cannot produce a number at all,
    /// as opposed to malformed input.
    pub fn is_infeasibility(&self) -> bool {
        matches!(
            self,
            Error::AboveThreshold { .. } | Error::DecoderRange(_) | Error::MissingEnergy(_)
        )
    }
}

/// Finite and strictly positive; rejects NaN and infinities.
pub(crate) fn positive(value: f64) -> bool {
    value > 0.0 && value.is_finite()
}

/// Finite and non-negative; rejects NaN and infinities.
pub(crate) fn non_negative(value: f64) -> bool {
    value >= 0.0 && value.is_finite()
}

/// Finite and inside the open unit interval.
pub(crate) fn unit_open(value: f64) -> bool {
    value > 0.0 && value < 1.0
}
