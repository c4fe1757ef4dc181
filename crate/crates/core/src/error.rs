use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("{name} = {value} is out of domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Adaptive quadrature hit its subdivision budget before meeting the
    /// requested tolerance.
    #[error(
        "quadrature did not converge: estimate {value:e} with error {abs_error:e} \
         after {evaluations} evaluations"
    )]
    Quadrature {
        value: f64,
        abs_error: f64,
        evaluations: usize,
    },

    #[error("user index {index} out of range for {count} users")]
    Index { index: usize, count: usize },

    #[error("invalid simulation config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }
}

/// Returns `value` if it is finite and strictly positive.
pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(name, value, "must be finite and > 0"))
    }
}

/// Returns `value` if it lies in the closed unit interval.
pub(crate) fn unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::domain(name, value, "must lie in [0, 1]"))
    }
}
