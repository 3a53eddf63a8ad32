use std::fmt;

/// Errors raised by the numerics, pooling and simulation layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument was outside the domain of the operation.
    Domain(String),
    /// The requested divergence cannot be reached for this `w` with a
    /// representable beta shape `a`.
    UnreachableDivergence {
        target: f64,
        w: f64,
        max_attainable: f64,
    },
    /// The pooled p-value exceeds `alpha` even when every input is zero.
    NoRejectionRegion { alpha: f64 },
    /// An iteration failed to converge or produced a non-finite value.
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::UnreachableDivergence {
                target,
                w,
                max_attainable,
            } => write!(
                f,
                "divergence {target} is unreachable for w = {w}; the largest attainable divergence is {max_attainable}"
            ),
            Error::NoRejectionRegion { alpha } => {
                write!(f, "no rejection region: the pooled p-value exceeds {alpha} at p = 0")
            }
            Error::Numerical(msg) => write!(f, "numerical error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
