use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the documented domain of an operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// Dimension not supported by the requested operation.
    #[error("dimension error in {op}: N = {dim} ({detail})")]
    Dimension {
        op: &'static str,
        dim: usize,
        detail: String,
    },

    /// Caller-side precondition violated.
    #[error("precondition failed in {op}: {detail}")]
    Precondition { op: &'static str, detail: String },

    /// No grid cell fits inside the domain at the requested resolution.
    #[error("empty grid: no cell of side {h} fits inside the domain")]
    EmptyGrid { h: f64 },

    /// Iterative method did not converge within its iteration cap.
    #[error("no convergence in {op} after {iterations} iterations (index {index})")]
    Convergence {
        op: &'static str,
        iterations: usize,
        index: usize,
    },

    /// Quadrature could not reach its internal tolerance.
    #[error("quadrature for {what} missed tolerance: estimated relative error {estimate:e}")]
    Accuracy { what: String, estimate: f64 },

    /// Counting function queried beyond the computed part of the spectrum.
    #[error("counting function saturated: t = {t} exceeds largest computed eigenvalue {largest}")]
    Saturation { t: f64, largest: f64 },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn precondition(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            op,
            detail: detail.into(),
        }
    }

    /// True for failures of the numerics themselves, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Convergence { .. } | Error::Accuracy { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
