use thiserror::Error;

use crate::unduloid::CaseKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Geometric inputs that cannot describe a tangent unduloid section.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("volume constraint for {case:?} at h = {h:e} has no sign change for c in [{c_lo}, {c_hi}]")]
    NoRoot { case: CaseKind, h: f64, c_lo: f64, c_hi: f64 },

    #[error("bad bracket [{lo}, {hi}]: {reason}")]
    BadBracket { lo: f64, hi: f64, reason: String },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("charges {i} and {j} coincide")]
    Coincident { i: usize, j: usize },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
