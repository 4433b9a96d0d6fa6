//! Error type shared across the crate.
//!
//! Errors split into two families: *mathematical refusals*, where the theory
//! itself forbids the request (limit point endpoint where a coupled matrix was
//! asked for, a minimal operator that is not strictly positive), and numerical
//! failures (step underflow, non-converging limits, indeterminate tail
//! diagnostics). Callers that map errors to process exit codes use
//! [`SlError::is_mathematical_refusal`] to distinguish the two.

use crate::coeffs::Side;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SlError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("x = {x} is outside the open interval ({lo}, {hi})")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("integration failure near x = {x}: {reason}")]
    IntegrationFailure { x: f64, reason: String },

    #[error("mismatched abscissae: {xf} vs {xg}")]
    MismatchedAbscissae { xf: f64, xg: f64 },

    #[error("solution vanishes near x = {x}; reduction formula is undefined there")]
    VanishingSolution { x: f64 },

    #[error("tail diagnostic indeterminate at endpoint {side:?}: {detail}")]
    Indeterminate { side: Side, detail: String },

    #[error("oscillation detected at lambda = {lambda}; not nonoscillatory there")]
    NotBoundedBelow { lambda: f64 },

    #[error("boundary limit did not stabilise at endpoint {side:?}: spread {spread:.3e} exceeds tolerance {tol:.3e}")]
    NotInMaximalDomain { side: Side, spread: f64, tol: f64 },

    #[error("strict positivity required: lambda_min estimate {lambda_min:.6e} < margin {eps:.3e}")]
    StrictPositivityRequired { lambda_min: f64, eps: f64 },

    #[error("limit point at endpoint {side:?}: no 2x2 coupling matrix exists")]
    LimitPoint { side: Side },

    #[error("extension requires deficiency index {expected}, problem has {actual}")]
    DeficiencyMismatch { expected: u8, actual: u8 },

    #[error("not strictly positive: {0}")]
    NotStrictlyPositive(String),

    #[error("gamma pole at x = {0}")]
    GammaPole(f64),

    #[error("singular linear system in {0}")]
    SingularSystem(String),

    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl SlError {
    /// True when the error encodes a refusal grounded in the operator theory
    /// rather than a numerical breakdown.
    pub fn is_mathematical_refusal(&self) -> bool {
        matches!(
            self,
            SlError::LimitPoint { .. }
                | SlError::StrictPositivityRequired { .. }
                | SlError::NotStrictlyPositive(_)
                | SlError::DeficiencyMismatch { .. }
                | SlError::NotBoundedBelow { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, SlError>;
