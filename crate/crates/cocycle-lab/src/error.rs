//! Error taxonomy shared by every module.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented domain (e.g. `n = 0`, `p < 1`).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A construction would exceed a configured size cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Structural validation failed (invariant violation, group mismatch, bad homomorphism).
    #[error("validation error: {0}")]
    Validation(String),

    /// A candidate length function was rejected by the negativity certificate.
    #[error("conditional negativity failed: min_eig = {min_eig:.6e} (tol {tol:.1e})")]
    NotConditionallyNegative { min_eig: f64, tol: f64 },

    /// The least-squares action solve left a residual above tolerance.
    #[error("degenerate action: {0}")]
    DegenerateAction(String),

    /// Requested check does not apply to the given data (e.g. packing bound with delta = 0).
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// A computation produced values inconsistent with a guaranteed identity.
    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    /// Symbol evaluation produced a non-finite value; names the offending point.
    #[error("symbol evaluation failed at {at}: {detail}")]
    SymbolEvaluation { at: String, detail: String },

    /// Operation requested outside the supported parameter range (e.g. square sums for p < 2).
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    /// Input lies outside the operator domain (e.g. negative generator powers off the J-projection).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed expression in the symbol language.
    #[error("expression error: {0}")]
    Expr(String),

    /// Configuration / usage error (CLI exit code 2).
    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Json(_) => 2,
            _ => 1,
        }
    }
}
