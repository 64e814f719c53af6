//! Error taxonomy shared by every module.
//!
//! Errors are split into categories that callers (in particular the CLI)
//! map to distinct exit codes: a *model-invalid* error means the input
//! specification itself is unusable, a *capability* error means a theorem's
//! hypotheses are not met so the requested quantity is outside the engine's
//! validity window, and a *numerical-integrity* error means an internal
//! consistency check (sign pattern, bracket, decay monitor) failed.

use alloc::string::String;
use core::fmt;

/// Coarse error category, used to pick exit codes and recovery strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The model specification is malformed or violates a structural
    /// invariant (e.g. `∫ min{1,s} ν(ds) = ∞`).
    ModelInvalid,
    /// The requested point is outside the support or admissible range of
    /// the arguments (e.g. `x ≤ t·b` for the saddle solver).
    Support,
    /// A theorem hypothesis required by the requested operation failed its
    /// audit (scaling condition, monotone density, `b = 0`, ...).
    Capability,
    /// An internal numerical consistency check failed: quadrature did not
    /// converge, a completely-monotone sign pattern was violated, a hard
    /// bracket assertion did not hold.
    NumericalIntegrity,
}

/// Error value carrying the category and a human-readable diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineError {
    kind: ErrorKind,
    message: String,
}

impl EngineError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self { kind, message: message.into() }
    }

    pub fn model_invalid(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::ModelInvalid, message)
    }

    pub fn support(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Support, message)
    }

    pub fn capability(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Capability, message)
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::NumericalIntegrity, message)
    }

    pub fn kind(&self) -> ErrorKind {
        self.kind
    }

    pub fn message(&self) -> &str {
        &self.message
    }
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            ErrorKind::ModelInvalid => "model-invalid",
            ErrorKind::Support => "support",
            ErrorKind::Capability => "capability",
            ErrorKind::NumericalIntegrity => "numerical-integrity",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

impl core::error::Error for EngineError {}

/// Convenience alias used across the crate.
pub type Result<T> = core::result::Result<T, EngineError>;
