//! Error type shared by every fallible operation in the crate.
//!
//! The variants draw a line between *usage* errors (mismatched dimensions,
//! malformed inputs) and *mathematical* refusals (a pair of arguments for
//! which no formula is available, a divergent integral, an unbounded set).
//! Callers that need to distinguish "you asked the wrong question" from
//! "the answer does not exist in closed form" can match on the variant.

use thiserror::Error;

/// Unified error for domain, kernel, metric and probe computations.
#[derive(Debug, Error)]
pub enum Error {
    /// A point or direction does not live in the same `C^n` as the domain.
    #[error("dimension mismatch: domain has n = {expected}, argument has n = {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An operation that only makes sense for balanced domains was invoked on
    /// a domain that is not circled around the origin.
    #[error("operation requires a balanced domain, got {0}")]
    NotBalanced(String),

    /// No closed-form pluricomplex Green function is available for this
    /// domain/pole combination.
    #[error("no closed-form Green function for domain {domain} with pole {pole}")]
    UnsupportedGreenPair { domain: String, pole: String },

    /// A sublevel-set geometry cannot carry the requested computation.
    #[error("unsupported sublevel geometry: {0}")]
    UnsupportedGeometry(String),

    /// The evaluation point (or pole) must lie inside the domain.
    #[error("point outside the domain: {0}")]
    OutsideDomain(String),

    /// Monomial moment asked of a domain that is not in the Reinhardt
    /// moment catalog.
    #[error("no moment formula for domain {0}: not a catalog Reinhardt member")]
    NotReinhardt(String),

    /// A moment integral diverges where a finite value is required.
    #[error("divergent moment integral: {0}")]
    DivergentMoment(String),

    /// Bergman metric at a point where the kernel vanishes.
    #[error("Bergman kernel vanishes at {0}; the Bergman metric is undefined there")]
    UndefinedMetric(String),

    /// An operation that needs a bounded set met an unbounded one.
    #[error("unbounded set: {0}")]
    Unbounded(String),

    /// Catch-all for malformed parameters (empty grids, zero sample counts,
    /// out-of-range exponents and the like).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
