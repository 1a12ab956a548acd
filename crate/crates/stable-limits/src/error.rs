//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by the limit formulas, numeric kernels, samplers, and
/// estimators.
#[derive(Debug, Error)]
pub enum Error {
    /// A argument is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An adaptive quadrature could not certify the requested tolerance.
    #[error("quadrature for {context} did not converge: error estimate {error:.3e} exceeds tolerance {tolerance:.3e}")]
    QuadratureNonConvergence {
        context: String,
        error: f64,
        tolerance: f64,
    },

    /// A fractional absolute moment E|X|^r was requested at or above the tail
    /// index of the law, where it is infinite.
    #[error("fractional moment of order {order} diverges: the law has tail index {index}")]
    MomentDiverges { order: f64, index: f64 },

    /// Sample data unusable for estimation (constant, non-finite, …).
    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),

    /// Fewer samples than the estimator's documented minimum.
    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    /// Not enough tail exceedances for a tail estimator.
    #[error("too few tail exceedances: {available} usable, {required} required")]
    TooFewExceedances { available: usize, required: usize },

    /// The requested configuration falls outside the supported theory
    /// (e.g. geometric bias regime with an asymptotically linear activation).
    #[error("configuration out of theory: {0}")]
    OutOfTheory(String),

    /// The estimated simulation cost exceeds the configured budget.
    #[error("simulation budget exceeded: estimated {estimated:.3e} unit evaluations, budget {budget:.3e}")]
    BudgetExceeded { estimated: f64, budget: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
