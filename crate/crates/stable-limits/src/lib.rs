//! Infinitely-wide limit laws for heavy-tailed stable neural networks.
//!
//! Networks whose weights and biases follow α-stable laws do not converge to
//! Gaussian processes as their width grows: every unit converges to an
//! α-stable limit whose index, scale, and normalization depend on how fast the
//! activation grows. This crate computes those limits in closed form and
//! verifies them by simulation:
//!
//! - [`stable`] — univariate α-stable machinery: parameters, characteristic
//!   function, exact sampling, numeric symmetric density/CDF, tail constants,
//!   and fractional absolute moments.
//! - [`activation`] — the activation taxonomy used by the limit formulas:
//!   sub-power envelopes (e.g. `tanh`), two-sided asymptotic powers (`identity`,
//!   odd powers), and one-sided powers (`relu`, positive-part powers), each
//!   carrying the growth metadata the formulas need.
//! - [`limit`] — closed-form predictions: the generalized CLT for
//!   regularly-varying sums, product-tail asymptotics of `w·τ(g)`, single
//!   hidden layer limits, and the deep layer-by-layer scale recursion.
//! - [`simulate`] — finite-width network sampling: normalized shallow sums,
//!   deep networks in both bias regimes and both growth modes, and fixed-weight
//!   surface evaluation over input grids.
//! - [`verify`] — statistical estimators and verdicts: stability/scale fits
//!   from the empirical characteristic function, Hill tail indices,
//!   Kolmogorov–Smirnov distance to predicted laws, tail-constant scans, and
//!   the log-correction scaling check.
//!
//! Everything is deterministic given a seed: replications derive independent
//! RNG streams from `(seed, replication index)`, so results are identical for
//! any worker count, with or without the `parallel` feature.

pub mod activation;
pub mod error;
pub mod limit;
pub mod quad;
pub mod rng;
pub mod simulate;
pub mod stable;
pub mod verify;

pub use activation::{tau_tail_asymptote, ActivationClass, ActivationSpec};
pub use error::{Error, Result};
pub use limit::{
    deep_recursion, gclt_limit, product_tail, relu_explicit_scale, shallow_limit, GcltOutcome,
    LayerLaw, LayerScaleSequence, LimitPrediction,
};
pub use simulate::{
    sample_deep, sample_shallow, sample_shallow_ensemble, sample_surface, BiasRegime,
    EnsembleConfig, GrowthMode, NetworkConfig, Scaling,
};
pub use stable::{
    c_alpha, char_fn, frac_abs_moment, sample, survival_asymptote, symmetric_cdf, symmetric_pdf,
    StableParams, TailAsymptote,
};
pub use verify::{
    estimate_stability, hill_tail_index, ks_against_prediction, log_factor_check,
    log_factor_check_with, tail_scan, CheckResult, TailRow, VerificationReport,
};
