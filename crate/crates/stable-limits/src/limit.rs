//! Closed-form limit laws for wide random sums and layered stable networks.
//!
//! Four building blocks, each a direct rendering of a heavy-tail limit
//! theorem:
//!
//! - [`gclt_limit`]: the generalized central limit theorem. Summands with
//!   power tails `S(z) ≍ c z^{-p} L(z)`, `F(-z) ≍ d z^{-p} L(z)` and
//!   `L ∈ {1, log}` produce, under `(n L(n))^{-1/p}` normalization, a stable
//!   limit with scale `[(c+d)/C_p]^{1/p}` and skewness `(c-d)/(c+d)`.
//! - [`product_tail`]: the absolute-tail asymptote of `X·τ(Y)` for
//!   independent symmetric stable factors. The heavier factor wins; matched
//!   indices produce an extra `log z` and the constant
//!   `c_τ ᾱ C_ᾱ C_{ᾱγ} σ_x^ᾱ σ_y^{ᾱγ}`.
//! - [`shallow_limit`]: one hidden layer. Feeding the product tail through
//!   the generalized CLT yields the limit index `ᾱ = min(α₁, α₀/γ)`, a
//!   `(n log n)^{-1/ᾱ}` normalization exactly at the critical growth
//!   `γ = α₀/α₁`, and a closed-form scale in each regime.
//! - [`deep_recursion`] / [`relu_explicit_scale`]: depth-`L` networks under
//!   sequential width growth. Sub-critical growth keeps the index `α` and
//!   recurses on activation moments; critical growth (`γ = 1`) has the
//!   closed-form scale recursion `σ^α ← c_τ α C_α σ_w^α σ^α + σ_b^α`;
//!   super-critical growth (`γ > 1`) drops the index geometrically,
//!   `α/γ^{l-1}` at layer `l`.
//!
//! Everything here is deterministic closed-form or quadrature work; the
//! Monte Carlo counterpart lives in the simulation and verification modules.

use serde::{Deserialize, Serialize};

use crate::activation::{ActivationClass, ActivationSpec};
use crate::error::{Error, Result};
use crate::stable::{activation_abs_moment, c_alpha, frac_abs_moment, TailAsymptote};

/// Relative tolerance at which a growth exponent counts as exactly critical
/// (`γ = α_y/α_x` for products, `γ = 1` for deep recursions). Exponents
/// closer than this to the boundary take the logarithmic branch; exponents
/// outside it but within ~1e-9 of the boundary are rejected by the moment
/// machinery as numerically meaningless near-divergent orders.
const CRITICAL_REL_TOL: f64 = 1e-12;

/// Distributional limit of a normalized random sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitPrediction {
    /// Index of the limiting stable law, in (0, 2].
    pub stability: f64,
    /// Scale of the limiting stable law.
    pub scale: f64,
    /// The `p` in the `n^{-1/p}` normalization (equals `stability` for every
    /// network limit).
    pub scaling_exponent: f64,
    /// True when the normalization carries an extra log factor:
    /// `(n log n)^{-1/p}` instead of `n^{-1/p}`.
    pub log_correction: bool,
    /// Centering: 0 below index 1; the slope of the `(c-d) log n` drift at
    /// index 1; the summand mean above index 1. Zero in every symmetric
    /// network case.
    pub centering: f64,
}

/// Generalized-CLT output: the limit law plus the skewness it carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GcltOutcome {
    pub prediction: LimitPrediction,
    /// Skewness `(c-d)/(c+d)` of the limiting stable law.
    pub skewness: f64,
}

/// Limit law of a single layer: stability index and scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerLaw {
    pub stability: f64,
    pub sigma: f64,
}

/// Layer-by-layer limit laws of a depth-`L` network: entries `l = 1..=L+1`
/// (the `L` hidden pre-activation laws, then the output law).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LayerScaleSequence {
    pub layers: Vec<LayerLaw>,
}

impl LayerScaleSequence {
    /// The output-layer law (last entry).
    pub fn output(&self) -> &LayerLaw {
        self.layers
            .last()
            .expect("sequence always holds L+1 >= 2 layers")
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }
}

pub(crate) fn validate_law(alpha: f64, sigma: f64, role: &str) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "{role} stability must lie in (0, 2], got {alpha}"
        )));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "{role} scale must be positive and finite, got {sigma}"
        )));
    }
    Ok(())
}

/// True when `gamma` sits on the critical boundary `ratio` to within
/// [`CRITICAL_REL_TOL`].
fn is_critical(gamma: f64, ratio: f64) -> bool {
    (gamma - ratio).abs() <= CRITICAL_REL_TOL * gamma.max(ratio)
}

/// Generalized CLT: maps two-sided tail data `(c, d, p, L)` of the summands
/// to the limit of `(n L(n))^{-1/p} Σ (Z_i - a_n)`.
///
/// Scale is `[(c+d)/C_p]^{1/p}` and skewness `(c-d)/(c+d)`. The centering
/// recorded in the prediction is 0 for `p < 1`, the drift slope `c-d` (of
/// `a_n = (c-d) log n`) at `p = 1`, and the summand mean for `1 < p < 2` —
/// the mean is the caller's to supply (`None` means 0, the symmetric case).
pub fn gclt_limit(
    c: f64,
    d: f64,
    p: f64,
    log_factor: bool,
    mean: Option<f64>,
) -> Result<GcltOutcome> {
    if !(c >= 0.0 && c.is_finite() && d >= 0.0 && d.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tail constants must be non-negative and finite, got c={c}, d={d}"
        )));
    }
    let total = c + d;
    if total <= 0.0 {
        return Err(Error::InvalidParameter(
            "at least one tail constant must be positive".into(),
        ));
    }
    if !(p > 0.0 && p < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "summand tail index p must lie in (0, 2), got {p}"
        )));
    }
    let scale = (total / c_alpha(p)?).powf(1.0 / p);
    let centering = if p < 1.0 {
        0.0
    } else if p == 1.0 {
        c - d
    } else {
        mean.unwrap_or(0.0)
    };
    Ok(GcltOutcome {
        prediction: LimitPrediction {
            stability: p,
            scale,
            scaling_exponent: p,
            log_correction: log_factor,
            centering,
        },
        skewness: (c - d) / total,
    })
}

/// Absolute-tail asymptote `P[|X·τ(Y)| > z]` for independent symmetric
/// `X ~ S_{α_x}(σ_x)` and `Y ~ S_{α_y}(σ_y)`.
///
/// Sub-power activations need `β α_x < α_y`, and the product inherits the
/// multiplier tail: `C_{α_x} σ_x^{α_x} E|τ(Y)|^{α_x} z^{-α_x}`. Power-growth
/// activations compare `γ` with `α_y/α_x`: the heavier factor's index
/// `ᾱ = min(α_x, α_y/γ)` wins, a Breiman moment factor comes from the
/// lighter factor, and the matched case gains a `log z` with constant
/// `c_τ ᾱ C_ᾱ C_{ᾱγ} σ_x^ᾱ σ_y^{ᾱγ}`. By symmetry of `X`, each one-sided
/// tail of the product is half the returned constant.
///
/// A factor at stability 2 has no power tail of its own: the product only
/// has a power asymptote when the other factor supplies one, and matched or
/// Gaussian-dominated configurations are out of theory.
pub fn product_tail(
    alpha_x: f64,
    sigma_x: f64,
    alpha_y: f64,
    sigma_y: f64,
    spec: &ActivationSpec,
) -> Result<TailAsymptote> {
    validate_law(alpha_x, sigma_x, "multiplier")?;
    validate_law(alpha_y, sigma_y, "inner")?;
    match *spec.class() {
        ActivationClass::SubPower { beta_bound } => {
            if beta_bound * alpha_x >= alpha_y {
                return Err(Error::OutOfTheory(format!(
                    "sub-power activation '{}' needs beta*alpha_x < alpha_y for a finite \
                     E|tau(Y)|^alpha_x (beta={beta_bound}, alpha_x={alpha_x}, alpha_y={alpha_y})",
                    spec.name()
                )));
            }
            if alpha_x >= 2.0 {
                return Err(Error::OutOfTheory(
                    "a stability-2 multiplier has no power tail; the product of a Gaussian \
                     with a sub-power activation output is not regularly varying"
                        .into(),
                ));
            }
            let moment = activation_abs_moment(
                alpha_y,
                sigma_y,
                alpha_x,
                spec.eval_fn(),
                spec.tail_model(),
            )?;
            TailAsymptote::new(
                alpha_x,
                c_alpha(alpha_x)? * sigma_x.powf(alpha_x) * moment,
                false,
            )
        }
        ActivationClass::PowerBothSides { .. } | ActivationClass::PowerPositiveSide { .. } => {
            let gamma = spec
                .growth_exponent()
                .expect("power-growth classes always carry an exponent");
            let c_tau = spec.c_tau();
            if alpha_y == 2.0 {
                // Gaussian inner factor: τ(Y) has lighter-than-power tails,
                // so it only contributes the Breiman moment.
                if alpha_x >= 2.0 {
                    return Err(Error::OutOfTheory(
                        "both factors are light-tailed at stability 2; the product has no \
                         power asymptote"
                            .into(),
                    ));
                }
                let moment = activation_abs_moment(
                    alpha_y,
                    sigma_y,
                    alpha_x,
                    spec.eval_fn(),
                    spec.tail_model(),
                )?;
                return TailAsymptote::new(
                    alpha_x,
                    c_alpha(alpha_x)? * sigma_x.powf(alpha_x) * moment,
                    false,
                );
            }
            let ratio = alpha_y / alpha_x;
            if is_critical(gamma, ratio) {
                if alpha_x >= 2.0 {
                    return Err(Error::OutOfTheory(
                        "matched tail indices at stability 2 fall outside the stable \
                         limit theory (the product has a slowly-corrected index-2 tail)"
                            .into(),
                    ));
                }
                let abar = alpha_x;
                let constant = c_tau
                    * abar
                    * c_alpha(abar)?
                    * c_alpha(alpha_y)?
                    * sigma_x.powf(abar)
                    * sigma_y.powf(alpha_y);
                TailAsymptote::new(abar, constant, true)
            } else if gamma > ratio {
                // τ(Y) is the heavier factor: index α_y/γ, multiplier
                // contributes E|X|^ᾱ.
                let abar = alpha_y / gamma;
                let constant = c_tau
                    * c_alpha(alpha_y)?
                    * sigma_y.powf(alpha_y)
                    * frac_abs_moment(alpha_x, sigma_x, abar)?;
                TailAsymptote::new(abar, constant, false)
            } else {
                // X is the heavier factor: index α_x, activation contributes
                // E|τ(Y)|^ᾱ.
                if alpha_x >= 2.0 {
                    return Err(Error::OutOfTheory(
                        "a stability-2 multiplier dominates only with a lighter-than-index-2 \
                         activation tail, leaving no power asymptote"
                            .into(),
                    ));
                }
                let abar = alpha_x;
                let moment = activation_abs_moment(
                    alpha_y,
                    sigma_y,
                    abar,
                    spec.eval_fn(),
                    spec.tail_model(),
                )?;
                TailAsymptote::new(abar, c_alpha(abar)? * sigma_x.powf(abar) * moment, false)
            }
        }
    }
}

/// Infinitely wide limit of one hidden layer: weights `S_{α₁}(σ₁)` on top of
/// pre-activations `S_{α₀}(σ₀)` pushed through `τ`.
///
/// Sub-power activations leave the weight index in charge:
/// `S_{α₁}(σ₁ (E|τ(Z)|^{α₁})^{1/α₁})`. Power-growth activations take the
/// index `ᾱ = min(α₁, α₀/γ)`; exactly at the critical growth `γ = α₀/α₁`
/// the normalization becomes `(n log n)^{-1/ᾱ}` and the scale collapses to
/// `σ₀^γ σ₁ (c_τ ᾱ C_{α₀})^{1/ᾱ}`. Gaussian pre-activations (`α₀ = 2`)
/// always leave the weights in charge, activation growth notwithstanding.
pub fn shallow_limit(
    alpha0: f64,
    sigma0: f64,
    alpha1: f64,
    sigma1: f64,
    spec: &ActivationSpec,
) -> Result<LimitPrediction> {
    validate_law(alpha0, sigma0, "pre-activation")?;
    validate_law(alpha1, sigma1, "weight")?;
    let (stability, scale, log_correction) = match shallow_regime(alpha0, alpha1, spec)? {
        ShallowRegime::WeightRules => {
            let m =
                activation_abs_moment(alpha0, sigma0, alpha1, spec.eval_fn(), spec.tail_model())?;
            (alpha1, sigma1 * m.powf(1.0 / alpha1), false)
        }
        ShallowRegime::Critical => {
            let gamma = spec
                .growth_exponent()
                .expect("the critical regime only arises for power growth");
            let abar = alpha1;
            let scale = sigma0.powf(gamma)
                * sigma1
                * (spec.c_tau() * abar * c_alpha(alpha0)?).powf(1.0 / abar);
            (abar, scale, true)
        }
        ShallowRegime::ActivationRules { abar } => {
            let gamma = spec
                .growth_exponent()
                .expect("an activation-ruled regime only arises for power growth");
            // Activation output is the heavier factor; the weights contribute
            // their standard fractional moment.
            let m = frac_abs_moment(alpha1, 1.0, abar)?;
            let scale = sigma0.powf(gamma)
                * sigma1
                * (spec.c_tau() * c_alpha(alpha0)? / c_alpha(abar)? * m).powf(1.0 / abar);
            (abar, scale, false)
        }
    };
    Ok(LimitPrediction {
        stability,
        scale,
        scaling_exponent: stability,
        log_correction,
        centering: 0.0,
    })
}

/// Which factor of the one-layer sum `Σ_j w_j τ(pre_j)` dictates the limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ShallowRegime {
    /// The weight tail `α₁` rules; the activation only supplies a moment.
    /// Covers sub-power activations, Gaussian pre-activations, and power
    /// growth below the critical exponent.
    WeightRules,
    /// Matched tails `γ = α₀/α₁`: index `α₁` with a log-corrected
    /// normalization.
    Critical,
    /// The activation output is heavier: index `ᾱ = α₀/γ < α₁`.
    ActivationRules { abar: f64 },
}

/// Routes a one-layer configuration to its regime without computing any
/// moments, so samplers can resolve normalizations cheaply.
pub(crate) fn shallow_regime(
    alpha0: f64,
    alpha1: f64,
    spec: &ActivationSpec,
) -> Result<ShallowRegime> {
    match *spec.class() {
        ActivationClass::SubPower { beta_bound } => {
            if beta_bound * alpha1 >= alpha0 {
                return Err(Error::OutOfTheory(format!(
                    "sub-power activation '{}' needs beta*alpha1 < alpha0 for a finite \
                     E|tau(Z)|^alpha1 (beta={beta_bound}, alpha1={alpha1}, alpha0={alpha0})",
                    spec.name()
                )));
            }
            Ok(ShallowRegime::WeightRules)
        }
        ActivationClass::PowerBothSides { .. } | ActivationClass::PowerPositiveSide { .. } => {
            let gamma = spec
                .growth_exponent()
                .expect("power-growth classes always carry an exponent");
            if alpha0 == 2.0 {
                // Gaussian pre-activations: every polynomial-growth moment is
                // finite, so the weight tail dominates regardless of γ.
                return Ok(ShallowRegime::WeightRules);
            }
            let ratio = alpha0 / alpha1;
            if is_critical(gamma, ratio) {
                if alpha1 >= 2.0 {
                    return Err(Error::OutOfTheory(
                        "matched tail indices at stability 2 fall outside the stable \
                         limit theory"
                            .into(),
                    ));
                }
                Ok(ShallowRegime::Critical)
            } else if gamma > ratio {
                Ok(ShallowRegime::ActivationRules {
                    abar: alpha0 / gamma,
                })
            } else {
                Ok(ShallowRegime::WeightRules)
            }
        }
    }
}

/// Limit index and log flag of the one-layer sum, without its scale.
pub(crate) fn shallow_index(
    alpha0: f64,
    alpha1: f64,
    spec: &ActivationSpec,
) -> Result<(f64, bool)> {
    Ok(match shallow_regime(alpha0, alpha1, spec)? {
        ShallowRegime::WeightRules => (alpha1, false),
        ShallowRegime::Critical => (alpha1, true),
        ShallowRegime::ActivationRules { abar } => (abar, false),
    })
}

/// Shape of the per-layer normalization in a deep network where every
/// parameter tail is `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum DeepScalingKind {
    /// One index `α` for every layer; `log` marks the critical `(n log n)`
    /// correction.
    Uniform { log: bool },
    /// Superlinear growth: layer `l` sums carry index `a_l = α/γ^{l-1}`.
    Geometric { gamma: f64 },
}

/// Per-layer normalization shape for a deep network: uniform `ν(n)^{-1/α}`
/// except for superlinear growth below stability 2, where the exponent
/// follows the geometric index schedule.
pub(crate) fn deep_scaling_kind(alpha: f64, spec: &ActivationSpec) -> DeepScalingKind {
    match spec.growth_exponent() {
        None => DeepScalingKind::Uniform { log: false },
        Some(gamma) => {
            if alpha == 2.0 {
                // Gaussian parameters: classical CLT normalization throughout.
                DeepScalingKind::Uniform { log: false }
            } else if is_critical(gamma, 1.0) {
                DeepScalingKind::Uniform { log: true }
            } else if gamma > 1.0 {
                DeepScalingKind::Geometric { gamma }
            } else {
                DeepScalingKind::Uniform { log: false }
            }
        }
    }
}

/// Layer-by-layer limit laws of a depth-`L` network under sequential width
/// growth, for input `x ∈ R^d`, weight scale `σ_w`, bias scale `σ_b`.
///
/// The first pre-activation law is exact stable algebra:
/// `σ^{(1)} = (σ_w^α Σ_j |x_j|^α + σ_b^α)^{1/α}`. Each later layer applies
/// the one-layer limit to the previous law:
///
/// - sub-power or `γ < 1` (and every class at `α = 2` except `γ > 1`):
///   `σ^{(l)} = (σ_w^α E_{Z∼S_α(σ^{(l-1)})}|τ(Z)|^α + σ_b^α)^{1/α}`, index
///   `α` at every layer;
/// - `γ = 1`, `α < 2`: closed form
///   `σ^{(l)} = (c_τ α C_α σ_w^α (σ^{(l-1)})^α + σ_b^α)^{1/α}` under
///   `(n log n)^{-1/α}` normalization;
/// - `γ > 1`, `α < 2`: the index drops geometrically, `a_l = α/γ^{l-1}`,
///   biases follow the same geometric schedule, and
///   `σ^{(l)} = [c_τ (C_{a_{l-1}}/C_{a_l}) σ_w^{a_l} (σ^{(l-1)})^{a_{l-1}}
///   E_{Z∼S_α(1)}|Z|^{a_l} + σ_b^{a_l}]^{1/a_l}`;
/// - `γ > 1` at `α = 2` mixes Gaussian and stable contributions and is out
///   of theory.
pub fn deep_recursion(
    alpha: f64,
    sigma_w: f64,
    sigma_b: f64,
    x: &[f64],
    depth_l: usize,
    spec: &ActivationSpec,
) -> Result<LayerScaleSequence> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "stability alpha must lie in (0, 2], got {alpha}"
        )));
    }
    if !(sigma_w > 0.0 && sigma_w.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "weight scale must be positive and finite, got {sigma_w}"
        )));
    }
    if !(sigma_b >= 0.0 && sigma_b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bias scale must be non-negative and finite, got {sigma_b}"
        )));
    }
    if depth_l == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    if x.is_empty() || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "input vector must be non-empty with finite entries".into(),
        ));
    }
    let input_norm: f64 = x.iter().map(|v| v.abs().powf(alpha)).sum();
    let sigma1 = (sigma_w.powf(alpha) * input_norm + sigma_b.powf(alpha)).powf(1.0 / alpha);
    if !(sigma1 > 0.0) {
        return Err(Error::InvalidParameter(
            "zero input with zero bias scale gives a degenerate first layer".into(),
        ));
    }

    enum Route {
        Moment,
        Critical,
        Geometric(f64),
    }
    let route = match *spec.class() {
        ActivationClass::SubPower { .. } => Route::Moment,
        ActivationClass::PowerBothSides { .. } | ActivationClass::PowerPositiveSide { .. } => {
            let gamma = spec
                .growth_exponent()
                .expect("power-growth classes always carry an exponent");
            if is_critical(gamma, 1.0) {
                if alpha == 2.0 {
                    // At stability 2 the moment recursion is the classical
                    // Gaussian one and needs no log correction.
                    Route::Moment
                } else {
                    Route::Critical
                }
            } else if gamma > 1.0 {
                if alpha == 2.0 {
                    return Err(Error::OutOfTheory(
                        "superlinear activation growth with stability-2 parameters mixes \
                         Gaussian and heavy-tail contributions; no single stable limit exists"
                            .into(),
                    ));
                }
                Route::Geometric(gamma)
            } else {
                Route::Moment
            }
        }
    };

    let mut layers = Vec::with_capacity(depth_l + 1);
    layers.push(LayerLaw {
        stability: alpha,
        sigma: sigma1,
    });
    match route {
        Route::Moment => {
            let sw = sigma_w.powf(alpha);
            let sb = sigma_b.powf(alpha);
            for _ in 0..depth_l {
                let prev = layers.last().expect("non-empty").sigma;
                let m =
                    activation_abs_moment(alpha, prev, alpha, spec.eval_fn(), spec.tail_model())?;
                layers.push(LayerLaw {
                    stability: alpha,
                    sigma: (sw * m + sb).powf(1.0 / alpha),
                });
            }
        }
        Route::Critical => {
            let q = spec.c_tau() * alpha * c_alpha(alpha)? * sigma_w.powf(alpha);
            let sb = sigma_b.powf(alpha);
            for _ in 0..depth_l {
                let prev = layers.last().expect("non-empty").sigma;
                layers.push(LayerLaw {
                    stability: alpha,
                    sigma: (q * prev.powf(alpha) + sb).powf(1.0 / alpha),
                });
            }
        }
        Route::Geometric(gamma) => {
            let c_tau = spec.c_tau();
            let mut a_prev = alpha;
            for l in 2..=(depth_l + 1) {
                let a_l = alpha / gamma.powi(l as i32 - 1);
                let prev = layers.last().expect("non-empty").sigma;
                let m = frac_abs_moment(alpha, 1.0, a_l)?;
                let sigma_l = (c_tau * c_alpha(a_prev)? / c_alpha(a_l)?
                    * sigma_w.powf(a_l)
                    * prev.powf(a_prev)
                    * m
                    + sigma_b.powf(a_l))
                .powf(1.0 / a_l);
                layers.push(LayerLaw {
                    stability: a_l,
                    sigma: sigma_l,
                });
                a_prev = a_l;
            }
        }
    }
    Ok(LayerScaleSequence { layers })
}

/// Closed-form output scale of a depth-`L` positive-part network with first
/// pre-activation scale `σ_x`:
/// `[(½ α C_α σ_w^α)^L σ_x^α + Σ_{i=0}^{L-1} (½ α C_α σ_w^α)^i σ_b^α]^{1/α}`.
///
/// This is the layer-wise critical recursion unrolled; it agrees with
/// [`deep_recursion`] on the positive-part activation at every depth when
/// seeded with the recursion's own first-layer scale.
pub fn relu_explicit_scale(
    depth_l: usize,
    alpha: f64,
    sigma_w: f64,
    sigma_b: f64,
    sigma_x: f64,
) -> Result<f64> {
    if depth_l == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "stability must lie in (0, 2) for the heavy-tail scale recursion, got {alpha}"
        )));
    }
    if !(sigma_w > 0.0 && sigma_w.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "weight scale must be positive and finite, got {sigma_w}"
        )));
    }
    if !(sigma_b >= 0.0 && sigma_b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bias scale must be non-negative and finite, got {sigma_b}"
        )));
    }
    if !(sigma_x > 0.0 && sigma_x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "first-layer scale must be positive and finite, got {sigma_x}"
        )));
    }
    let q = 0.5 * alpha * c_alpha(alpha)? * sigma_w.powf(alpha);
    let mut geometric_sum = 0.0;
    let mut q_pow = 1.0;
    for _ in 0..depth_l {
        geometric_sum += q_pow;
        q_pow *= q;
    }
    Ok((q_pow * sigma_x.powf(alpha) + geometric_sum * sigma_b.powf(alpha)).powf(1.0 / alpha))
}
