//! Finite-width Monte Carlo for stable-weight networks.
//!
//! Every parameter (weight or bias) is an independent standard symmetric
//! stable draw scaled by `sigma_w`/`sigma_b`. A depth-`L` network on input
//! `x ∈ R^d` evaluates
//!
//! ```text
//! g^(1)_j   = σ_w Σ_k w^(0)_{j,k} x_k + σ_b b^(0)_j                 (no width normalization)
//! g^(l)_j   = σ_b b^(l-1)_j + σ_w ν(n)^{-1/p_l} Σ_i w^(l-1)_{j,i} τ(g^(l-1)_i),  l = 2..L+1
//! ```
//!
//! with `ν(n) = n` or `n log n` and the layer exponent `p_l` resolved from
//! the limit theory (`p_l = α` everywhere, except under superlinear growth
//! `γ > 1` below stability 2 where `p_l = α/γ^{l-1}` drops geometrically).
//! The scalar output is `g^(L+1)_1`.
//!
//! Replications are embarrassingly parallel: replication `r` draws from its
//! own counter-based RNG stream derived from `(seed, r)`, and results are
//! merged in replication order, so ensembles are bitwise reproducible no
//! matter how many worker threads run them. Within a replication the draw
//! order is fixed: layers first to last, units in order, each unit consuming
//! its incoming weights in input order and then its bias (bias draws are
//! consumed even when `sigma_b = 0`, so streams stay aligned across bias
//! settings). Weights are streamed straight into accumulators and never
//! materialized, so memory stays at two layer buffers.
//!
//! Two growth modes are available for deep ensembles: `FiniteWidth` gives
//! every hidden layer the same width `n`, while `ExactSequential` draws the
//! layer-`L` hidden units directly from the sequential-growth limit law (see
//! [`deep_recursion`]) and only simulates the final width-`n` sum — the
//! one-hidden-layer case where both modes sample the same distribution is a
//! useful consistency check. A cost guard rejects ensembles whose estimated
//! parameter-draw count exceeds a configurable budget before any work is
//! done.

use rand_chacha::ChaCha8Rng;

use crate::activation::ActivationSpec;
use crate::error::{Error, Result};
use crate::limit::{
    deep_recursion, deep_scaling_kind, shallow_index, validate_law, DeepScalingKind,
};
use crate::rng::replication_rng;
use crate::stable::standard_symmetric;

/// Ensembles whose estimated draw count exceeds this many parameter
/// evaluations are rejected unless the caller raises the budget.
pub const DEFAULT_MAX_UNIT_EVALS: f64 = 4.0e9;

/// How bias scales evolve with depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasRegime {
    /// Every bias is `σ_b S_α(1)`.
    Standard,
    /// Layer-`l` biases are `σ_b S_{α/γ^{l-1}}(1)`, tracking the geometric
    /// index schedule forced by superlinear activation growth.
    Geometric,
}

/// Width normalization `ν(n)` applied to hidden-layer sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// Resolve from the limit theory: `n log n` exactly at critical growth
    /// (`γ = 1` below stability 2), plain `n` otherwise.
    Auto,
    /// Force `ν(n) = n`.
    PlainN,
    /// Force `ν(n) = n log n` (needs `n ≥ 2`).
    NLogN,
}

/// How the ensemble approaches the infinite-width limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthMode {
    /// Hidden layer `L` is drawn from its sequential-growth limit law and
    /// only the final sum runs at width `n`.
    ExactSequential,
    /// Every hidden layer runs at width `n`.
    FiniteWidth,
}

/// Architecture and parameter laws of one network.
#[derive(Clone)]
pub struct NetworkConfig {
    /// Stability index of every weight and bias, in `(0, 2]`.
    pub alpha: f64,
    /// Weight scale, `≥ 0`.
    pub sigma_w: f64,
    /// Bias scale, `≥ 0`.
    pub sigma_b: f64,
    /// Fixed network input.
    pub input_x: Vec<f64>,
    /// Number of hidden layers, `≥ 1`.
    pub depth_l: usize,
    /// Nonlinearity applied between layers.
    pub activation: ActivationSpec,
    pub bias_regime: BiasRegime,
    pub scaling: Scaling,
}

impl NetworkConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        sigma_w: f64,
        sigma_b: f64,
        input_x: Vec<f64>,
        depth_l: usize,
        activation: ActivationSpec,
        bias_regime: BiasRegime,
        scaling: Scaling,
    ) -> Result<Self> {
        let cfg = Self {
            alpha,
            sigma_w,
            sigma_b,
            input_x,
            depth_l,
            activation,
            bias_regime,
            scaling,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "stability alpha must lie in (0, 2], got {}",
                self.alpha
            )));
        }
        for (value, name) in [(self.sigma_w, "sigma_w"), (self.sigma_b, "sigma_b")] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be non-negative and finite, got {value}"
                )));
            }
        }
        if self.input_x.is_empty() || self.input_x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "input vector must be non-empty with finite entries".into(),
            ));
        }
        if self.depth_l == 0 {
            return Err(Error::InvalidParameter("depth must be at least 1".into()));
        }
        if self.bias_regime == BiasRegime::Geometric
            && !self.activation.growth_exponent().is_some_and(|g| g > 1.0)
        {
            return Err(Error::InvalidParameter(format!(
                "the geometric bias schedule requires superlinear activation growth, but '{}' \
                 does not grow superlinearly",
                self.activation.name()
            )));
        }
        Ok(())
    }

    /// Stability index of the bias feeding layer `l` (1-based, output layer
    /// is `depth_l + 1`).
    fn bias_index(&self, layer: usize) -> f64 {
        match self.bias_regime {
            BiasRegime::Standard => self.alpha,
            BiasRegime::Geometric => {
                let gamma = self
                    .activation
                    .growth_exponent()
                    .expect("validated: geometric regime implies power growth");
                self.alpha / gamma.powi(layer as i32 - 1)
            }
        }
    }

    /// Normalization prefactors `ν(n)^{-1/p_l}` for the sums into layers
    /// `2..=depth_l+1`, after resolving the scaling mode.
    fn layer_norms(&self, n: usize) -> Result<Vec<f64>> {
        let kind = deep_scaling_kind(self.alpha, &self.activation);
        (2..=self.depth_l + 1)
            .map(|l| {
                let (p, theory_log) = match kind {
                    DeepScalingKind::Uniform { log } => (self.alpha, log),
                    DeepScalingKind::Geometric { gamma } => {
                        (self.alpha / gamma.powi(l as i32 - 1), false)
                    }
                };
                sum_norm(n, p, self.resolve_log(theory_log))
            })
            .collect()
    }

    fn resolve_log(&self, theory_log: bool) -> bool {
        match self.scaling {
            Scaling::Auto => theory_log,
            Scaling::PlainN => false,
            Scaling::NLogN => true,
        }
    }
}

/// Size, seed, and growth mode of a deep ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleConfig {
    /// Hidden-layer width `n ≥ 1`.
    pub width_n: usize,
    /// Number of independent output draws, `≥ 1`.
    pub replications: usize,
    /// Master seed; replication `r` uses the stream `(seed, r)`.
    pub seed: u64,
    pub growth_mode: GrowthMode,
    /// Abort threshold on the estimated number of parameter draws.
    pub max_unit_evals: f64,
}

impl EnsembleConfig {
    pub fn new(width_n: usize, replications: usize, seed: u64, growth_mode: GrowthMode) -> Self {
        Self {
            width_n,
            replications,
            seed,
            growth_mode,
            max_unit_evals: DEFAULT_MAX_UNIT_EVALS,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.width_n == 0 {
            return Err(Error::InvalidParameter("width must be at least 1".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidParameter(
                "replications must be at least 1".into(),
            ));
        }
        if !(self.max_unit_evals > 0.0) {
            return Err(Error::InvalidParameter(
                "the evaluation budget must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// `ν(n)^{-1/p}` with `ν(n) = n` or `n log n`.
fn sum_norm(n: usize, p: f64, log: bool) -> Result<f64> {
    let nf = n as f64;
    if log {
        if n < 2 {
            return Err(Error::InvalidParameter(
                "the log-corrected normalization (n log n)^{-1/p} needs width n >= 2".into(),
            ));
        }
        Ok((nf * nf.ln()).powf(-1.0 / p))
    } else {
        Ok(nf.powf(-1.0 / p))
    }
}

fn ensure_budget(estimated: f64, budget: f64) -> Result<()> {
    if estimated > budget {
        Err(Error::BudgetExceeded { estimated, budget })
    } else {
        Ok(())
    }
}

/// Runs one closure per replication index and merges results in replication
/// order; worker threads never affect the output.
fn run_replications<F>(replications: usize, draw: F) -> Vec<f64>
where
    F: Fn(u64) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..replications as u64).into_par_iter().map(draw).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..replications as u64).map(draw).collect()
    }
}

/// One draw of the normalized one-layer sum
/// `ν(n)^{-1/p} Σ_{j=1}^n w_j τ(y_j)` with `y_j ~ S_{α₀}(σ₀)` i.i.d.
/// pre-activations and `w_j ~ S_{α₁}(σ₁)` i.i.d. weights.
///
/// The exponent `p` is the limit index from the one-layer theory; the
/// scaling mode only switches `ν(n)` between `n` and `n log n`. Per term the
/// pre-activation is drawn before the weight. With `n = 1`, an identity
/// activation, and plain scaling the result is exactly `w₁ y₁`.
#[allow(clippy::too_many_arguments)]
pub fn sample_shallow(
    n: usize,
    alpha0: f64,
    sigma0: f64,
    alpha1: f64,
    sigma1: f64,
    spec: &ActivationSpec,
    scaling: Scaling,
    seed: u64,
) -> Result<f64> {
    let plan = ShallowPlan::resolve(n, alpha0, sigma0, alpha1, sigma1, spec, scaling)?;
    let mut rng = replication_rng(seed, 0);
    Ok(plan.draw(&mut rng))
}

/// Independent replications of [`sample_shallow`]: replication `r` draws
/// from the stream `(seed, r)`, so the ensemble extends and parallelizes
/// without changing earlier entries.
#[allow(clippy::too_many_arguments)]
pub fn sample_shallow_ensemble(
    n: usize,
    alpha0: f64,
    sigma0: f64,
    alpha1: f64,
    sigma1: f64,
    spec: &ActivationSpec,
    scaling: Scaling,
    seed: u64,
    replications: usize,
) -> Result<Vec<f64>> {
    if replications == 0 {
        return Err(Error::InvalidParameter(
            "replications must be at least 1".into(),
        ));
    }
    ensure_budget(replications as f64 * 2.0 * n as f64, DEFAULT_MAX_UNIT_EVALS)?;
    let plan = ShallowPlan::resolve(n, alpha0, sigma0, alpha1, sigma1, spec, scaling)?;
    Ok(run_replications(replications, |rep| {
        let mut rng = replication_rng(seed, rep);
        plan.draw(&mut rng)
    }))
}

struct ShallowPlan<'a> {
    n: usize,
    alpha0: f64,
    sigma0: f64,
    alpha1: f64,
    sigma1: f64,
    spec: &'a ActivationSpec,
    norm: f64,
}

impl<'a> ShallowPlan<'a> {
    fn resolve(
        n: usize,
        alpha0: f64,
        sigma0: f64,
        alpha1: f64,
        sigma1: f64,
        spec: &'a ActivationSpec,
        scaling: Scaling,
    ) -> Result<Self> {
        validate_law(alpha0, sigma0, "pre-activation")?;
        validate_law(alpha1, sigma1, "weight")?;
        if n == 0 {
            return Err(Error::InvalidParameter("width must be at least 1".into()));
        }
        let (p, theory_log) = shallow_index(alpha0, alpha1, spec)?;
        let log = match scaling {
            Scaling::Auto => theory_log,
            Scaling::PlainN => false,
            Scaling::NLogN => true,
        };
        let norm = sum_norm(n, p, log)?;
        Ok(Self {
            n,
            alpha0,
            sigma0,
            alpha1,
            sigma1,
            spec,
            norm,
        })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let tau = self.spec.eval_fn();
        let mut acc = 0.0;
        for _ in 0..self.n {
            let y = self.sigma0 * standard_symmetric(self.alpha0, rng);
            let w = self.sigma1 * standard_symmetric(self.alpha1, rng);
            acc += w * tau(y);
        }
        self.norm * acc
    }
}

/// An ensemble of scalar outputs `g^(L+1)_1(x)`, one per replication.
///
/// `FiniteWidth` runs every hidden layer at width `n` (cost per replication
/// about `n d + (L-1) n² + n` draws); `ExactSequential` draws layer-`L`
/// units straight from the sequential-growth limit law and only the final
/// sum at width `n` (about `2n` draws). The two modes sample the same
/// distribution at one hidden layer, where the layer-1 law is exact.
pub fn sample_deep(config: &NetworkConfig, ensemble: &EnsembleConfig) -> Result<Vec<f64>> {
    config.validate()?;
    ensemble.validate()?;
    let n = ensemble.width_n;
    let reps = ensemble.replications as f64;
    let nf = n as f64;
    let d = config.input_x.len() as f64;
    let hidden_sums = (config.depth_l - 1) as f64;
    let estimated = match ensemble.growth_mode {
        GrowthMode::FiniteWidth => reps * (nf * d + hidden_sums * nf * nf + nf),
        GrowthMode::ExactSequential => reps * 2.0 * nf,
    };
    ensure_budget(estimated, ensemble.max_unit_evals)?;
    let norms = config.layer_norms(n)?;

    match ensemble.growth_mode {
        GrowthMode::FiniteWidth => Ok(run_replications(ensemble.replications, |rep| {
            let mut rng = replication_rng(ensemble.seed, rep);
            finite_width_draw(config, n, &norms, &mut rng)
        })),
        GrowthMode::ExactSequential => {
            if matches!(
                deep_scaling_kind(config.alpha, &config.activation),
                DeepScalingKind::Geometric { .. }
            ) && config.bias_regime == BiasRegime::Standard
                && config.sigma_b > 0.0
            {
                return Err(Error::OutOfTheory(
                    "sequential growth with superlinear activation growth assumes the geometric \
                     bias schedule; use the geometric bias regime or sigma_b = 0"
                        .into(),
                ));
            }
            let sequence = deep_recursion(
                config.alpha,
                config.sigma_w,
                config.sigma_b,
                &config.input_x,
                config.depth_l,
                &config.activation,
            )?;
            let hidden = sequence.layers[config.depth_l - 1];
            let out_norm = *norms.last().expect("depth >= 1 gives at least one sum");
            let out_bias = config.bias_index(config.depth_l + 1);
            Ok(run_replications(ensemble.replications, |rep| {
                let mut rng = replication_rng(ensemble.seed, rep);
                let tau = config.activation.eval_fn();
                let mut acc = 0.0;
                for _ in 0..n {
                    let g = hidden.sigma * standard_symmetric(hidden.stability, &mut rng);
                    let w = standard_symmetric(config.alpha, &mut rng);
                    acc += w * tau(g);
                }
                let b = standard_symmetric(out_bias, &mut rng);
                config.sigma_b * b + config.sigma_w * out_norm * acc
            }))
        }
    }
}

/// One full-width forward pass; draw order is layers → units → (weights in
/// input order, then the unit's bias).
fn finite_width_draw(config: &NetworkConfig, n: usize, norms: &[f64], rng: &mut ChaCha8Rng) -> f64 {
    let tau = config.activation.eval_fn();
    let mut acts = Vec::with_capacity(n);
    let bias0 = config.bias_index(1);
    for _ in 0..n {
        let mut acc = 0.0;
        for &xk in &config.input_x {
            acc += standard_symmetric(config.alpha, rng) * xk;
        }
        let b = standard_symmetric(bias0, rng);
        acts.push(tau(config.sigma_w * acc + config.sigma_b * b));
    }
    for l in 2..=config.depth_l {
        let norm = norms[l - 2];
        let bias_idx = config.bias_index(l);
        let mut next = Vec::with_capacity(n);
        for _ in 0..n {
            let mut acc = 0.0;
            for &a in &acts {
                acc += standard_symmetric(config.alpha, rng) * a;
            }
            let b = standard_symmetric(bias_idx, rng);
            next.push(tau(config.sigma_b * b + config.sigma_w * norm * acc));
        }
        acts = next;
    }
    let norm = norms[config.depth_l - 1];
    let mut acc = 0.0;
    for &a in &acts {
        acc += standard_symmetric(config.alpha, rng) * a;
    }
    let b = standard_symmetric(config.bias_index(config.depth_l + 1), rng);
    config.sigma_b * b + config.sigma_w * norm * acc
}

/// Evaluates one fixed finite-width network (a single shared weight
/// realization) at every grid point, returning one output per point.
///
/// The grid replaces the configured input, so every point must have the
/// input's dimension. Identical grid points give bitwise-identical outputs,
/// and a fixed seed gives a bitwise-identical surface on every call.
pub fn sample_surface(
    config: &NetworkConfig,
    grid: &[Vec<f64>],
    n: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    config.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter("width must be at least 1".into()));
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameter(
            "the evaluation grid must contain at least one point".into(),
        ));
    }
    let d = config.input_x.len();
    for (i, point) in grid.iter().enumerate() {
        if point.len() != d {
            return Err(Error::InvalidParameter(format!(
                "grid point {i} has dimension {}, expected {d}",
                point.len()
            )));
        }
        if point.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid point {i} has non-finite entries"
            )));
        }
    }
    let g = grid.len();
    let nf = n as f64;
    let hidden_sums = (config.depth_l - 1) as f64;
    ensure_budget(
        g as f64 * (nf * d as f64 + hidden_sums * nf * nf + nf),
        DEFAULT_MAX_UNIT_EVALS,
    )?;
    let norms = config.layer_norms(n)?;
    let tau = config.activation.eval_fn();
    let mut rng = replication_rng(seed, 0);

    // Activations per (unit, point), row-major by unit. Weights are drawn
    // once per unit and applied to every point, which is what ties the whole
    // surface to a single realization.
    let mut acts = vec![0.0_f64; n * g];
    let mut weights = vec![0.0_f64; d];
    let bias0 = config.bias_index(1);
    for j in 0..n {
        for slot in weights.iter_mut() {
            *slot = standard_symmetric(config.alpha, &mut rng);
        }
        let b = standard_symmetric(bias0, &mut rng);
        for (p, point) in grid.iter().enumerate() {
            let mut acc = 0.0;
            for (k, &xk) in point.iter().enumerate() {
                acc += weights[k] * xk;
            }
            acts[j * g + p] = tau(config.sigma_w * acc + config.sigma_b * b);
        }
    }
    let mut sums = vec![0.0_f64; g];
    for l in 2..=config.depth_l {
        let norm = norms[l - 2];
        let bias_idx = config.bias_index(l);
        let mut next = vec![0.0_f64; n * g];
        for j in 0..n {
            sums.fill(0.0);
            for i in 0..n {
                let w = standard_symmetric(config.alpha, &mut rng);
                for (p, sum) in sums.iter_mut().enumerate() {
                    *sum += w * acts[i * g + p];
                }
            }
            let b = standard_symmetric(bias_idx, &mut rng);
            for (p, &sum) in sums.iter().enumerate() {
                next[j * g + p] = tau(config.sigma_b * b + config.sigma_w * norm * sum);
            }
        }
        acts = next;
    }
    let norm = norms[config.depth_l - 1];
    sums.fill(0.0);
    for i in 0..n {
        let w = standard_symmetric(config.alpha, &mut rng);
        for (p, sum) in sums.iter_mut().enumerate() {
            *sum += w * acts[i * g + p];
        }
    }
    let b = standard_symmetric(config.bias_index(config.depth_l + 1), &mut rng);
    Ok(sums
        .iter()
        .map(|&sum| config.sigma_b * b + config.sigma_w * norm * sum)
        .collect())
}
