//! Activation taxonomy driving the limit formulas.
//!
//! Which stable law a wide network converges to — and how fast the sums must
//! be normalized — depends only on coarse growth features of the activation:
//!
//! * **sub-power** (`tanh`): `|τ(z)|` is dominated by `|z|^β` for some
//!   `β < 1`; heavy tails pass through `τ` essentially untouched and the
//!   limit keeps the input's stability index.
//! * **power, both sides** (`identity`, odd powers): `τ(z)/sign(z)|z|^γ → 1`
//!   on both ends; `τ` re-exponentiates the tail, dividing the index by `γ`.
//! * **power, positive side** (`relu`, positive-part powers):
//!   `τ(z)/z^γ → 1` as `z → +∞` while the negative side stays sub-power
//!   (bound `β < γ`); same index arithmetic, but only half the tail mass
//!   survives, which halves the tail constant (`c_τ = 1/2`).
//!
//! [`ActivationSpec`] packages the evaluation function with exactly this
//! metadata, plus the [`TailModel`] the moment integrals need. Built-ins
//! carry verified metadata; user-defined activations declare theirs, which
//! is spot-checked numerically (class membership is an analytic property —
//! the checks warn rather than fail).

use crate::error::{Error, Result};
use crate::stable::{c_alpha, TailAsymptote, TailModel};
use std::fmt;
use std::sync::Arc;

/// Growth class of an activation, with the per-class metadata the limit
/// formulas consume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ActivationClass {
    /// `|τ(z)| ≲ |z|^beta_bound` with `beta_bound < 1` (e.g. bounded
    /// activations, `beta_bound = 0`).
    SubPower { beta_bound: f64 },
    /// `τ(z)/(sign(z)|z|^gamma) → 1` as `z → ±∞`, `gamma > 0`.
    PowerBothSides { gamma: f64 },
    /// `τ(z)/z^gamma → 1` as `z → +∞`; `|τ(z)| ≲ |z|^neg_beta` as
    /// `z → -∞` with `neg_beta < gamma`.
    PowerPositiveSide { gamma: f64, neg_beta: f64 },
}

impl ActivationClass {
    /// The tail-index divisor: `Some(γ)` for the power classes, `None` for
    /// sub-power (no power-law lower bound exists).
    pub fn growth_exponent(&self) -> Option<f64> {
        match *self {
            ActivationClass::SubPower { .. } => None,
            ActivationClass::PowerBothSides { gamma } => Some(gamma),
            ActivationClass::PowerPositiveSide { gamma, .. } => Some(gamma),
        }
    }

    /// Tail-mass factor: `1/2` when only the positive side carries a power
    /// tail, `1` otherwise.
    pub fn c_tau(&self) -> f64 {
        match self {
            ActivationClass::PowerPositiveSide { .. } => 0.5,
            _ => 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ActivationClass::SubPower { beta_bound } => {
                if !(0.0..1.0).contains(&beta_bound) {
                    return Err(Error::InvalidParameter(format!(
                        "sub-power bound must lie in [0, 1), got {beta_bound}"
                    )));
                }
            }
            ActivationClass::PowerBothSides { gamma } => {
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "growth exponent must be positive and finite, got {gamma}"
                    )));
                }
            }
            ActivationClass::PowerPositiveSide { gamma, neg_beta } => {
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "growth exponent must be positive and finite, got {gamma}"
                    )));
                }
                if !(0.0..f64::INFINITY).contains(&neg_beta) || neg_beta >= gamma {
                    return Err(Error::InvalidParameter(format!(
                        "negative-side bound must satisfy 0 ≤ bound < gamma, \
                         got {neg_beta} (gamma = {gamma})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// An activation function with the growth metadata the limit formulas need.
/// Immutable and cheaply cloneable; safe to share across threads.
#[derive(Clone)]
pub struct ActivationSpec {
    name: String,
    class: ActivationClass,
    monotone_from: f64,
    tail_model: TailModel,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for ActivationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ActivationSpec")
            .field("name", &self.name)
            .field("class", &self.class)
            .field("monotone_from", &self.monotone_from)
            .field("tail_model", &self.tail_model)
            .finish_non_exhaustive()
    }
}

impl ActivationSpec {
    /// Looks up a built-in activation by name. `odd_power` and
    /// `positive_part_power` require the exponent as `parameter`; the others
    /// reject one.
    pub fn builtin(name: &str, parameter: Option<f64>) -> Result<Self> {
        let parametric = matches!(name, "odd_power" | "positive_part_power");
        if !parametric && parameter.is_some() {
            return Err(Error::InvalidParameter(format!(
                "activation '{name}' takes no parameter"
            )));
        }
        if parametric {
            let g = parameter.ok_or_else(|| {
                Error::InvalidParameter(format!("activation '{name}' requires an exponent"))
            })?;
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "activation exponent must be positive and finite, got {g}"
                )));
            }
            return Ok(match name {
                "odd_power" => Self::odd_power(g),
                _ => Self::positive_part_power(g),
            });
        }
        match name {
            "tanh" => Ok(Self::tanh()),
            "identity" => Ok(Self::identity()),
            "relu" => Ok(Self::relu()),
            _ => Err(Error::InvalidParameter(format!(
                "unknown activation '{name}' (expected tanh, identity, relu, \
                 odd_power, or positive_part_power)"
            ))),
        }
    }

    /// `tanh`: bounded, so sub-power with bound 0. `|tanh(z)| = 1` to f64
    /// precision beyond `|z| = 21`, which the tail model exploits for exact
    /// moment tails.
    pub fn tanh() -> Self {
        Self {
            name: "tanh".into(),
            class: ActivationClass::SubPower { beta_bound: 0.0 },
            monotone_from: 1.0,
            tail_model: TailModel::ExactPower {
                pos: 1.0,
                neg: 1.0,
                gamma: 0.0,
                from: 21.0,
            },
            eval: Arc::new(f64::tanh),
        }
    }

    /// `z ↦ z`: the canonical two-sided power, `γ = 1`.
    pub fn identity() -> Self {
        Self {
            name: "identity".into(),
            class: ActivationClass::PowerBothSides { gamma: 1.0 },
            monotone_from: 1.0,
            tail_model: TailModel::ExactPower {
                pos: 1.0,
                neg: 1.0,
                gamma: 1.0,
                from: 0.0,
            },
            eval: Arc::new(|z| z),
        }
    }

    /// `z ↦ max(0, z)`: positive-side power, `γ = 1`, vanishing negative
    /// side.
    pub fn relu() -> Self {
        Self {
            name: "relu".into(),
            class: ActivationClass::PowerPositiveSide {
                gamma: 1.0,
                neg_beta: 0.0,
            },
            monotone_from: 1.0,
            tail_model: TailModel::ExactPower {
                pos: 1.0,
                neg: 0.0,
                gamma: 1.0,
                from: 0.0,
            },
            eval: Arc::new(|z: f64| z.max(0.0)),
        }
    }

    /// `z ↦ sign(z)|z|^γ`: two-sided power with arbitrary exponent.
    pub fn odd_power(gamma: f64) -> Self {
        Self {
            name: format!("odd_power({gamma})"),
            class: ActivationClass::PowerBothSides { gamma },
            monotone_from: 1.0,
            tail_model: TailModel::ExactPower {
                pos: 1.0,
                neg: 1.0,
                gamma,
                from: 0.0,
            },
            eval: Arc::new(move |z: f64| z.signum() * z.abs().powf(gamma)),
        }
    }

    /// `z ↦ z^γ` for `z ≥ 0`, `0` below: positive-side power with arbitrary
    /// exponent.
    pub fn positive_part_power(gamma: f64) -> Self {
        Self {
            name: format!("positive_part_power({gamma})"),
            class: ActivationClass::PowerPositiveSide {
                gamma,
                neg_beta: 0.0,
            },
            monotone_from: 1.0,
            tail_model: TailModel::ExactPower {
                pos: 1.0,
                neg: 0.0,
                gamma,
                from: 0.0,
            },
            eval: Arc::new(move |z: f64| if z >= 0.0 { z.powf(gamma) } else { 0.0 }),
        }
    }

    /// A user-defined activation with caller-declared metadata. The class
    /// inequalities and tail-model consistency are enforced; the analytic
    /// claims (monotone beyond `monotone_from`, power classes satisfying
    /// `τ(z)/±|z|^γ → 1`) are spot-checked on a log-spaced grid, returning
    /// human-readable warnings instead of failing — class membership cannot
    /// be proven numerically.
    pub fn custom(
        name: impl Into<String>,
        class: ActivationClass,
        monotone_from: f64,
        tail_model: TailModel,
        eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    ) -> Result<(Self, Vec<String>)> {
        class.validate()?;
        if !(monotone_from > 0.0 && monotone_from.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "monotone_from must be positive and finite, got {monotone_from}"
            )));
        }
        let tail_growth = tail_model.growth();
        match class {
            ActivationClass::SubPower { beta_bound } => {
                if tail_growth > beta_bound {
                    return Err(Error::InvalidParameter(format!(
                        "tail model grows like |z|^{tail_growth}, above the declared \
                         sub-power bound {beta_bound}"
                    )));
                }
            }
            ActivationClass::PowerBothSides { gamma }
            | ActivationClass::PowerPositiveSide { gamma, .. } => {
                if (tail_growth - gamma).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "tail model growth {tail_growth} must equal the class \
                         exponent {gamma}"
                    )));
                }
            }
        }
        let spec = Self {
            name: name.into(),
            class,
            monotone_from,
            tail_model,
            eval,
        };
        Ok((spec.clone(), spec.numeric_warnings()))
    }

    /// Spot-checks the declared metadata on `z = monotone_from · 10^{k/3}`,
    /// `k = 0..=9`.
    fn numeric_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        let grid: Vec<f64> = (0..=9)
            .map(|k| self.monotone_from * 10f64.powf(f64::from(k) / 3.0))
            .collect();
        let check_monotone = |side: f64, warnings: &mut Vec<String>| {
            for w in grid.windows(2) {
                let (lo, hi) = (side * w[0], side * w[1]);
                let (lo, hi) = if side < 0.0 { (hi, lo) } else { (lo, hi) };
                if self.eval(hi) <= self.eval(lo) {
                    warnings.push(format!(
                        "{}: not strictly increasing between z = {lo} and z = {hi}",
                        self.name
                    ));
                    return;
                }
            }
        };
        match self.class {
            ActivationClass::SubPower { .. } => {}
            ActivationClass::PowerBothSides { gamma } => {
                check_monotone(1.0, &mut warnings);
                check_monotone(-1.0, &mut warnings);
                for side in [1.0, -1.0] {
                    let z = side * grid[grid.len() - 1];
                    let ratio = self.eval(z) / (z.signum() * z.abs().powf(gamma));
                    if (ratio - 1.0).abs() > 0.1 {
                        warnings.push(format!(
                            "{}: τ(z)/sign(z)|z|^{gamma} = {ratio} at z = {z}, \
                             expected → 1",
                            self.name
                        ));
                    }
                }
            }
            ActivationClass::PowerPositiveSide { gamma, .. } => {
                check_monotone(1.0, &mut warnings);
                let z = grid[grid.len() - 1];
                let ratio = self.eval(z) / z.powf(gamma);
                if (ratio - 1.0).abs() > 0.1 {
                    warnings.push(format!(
                        "{}: τ(z)/z^{gamma} = {ratio} at z = {z}, expected → 1",
                        self.name
                    ));
                }
            }
        }
        warnings
    }

    /// Evaluates the activation.
    pub fn eval(&self, z: f64) -> f64 {
        (self.eval)(z)
    }

    /// Borrow the evaluation closure (for moment integrals).
    pub fn eval_fn(&self) -> &(dyn Fn(f64) -> f64 + Send + Sync) {
        &*self.eval
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn class(&self) -> &ActivationClass {
        &self.class
    }
    /// Point beyond which the activation is declared strictly increasing.
    pub fn monotone_from(&self) -> f64 {
        self.monotone_from
    }
    pub fn tail_model(&self) -> &TailModel {
        &self.tail_model
    }
    /// See [`ActivationClass::growth_exponent`].
    pub fn growth_exponent(&self) -> Option<f64> {
        self.class.growth_exponent()
    }
    /// See [`ActivationClass::c_tau`].
    pub fn c_tau(&self) -> f64 {
        self.class.c_tau()
    }
}

/// Tail law of `τ(Y)` for `Y ~ S_α(σ)` symmetric and a power-class
/// activation: `P[|τ(Y)| > t] ≃ c_τ C_α σ^α t^{-α/γ}`. Sub-power
/// activations are rejected — their image has no power-law lower bound.
pub fn tau_tail_asymptote(spec: &ActivationSpec, alpha: f64, sigma: f64) -> Result<TailAsymptote> {
    let Some(gamma) = spec.growth_exponent() else {
        return Err(Error::OutOfTheory(format!(
            "activation '{}' is sub-power: τ(Y) has no power-law tail asymptote",
            spec.name()
        )));
    };
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "tail asymptote of τ(Y) requires stability in (0, 2), got {alpha}"
        )));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "scale sigma must be positive and finite, got {sigma}"
        )));
    }
    TailAsymptote::new(
        alpha / gamma,
        spec.c_tau() * c_alpha(alpha)? * sigma.powf(alpha),
        false,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replication_rng;
    use crate::stable::standard_symmetric;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::FRAC_2_PI;

    #[test]
    fn builtin_metadata() {
        let t = ActivationSpec::builtin("tanh", None).unwrap();
        assert_eq!(*t.class(), ActivationClass::SubPower { beta_bound: 0.0 });
        assert_eq!(t.c_tau(), 1.0);
        assert_eq!(t.growth_exponent(), None);

        let id = ActivationSpec::builtin("identity", None).unwrap();
        assert_eq!(*id.class(), ActivationClass::PowerBothSides { gamma: 1.0 });
        assert_eq!(id.c_tau(), 1.0);

        let r = ActivationSpec::builtin("relu", None).unwrap();
        assert_eq!(
            *r.class(),
            ActivationClass::PowerPositiveSide {
                gamma: 1.0,
                neg_beta: 0.0
            }
        );
        assert_eq!(r.c_tau(), 0.5);
        assert_eq!(r.growth_exponent(), Some(1.0));

        let cube = ActivationSpec::builtin("odd_power", Some(3.0)).unwrap();
        assert_eq!(
            *cube.class(),
            ActivationClass::PowerBothSides { gamma: 3.0 }
        );
        assert_eq!(cube.c_tau(), 1.0);

        let p = ActivationSpec::builtin("positive_part_power", Some(1.5)).unwrap();
        assert_eq!(p.c_tau(), 0.5);
        assert_eq!(p.growth_exponent(), Some(1.5));
    }

    #[test]
    fn builtin_rejections() {
        assert!(ActivationSpec::builtin("swish", None).is_err());
        assert!(ActivationSpec::builtin("odd_power", None).is_err());
        assert!(ActivationSpec::builtin("odd_power", Some(0.0)).is_err());
        assert!(ActivationSpec::builtin("odd_power", Some(-2.0)).is_err());
        assert!(ActivationSpec::builtin("tanh", Some(1.0)).is_err());
    }

    #[test]
    fn builtin_evaluations_are_exact() {
        let r = ActivationSpec::relu();
        for z in [-3.5f64, -1.0, -f64::MIN_POSITIVE, 0.0, 0.25, 7.0] {
            assert_eq!(r.eval(z), z.max(0.0));
        }
        let cube = ActivationSpec::odd_power(3.0);
        for z in [0.3f64, 1.0, 2.5, 11.0] {
            assert_relative_eq!(cube.eval(z), z * z * z, max_relative = 1e-15);
            assert_eq!(cube.eval(-z), -cube.eval(z));
        }
        let p = ActivationSpec::positive_part_power(1.5);
        assert_eq!(p.eval(-2.0), 0.0);
        assert_eq!(p.eval(0.0), 0.0);
        assert_relative_eq!(p.eval(4.0), 8.0, max_relative = 1e-15);
    }

    #[test]
    fn tau_tail_examples() {
        let id = ActivationSpec::identity();
        let t = tau_tail_asymptote(&id, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(t.index, 1.0);
        assert_abs_diff_eq!(t.constant, FRAC_2_PI, epsilon = 1e-15);
        assert!(!t.log_factor);

        let relu = ActivationSpec::relu();
        let t = tau_tail_asymptote(&relu, 1.5, 1.0).unwrap();
        assert_abs_diff_eq!(t.index, 1.5);
        assert_abs_diff_eq!(t.constant, 0.5 * c_alpha(1.5).unwrap(), epsilon = 1e-15);

        let cube = ActivationSpec::odd_power(3.0);
        let t = tau_tail_asymptote(&cube, 1.5, 2.0).unwrap();
        assert_abs_diff_eq!(t.index, 0.5);
        assert_abs_diff_eq!(
            t.constant,
            c_alpha(1.5).unwrap() * 2.0f64.powf(1.5),
            epsilon = 1e-14
        );
    }

    #[test]
    fn tau_tail_rejects_sub_power_and_gaussian() {
        let tanh = ActivationSpec::tanh();
        assert!(matches!(
            tau_tail_asymptote(&tanh, 1.5, 1.0),
            Err(Error::OutOfTheory(_))
        ));
        let id = ActivationSpec::identity();
        assert!(tau_tail_asymptote(&id, 2.0, 1.0).is_err());
    }

    #[test]
    fn monte_carlo_tail_survival_matches_asymptote() {
        // Survival of |τ(Y)| at its empirical 99.9% quantile vs the
        // asymptote, for every built-in power activation.
        let specs = [
            ActivationSpec::identity(),
            ActivationSpec::relu(),
            ActivationSpec::odd_power(3.0),
            ActivationSpec::positive_part_power(1.5),
        ];
        for spec in &specs {
            for alpha in [0.8, 1.5] {
                let t = tau_tail_asymptote(spec, alpha, 1.0).unwrap();
                let n = 2_000_000usize;
                let mut rng = replication_rng(901, 0);
                let mut vals: Vec<f64> = (0..n)
                    .map(|_| spec.eval(standard_symmetric(alpha, &mut rng)).abs())
                    .collect();
                vals.sort_by(f64::total_cmp);
                let q = vals[(n as f64 * 0.999) as usize];
                let ratio = t.survival(q) / 1e-3;
                assert!(
                    (ratio - 1.0).abs() < 0.25,
                    "{} at alpha={alpha}: asymptote/empirical = {ratio}",
                    spec.name()
                );
            }
        }
    }

    #[test]
    fn custom_spec_validation_and_warnings() {
        // Honest metadata: no warnings.
        let (spec, warnings) = ActivationSpec::custom(
            "cube_plus_linear",
            ActivationClass::PowerBothSides { gamma: 3.0 },
            1.0,
            TailModel::GrowthBound { exponent: 3.0 },
            Arc::new(|z: f64| z * z * z + z),
        )
        .unwrap();
        assert!(warnings.is_empty(), "{warnings:?}");
        assert_eq!(spec.growth_exponent(), Some(3.0));

        // Misdeclared exponent: growth-law warning, not an error.
        let (_, warnings) = ActivationSpec::custom(
            "misdeclared",
            ActivationClass::PowerBothSides { gamma: 2.0 },
            1.0,
            TailModel::GrowthBound { exponent: 2.0 },
            Arc::new(|z: f64| z * z * z),
        )
        .unwrap();
        assert!(!warnings.is_empty());

        // Non-monotone beyond the declared threshold: warning.
        let (_, warnings) = ActivationSpec::custom(
            "wiggly",
            ActivationClass::PowerPositiveSide {
                gamma: 1.0,
                neg_beta: 0.0,
            },
            1.0,
            TailModel::GrowthBound { exponent: 1.0 },
            Arc::new(|z: f64| if z > 0.0 { z + 20.0 * (z).sin() } else { 0.0 }),
        )
        .unwrap();
        assert!(!warnings.is_empty());

        // Class inequality violations are hard errors.
        assert!(ActivationSpec::custom(
            "bad_sub_power",
            ActivationClass::SubPower { beta_bound: 1.0 },
            1.0,
            TailModel::Bounded { bound: 1.0 },
            Arc::new(|z: f64| z.tanh()),
        )
        .is_err());
        assert!(ActivationSpec::custom(
            "bad_one_sided",
            ActivationClass::PowerPositiveSide {
                gamma: 1.0,
                neg_beta: 1.5,
            },
            1.0,
            TailModel::GrowthBound { exponent: 1.0 },
            Arc::new(|z: f64| z.max(0.0)),
        )
        .is_err());
        // Tail model inconsistent with the declared class.
        assert!(ActivationSpec::custom(
            "mismatched_tail",
            ActivationClass::PowerBothSides { gamma: 2.0 },
            1.0,
            TailModel::GrowthBound { exponent: 1.0 },
            Arc::new(|z: f64| z * z.abs()),
        )
        .is_err());
    }
}
