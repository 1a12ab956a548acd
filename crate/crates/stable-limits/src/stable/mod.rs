//! Univariate α-stable distribution machinery.
//!
//! A stable law is parameterized here by stability `α ∈ (0,2]`, skewness
//! `β ∈ [-1,1]`, scale `σ > 0`, and shift `μ`, with log-characteristic
//! function
//!
//! ```text
//! ψ(t) = -σ^α |t|^α [1 + iβ tan(πα/2) sign(t)] + iμt          (α ≠ 1)
//! ψ(t) = -σ |t| [1 + iβ (2/π) sign(t) ln|t|] + iμt            (α = 1)
//! ```
//!
//! For `α < 2` the symmetric law has the power tail
//! `P[X > x] ≃ (1/2) C_α σ^α x^{-α}` with
//! `C_α = (∫_0^∞ x^{-α} sin x dx)^{-1}`, and `E|X|^r` is finite exactly for
//! `0 < r < α`. Submodules provide exact sampling ([`sample`]), numeric
//! symmetric density/CDF ([`dist`]), and fractional absolute moments
//! ([`moment`]).

mod dist;
mod moment;
mod sample;

pub use dist::{
    symmetric_cdf, symmetric_cdf_with, symmetric_pdf, symmetric_pdf_with, CdfTable, QuadSettings,
};
pub use moment::{
    activation_abs_moment, activation_abs_moment_with, frac_abs_moment, frac_abs_moment_with,
    TailModel,
};
pub use sample::{draw, sample, standard_symmetric};

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use statrs::function::gamma::gamma;
use std::f64::consts::{FRAC_PI_2, PI};

/// Parameters of a univariate stable law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableParams {
    alpha: f64,
    beta: f64,
    sigma: f64,
    mu: f64,
}

impl StableParams {
    /// Validates and builds a parameter set: `α ∈ (0,2]`, `β ∈ [-1,1]`,
    /// `σ > 0`, `μ` finite. At `α = 2` the skewness has no effect and is
    /// normalized to 0.
    pub fn new(alpha: f64, beta: f64, sigma: f64, mu: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "stability alpha must lie in (0, 2], got {alpha}"
            )));
        }
        if !(-1.0..=1.0).contains(&beta) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "skewness beta must lie in [-1, 1], got {beta}"
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scale sigma must be positive and finite, got {sigma}"
            )));
        }
        if !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "shift mu must be finite, got {mu}"
            )));
        }
        let beta = if alpha == 2.0 { 0.0 } else { beta };
        Ok(Self {
            alpha,
            beta,
            sigma,
            mu,
        })
    }

    /// Symmetric law `S_α(σ)`: `β = μ = 0`.
    pub fn symmetric(alpha: f64, sigma: f64) -> Result<Self> {
        Self::new(alpha, 0.0, sigma, 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// True iff the law is symmetric about the origin (`β = 0` and `μ = 0`).
    pub fn is_symmetric(&self) -> bool {
        self.beta == 0.0 && self.mu == 0.0
    }
}

/// A power-law upper-tail asymptote `S(z) ≍ constant · z^{-index} · (log z)`,
/// the log factor present iff `log_factor`.
///
/// The asymptote describes the survival function of whichever variable it was
/// derived for: [`survival_asymptote`] describes `P[X > z]` of a symmetric
/// stable variable (one side), while the activation and product tail laws
/// describe `P[|τ(Y)| > z]` and `P[|X·τ(Y)| > z]` of the absolute values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailAsymptote {
    pub index: f64,
    pub constant: f64,
    pub log_factor: bool,
}

impl TailAsymptote {
    pub fn new(index: f64, constant: f64, log_factor: bool) -> Result<Self> {
        if !(index > 0.0 && index.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tail index must be positive, got {index}"
            )));
        }
        if !(constant >= 0.0 && constant.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tail constant must be non-negative, got {constant}"
            )));
        }
        Ok(Self {
            index,
            constant,
            log_factor,
        })
    }

    /// Evaluates the asymptote at `z` (meaningful for large `z`; the log
    /// variant requires `z > 1`).
    pub fn survival(&self, z: f64) -> f64 {
        let base = self.constant * z.powf(-self.index);
        if self.log_factor {
            base * z.ln()
        } else {
            base
        }
    }
}

/// Characteristic function `E e^{itX}` of a stable law, with the exact `α = 1`
/// logarithmic branch.
pub fn char_fn(params: &StableParams, t: f64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let (alpha, beta, sigma, mu) = (params.alpha, params.beta, params.sigma, params.mu);
    let at = t.abs();
    let sign = t.signum();
    let psi = if alpha == 1.0 {
        let real = -sigma * at;
        let imag = -sigma * at * beta * (2.0 / PI) * sign * at.ln() + mu * t;
        Complex64::new(real, imag)
    } else {
        let pow = sigma.powf(alpha) * at.powf(alpha);
        let real = -pow;
        let imag = -pow * beta * (FRAC_PI_2 * alpha).tan() * sign + mu * t;
        Complex64::new(real, imag)
    };
    psi.exp()
}

/// The tail constant `C_α = (∫_0^∞ x^{-α} sin x dx)^{-1}` for `α ∈ (0, 2)`,
/// via its closed form `(1-α)/(Γ(2-α) cos(πα/2))` for `α ≠ 1` and `2/π` at
/// `α = 1`; the branches agree in the `α → 1` limit.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "c_alpha is defined for alpha in (0, 2), got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Ok(2.0 / PI);
    }
    Ok((1.0 - alpha) / (gamma(2.0 - alpha) * (FRAC_PI_2 * alpha).cos()))
}

/// One-sided tail asymptote `P[X > z] ≃ (1/2) C_α σ^α z^{-α}` of the
/// symmetric law `S_α(σ)`, valid for `α < 2` (the Gaussian case has no power
/// tail and is rejected).
pub fn survival_asymptote(params: &StableParams) -> Result<TailAsymptote> {
    if !params.is_symmetric() {
        return Err(Error::InvalidParameter(
            "survival_asymptote requires a symmetric law (beta = mu = 0)".into(),
        ));
    }
    if params.alpha >= 2.0 {
        return Err(Error::InvalidParameter(
            "survival_asymptote requires alpha < 2: the Gaussian has no power tail".into(),
        ));
    }
    let constant = 0.5 * c_alpha(params.alpha)? * params.sigma.powf(params.alpha);
    TailAsymptote::new(params.alpha, constant, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn params_construction_validates_domains() {
        assert!(StableParams::new(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(StableParams::new(2.1, 0.0, 1.0, 0.0).is_err());
        assert!(StableParams::new(1.0, 1.5, 1.0, 0.0).is_err());
        assert!(StableParams::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(StableParams::new(1.0, 0.0, -1.0, 0.0).is_err());
        assert!(StableParams::new(1.0, 0.0, 1.0, f64::NAN).is_err());
        let p = StableParams::new(1.5, -0.3, 2.0, 1.0).unwrap();
        assert_eq!(p.alpha(), 1.5);
        assert_eq!(p.beta(), -0.3);
        assert!(!p.is_symmetric());
        assert!(StableParams::symmetric(1.5, 2.0).unwrap().is_symmetric());
    }

    #[test]
    fn skewness_is_immaterial_at_alpha_two() {
        let p = StableParams::new(2.0, 0.7, 1.0, 0.0).unwrap();
        assert_eq!(p.beta(), 0.0);
        assert!(p.is_symmetric());
    }

    #[test]
    fn char_fn_gaussian_and_cauchy_closed_forms() {
        // α=2: ψ(t) = -σ²t², so φ(1) = e^{-1}.
        let gauss = StableParams::new(2.0, 0.0, 1.0, 0.0).unwrap();
        let v = char_fn(&gauss, 1.0);
        assert_abs_diff_eq!(v.re, (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);

        // α=1 symmetric: φ(2) = e^{-2σ}.
        let cauchy = StableParams::new(1.0, 0.0, 1.0, 0.0).unwrap();
        let v = char_fn(&cauchy, 2.0);
        assert_abs_diff_eq!(v.re, (-2.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn char_fn_skewed_direct_evaluation() {
        // α=1.5, β=0.5, σ=1, μ=0 at t=1: exp(-1 - 0.5i·tan(0.75π)).
        let p = StableParams::new(1.5, 0.5, 1.0, 0.0).unwrap();
        let expected = Complex64::new(-1.0, -0.5 * (0.75 * PI).tan()).exp();
        let v = char_fn(&p, 1.0);
        assert_abs_diff_eq!(v.re, expected.re, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, expected.im, epsilon = 1e-14);
        // tan(0.75π) = -1, so the imaginary part of ψ is +0.5.
        assert_abs_diff_eq!(v.re, (-1.0f64).exp() * 0.5f64.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, (-1.0f64).exp() * 0.5f64.sin(), epsilon = 1e-14);
    }

    #[test]
    fn char_fn_is_one_at_zero_and_hermitian() {
        let p = StableParams::new(1.2, -0.4, 0.7, 0.3).unwrap();
        assert_eq!(char_fn(&p, 0.0), Complex64::new(1.0, 0.0));
        let plus = char_fn(&p, 1.3);
        let minus = char_fn(&p, -1.3);
        assert_abs_diff_eq!(plus.re, minus.re, epsilon = 1e-14);
        assert_abs_diff_eq!(plus.im, -minus.im, epsilon = 1e-14);
    }

    #[test]
    fn c_alpha_known_values() {
        assert_abs_diff_eq!(c_alpha(1.0).unwrap(), 2.0 / PI, epsilon = 1e-15);
        // C_{1/2} = sqrt(2/π), C_{3/2} = sqrt(1/(2π)): from Γ(1/2) = √π.
        assert_relative_eq!(c_alpha(0.5).unwrap(), (2.0 / PI).sqrt(), epsilon = 1e-14);
        assert_relative_eq!(
            c_alpha(1.5).unwrap(),
            (1.0 / (2.0 * PI)).sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn c_alpha_branches_agree_near_one() {
        for alpha in [1.0 - 1e-6, 1.0 + 1e-6] {
            assert!((c_alpha(alpha).unwrap() - 2.0 / PI).abs() < 1e-4);
        }
    }

    #[test]
    fn c_alpha_rejects_out_of_domain() {
        assert!(c_alpha(0.0).is_err());
        assert!(c_alpha(2.0).is_err());
        assert!(c_alpha(-1.0).is_err());
    }

    #[test]
    fn survival_asymptote_values_and_homogeneity() {
        let p = StableParams::symmetric(1.0, 1.0).unwrap();
        let t = survival_asymptote(&p).unwrap();
        assert_abs_diff_eq!(t.constant, 1.0 / PI, epsilon = 1e-15);
        assert_eq!(t.index, 1.0);
        assert!(!t.log_factor);

        let p = StableParams::symmetric(1.5, 1.0).unwrap();
        let t = survival_asymptote(&p).unwrap();
        assert_relative_eq!(t.constant, 0.5 * c_alpha(1.5).unwrap(), epsilon = 1e-14);

        // σ^α homogeneity.
        let scaled = StableParams::symmetric(0.5, 3.0).unwrap();
        let t = survival_asymptote(&scaled).unwrap();
        assert_relative_eq!(
            t.constant,
            0.5 * c_alpha(0.5).unwrap() * 3.0f64.powf(0.5),
            epsilon = 1e-14
        );
    }

    #[test]
    fn survival_asymptote_rejects_gaussian_and_skew() {
        assert!(survival_asymptote(&StableParams::symmetric(2.0, 1.0).unwrap()).is_err());
        assert!(survival_asymptote(&StableParams::new(1.5, 0.5, 1.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn tail_asymptote_eval_includes_log() {
        let plain = TailAsymptote::new(1.0, 2.0, false).unwrap();
        assert_abs_diff_eq!(plain.survival(10.0), 0.2, epsilon = 1e-15);
        let logged = TailAsymptote::new(1.0, 2.0, true).unwrap();
        assert_abs_diff_eq!(logged.survival(10.0), 0.2 * 10.0f64.ln(), epsilon = 1e-15);
    }
}
