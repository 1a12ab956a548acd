//! Shared helpers for the integration suites: independent numerical oracles
//! (quadrature, closed-form moments), heavy-tailed reference samplers, and
//! order-statistic utilities. Everything here is deliberately self-contained —
//! oracles must not lean on the library code they are checking.

#![allow(dead_code)]

use rand::RngCore;

/// 20-point Gauss–Legendre nodes on [-1, 1] (positive half; symmetric).
const GL20_NODES: [f64; 10] = [
    0.076_526_521_133_497_33,
    0.227_785_851_141_645_08,
    0.373_706_088_715_419_56,
    0.510_867_001_950_827_1,
    0.636_053_680_726_515_1,
    0.746_331_906_460_150_8,
    0.839_116_971_822_218_8,
    0.912_234_428_251_326,
    0.963_971_927_277_913_8,
    0.993_128_599_185_094_9,
];
const GL20_WEIGHTS: [f64; 10] = [
    0.152_753_387_130_725_85,
    0.149_172_986_472_603_75,
    0.142_096_109_318_382_05,
    0.131_688_638_449_176_63,
    0.118_194_531_961_518_42,
    0.101_930_119_817_240_44,
    0.083_276_741_576_704_75,
    0.062_672_048_334_109_06,
    0.040_601_429_800_386_94,
    0.017_614_007_139_152_118,
];

/// Fixed 20-point Gauss–Legendre rule on [a, b]; machine accuracy for smooth
/// integrands over at most one oscillation period.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for i in 0..10 {
        let dx = half * GL20_NODES[i];
        acc += GL20_WEIGHTS[i] * (f(mid - dx) + f(mid + dx));
    }
    half * acc
}

/// Oracle: `I(alpha) = ∫_0^∞ x^{-alpha} sin x dx` for `alpha` in (0, 2),
/// computed from scratch — power series near 0, per-period Gauss–Legendre
/// panels through 64π, then a six-term integration-by-parts asymptote.
/// The sum-stability constant satisfies `c_alpha = 1 / I(alpha)`.
pub fn sine_integral(alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 2.0);
    // Series on [0, s]: sum_k (-1)^k s^{2k+2-alpha} / ((2k+1)! (2k+2-alpha)).
    let s: f64 = 0.5;
    let mut series = 0.0;
    let mut factorial = 1.0; // (2k+1)!
    for k in 0..20 {
        let e = 2.0 * k as f64 + 2.0 - alpha;
        let term = s.powf(e) / (factorial * e);
        series += if k % 2 == 0 { term } else { -term };
        if term < 1e-18 {
            break;
        }
        let m = 2.0 * k as f64;
        factorial *= (m + 2.0) * (m + 3.0);
    }
    // Panels [s, π], [π, 2π], ..., [63π, 64π].
    let f = |x: f64| x.powf(-alpha) * x.sin();
    let mut body = gauss_legendre(&f, s, std::f64::consts::PI);
    for k in 1..64 {
        let a = k as f64 * std::f64::consts::PI;
        body += gauss_legendre(&f, a, a + std::f64::consts::PI);
    }
    // Tail from T: repeated integration by parts,
    //   ∫_T^∞ x^{-a} sin x dx = T^{-a} cos T - a ∫_T^∞ x^{-a-1} cos x dx,
    //   ∫_T^∞ x^{-b} cos x dx = -T^{-b} sin T + b ∫_T^∞ x^{-b-1} sin x dx.
    let t = 64.0 * std::f64::consts::PI;
    let (sin_t, cos_t) = (t.sin(), t.cos());
    let mut tail = 0.0;
    // `coeff` multiplies the current remainder integral; even levels hold a
    // sine integrand, odd levels a cosine one.
    let mut coeff = 1.0;
    let mut power = alpha;
    for level in 0..6 {
        if level % 2 == 0 {
            tail += coeff * t.powf(-power) * cos_t;
            coeff *= -power;
        } else {
            tail -= coeff * t.powf(-power) * sin_t;
            coeff *= power;
        }
        power += 1.0;
    }
    series + body + tail
}

/// Oracle: `E|X|^r` for standard symmetric stable `X` with unit scale,
/// `0 < r < alpha`. Gaussian case (`alpha = 2`, variance 2) handled exactly;
/// otherwise the classical ratio-of-gammas formula with the `r = 1` limit.
pub fn standard_abs_moment(alpha: f64, r: f64) -> f64 {
    assert!(r > 0.0 && (alpha == 2.0 || r < alpha));
    if alpha == 2.0 {
        // X ~ N(0, 2): E|X|^r = 2^r Γ((r+1)/2) / sqrt(π).
        return 2.0_f64.powf(r) * lanczos_gamma(0.5 * (r + 1.0)) / std::f64::consts::PI.sqrt();
    }
    let ratio = if (r - 1.0).abs() < 1e-9 {
        2.0 / std::f64::consts::PI
    } else {
        (1.0 - r) / (lanczos_gamma(2.0 - r) * (std::f64::consts::FRAC_PI_2 * r).cos())
    };
    ratio * lanczos_gamma(1.0 - r / alpha)
}

/// Lanczos gamma good to ~1e-13 relative for the arguments used here —
/// avoids depending on the library's own special-function choices.
pub fn lanczos_gamma(x: f64) -> f64 {
    // Reflection for x < 0.5.
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * lanczos_gamma(1.0 - x));
    }
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let x = x - 1.0;
    let mut a = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Pareto(p) draw: survival `P(W > w) = w^{-p}` for `w >= 1`.
pub fn pareto(p: f64, rng: &mut impl RngCore) -> f64 {
    let u = uniform_open(rng);
    u.powf(-1.0 / p)
}

/// Symmetrized Pareto(p): `Z = s W` with `W ~ Pareto(p)` and an independent
/// fair sign. Tails `P(Z > z) = P(Z < -z) = z^{-p}/2`.
pub fn symmetric_pareto(p: f64, rng: &mut impl RngCore) -> f64 {
    let w = pareto(p, rng);
    if uniform_open(rng) < 0.5 {
        w
    } else {
        -w
    }
}

/// Skewed unit-index variable `Z = 3 s W`, `W ~ Pareto(1)`, `P(s=+1) = 2/3`:
/// `P(Z > z) = 2/z` and `P(Z < -z) = 1/z`, i.e. tail constants c=2, d=1, p=1.
pub fn skewed_unit_pareto(rng: &mut impl RngCore) -> f64 {
    let w = pareto(1.0, rng);
    let sign = if uniform_open(rng) < 2.0 / 3.0 {
        1.0
    } else {
        -1.0
    };
    3.0 * sign * w
}

/// Uniform draw in (0, 1), never exactly 0.
pub fn uniform_open(rng: &mut impl RngCore) -> f64 {
    loop {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        if u > 0.0 {
            return u;
        }
    }
}

/// One-sample Kolmogorov–Smirnov distance against a cdf closure.
pub fn one_sample_ks<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        sup = sup.max((f - lo).abs()).max((hi - f).abs());
    }
    sup
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> f64 {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        if xs[i] <= ys[j] {
            i += 1;
        } else {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

/// Quantile of an ascending-sorted slice with linear interpolation.
pub fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty() && (0.0..=1.0).contains(&q));
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let w = pos - lo as f64;
        sorted[lo] * (1.0 - w) + sorted[hi] * w
    }
}

/// Median of an arbitrary slice.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    sorted_quantile(&v, 0.5)
}
