//! Quadrature toolkit: tanh-sinh for finite intervals with endpoint
//! singularities, adaptive Gauss–Kronrod 7/15 for smooth pieces, and an
//! Euler accelerator for slowly decaying oscillatory tails.
//!
//! All integrands are real-valued `f64 -> f64` closures; complex integrals
//! elsewhere in the crate are split into real and imaginary parts before
//! they reach this module.

use crate::error::{EngineError, Result};
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Tanh-sinh (double-exponential) quadrature of `f` over the open interval
/// `(a, b)`.
///
/// Handles integrable endpoint singularities such as `s^{-α}` with α < 1,
/// which occur in every small-jump integral of a Lévy density.  Points whose
/// distance to an endpoint underflows, or where `f` is non-finite while the
/// weight has already decayed, are skipped.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    debug_assert!(b > a);
    let d = 0.5 * (b - a);
    const T_MAX: f64 = 6.0;
    const MAX_LEVEL: u32 = 12;

    // Evaluate the transformed integrand at trapezoid abscissa t.
    let eval = |t: f64| -> f64 {
        let u = core::f64::consts::FRAC_PI_2 * t.sinh();
        // Distance to the nearer endpoint, computed without cancellation:
        // 1 − tanh(u) = 2 / (e^{2u} + 1).
        let dist = 2.0 * d / ((2.0 * u.abs()).exp() + 1.0);
        if dist == 0.0 {
            return 0.0;
        }
        let x = if t >= 0.0 { b - dist } else { a + dist };
        let weight = d * core::f64::consts::FRAC_PI_2 * t.cosh()
            / (u.cosh() * u.cosh());
        if weight == 0.0 {
            return 0.0;
        }
        let v = f(x);
        if v.is_finite() { weight * v } else { 0.0 }
    };

    // Level 0: h = 1.
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= T_MAX {
        let t = (k as f64) * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut estimate = h * sum;

    let mut last_err = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        // Add the new midpoints (odd multiples of the new h).
        let mut k = 1;
        let mut new_sum = 0.0;
        while (k as f64) * h <= T_MAX {
            let t = (k as f64) * h;
            new_sum += eval(t) + eval(-t);
            k += 2;
        }
        sum += new_sum;
        let next = h * sum;
        last_err = (next - estimate).abs();
        estimate = next;
        if last_err <= rel_tol * estimate.abs().max(1e-300) && level >= 3 {
            return Ok(estimate);
        }
    }
    // Tanh-sinh converges double-exponentially; if the last halving still
    // moved the estimate materially the integrand is not integrable or too
    // rough for this rule.
    if !estimate.is_finite() || last_err > 1e-6 * estimate.abs().max(1e-300) {
        return Err(EngineError::numerical("tanh-sinh quadrature did not converge"));
    }
    Ok(estimate)
}

/// Gauss–Kronrod 7/15 nodes on [0, 1] (positive half; the rule is symmetric).
const GK_NODES: [f64; 8] = [
    0.000_000_000_000_000_0,
    0.207_784_955_007_898_5,
    0.405_845_151_377_397_2,
    0.586_087_235_467_691_1,
    0.741_531_185_599_394_4,
    0.864_864_423_359_769_1,
    0.949_107_912_342_758_5,
    0.991_455_371_120_812_6,
];
/// Kronrod weights matching `GK_NODES`.
const GK_WEIGHTS_K: [f64; 8] = [
    0.209_482_141_084_727_8,
    0.204_432_940_075_298_9,
    0.190_350_578_064_785_4,
    0.169_004_726_639_267_9,
    0.140_653_259_715_525_2,
    0.104_790_010_322_250_2,
    0.063_092_092_629_978_55,
    0.022_935_322_010_529_22,
];
/// Embedded 7-point Gauss weights (nonzero on even-indexed Kronrod nodes).
const GK_WEIGHTS_G: [f64; 4] = [
    0.417_959_183_673_469_4,
    0.381_830_050_505_118_9,
    0.279_705_391_489_276_7,
    0.129_484_966_168_869_7,
];

/// One Gauss–Kronrod 7/15 panel over [a, b]: returns (integral, error estimate).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let f0 = f(c);
    let mut kron = GK_WEIGHTS_K[0] * f0;
    let mut gauss = GK_WEIGHTS_G[0] * f0;
    for i in 1..8 {
        let dx = d * GK_NODES[i];
        let fs = f(c - dx) + f(c + dx);
        kron += GK_WEIGHTS_K[i] * fs;
        if i % 2 == 0 {
            gauss += GK_WEIGHTS_G[i / 2] * fs;
        }
    }
    let integral = kron * d;
    let err = ((kron - gauss) * d).abs();
    // QUADPACK-style sharpened error estimate.
    let err = if err > 0.0 { (200.0 * err).powf(1.5).min(err) } else { err };
    (integral, err.max(integral.abs() * 1e-16))
}

/// Adaptive Gauss–Kronrod integration of `f` over [a, b] to absolute
/// tolerance `tol_abs` (with a relative floor against the running value).
pub fn adaptive_gk<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol_abs: f64,
    rel_tol: f64,
) -> Result<f64> {
    const MAX_SEGMENTS: usize = 4000;
    let (v0, e0) = gk15(f, a, b);
    // Worklist of (error, a, b, value); subdivide worst-first.
    let mut segments: Vec<(f64, f64, f64, f64)> = Vec::new();
    segments.push((e0, a, b, v0));
    loop {
        let total: f64 = segments.iter().map(|s| s.3).sum();
        let err: f64 = segments.iter().map(|s| s.0).sum();
        if err <= tol_abs.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if segments.len() >= MAX_SEGMENTS {
            return Err(EngineError::numerical(
                "adaptive quadrature failed to converge within segment budget",
            ));
        }
        // Pop the worst segment.
        let (imax, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .0.partial_cmp(&y.1 .0).unwrap_or(core::cmp::Ordering::Equal))
            .expect("non-empty");
        let (_, sa, sb, _) = segments.swap_remove(imax);
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            return Err(EngineError::numerical(
                "adaptive quadrature hit interval resolution limit",
            ));
        }
        let (vl, el) = gk15(f, sa, mid);
        let (vr, er) = gk15(f, mid, sb);
        segments.push((el, sa, mid, vl));
        segments.push((er, mid, sb, vr));
    }
}

/// Euler transformation of a (nearly) alternating series.
///
/// `terms` are the signed terms; the return value is the accelerated sum.
/// For slowly decaying alternating tails (the half-period slices of an
/// oscillatory Fourier-type integral) convergence is geometric in the number
/// of terms even when the raw series converges only conditionally.
pub fn euler_accelerate(terms: &[f64]) -> f64 {
    if terms.is_empty() {
        return 0.0;
    }
    // Partial sums.
    let mut row: Vec<f64> = Vec::with_capacity(terms.len());
    let mut acc = 0.0;
    for &t in terms {
        acc += t;
        row.push(acc);
    }
    // Repeated averaging of adjacent partial sums; the surviving element is
    // the binomially weighted Euler estimate.  Track stabilization so a
    // short, already-converged series is returned unharmed.
    let mut best = *row.last().expect("non-empty");
    while row.len() > 1 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
        let cur = *row.last().expect("non-empty");
        if (cur - best).abs() <= 1e-16 * best.abs() {
            return cur;
        }
        best = cur;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use num_traits::Float;

    #[test]
    fn tanh_sinh_handles_smooth_integrand() {
        // ∫₀^1 e^x dx = e − 1.
        let v = tanh_sinh(|x| x.exp(), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - (core::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        // ∫₀^1 x^{-0.9} dx = 10.
        let v = tanh_sinh(|x| x.powf(-0.9), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - 10.0).abs() < 1e-9, "got {v}");
        // ∫₀^1 ln(x) dx = −1.
        let v = tanh_sinh(|x| x.ln(), 0.0, 1.0, 1e-13).unwrap();
        assert!((v + 1.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_gk_matches_known_integral() {
        // ∫₀^10 e^{-x} dx = 1 − e^{-10}.
        let v = adaptive_gk(&|x: f64| (-x).exp(), 0.0, 10.0, 1e-12, 1e-12).unwrap();
        assert!((v - (1.0 - (-10.0f64).exp())).abs() < 1e-11);
    }

    #[test]
    fn euler_accelerates_log2_series() {
        // Σ (−1)^{k+1}/k = ln 2, a classic slowly converging alternating
        // series: 30 raw terms give only ~2 digits, accelerated ~12.
        let terms: alloc::vec::Vec<f64> =
            (1..=30).map(|k| if k % 2 == 1 { 1.0 / k as f64 } else { -1.0 / k as f64 }).collect();
        let v = euler_accelerate(&terms);
        assert!((v - core::f64::consts::LN_2).abs() < 1e-9, "got {v}");
    }
}
