//! Monte Carlo oracles: a compound-Poisson sampler of the subordinator, an
//! exact ½-stable sampler, Gaussian-kernel density estimation, KS distances,
//! and a path-supremum concentration check.  These are deliberately
//! independent of the analytic engine so the two can validate each other.

use crate::bounds::compensator;
use crate::error::{EngineError, Result};
use crate::model::{BernsteinSpec, LevyMeasureSpec};
use crate::scale::concentration_h;
use crate::special::normal_pdf;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

/// Samples are generated in fixed-size chunks, each on its own counter-based
/// RNG stream derived from (seed, chunk index).  The output is therefore
/// independent of how chunks are distributed over workers.
const CHUNK: usize = 512;

/// A sorted empirical sample of T_t.
#[derive(Debug, Clone)]
pub struct EmpiricalDist {
    samples: Vec<f64>,
    t: f64,
    seed: u64,
    cutoff: f64,
    small_jump_variance: f64,
    warning: Option<String>,
}

impl EmpiricalDist {
    fn new(
        mut samples: Vec<f64>,
        t: f64,
        seed: u64,
        cutoff: f64,
        small_jump_variance: f64,
        warning: Option<String>,
    ) -> Self {
        samples.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
        Self { samples, t, seed, cutoff, small_jump_variance, warning }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// The omitted small-jump variance t·∫_{(0,ε)} s² ν(ds), for error
    /// budgets of cutoff-sensitive statistics.
    pub fn small_jump_variance(&self) -> f64 {
        self.small_jump_variance
    }

    /// Set when the cutoff removed every jump (pure-drift sample).
    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Sample standard deviation.
    pub fn std_dev(&self) -> f64 {
        let m = self.mean();
        let n = self.samples.len() as f64;
        (self.samples.iter().map(|s| (s - m) * (s - m)).sum::<f64>() / (n - 1.0)).sqrt()
    }

    /// Quantile by linear interpolation of the order statistics.
    pub fn quantile(&self, q: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&q));
        let n = self.samples.len();
        let pos = q * (n - 1) as f64;
        let i = pos.floor() as usize;
        if i + 1 >= n {
            return self.samples[n - 1];
        }
        let w = pos - i as f64;
        self.samples[i] * (1.0 - w) + self.samples[i + 1] * w
    }

    /// Empirical CDF at x.
    pub fn cdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.samples.len() as f64
    }

    /// Mean of e^{−λ·sample} together with its standard error.
    pub fn laplace_mean(&self, lambda: f64) -> (f64, f64) {
        let n = self.samples.len() as f64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for &s in &self.samples {
            let v = (-lambda * s).exp();
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / n;
        let var = (sum_sq / n - mean * mean).max(0.0);
        (mean, (var / n).sqrt())
    }

    /// Kolmogorov–Smirnov distance against an analytic CDF.
    pub fn ks_vs_cdf<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let n = self.samples.len() as f64;
        let mut d = 0.0f64;
        for (i, &s) in self.samples.iter().enumerate() {
            let f = cdf(s);
            d = d.max((f - i as f64 / n).abs());
            d = d.max(((i + 1) as f64 / n - f).abs());
        }
        d
    }

    /// Two-sample Kolmogorov–Smirnov distance.
    pub fn ks_two_sample(&self, other: &EmpiricalDist) -> f64 {
        let (a, b) = (&self.samples, &other.samples);
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let mut d = 0.0f64;
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 / na - j as f64 / nb).abs());
        }
        d
    }
}

/// Inverse-CDF sampler of the jump sizes ν|_(ε,∞)/ν((ε,∞)): closed-form for
/// the pure power tail, tabulated log-log interpolation otherwise.
enum JumpInverse {
    /// s = (m·α/c)^{−1/α} solves ν((s,∞)) = m.
    Power { c: f64, alpha: f64 },
    /// (ln s, ln tail) knots with tail strictly decreasing in s.
    Table { ln_s: Vec<f64>, ln_tail: Vec<f64> },
}

impl JumpInverse {
    fn build(levy: &LevyMeasureSpec, eps: f64, total: f64) -> Result<Self> {
        if let LevyMeasureSpec::Power { c, alpha } = levy {
            return Ok(JumpInverse::Power { c: *c, alpha: *alpha });
        }
        // Expand the abscissa range until the tail is negligible relative to
        // the total mass, then tabulate ~48 points per decade.
        let mut s_hi = eps * 2.0;
        for _ in 0..200 {
            if levy.tail_mass(s_hi)? < total * 1e-12 {
                break;
            }
            s_hi *= 2.0;
        }
        let decades = (s_hi / eps).log10().max(0.1);
        let n = ((decades * 48.0) as usize).clamp(16, 4000);
        let mut ln_s = Vec::with_capacity(n);
        let mut ln_tail = Vec::with_capacity(n);
        let mut prev = f64::INFINITY;
        for i in 0..n {
            let s = eps * (s_hi / eps).powf(i as f64 / (n - 1) as f64);
            let tail = levy.tail_mass(s)?.min(prev);
            if !(tail > 0.0) {
                break;
            }
            ln_s.push(s.ln());
            ln_tail.push(tail.ln());
            prev = tail;
        }
        if ln_s.len() < 2 {
            return Err(EngineError::numerical(
                "could not tabulate the jump tail for inverse-CDF sampling",
            ));
        }
        Ok(JumpInverse::Table { ln_s, ln_tail })
    }

    /// Jump size with tail mass m ∈ (0, total].
    fn invert(&self, m: f64) -> f64 {
        match self {
            JumpInverse::Power { c, alpha } => (m * alpha / c).powf(-1.0 / alpha),
            JumpInverse::Table { ln_s, ln_tail } => {
                let lm = m.ln();
                // ln_tail is decreasing; find the bracketing pair.
                if lm >= ln_tail[0] {
                    return ln_s[0].exp();
                }
                let last = ln_tail.len() - 1;
                if lm <= ln_tail[last] {
                    return ln_s[last].exp();
                }
                let idx = ln_tail.partition_point(|&v| v > lm);
                let w = (lm - ln_tail[idx - 1]) / (ln_tail[idx] - ln_tail[idx - 1]);
                (ln_s[idx - 1] * (1.0 - w) + ln_s[idx] * w).exp()
            }
        }
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk.wrapping_add(1));
    rng
}

/// Compound-Poisson sample of T_t: each draw is t·b_ε′ plus
/// Poisson(t·ν((ε,∞))) jumps from the tail, with b_ε′ = b + ∫_{(0,ε)} s ν(ds)
/// compensating the removed small jumps by their mean.
pub fn sample(model: &BernsteinSpec, t: f64, n: usize, eps: f64, seed: u64) -> Result<EmpiricalDist> {
    if n == 0 {
        return Err(EngineError::model_invalid("sample size must be positive"));
    }
    if !(t > 0.0) || !(eps > 0.0) {
        return Err(EngineError::model_invalid(format!(
            "t = {t} and ε = {eps} must be positive"
        )));
    }
    let levy = model.levy();
    let drift_eps = if levy.is_zero() { model.drift() } else { compensator(model, eps)? };
    let base = t * drift_eps;
    let small_var = if levy.is_zero() { 0.0 } else { t * levy.partial_moment(eps, 2)? };
    let tail_total = levy.tail_mass(eps)?;

    // A power-law tail never vanishes exactly; below one expected jump per
    // 1e12 samples the draw is pure drift for all practical purposes.
    if t * tail_total < 1e-12 {
        let warning = if levy.is_zero() {
            None
        } else {
            Some(String::from(
                "cutoff removed every jump; the sample is pure drift",
            ))
        };
        return Ok(EmpiricalDist::new(
            alloc::vec![base; n],
            t,
            seed,
            eps,
            small_var,
            warning,
        ));
    }

    let inverse = JumpInverse::build(levy, eps, tail_total)?;
    let poisson = Poisson::new(t * tail_total)
        .map_err(|e| EngineError::numerical(format!("Poisson({}) setup: {e}", t * tail_total)))?;

    let mut samples = Vec::with_capacity(n);
    let chunks = (n + CHUNK - 1) / CHUNK;
    for c in 0..chunks {
        let count = CHUNK.min(n - c * CHUNK);
        let mut rng = chunk_rng(seed, c as u64);
        for _ in 0..count {
            let jumps = poisson.sample(&mut rng) as u64;
            let mut v = base;
            for _ in 0..jumps {
                let u: f64 = rng.gen();
                // u ∈ [0,1): map to tail mass in (0, total].
                v += inverse.invert((1.0 - u) * tail_total);
            }
            samples.push(v);
        }
    }
    Ok(EmpiricalDist::new(samples, t, seed, eps, small_var, None))
}

/// Exact ½-stable sampler through T = t²/(2N²), N standard normal: the
/// Laplace transform E e^{−λT} = e^{−t√λ} matches φ(λ) = √λ.
pub fn half_stable_exact_sampler(t: f64, n: usize, seed: u64) -> Result<EmpiricalDist> {
    if n == 0 {
        return Err(EngineError::model_invalid("sample size must be positive"));
    }
    if !(t > 0.0) {
        return Err(EngineError::model_invalid(format!("t = {t} must be positive")));
    }
    let mut samples = Vec::with_capacity(n);
    let chunks = (n + CHUNK - 1) / CHUNK;
    for c in 0..chunks {
        let count = CHUNK.min(n - c * CHUNK);
        let mut rng = chunk_rng(seed, c as u64);
        for _ in 0..count {
            let z: f64 = StandardNormal.sample(&mut rng);
            samples.push(t * t / (2.0 * z * z));
        }
    }
    Ok(EmpiricalDist::new(samples, t, seed, 0.0, 0.0, None))
}

/// Closed-form CDF of the ½-stable subordinator at time t:
/// P(T ≤ x) = P(|N| ≥ t/√(2x)) = erfc(t/(2√x)).
pub fn half_stable_cdf(t: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        crate::special::erfc(t / (2.0 * x.sqrt()))
    }
}

/// One (t, λ) cell of the path-supremum concentration report.
#[derive(Debug, Clone, Copy)]
pub struct PruittRow {
    pub t: f64,
    pub lambda: f64,
    /// MC estimate of P(sup_{s≤t} |T_s − s·b_λ| ≥ λ).
    pub probability: f64,
    /// The comparison bound t·h(λ).
    pub bound: f64,
    /// probability / bound.
    pub ratio: f64,
}

/// Path-supremum concentration report.
#[derive(Debug, Clone)]
pub struct PruittReport {
    pub rows: Vec<PruittRow>,
    pub max_ratio: f64,
}

/// Estimates P(sup_{s≤t} |T_s − s·b_λ| ≥ λ) by simulating jump paths and
/// compares against t·h(λ); the empirical constant is reported, not asserted.
pub fn pruitt_check(
    model: &BernsteinSpec,
    t_grid: &[f64],
    lambda_grid: &[f64],
    n: usize,
    seed: u64,
) -> Result<PruittReport> {
    if n == 0 {
        return Err(EngineError::model_invalid("path count must be positive"));
    }
    let levy = model.levy();
    let mut rows = Vec::new();
    let mut max_ratio = 0.0f64;
    let mut cell = 0u64;
    for &t in t_grid {
        for &lambda in lambda_grid {
            let bound = t * concentration_h(model, lambda)?;
            let probability = if levy.is_zero() {
                // T_s − s·b_λ = s(b − b_λ) = 0 exactly.
                0.0
            } else {
                let eps = lambda * 1e-3;
                let tail_total = levy.tail_mass(eps)?;
                let slope = compensator(model, eps)? - compensator(model, lambda)?;
                let inverse = JumpInverse::build(levy, eps, tail_total)?;
                let poisson = Poisson::new(t * tail_total).map_err(|e| {
                    EngineError::numerical(format!("Poisson setup: {e}"))
                })?;
                let mut hits = 0usize;
                let chunks = (n + CHUNK - 1) / CHUNK;
                for c in 0..chunks {
                    let count = CHUNK.min(n - c * CHUNK);
                    let mut rng = chunk_rng(seed.wrapping_add(cell), c as u64);
                    for _ in 0..count {
                        if pruitt_path_exceeds(
                            &mut rng, &poisson, &inverse, tail_total, slope, t, lambda,
                        ) {
                            hits += 1;
                        }
                    }
                }
                hits as f64 / n as f64
            };
            let ratio = if bound > 0.0 { probability / bound } else { 0.0 };
            max_ratio = max_ratio.max(ratio);
            rows.push(PruittRow { t, lambda, probability, bound, ratio });
            cell += 1;
        }
    }
    Ok(PruittReport { rows, max_ratio })
}

/// Simulates one compensated path M_s = s·slope + Σ_{uᵢ≤s} Jᵢ on [0, t] and
/// reports whether sup_s |M_s| ≥ λ.  The supremum over a piecewise-linear
/// path with negative slope and positive jumps is attained just before or
/// just after a jump, or at the endpoint.
fn pruitt_path_exceeds(
    rng: &mut ChaCha8Rng,
    poisson: &Poisson<f64>,
    inverse: &JumpInverse,
    tail_total: f64,
    slope: f64,
    t: f64,
    lambda: f64,
) -> bool {
    let jumps = poisson.sample(rng) as usize;
    let mut events: Vec<(f64, f64)> = Vec::with_capacity(jumps);
    for _ in 0..jumps {
        let time: f64 = rng.gen::<f64>() * t;
        let u: f64 = rng.gen();
        events.push((time, inverse.invert((1.0 - u) * tail_total)));
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite times"));
    let mut acc = 0.0;
    for &(time, size) in &events {
        let before = slope * time + acc;
        if before.abs() >= lambda {
            return true;
        }
        acc += size;
        if (before + size).abs() >= lambda {
            return true;
        }
    }
    (slope * t + acc).abs() >= lambda
}

/// Gaussian-kernel density estimate on `x_grid` with Silverman bandwidth
/// 1.06·σ̂·n^{−1/5}, applied in log scale of the edge-shifted samples
/// s − t·b.  Stable laws have infinite variance, so a fixed linear-scale
/// bandwidth is either too wide in the bulk or useless in the tail; the log
/// transform keeps the effective bandwidth proportional to x and makes the
/// support constraint x > t·b exact (no mass leaks below the edge, which is
/// what boundary reflection is for).  σ̂ is the robust scale
/// min(std, IQR/1.34) of the log samples.
pub fn empirical_density(dist: &EmpiricalDist, model: &BernsteinSpec, x_grid: &[f64]) -> Result<Vec<f64>> {
    let edge = dist.t() * model.drift();
    let mut logs: Vec<f64> = dist
        .samples()
        .iter()
        .filter(|&&s| s > edge)
        .map(|&s| (s - edge).ln())
        .collect();
    if logs.len() < 2 {
        return Err(EngineError::numerical(
            "kernel estimate needs at least two samples above the support edge",
        ));
    }
    logs.sort_by(|a, b| a.partial_cmp(b).expect("finite logs"));
    let m = logs.len() as f64;
    let mean = logs.iter().sum::<f64>() / m;
    let std = (logs.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / (m - 1.0)).sqrt();
    let q = |p: f64| -> f64 {
        let pos = p * (logs.len() - 1) as f64;
        let i = pos.floor() as usize;
        let w = pos - i as f64;
        if i + 1 >= logs.len() {
            logs[logs.len() - 1]
        } else {
            logs[i] * (1.0 - w) + logs[i + 1] * w
        }
    };
    let sigma = std.min((q(0.75) - q(0.25)) / 1.34);
    let bw = 1.06 * sigma * m.powf(-0.2);
    if !(bw > 0.0) {
        return Err(EngineError::numerical(format!(
            "kernel bandwidth {bw} is not positive (degenerate sample)"
        )));
    }
    let mut out = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        if x <= edge {
            out.push(0.0);
            continue;
        }
        let y = (x - edge).ln();
        let mut acc = 0.0;
        for &s in &logs {
            acc += normal_pdf((y - s) / bw);
        }
        // f_Y(ln(x−e)) / (x−e): change of variables back to x.
        out.push(acc / (m * bw * (x - edge)));
    }
    Ok(out)
}

/// Cutoff-consistency report: the ε and ε/2 samples built from one coupled
/// jump realization, and the shift of the empirical mean of min(T, 1).
#[derive(Debug, Clone, Copy)]
pub struct CutoffReport {
    /// mean_ε min(T,1) − mean_{ε/2} min(T,1) under coupling.
    pub mean_shift: f64,
    /// The small-jump variance bound t·∫_{(0,ε)} s² ν(ds).
    pub variance_bound: f64,
    /// Standard error of the coupled per-sample differences.
    pub shift_std_error: f64,
}

/// Couples the ε and ε/2 samplers on one realization: the ε-sample drops the
/// jumps in (ε/2, ε] and compensates them by their mean, so the per-sample
/// difference has mean zero and variance ≤ t·∫_{(0,ε)} s² ν(ds).
pub fn cutoff_consistency_check(
    model: &BernsteinSpec,
    t: f64,
    n: usize,
    eps: f64,
    seed: u64,
) -> Result<CutoffReport> {
    let levy = model.levy();
    if levy.is_zero() {
        return Ok(CutoffReport { mean_shift: 0.0, variance_bound: 0.0, shift_std_error: 0.0 });
    }
    let half = eps / 2.0;
    let tail_total = levy.tail_mass(half)?;
    let inverse = JumpInverse::build(levy, half, tail_total)?;
    let poisson = Poisson::new(t * tail_total)
        .map_err(|e| EngineError::numerical(format!("Poisson setup: {e}")))?;
    let base_half = t * compensator(model, half)?;
    // Dropping the (ε/2, ε] jumps adds their mean back as drift.
    let bridge = t * (levy.partial_moment(eps, 1)? - levy.partial_moment(half, 1)?);

    let mut diff_sum = 0.0;
    let mut diff_sq = 0.0;
    let chunks = (n + CHUNK - 1) / CHUNK;
    for c in 0..chunks {
        let count = CHUNK.min(n - c * CHUNK);
        let mut rng = chunk_rng(seed, c as u64);
        for _ in 0..count {
            let jumps = poisson.sample(&mut rng) as u64;
            let mut fine = base_half;
            let mut coarse = base_half + bridge;
            for _ in 0..jumps {
                let u: f64 = rng.gen();
                let j = inverse.invert((1.0 - u) * tail_total);
                fine += j;
                if j > eps {
                    coarse += j;
                }
            }
            let d = coarse.min(1.0) - fine.min(1.0);
            diff_sum += d;
            diff_sq += d * d;
        }
    }
    let nf = n as f64;
    let mean_shift = diff_sum / nf;
    let var = (diff_sq / nf - mean_shift * mean_shift).max(0.0);
    Ok(CutoffReport {
        mean_shift,
        variance_bound: t * levy.partial_moment(eps, 2)?,
        shift_std_error: (var / nf).sqrt(),
    })
}
