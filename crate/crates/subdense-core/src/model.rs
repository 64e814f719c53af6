//! Subordinator models: drift + Lévy measure, with evaluation of the
//! Laplace exponent φ and its first three derivatives at real and complex
//! arguments.
//!
//! A model carries an optional closed form (builtin families) and always —
//! when the Lévy measure has an explicit density — a quadrature path that
//! integrates against ν directly.  Derivatives are obtained by
//! differentiating under the integral sign, never by finite differences of
//! φ, which would lose most digits in φ″.

use crate::error::{EngineError, Result};
use crate::quad::{euler_accelerate, gk15, tanh_sinh};
use crate::special;
use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Relative tolerance for φ quadrature (spec of the evaluation contract).
const PHI_REL_TOL: f64 = 1e-11;

/// Description of the Lévy measure ν on (0,∞).
#[derive(Debug, Clone, PartialEq)]
pub enum LevyMeasureSpec {
    /// No jumps: pure drift subordinator.
    None,
    /// Power density ν(s) = c·s^{−1−α}, 0 < α < 1 (stable-type jumps).
    Power { c: f64, alpha: f64 },
    /// Logarithmically corrected power: ν(s) = c·s^{−1−α}·log^σ(2+1/s).
    PowerLog { c: f64, alpha: f64, sigma: f64 },
    /// Tempered power: ν(s) = c·s^{−1−α}·e^{−θs}; α = 0 gives Gamma-type
    /// jumps (ν(s) = c·s^{−1}e^{−θs}).
    Tempered { c: f64, alpha: f64, theta: f64 },
    /// Monotone density given by (abscissa, value) pairs, log-log linearly
    /// interpolated, with power-law extrapolation exponents `(p0, p_inf)` at
    /// 0 and ∞ and a declared almost-monotonicity constant.
    Tabulated {
        points: Vec<(f64, f64)>,
        tail_exponents: (f64, f64),
        mono_constant: f64,
    },
    /// The measure exists (the model was defined through a closed-form φ)
    /// but its density is not numerically available.  Operations that
    /// integrate against ν reject such models with a capability error.
    Implicit,
}

impl LevyMeasureSpec {
    /// Point evaluation of the density ν(s), s > 0.
    pub fn density(&self, s: f64) -> Result<f64> {
        debug_assert!(s > 0.0);
        match self {
            LevyMeasureSpec::None => Ok(0.0),
            LevyMeasureSpec::Power { c, alpha } => Ok(c * s.powf(-1.0 - alpha)),
            LevyMeasureSpec::PowerLog { c, alpha, sigma } => {
                Ok(c * s.powf(-1.0 - alpha) * (2.0 + 1.0 / s).ln().powf(*sigma))
            }
            LevyMeasureSpec::Tempered { c, alpha, theta } => {
                Ok(c * s.powf(-1.0 - alpha) * (-theta * s).exp())
            }
            LevyMeasureSpec::Tabulated { points, tail_exponents, .. } => {
                Ok(tabulated_density(points, *tail_exponents, s))
            }
            LevyMeasureSpec::Implicit => Err(EngineError::capability(
                "Levy density not available for this model (defined via closed-form phi)",
            )),
        }
    }

    /// Whether a pointwise density is available.
    pub fn has_density(&self) -> bool {
        !matches!(self, LevyMeasureSpec::Implicit)
    }

    /// Whether the measure is identically zero.
    pub fn is_zero(&self) -> bool {
        matches!(self, LevyMeasureSpec::None)
    }

    /// Interior knots at which the density is only piecewise smooth.
    fn knots(&self) -> Vec<f64> {
        match self {
            LevyMeasureSpec::Tabulated { points, .. } => {
                points.iter().map(|p| p.0).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Tail mass ν((r,∞)).
    pub fn tail_mass(&self, r: f64) -> Result<f64> {
        debug_assert!(r > 0.0);
        match self {
            LevyMeasureSpec::None => Ok(0.0),
            LevyMeasureSpec::Power { c, alpha } => Ok(c / alpha * r.powf(-alpha)),
            _ => {
                // ∫_r^∞ ν(s) ds by exponential blocks s = r·e^y.
                integrate_tail(
                    |s| self.density(s).unwrap_or(f64::NAN),
                    r,
                    &self.knots(),
                    PHI_REL_TOL,
                )
            }
        }
    }

    /// Truncated moment ∫_{(0,r)} s^k ν(ds) for k ≥ 1.
    pub fn partial_moment(&self, r: f64, k: u32) -> Result<f64> {
        debug_assert!(r > 0.0 && k >= 1);
        match self {
            LevyMeasureSpec::None => Ok(0.0),
            LevyMeasureSpec::Implicit => Err(EngineError::capability(
                "Levy density not available for this model",
            )),
            _ => integrate_with_knots(
                |s| {
                    let v = self.density(s).unwrap_or(f64::NAN);
                    s.powi(k as i32) * v
                },
                0.0,
                r,
                &self.knots(),
                PHI_REL_TOL,
            ),
        }
    }
}

/// Log-log linear interpolation of a tabulated density with power-law
/// extrapolation beyond the table.
fn tabulated_density(points: &[(f64, f64)], (p0, p_inf): (f64, f64), s: f64) -> f64 {
    let first = points[0];
    let last = points[points.len() - 1];
    if s <= first.0 {
        return first.1 * (s / first.0).powf(-p0);
    }
    if s >= last.0 {
        return last.1 * (s / last.0).powf(-p_inf);
    }
    // Binary search for the bracketing pair.
    let idx = points.partition_point(|p| p.0 < s);
    let (x0, y0) = points[idx - 1];
    let (x1, y1) = points[idx];
    let t = (s / x0).ln() / (x1 / x0).ln();
    y0 * (y1 / y0).powf(t)
}

/// Integrate `f` over (a, b) with interior knots respected, tanh-sinh on
/// each piece (handles the s→0 singularity of Lévy integrands).
fn integrate_with_knots<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    knots: &[f64],
    rel_tol: f64,
) -> Result<f64> {
    let mut cuts: Vec<f64> = knots.iter().copied().filter(|&k| k > a && k < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    let mut total = 0.0;
    let mut lo = a;
    for cut in cuts.into_iter().chain(core::iter::once(b)) {
        if cut > lo {
            total += tanh_sinh(&f, lo, cut, rel_tol)?;
            lo = cut;
        }
    }
    Ok(total)
}

/// Integrate `f` over (r, ∞) assuming eventual monotone decay, by
/// exponential blocks s ∈ r·[e^{3j}, e^{3(j+1)}].
fn integrate_tail<F: Fn(f64) -> f64>(
    f: F,
    r: f64,
    knots: &[f64],
    rel_tol: f64,
) -> Result<f64> {
    let mut total = 0.0;
    let mut lo = r;
    for j in 0..80 {
        let hi = r * (3.0 * (j as f64 + 1.0)).exp();
        let block = integrate_with_knots(&f, lo, hi, knots, rel_tol)?;
        total += block;
        if j >= 1 && block.abs() <= rel_tol * total.abs().max(1e-300) {
            return Ok(total);
        }
        lo = hi;
    }
    Err(EngineError::model_invalid(
        "tail integral against the Levy measure did not converge",
    ))
}

/// Which integral kernel turns ν into the evaluated function: the Laplace
/// exponent itself, or the complete Bernstein surrogate of Lemma-type
/// approximation f(λ) = bλ + ∫ λu/(λu+1) ν(du).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiKernel {
    LaplaceExponent,
    CompleteBernstein,
}

/// Closed-form families for φ and its derivatives.
#[derive(Debug, Clone, PartialEq)]
enum ClosedForm {
    /// No closed form: evaluate by quadrature against ν.
    None,
    /// φ(λ) = λ^α (normalized stable).
    Stable { alpha: f64 },
    /// φ(λ) = c·Γ(1−α)/α·[(λ+θ)^α − θ^α] for α>0, c·ln(1+λ/θ) for α=0.
    Tempered { c: f64, alpha: f64, theta: f64 },
    /// φ(λ) = λ^α·log^σ(2+λ) (the log-stable exponent of the heat-kernel
    /// examples; Lévy density not elementary).
    LogStable { alpha: f64, sigma: f64 },
}

/// A subordinator model: drift, Lévy measure, optional closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinSpec {
    drift_b: f64,
    levy: LevyMeasureSpec,
    closed: ClosedForm,
    kernel: PhiKernel,
    family_tag: String,
    /// Scaling validity threshold x₀ (0 for the builtin scale-invariant
    /// families); scaling conditions are asserted only for arguments > x₀.
    x0: f64,
    /// Whether the Lévy measure is declared to have an (almost) monotone
    /// density — a hypothesis of several estimates.
    monotone_density: bool,
}

impl BernsteinSpec {
    // ---- constructors -------------------------------------------------

    /// Normalized stable subordinator: φ(λ) = λ^α, ν(s) = α/Γ(1−α)·s^{−1−α}.
    pub fn stable(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(EngineError::model_invalid(format!(
                "stable index must lie in (0,1), got {alpha}"
            )));
        }
        let c = alpha / special::gamma(1.0 - alpha);
        Ok(Self {
            drift_b: 0.0,
            levy: LevyMeasureSpec::Power { c, alpha },
            closed: ClosedForm::Stable { alpha },
            kernel: PhiKernel::LaplaceExponent,
            family_tag: format!("stable({alpha})"),
            x0: 0.0,
            monotone_density: true,
        })
    }

    /// Power-density model ν(s) = c·s^{−1−α} evaluated by quadrature (no
    /// closed form attached; used to validate the quadrature path).
    pub fn power(c: f64, alpha: f64, drift_b: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || c <= 0.0 {
            return Err(EngineError::model_invalid(
                "power family requires c > 0 and alpha in (0,1)",
            ));
        }
        Ok(Self {
            drift_b: check_drift(drift_b)?,
            levy: LevyMeasureSpec::Power { c, alpha },
            closed: ClosedForm::None,
            kernel: PhiKernel::LaplaceExponent,
            family_tag: format!("power({c},{alpha})"),
            x0: 0.0,
            monotone_density: true,
        })
    }

    /// Log-corrected power density ν(s) = c·s^{−1−α}·log^σ(2+1/s).
    pub fn power_log(c: f64, alpha: f64, sigma: f64, drift_b: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || c <= 0.0 {
            return Err(EngineError::model_invalid(
                "power_log family requires c > 0 and alpha in (0,1)",
            ));
        }
        Ok(Self {
            drift_b: check_drift(drift_b)?,
            levy: LevyMeasureSpec::PowerLog { c, alpha, sigma },
            closed: ClosedForm::None,
            kernel: PhiKernel::LaplaceExponent,
            family_tag: format!("power_log({c},{alpha},{sigma})"),
            x0: 0.0,
            monotone_density: true,
        })
    }

    /// Tempered power density ν(s) = c·s^{−1−α}·e^{−θs}; α = 0 is the
    /// Gamma-type model with φ(λ) = c·ln(1+λ/θ).
    pub fn tempered(c: f64, alpha: f64, theta: f64, drift_b: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha < 1.0) || c <= 0.0 || theta <= 0.0 {
            return Err(EngineError::model_invalid(
                "tempered family requires c > 0, theta > 0 and alpha in [0,1)",
            ));
        }
        Ok(Self {
            drift_b: check_drift(drift_b)?,
            levy: LevyMeasureSpec::Tempered { c, alpha, theta },
            closed: ClosedForm::Tempered { c, alpha, theta },
            kernel: PhiKernel::LaplaceExponent,
            family_tag: format!("tempered({c},{alpha},{theta})"),
            x0: 0.0,
            monotone_density: true,
        })
    }

    /// Gamma-type subordinator: φ(λ) = ln(1+λ), −φ″(λ) = (1+λ)^{−2}.
    pub fn gamma_type() -> Self {
        Self::tempered(1.0, 0.0, 1.0, 0.0).expect("fixed valid parameters")
    }

    /// Log-stable exponent φ(λ) = λ^α·log^σ(2+λ) from the subordinated
    /// heat-kernel examples.  The Lévy density is not elementary, so
    /// ν-integrating operations are unavailable for this model.
    pub fn log_stable(alpha: f64, sigma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || sigma < 0.0 {
            return Err(EngineError::model_invalid(
                "log_stable requires alpha in (0,1) and sigma >= 0",
            ));
        }
        Ok(Self {
            drift_b: 0.0,
            levy: LevyMeasureSpec::Implicit,
            closed: ClosedForm::LogStable { alpha, sigma },
            kernel: PhiKernel::LaplaceExponent,
            family_tag: format!("log_stable({alpha},{sigma})"),
            x0: 0.0,
            monotone_density: true,
        })
    }

    /// Pure drift subordinator T_t = b·t.
    pub fn pure_drift(b: f64) -> Result<Self> {
        Ok(Self {
            drift_b: check_drift(b)?,
            levy: LevyMeasureSpec::None,
            closed: ClosedForm::None,
            kernel: PhiKernel::LaplaceExponent,
            family_tag: format!("drift({b})"),
            x0: 0.0,
            monotone_density: true,
        })
    }

    /// Custom model from a tabulated monotone density.
    pub fn custom_tabulated(
        drift_b: f64,
        points: Vec<(f64, f64)>,
        tail_exponents: (f64, f64),
        mono_constant: f64,
    ) -> Result<Self> {
        if points.len() < 2 {
            return Err(EngineError::model_invalid(
                "tabulated density needs at least two points",
            ));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(EngineError::model_invalid(
                    "tabulated abscissae must be strictly increasing",
                ));
            }
        }
        if points.iter().any(|p| !(p.0 > 0.0) || !(p.1 > 0.0) || !p.1.is_finite()) {
            return Err(EngineError::model_invalid(
                "tabulated points must be positive and finite",
            ));
        }
        let (p0, p_inf) = tail_exponents;
        if !(p0 < 2.0) {
            return Err(EngineError::model_invalid(
                "extrapolation exponent at 0 must be < 2 for ∫ min{1,s} ν(ds) < ∞",
            ));
        }
        if !(p_inf > 1.0) {
            return Err(EngineError::model_invalid(
                "extrapolation exponent at ∞ must be > 1 for a finite tail",
            ));
        }
        if !(mono_constant >= 1.0) {
            return Err(EngineError::model_invalid(
                "almost-monotonicity constant must be >= 1",
            ));
        }
        let model = Self {
            drift_b: check_drift(drift_b)?,
            levy: LevyMeasureSpec::Tabulated {
                points,
                tail_exponents,
                mono_constant,
            },
            closed: ClosedForm::None,
            kernel: PhiKernel::LaplaceExponent,
            family_tag: "custom".to_owned(),
            x0: 0.0,
            monotone_density: true,
        };
        model.check_tabulated_monotonicity()?;
        Ok(model)
    }

    /// Declared almost-monotonicity audit for tabulated densities:
    /// ν(y) ≤ C_mono·ν(x) for all grid y ≥ x.
    fn check_tabulated_monotonicity(&self) -> Result<()> {
        if let LevyMeasureSpec::Tabulated { points, mono_constant, .. } = &self.levy {
            let mut running_min = f64::INFINITY;
            for &(_, v) in points.iter() {
                if v > *mono_constant * running_min {
                    return Err(EngineError::model_invalid(format!(
                        "tabulated density violates declared almost-monotonicity \
                         constant C_mono = {mono_constant}"
                    )));
                }
                running_min = running_min.min(v);
            }
        }
        Ok(())
    }

    // ---- accessors ----------------------------------------------------

    pub fn drift(&self) -> f64 {
        self.drift_b
    }

    pub fn levy(&self) -> &LevyMeasureSpec {
        &self.levy
    }

    pub fn family_tag(&self) -> &str {
        &self.family_tag
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Override the scaling validity threshold x₀ (tempered/tabulated
    /// models may only satisfy scaling conditions above a finite scale).
    pub fn with_x0(mut self, x0: f64) -> Self {
        self.x0 = x0;
        self
    }

    pub fn has_monotone_density(&self) -> bool {
        self.monotone_density
    }

    /// Degenerate iff ν ≡ 0 (φ″ ≡ 0, deterministic motion T_t = bt).
    pub fn is_degenerate(&self) -> bool {
        self.levy.is_zero()
    }

    /// Whether φ evaluation goes through a closed form.
    pub fn has_closed_form(&self) -> bool {
        !matches!(self.closed, ClosedForm::None)
    }

    // ---- evaluation: real axis ----------------------------------------

    /// φ(λ) = bλ + ∫(1−e^{−λs})ν(ds) (or the complete-Bernstein kernel for
    /// surrogate models).
    pub fn eval_phi(&self, lambda: f64) -> Result<f64> {
        require_positive(lambda, "lambda")?;
        match &self.closed {
            ClosedForm::Stable { alpha } => Ok(lambda.powf(*alpha)),
            ClosedForm::Tempered { c, alpha, theta } => {
                Ok(self.drift_b * lambda + tempered_phi(*c, *alpha, *theta, lambda))
            }
            ClosedForm::LogStable { alpha, sigma } => {
                Ok(lambda.powf(*alpha) * (2.0 + lambda).ln().powf(*sigma))
            }
            ClosedForm::None => self.eval_phi_quadrature(lambda),
        }
    }

    /// φ(λ) forced through the quadrature path (closed form ignored);
    /// used to cross-validate the two representations.
    pub fn eval_phi_quadrature(&self, lambda: f64) -> Result<f64> {
        require_positive(lambda, "lambda")?;
        if self.levy.is_zero() {
            return Ok(self.drift_b * lambda);
        }
        let kernel = self.kernel;
        let integrand = |s: f64| -> f64 {
            let nu = match self.levy.density(s) {
                Ok(v) => v,
                Err(_) => return f64::NAN,
            };
            match kernel {
                PhiKernel::LaplaceExponent => (-(-lambda * s).exp_m1()) * nu,
                PhiKernel::CompleteBernstein => lambda * s / (lambda * s + 1.0) * nu,
            }
        };
        let split = 1.0 / lambda;
        let knots = self.levy.knots();
        let head = integrate_with_knots(&integrand, 0.0, split, &knots, PHI_REL_TOL)?;
        let tail = integrate_tail(&integrand, split, &knots, PHI_REL_TOL)?;
        let total = self.drift_b * lambda + head + tail;
        if !total.is_finite() {
            return Err(EngineError::model_invalid(
                "phi integral against the Levy measure diverged",
            ));
        }
        Ok(total)
    }

    /// n-th derivative of φ, n ∈ {1,2,3}:
    /// φ′ = b + ∫ s·e^{−λs} ν(ds), φ″ = −∫ s²e^{−λs} ν(ds),
    /// φ‴ = ∫ s³e^{−λs} ν(ds); completely monotone sign pattern enforced.
    pub fn eval_phi_derivative(&self, lambda: f64, order: u32) -> Result<f64> {
        require_positive(lambda, "lambda")?;
        if !(1..=3).contains(&order) {
            return Err(EngineError::model_invalid(format!(
                "derivative order must be 1..3, got {order}"
            )));
        }
        let value = match &self.closed {
            ClosedForm::Stable { alpha } => stable_derivative(*alpha, lambda, order),
            ClosedForm::Tempered { c, alpha, theta } => {
                let jump = tempered_phi_derivative(*c, *alpha, *theta, lambda, order);
                if order == 1 { self.drift_b + jump } else { jump }
            }
            ClosedForm::LogStable { alpha, sigma } => {
                log_stable_derivative(*alpha, *sigma, lambda, order)
            }
            ClosedForm::None => self.eval_phi_derivative_quadrature(lambda, order)?,
        };
        // Complete monotonicity of φ′: signs must alternate (+, −, +).
        let expected_sign = if order == 2 { -1.0 } else { 1.0 };
        if !self.levy.is_zero() && value * expected_sign < 0.0 {
            return Err(EngineError::numerical(format!(
                "phi derivative of order {order} violates complete monotonicity \
                 sign pattern at lambda = {lambda}"
            )));
        }
        Ok(value)
    }

    /// Derivative by quadrature (closed form ignored).
    pub fn eval_phi_derivative_quadrature(&self, lambda: f64, order: u32) -> Result<f64> {
        require_positive(lambda, "lambda")?;
        if self.levy.is_zero() {
            return Ok(if order == 1 { self.drift_b } else { 0.0 });
        }
        let kernel = self.kernel;
        let integrand = |s: f64| -> f64 {
            let nu = match self.levy.density(s) {
                Ok(v) => v,
                Err(_) => return f64::NAN,
            };
            match kernel {
                PhiKernel::LaplaceExponent => {
                    s.powi(order as i32) * (-lambda * s).exp() * nu
                }
                PhiKernel::CompleteBernstein => {
                    let d = lambda * s + 1.0;
                    match order {
                        1 => s / (d * d) * nu,
                        2 => 2.0 * s * s / (d * d * d) * nu,
                        _ => 6.0 * s * s * s / (d * d * d * d) * nu,
                    }
                }
            }
        };
        let split = 1.0 / lambda;
        let knots = self.levy.knots();
        let head = integrate_with_knots(&integrand, 0.0, split, &knots, PHI_REL_TOL)?;
        let tail = integrate_tail(&integrand, split, &knots, PHI_REL_TOL)?;
        let magnitude = head + tail;
        let signed = if order == 2 { -magnitude } else { magnitude };
        Ok(if order == 1 { self.drift_b + signed } else { signed })
    }

    /// Convenience: −φ″(λ) > 0 for non-degenerate models.
    pub fn neg_phi_pp(&self, lambda: f64) -> Result<f64> {
        Ok(-self.eval_phi_derivative(lambda, 2)?)
    }

    /// The driving function ϕ(x) = x²·(−φ″(x)) of the estimates.
    pub fn varphi(&self, x: f64) -> Result<f64> {
        Ok(x * x * self.neg_phi_pp(x)?)
    }

    // ---- evaluation: complex arguments --------------------------------

    /// φ(w + iλ) for w ≥ 0 (w > 0 required for quadrature models with a
    /// non-integrable oscillation at w = 0 is still fine: the increment
    /// integrals converge absolutely near 0 and conditionally at ∞).
    pub fn eval_phi_complex(&self, w: f64, lambda: f64) -> Result<Complex64> {
        if w < 0.0 {
            return Err(EngineError::model_invalid("complex abscissa w must be >= 0"));
        }
        let z = Complex64::new(w, lambda);
        match &self.closed {
            ClosedForm::Stable { alpha } => Ok(complex_pow(z, *alpha)),
            ClosedForm::Tempered { c, alpha, theta } => {
                let zt = z + theta;
                let jump = if *alpha == 0.0 {
                    (zt / theta).ln() * *c
                } else {
                    (complex_pow(zt, *alpha) - Complex64::new(theta.powf(*alpha), 0.0))
                        * (c * special::gamma(1.0 - alpha) / alpha)
                };
                Ok(jump + z * self.drift_b)
            }
            ClosedForm::LogStable { alpha, sigma } => {
                let lnz = (z + 2.0).ln();
                Ok(complex_pow(z, *alpha) * complex_pow_c(lnz, *sigma))
            }
            ClosedForm::None => self.eval_phi_complex_quadrature(w, lambda),
        }
    }

    /// Complex evaluation through the increment integrals
    /// Re φ(w+iλ) = φ(w) + ∫(1−cos λs)e^{−ws}ν(ds),
    /// Im φ(w+iλ) = bλ + ∫ sin(λs)e^{−ws}ν(ds).
    pub fn eval_phi_complex_quadrature(&self, w: f64, lambda: f64) -> Result<Complex64> {
        if self.levy.is_zero() {
            return Ok(Complex64::new(self.drift_b * w, self.drift_b * lambda));
        }
        if matches!(self.kernel, PhiKernel::CompleteBernstein) {
            return self.eval_surrogate_complex(w, lambda);
        }
        let phi_w = if w > 0.0 {
            self.eval_phi_quadrature(w)?
        } else {
            0.0
        };
        if lambda == 0.0 {
            return Ok(Complex64::new(phi_w, 0.0));
        }
        let abs_l = lambda.abs();
        let dens = |s: f64| self.levy.density(s).unwrap_or(f64::NAN);
        let knots = self.levy.knots();
        // 1 − cos(λs): smooth quadratic near 0, oscillatory beyond s ≈ 1/|λ|.
        let re_inc = oscillatory_levy_integral(
            &dens,
            &knots,
            w,
            abs_l,
            OscKernel::OneMinusCos,
        )?;
        let im_jump = oscillatory_levy_integral(&dens, &knots, w, abs_l, OscKernel::Sin)?;
        let im = self.drift_b * lambda + im_jump * lambda.signum();
        Ok(Complex64::new(phi_w + re_inc, im))
    }

    /// Complex complete-Bernstein kernel: f(z) = bz + ∫ zu/(zu+1) ν(du).
    fn eval_surrogate_complex(&self, w: f64, lambda: f64) -> Result<Complex64> {
        let z = Complex64::new(w, lambda);
        let knots = self.levy.knots();
        let scale = 1.0 / z.norm().max(1e-300);
        let part = |take_re: bool| {
            let f = |u: f64| -> f64 {
                let nu = self.levy.density(u).unwrap_or(f64::NAN);
                let k = z * u / (z * u + 1.0);
                (if take_re { k.re } else { k.im }) * nu
            };
            let head = integrate_with_knots(&f, 0.0, scale, &knots, PHI_REL_TOL)?;
            let tail = integrate_tail(&f, scale, &knots, PHI_REL_TOL)?;
            Ok::<f64, EngineError>(head + tail)
        };
        let re = part(true)?;
        let im = part(false)?;
        Ok(Complex64::new(self.drift_b * w + re, self.drift_b * lambda + im))
    }

    // ---- surrogate ----------------------------------------------------

    /// Complete Bernstein surrogate f(λ) = bλ + ∫ λu/(λu+1) ν(du); the
    /// returned model evaluates f through the rational kernel against the
    /// same Lévy measure.
    pub fn complete_bernstein_surrogate(&self) -> Result<BernsteinSpec> {
        if !self.levy.has_density() && !self.levy.is_zero() {
            return Err(EngineError::capability(
                "surrogate requires an explicit Levy density",
            ));
        }
        Ok(Self {
            drift_b: self.drift_b,
            levy: self.levy.clone(),
            closed: ClosedForm::None,
            kernel: PhiKernel::CompleteBernstein,
            family_tag: format!("surrogate[{}]", self.family_tag),
            x0: self.x0,
            monotone_density: self.monotone_density,
        })
    }

    // ---- structural validation ---------------------------------------

    /// Checks the defining integrability condition ∫ min{1,s} ν(ds) < ∞ and
    /// the Bernstein inequalities on a probe grid.
    pub fn validate(&self) -> Result<()> {
        if self.levy.is_zero() {
            return Ok(());
        }
        if self.levy.has_density() {
            let small = self.levy.partial_moment(1.0, 1)?;
            let tail = self.levy.tail_mass(1.0)?;
            if !small.is_finite() || !tail.is_finite() {
                return Err(EngineError::model_invalid(
                    "∫ min{1,s} ν(ds) is not finite",
                ));
            }
        }
        // φ nondecreasing / φ′ nonincreasing probes.
        let mut prev_phi = 0.0;
        let mut prev_d1 = f64::INFINITY;
        for i in 0..9 {
            let lam = 10f64.powi(i - 4);
            let phi = self.eval_phi(lam)?;
            let d1 = self.eval_phi_derivative(lam, 1)?;
            if phi + 1e-12 < prev_phi || d1 > prev_d1 * (1.0 + 1e-12) {
                return Err(EngineError::model_invalid(
                    "phi fails Bernstein monotonicity probes",
                ));
            }
            prev_phi = phi;
            prev_d1 = d1;
        }
        Ok(())
    }
}

fn check_drift(b: f64) -> Result<f64> {
    if b < 0.0 || !b.is_finite() {
        Err(EngineError::model_invalid(format!("drift must be >= 0, got {b}")))
    } else {
        Ok(b)
    }
}

fn require_positive(x: f64, name: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(EngineError::model_invalid(format!("{name} must be positive, got {x}")))
    }
}

/// Principal-branch z^α for a real exponent.
fn complex_pow(z: Complex64, alpha: f64) -> Complex64 {
    z.powf(alpha)
}

/// Principal-branch z^σ where z is complex (log of log-stable factor).
fn complex_pow_c(z: Complex64, sigma: f64) -> Complex64 {
    if sigma == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if sigma == 1.0 {
        z
    } else {
        z.powf(sigma)
    }
}

fn stable_derivative(alpha: f64, lambda: f64, order: u32) -> f64 {
    match order {
        1 => alpha * lambda.powf(alpha - 1.0),
        2 => alpha * (alpha - 1.0) * lambda.powf(alpha - 2.0),
        _ => alpha * (alpha - 1.0) * (alpha - 2.0) * lambda.powf(alpha - 3.0),
    }
}

fn tempered_phi(c: f64, alpha: f64, theta: f64, lambda: f64) -> f64 {
    if alpha == 0.0 {
        c * (1.0 + lambda / theta).ln()
    } else {
        c * special::gamma(1.0 - alpha) / alpha
            * ((lambda + theta).powf(alpha) - theta.powf(alpha))
    }
}

fn tempered_phi_derivative(c: f64, alpha: f64, theta: f64, lambda: f64, order: u32) -> f64 {
    let u = lambda + theta;
    if alpha == 0.0 {
        match order {
            1 => c / u,
            2 => -c / (u * u),
            _ => 2.0 * c / (u * u * u),
        }
    } else {
        let g = c * special::gamma(1.0 - alpha);
        match order {
            1 => g * u.powf(alpha - 1.0),
            2 => g * (alpha - 1.0) * u.powf(alpha - 2.0),
            _ => g * (alpha - 1.0) * (alpha - 2.0) * u.powf(alpha - 3.0),
        }
    }
}

/// Derivatives of φ(s) = s^α·L^σ with L = ln(2+s), by direct
/// differentiation (v = 1/(2+s)).
fn log_stable_derivative(alpha: f64, sigma: f64, s: f64, order: u32) -> f64 {
    let a = alpha;
    let sg = sigma;
    let l = (2.0 + s).ln();
    let v = 1.0 / (2.0 + s);
    let p = |e: f64| s.powf(e);
    let lp = |e: f64| l.powf(e);
    match order {
        1 => a * p(a - 1.0) * lp(sg) + sg * p(a) * lp(sg - 1.0) * v,
        2 => {
            a * (a - 1.0) * p(a - 2.0) * lp(sg)
                + 2.0 * a * sg * p(a - 1.0) * lp(sg - 1.0) * v
                + sg * (sg - 1.0) * p(a) * lp(sg - 2.0) * v * v
                - sg * p(a) * lp(sg - 1.0) * v * v
        }
        _ => {
            let t1 = a * (a - 1.0) * (a - 2.0) * p(a - 3.0) * lp(sg)
                + a * (a - 1.0) * sg * p(a - 2.0) * lp(sg - 1.0) * v;
            let t2 = 2.0
                * a
                * sg
                * ((a - 1.0) * p(a - 2.0) * lp(sg - 1.0) * v
                    + (sg - 1.0) * p(a - 1.0) * lp(sg - 2.0) * v * v
                    - p(a - 1.0) * lp(sg - 1.0) * v * v);
            let t3 = sg
                * (sg - 1.0)
                * (a * p(a - 1.0) * lp(sg - 2.0) * v * v
                    + (sg - 2.0) * p(a) * lp(sg - 3.0) * v * v * v
                    - 2.0 * p(a) * lp(sg - 2.0) * v * v * v);
            let t4 = -sg
                * (a * p(a - 1.0) * lp(sg - 1.0) * v * v
                    + (sg - 1.0) * p(a) * lp(sg - 2.0) * v * v * v
                    - 2.0 * p(a) * lp(sg - 1.0) * v * v * v);
            t1 + t2 + t3 + t4
        }
    }
}

/// Oscillation kernel for the complex increment integrals.
#[derive(Clone, Copy)]
enum OscKernel {
    /// ∫ (1 − cos λs) e^{−ws} ν(ds)
    OneMinusCos,
    /// ∫ sin(λs) e^{−ws} ν(ds)
    Sin,
}

/// Oscillatory integral against the Lévy density, λ > 0.
///
/// Split at s₁ = 1/λ; the head is absolutely convergent and tanh-sinh
/// friendly, the tail is summed over half-periods of the trigonometric
/// factor with Euler acceleration of the (nearly alternating) slices.
fn oscillatory_levy_integral<F: Fn(f64) -> f64>(
    dens: &F,
    knots: &[f64],
    w: f64,
    lambda: f64,
    kernel: OscKernel,
) -> Result<f64> {
    let s1 = 1.0 / lambda;
    let head_f = |s: f64| {
        let nu = dens(s);
        let weight = (-w * s).exp();
        match kernel {
            OscKernel::OneMinusCos => (1.0 - (lambda * s).cos()) * weight * nu,
            OscKernel::Sin => (lambda * s).sin() * weight * nu,
        }
    };
    let head = integrate_with_knots(&head_f, 0.0, s1, knots, PHI_REL_TOL)?;

    // Tail: for the 1−cos kernel, separate the non-oscillatory part
    // ∫ e^{−ws} ν so the remaining pure cosine integral alternates cleanly.
    let tail_plain = match kernel {
        OscKernel::OneMinusCos => {
            integrate_tail(|s| (-w * s).exp() * dens(s), s1, knots, PHI_REL_TOL)?
        }
        OscKernel::Sin => 0.0,
    };

    let osc_f = |s: f64| {
        let nu = dens(s);
        let weight = (-w * s).exp();
        match kernel {
            OscKernel::OneMinusCos => -(lambda * s).cos() * weight * nu,
            OscKernel::Sin => (lambda * s).sin() * weight * nu,
        }
    };
    // Half-period slices starting at s₁.
    let half = core::f64::consts::PI / lambda;
    let mut terms: Vec<f64> = Vec::new();
    let mut plain_sum = 0.0;
    let mut lo = s1;
    const MAX_SLICES: usize = 400;
    const RAW: usize = 24;
    for i in 0..MAX_SLICES {
        let hi = lo + half;
        let (v, _) = gk15(&osc_f, lo, hi);
        if i < RAW {
            plain_sum += v;
        } else {
            terms.push(v);
        }
        lo = hi;
        // Envelope cut-off: once the weighted density is negligible the
        // remaining tail cannot matter.
        let env = osc_envelope(dens, w, hi);
        if env * half <= 1e-16 * (plain_sum.abs() + tail_plain.abs()).max(1e-300)
            && i >= RAW
        {
            break;
        }
        if terms.len() >= 64 {
            break;
        }
    }
    let accelerated = euler_accelerate(&terms);
    Ok(head + tail_plain + plain_sum + accelerated)
}

fn osc_envelope<F: Fn(f64) -> f64>(dens: &F, w: f64, s: f64) -> f64 {
    let v = dens(s) * (-w * s).exp();
    if v.is_finite() { v.abs() } else { 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_pi() -> f64 {
        core::f64::consts::PI.sqrt()
    }

    #[test]
    fn stable_phi_closed_form() {
        // φ(λ) = √λ for α = 1/2.
        let m = BernsteinSpec::stable(0.5).unwrap();
        assert_eq!(m.eval_phi(4.0).unwrap(), 2.0);
        assert_eq!(m.eval_phi_derivative(1.0, 1).unwrap(), 0.5);
        // φ″(0.25) = −0.25·0.25^{−3/2} = −2.
        assert!((m.eval_phi_derivative(0.25, 2).unwrap() + 2.0).abs() < 1e-14);
    }

    #[test]
    fn pure_drift_is_linear() {
        let m = BernsteinSpec::pure_drift(1.0).unwrap();
        assert_eq!(m.eval_phi(3.0).unwrap(), 3.0);
        assert_eq!(m.eval_phi_derivative(5.0, 1).unwrap(), 1.0);
        assert_eq!(m.eval_phi_derivative(5.0, 2).unwrap(), 0.0);
    }

    #[test]
    fn power_quadrature_reproduces_stable_closed_form() {
        // ν(s) = s^{−3/2}/(2√π) integrates to φ(λ) = √λ.
        let c = 1.0 / (2.0 * sqrt_pi());
        let m = BernsteinSpec::power(c, 0.5, 0.0).unwrap();
        for &lam in &[1.0, 4.0, 0.01, 250.0] {
            let v = m.eval_phi(lam).unwrap();
            assert!(
                (v / lam.sqrt() - 1.0).abs() < 1e-8,
                "lambda={lam}: got {v}, want {}",
                lam.sqrt()
            );
        }
    }

    #[test]
    fn quadrature_matches_closed_forms_across_families() {
        // 20-point log grid λ ∈ [1e−4, 1e4]: quadrature path vs closed form
        // to relative error 1e−8 for every builtin family with a density.
        let models = [
            BernsteinSpec::stable(0.3).unwrap(),
            BernsteinSpec::stable(0.5).unwrap(),
            BernsteinSpec::stable(0.9).unwrap(),
            BernsteinSpec::tempered(1.0, 0.5, 2.0, 0.0).unwrap(),
            BernsteinSpec::gamma_type(),
        ];
        for m in &models {
            for i in 0..20 {
                let lam = 10f64.powf(-4.0 + 8.0 * i as f64 / 19.0);
                let closed = m.eval_phi(lam).unwrap();
                let quad = m.eval_phi_quadrature(lam).unwrap();
                assert!(
                    (quad / closed - 1.0).abs() < 1e-8,
                    "{}: lambda={lam} closed={closed} quad={quad}",
                    m.family_tag()
                );
            }
        }
    }

    #[test]
    fn derivative_quadrature_matches_closed_forms() {
        let models = [
            BernsteinSpec::stable(0.5).unwrap(),
            BernsteinSpec::stable(0.7).unwrap(),
            BernsteinSpec::tempered(0.8, 0.4, 1.5, 0.0).unwrap(),
        ];
        for m in &models {
            for &lam in &[0.01, 0.3, 1.0, 7.0, 300.0] {
                for order in 1..=3 {
                    let closed = m.eval_phi_derivative(lam, order).unwrap();
                    let quad = m.eval_phi_derivative_quadrature(lam, order).unwrap();
                    assert!(
                        (quad / closed - 1.0).abs() < 1e-7,
                        "{} d{order} at {lam}: closed={closed} quad={quad}",
                        m.family_tag()
                    );
                }
            }
        }
    }

    #[test]
    fn derivative_sign_pattern_holds_on_grid() {
        let models = [
            BernsteinSpec::stable(0.3).unwrap(),
            BernsteinSpec::log_stable(0.5, 1.0).unwrap(),
            BernsteinSpec::tempered(1.0, 0.5, 1.0, 0.5).unwrap(),
            BernsteinSpec::gamma_type(),
        ];
        for m in &models {
            for i in 0..20 {
                let lam = 10f64.powf(-4.0 + 8.0 * i as f64 / 19.0);
                assert!(m.eval_phi_derivative(lam, 1).unwrap() > 0.0);
                assert!(m.eval_phi_derivative(lam, 2).unwrap() < 0.0);
                assert!(m.eval_phi_derivative(lam, 3).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn log_stable_derivatives_match_richardson_differences() {
        // Oracle: high-order central differences of the closed-form φ with
        // Richardson extrapolation; analytic derivatives must agree.
        let m = BernsteinSpec::log_stable(0.5, 1.0).unwrap();
        let phi = |x: f64| m.eval_phi(x).unwrap();
        for &lam in &[0.05, 0.7, 3.0, 40.0] {
            let h = lam * 1e-4;
            let d1_fd = richardson(|h| (phi(lam + h) - phi(lam - h)) / (2.0 * h), h);
            let d1 = m.eval_phi_derivative(lam, 1).unwrap();
            assert!((d1 / d1_fd - 1.0).abs() < 1e-7, "d1 at {lam}: {d1} vs {d1_fd}");
            let d2_fd = richardson(
                |h| (phi(lam + h) - 2.0 * phi(lam) + phi(lam - h)) / (h * h),
                h,
            );
            let d2 = m.eval_phi_derivative(lam, 2).unwrap();
            assert!((d2 / d2_fd - 1.0).abs() < 1e-5, "d2 at {lam}: {d2} vs {d2_fd}");
            let d3_fd = richardson(
                |h| {
                    (phi(lam + 2.0 * h) - 2.0 * phi(lam + h) + 2.0 * phi(lam - h)
                        - phi(lam - 2.0 * h))
                        / (2.0 * h * h * h)
                },
                h * 10.0,
            );
            let d3 = m.eval_phi_derivative(lam, 3).unwrap();
            assert!((d3 / d3_fd - 1.0).abs() < 1e-3, "d3 at {lam}: {d3} vs {d3_fd}");
        }
    }

    /// One step of Richardson extrapolation for a symmetric difference
    /// quotient with leading error O(h²).
    fn richardson<F: Fn(f64) -> f64>(f: F, h: f64) -> f64 {
        let a = f(h);
        let b = f(h / 2.0);
        (4.0 * b - a) / 3.0
    }

    #[test]
    fn complex_eval_stable_principal_branch() {
        let m = BernsteinSpec::stable(0.5).unwrap();
        let v = m.eval_phi_complex(1.0, 0.0).unwrap();
        assert!((v.re - 1.0).abs() < 1e-14 && v.im.abs() < 1e-14);
        // (iλ)^{1/2} at λ = 1: (cos π/4, sin π/4).
        let v = m.eval_phi_complex(0.0, 1.0).unwrap();
        assert!((v.re - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((v.im - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn complex_quadrature_matches_closed_form() {
        let m = BernsteinSpec::stable(0.5).unwrap();
        for &(w, lam) in &[(1.0, 0.5), (0.3, 2.0), (2.0, -4.0), (0.05, 10.0)] {
            let closed = m.eval_phi_complex(w, lam).unwrap();
            let quad = m.eval_phi_complex_quadrature(w, lam).unwrap();
            assert!(
                (quad - closed).norm() < 1e-7 * closed.norm(),
                "w={w} lam={lam}: closed={closed} quad={quad}"
            );
        }
    }

    #[test]
    fn complex_real_part_dominates_real_axis_value() {
        // Re φ(w+iλ) ≥ φ(w) since 1 − cos ≥ 0; and symmetry in λ ↦ −λ.
        let models =
            [BernsteinSpec::stable(0.7).unwrap(), BernsteinSpec::gamma_type()];
        for m in &models {
            for &w in &[0.1, 1.0, 10.0] {
                let phi_w = m.eval_phi(w).unwrap();
                for &lam in &[0.2, 1.0, 8.0] {
                    let plus = m.eval_phi_complex(w, lam).unwrap();
                    let minus = m.eval_phi_complex(w, -lam).unwrap();
                    assert!(plus.re >= phi_w - 1e-12 * phi_w.abs());
                    assert!((plus.re - minus.re).abs() <= 1e-12 * plus.re.abs());
                    assert!((plus.im + minus.im).abs() <= 1e-12 * plus.im.abs().max(1e-300));
                }
            }
        }
    }

    #[test]
    fn surrogate_comparable_to_phi() {
        // f(λ) = ∫ λu/(λu+1) ν(du) = √π/2·√λ for the normalized ½-stable
        // density, so f/φ ≈ 0.8862 — inside the comparability window.
        let m = BernsteinSpec::stable(0.5).unwrap();
        let f = m.complete_bernstein_surrogate().unwrap();
        for i in 0..13 {
            let lam = 10f64.powf(-3.0 + 0.5 * i as f64);
            let ratio = f.eval_phi(lam).unwrap() / m.eval_phi(lam).unwrap();
            assert!(
                (0.5..=2.0).contains(&ratio),
                "lambda={lam}: ratio {ratio}"
            );
            assert!((ratio - 0.5 * sqrt_pi()).abs() < 1e-6);
        }
        // Second-derivative comparability −f″ ≈ −φ″.
        for &lam in &[0.01, 1.0, 100.0] {
            let r = f.eval_phi_derivative(lam, 2).unwrap()
                / m.eval_phi_derivative(lam, 2).unwrap();
            assert!(r > 0.1 && r < 10.0, "second-derivative ratio {r} at {lam}");
        }
    }

    #[test]
    fn surrogate_of_pure_drift_is_identity() {
        let m = BernsteinSpec::pure_drift(2.0).unwrap();
        let f = m.complete_bernstein_surrogate().unwrap();
        assert_eq!(f.eval_phi(3.0).unwrap(), 6.0);
    }

    #[test]
    fn surrogate_bounded_for_power_log() {
        let m = BernsteinSpec::power_log(0.3, 0.5, 1.0, 0.0).unwrap();
        let f = m.complete_bernstein_surrogate().unwrap();
        for i in 0..13 {
            let lam = 10f64.powf(-3.0 + 0.5 * i as f64);
            let ratio = f.eval_phi(lam).unwrap() / m.eval_phi(lam).unwrap();
            assert!(ratio > 0.2 && ratio < 5.0, "lambda={lam}: ratio {ratio}");
        }
    }

    #[test]
    fn tabulated_density_interpolates_and_extrapolates() {
        // Table sampled from s^{-3/2}: interpolation is exact in log-log.
        let points: Vec<(f64, f64)> =
            (0..40).map(|i| {
                let s = 10f64.powf(-2.0 + 4.0 * i as f64 / 39.0);
                (s, s.powf(-1.5))
            }).collect();
        let m = BernsteinSpec::custom_tabulated(0.0, points, (1.5, 1.5), 1.0).unwrap();
        for &s in &[1e-4, 0.05, 1.0, 17.0, 1e4] {
            let v = m.levy().density(s).unwrap();
            assert!((v / s.powf(-1.5) - 1.0).abs() < 1e-10, "s={s}");
        }
        // And φ by quadrature tracks the matching power model: with
        // c = 1, α = 1/2 ⇒ φ(λ) = Γ(1/2)/0.5·√λ = 2√π·√λ.
        let lam = 2.0;
        let v = m.eval_phi(lam).unwrap();
        let want = 2.0 * sqrt_pi() * lam.sqrt();
        assert!((v / want - 1.0).abs() < 1e-8, "{v} vs {want}");
    }

    #[test]
    fn eval_rejects_nonpositive_lambda() {
        let m = BernsteinSpec::tempered(1.0, 0.5, 1.0, 0.0).unwrap();
        assert!(m.eval_phi(0.0).is_err());
        assert!(m.eval_phi_derivative(0.0, 1).is_err());
        assert!(m.eval_phi(-1.0).is_err());
    }

    #[test]
    fn tabulated_validation_rejects_bad_tables() {
        let good: Vec<(f64, f64)> = alloc::vec![(0.1, 10.0), (1.0, 1.0), (10.0, 0.1)];
        assert!(BernsteinSpec::custom_tabulated(0.0, good.clone(), (1.5, 1.5), 1.0).is_ok());
        // Tail exponent too small ⇒ infinite mass.
        assert!(BernsteinSpec::custom_tabulated(0.0, good.clone(), (1.5, 0.5), 1.0).is_err());
        // Non-monotone table with C_mono = 1 must be rejected.
        let bumpy = alloc::vec![(0.1, 1.0), (1.0, 5.0), (10.0, 0.1)];
        assert!(BernsteinSpec::custom_tabulated(0.0, bumpy, (1.5, 1.5), 1.0).is_err());
    }

    #[test]
    fn bernstein_inequalities_hold_on_grid() {
        // eq:28 φ(λx) ≤ λφ(x) and eq:20 (n=1,2) on a probe grid.
        let models = [
            BernsteinSpec::stable(0.5).unwrap(),
            BernsteinSpec::log_stable(0.5, 1.0).unwrap(),
            BernsteinSpec::gamma_type(),
        ];
        for m in &models {
            for i in 0..12 {
                let x = 10f64.powf(-3.0 + 0.5 * i as f64);
                let phi = m.eval_phi(x).unwrap();
                for &lam in &[1.0, 2.0, 13.0] {
                    let lhs = m.eval_phi(lam * x).unwrap();
                    assert!(lhs <= lam * phi * (1.0 + 1e-12), "{}", m.family_tag());
                }
                // n = 1: φ(x) ≥ xφ′(x);  n = 2: φ(x) ≥ −x²φ″(x)/2.
                let d1 = m.eval_phi_derivative(x, 1).unwrap();
                let d2 = m.eval_phi_derivative(x, 2).unwrap();
                assert!(phi >= x * d1 - 1e-12 * phi);
                assert!(phi >= -0.5 * x * x * d2 - 1e-12 * phi);
            }
        }
    }
}
