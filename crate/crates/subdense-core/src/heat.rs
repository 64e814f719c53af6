//! Subordinated heat-kernel estimates: given a base kernel profile
//! h(s, x, y) ≍ s^{−n/γ} Φ(τ(x,y) s^{−1/γ}) and a subordinator with density
//! p(t, ·), the subordinated kernel H(t, x, y) = ∫ h(s, x, y) p(t, s) ds is
//! compared against the two-case estimate
//! min{ t·φ(τ^{−γ})·τ^{−n}, (φ⁻¹(1/t))^{n/γ} }.

use crate::bounds::SharpEngine;
use crate::density::density_auto;
use crate::error::{EngineError, Result};
use crate::model::BernsteinSpec;
use crate::quad::adaptive_gk;
use crate::scale::{log_grid, phi_inverse};
use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Shape of the profile pair (Φ₁, Φ₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    /// Φ₁(s) = Φ₂(s) = exp(−s^{γ/(γ−1)}): sub-Gaussian pair of a diffusion
    /// with walk exponent γ on a self-similar space.
    Fractal,
    /// Φ₁(s) = e^{−c₁s²}, Φ₂(s) = e^{−c₂s²} with c₁ ≥ c₂: the Gaussian
    /// two-sided pair of a manifold heat kernel (γ = 2).
    Gaussian { c1: f64, c2: f64 },
}

/// Base-kernel profile: dimension-like exponent n, walk exponent γ > 1 and
/// the nonincreasing pair Φ₁ ≤ Φ₂ with Φ₁(1) > 0.
#[derive(Debug, Clone, Copy)]
pub struct HeatProfile {
    n: f64,
    gamma: f64,
    kind: ProfileKind,
}

impl HeatProfile {
    /// exp(−s^{γ/(γ−1)}) profile for both bounds.
    pub fn fractal(n: f64, gamma: f64) -> Result<Self> {
        let p = Self { n, gamma, kind: ProfileKind::Fractal };
        p.validate()?;
        Ok(p)
    }

    /// Gaussian pair e^{−c₁s²} ≤ e^{−c₂s²}; the walk exponent is 2.
    pub fn gaussian(n: f64, c1: f64, c2: f64) -> Result<Self> {
        let p = Self { n, gamma: 2.0, kind: ProfileKind::Gaussian { c1, c2 } };
        p.validate()?;
        Ok(p)
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Lower profile Φ₁(s).
    pub fn phi_lower(&self, s: f64) -> f64 {
        match self.kind {
            ProfileKind::Fractal => (-s.powf(self.gamma / (self.gamma - 1.0))).exp(),
            ProfileKind::Gaussian { c1, .. } => (-c1 * s * s).exp(),
        }
    }

    /// Upper profile Φ₂(s).
    pub fn phi_upper(&self, s: f64) -> f64 {
        match self.kind {
            ProfileKind::Fractal => self.phi_lower(s),
            ProfileKind::Gaussian { c2, .. } => (-c2 * s * s).exp(),
        }
    }

    /// Structural checks: positivity of the exponents, Φ₁(1) > 0, Φ₁ ≤ Φ₂
    /// pointwise, and the moment condition sup_s Φ₂(s)(1+s)^{n+γ} < ∞
    /// evidenced on a log grid (the weighted profile must be decaying at the
    /// right end of the grid).
    pub fn validate(&self) -> Result<()> {
        if !(self.n > 0.0) || !self.n.is_finite() {
            return Err(EngineError::model_invalid(format!(
                "profile dimension n = {} must be positive and finite",
                self.n
            )));
        }
        if !(self.gamma > 1.0) || !self.gamma.is_finite() {
            return Err(EngineError::model_invalid(format!(
                "walk exponent γ = {} must exceed 1",
                self.gamma
            )));
        }
        if let ProfileKind::Gaussian { c1, c2 } = self.kind {
            if !(c2 > 0.0) || !(c1 >= c2) || !c1.is_finite() {
                return Err(EngineError::model_invalid(format!(
                    "Gaussian profile needs c₁ ≥ c₂ > 0, got c₁ = {c1}, c₂ = {c2}"
                )));
            }
        }
        if !(self.phi_lower(1.0) > 0.0) {
            return Err(EngineError::model_invalid("Φ₁(1) must be positive"));
        }
        let grid = log_grid(1e-2, 1e4, 73);
        let mut weighted_prev = f64::INFINITY;
        for &s in &grid {
            let lo = self.phi_lower(s);
            let hi = self.phi_upper(s);
            if !(lo <= hi) {
                return Err(EngineError::model_invalid(format!(
                    "Φ₁({s}) = {lo} exceeds Φ₂({s}) = {hi}"
                )));
            }
            let weighted = hi * (1.0 + s).powf(self.n + self.gamma);
            if !weighted.is_finite() {
                return Err(EngineError::model_invalid(format!(
                    "Φ₂(s)(1+s)^(n+γ) overflows at s = {s}"
                )));
            }
            if s >= grid[grid.len() - 8] && weighted > weighted_prev {
                return Err(EngineError::model_invalid(
                    "Φ₂(s)(1+s)^(n+γ) keeps growing at the right grid end; \
                     the moment condition looks violated",
                ));
            }
            weighted_prev = weighted;
        }
        Ok(())
    }
}

/// Subordinated kernel value at one (t, τ) against the two-case estimate.
#[derive(Debug, Clone, Copy)]
pub struct HeatKernelResult {
    /// ∫ s^{−n/γ} Φ₁(τ s^{−1/γ}) p(t, s) ds.
    pub lower: f64,
    /// Same with Φ₂.
    pub upper: f64,
    /// t·φ(τ^{−γ})·τ^{−n} when t·φ(τ^{−γ}) ≤ 1, else (φ⁻¹(1/t))^{n/γ}.
    pub estimate_form: f64,
    /// The case-splitting coordinate t·φ(τ^{−γ}).
    pub regime_coordinate: f64,
}

/// Hypotheses of the two-case estimate: the sharp-density hypotheses
/// (zero drift, almost monotone Lévy density, both-sided scaling of φ with
/// upper index below 1), plus φ′ vanishing at infinity and the spatial
/// window τ^{−γ} > x₀.
fn check_heat_hypotheses(model: &BernsteinSpec, profile: &HeatProfile, tau: f64) -> Result<()> {
    SharpEngine::new(model)?;
    let d_mid = model.eval_phi_derivative(1e4, 1)?;
    let d_far = model.eval_phi_derivative(1e12, 1)?;
    if !(d_far < 0.9 * d_mid) {
        return Err(EngineError::capability(format!(
            "φ′ does not vanish at infinity (φ′(1e4) = {d_mid}, φ′(1e12) = {d_far})"
        )));
    }
    let x0 = model.x0();
    let arg = tau.powf(-profile.gamma);
    if x0 > 0.0 && arg <= x0 {
        return Err(EngineError::capability(format!(
            "τ^(−γ) = {arg} must exceed the scaling threshold x₀ = {x0}"
        )));
    }
    Ok(())
}

/// ∫₀^∞ s^{−n/γ} Φ(τ s^{−1/γ}) p(t, s) ds for one profile function.
fn subordination_quadrature<P: Fn(f64) -> f64>(
    model: &BernsteinSpec,
    profile: &HeatProfile,
    phi_profile: P,
    t: f64,
    tau: f64,
) -> Result<f64> {
    let npg = profile.n / profile.gamma;
    let inv_g = 1.0 / profile.gamma;
    let integrand = |s: f64| -> f64 {
        let p = density_auto(model, t, s).unwrap_or(f64::NAN);
        s.powf(-npg) * phi_profile(tau * s.powf(-inv_g)) * p
    };

    // Two characteristic scales: where the profile argument is 1 and where
    // the subordinator mass sits.  Scan a wide log window around them for
    // the peak, then integrate adaptively over geometric blocks.
    let s_profile = tau.powf(profile.gamma);
    let s_mass = 1.0 / phi_inverse(model, 1.0 / t)?;
    let s_ref = s_profile.max(s_mass);
    let scan = log_grid(s_ref * 1e-10, s_ref * 1e10, 81);
    let mut peak = 0.0f64;
    let mut peak_s = s_ref;
    for &s in &scan {
        let v = integrand(s);
        if v.is_finite() && v > peak {
            peak = v;
            peak_s = s;
        }
    }
    if !(peak > 0.0) {
        return Err(EngineError::numerical(format!(
            "subordination integrand vanished on the whole scan window at \
             t = {t}, τ = {tau}"
        )));
    }

    let mut total = 0.0;
    // Blocks up from the peak.
    let mut a = peak_s;
    for _ in 0..80 {
        let b = a * 4.0;
        let v = adaptive_gk(&integrand, a, b, 1e-300, 1e-8)?;
        total += v;
        a = b;
        if v.abs() < 1e-10 * total.abs() {
            break;
        }
    }
    // Blocks down from the peak.
    let mut b = peak_s;
    for _ in 0..80 {
        let a = b / 4.0;
        let v = adaptive_gk(&integrand, a, b, 1e-300, 1e-8)?;
        total += v;
        b = a;
        if v.abs() < 1e-10 * total.abs() {
            break;
        }
    }
    if !total.is_finite() {
        return Err(EngineError::numerical(
            "subordination quadrature did not produce a finite value",
        ));
    }
    Ok(total)
}

/// The two-case comparison shape at (t, τ).
pub fn heat_estimate_form(model: &BernsteinSpec, profile: &HeatProfile, t: f64, tau: f64) -> Result<(f64, f64)> {
    let q = t * model.eval_phi(tau.powf(-profile.gamma))?;
    let form = if q <= 1.0 {
        q * tau.powf(-profile.n)
    } else {
        phi_inverse(model, 1.0 / t)?.powf(profile.n / profile.gamma)
    };
    Ok((form, q))
}

/// Subordinated heat kernel bounds H_i(t, τ) = ∫ s^{−n/γ} Φᵢ(τ s^{−1/γ})
/// p(t, s) ds, with the two-case estimate they are compared against.
pub fn heat_kernel_subordinated(
    model: &BernsteinSpec,
    profile: &HeatProfile,
    t: f64,
    tau: f64,
) -> Result<HeatKernelResult> {
    if !(t > 0.0) || !(tau > 0.0) {
        return Err(EngineError::model_invalid(format!(
            "t = {t} and τ = {tau} must be positive"
        )));
    }
    profile.validate()?;
    check_heat_hypotheses(model, profile, tau)?;

    let lower = subordination_quadrature(model, profile, |s| profile.phi_lower(s), t, tau)?;
    let upper = if matches!(profile.kind, ProfileKind::Fractal) {
        lower
    } else {
        subordination_quadrature(model, profile, |s| profile.phi_upper(s), t, tau)?
    };
    let (estimate_form, regime_coordinate) = heat_estimate_form(model, profile, t, tau)?;
    Ok(HeatKernelResult { lower, upper, estimate_form, regime_coordinate })
}

/// One named entry of the example catalog.
#[derive(Debug, Clone, Copy)]
pub struct ProfileExample {
    pub name: &'static str,
    pub profile: HeatProfile,
}

/// The two standard profile families with representative parameters.
pub fn example_profiles() -> Vec<ProfileExample> {
    let mut out = Vec::new();
    out.push(ProfileExample {
        name: "nested-fractal",
        profile: HeatProfile::fractal(2.0, 2.5).expect("valid catalog profile"),
    });
    out.push(ProfileExample {
        name: "manifold",
        profile: HeatProfile::gaussian(2.0, 1.0, 0.25).expect("valid catalog profile"),
    });
    out
}

/// φ(s) = s^α log^σ(2+s) companion model of the catalog.
pub fn log_stable_model(alpha: f64, sigma: f64) -> Result<BernsteinSpec> {
    BernsteinSpec::log_stable(alpha, sigma)
}

/// Reference on-diagonal asymptotic of the log-stable subordinated kernel:
/// t^{−n/(αγ)} · log^{−σn/(αγ)}(2 + 1/t).
pub fn log_stable_diagonal_form(alpha: f64, sigma: f64, n: f64, gamma: f64, t: f64) -> f64 {
    let e = n / (alpha * gamma);
    t.powf(-e) * (2.0 + 1.0 / t).ln().powf(-sigma * e)
}

/// Reference off-diagonal asymptotic: t · τ^{−αγ−n} · log^σ(2 + τ^{−γ}).
pub fn log_stable_offdiagonal_form(
    alpha: f64,
    sigma: f64,
    n: f64,
    gamma: f64,
    t: f64,
    tau: f64,
) -> f64 {
    t * tau.powf(-(alpha * gamma + n)) * (2.0 + tau.powf(-gamma)).ln().powf(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_pi() -> f64 {
        core::f64::consts::PI.sqrt()
    }

    #[test]
    fn profile_validation_accepts_and_rejects() {
        assert!(HeatProfile::fractal(1.0, 2.0).is_ok());
        assert!(HeatProfile::gaussian(2.0, 1.0, 0.25).is_ok());
        // γ must exceed 1, n positive, ordering c₁ ≥ c₂.
        assert!(HeatProfile::fractal(1.0, 1.0).is_err());
        assert!(HeatProfile::fractal(0.0, 2.0).is_err());
        assert!(HeatProfile::gaussian(1.0, 0.25, 1.0).is_err());
        // Fractal profile at 0 is 1, Gaussian pair ordered.
        let f = HeatProfile::fractal(1.0, 2.0).unwrap();
        assert_eq!(f.phi_lower(0.0), 1.0);
        let g = HeatProfile::gaussian(1.0, 2.0, 0.5).unwrap();
        assert!(g.phi_lower(1.3) < g.phi_upper(1.3));
    }

    #[test]
    fn estimate_form_cases_match_algebra() {
        // stable ½, γ = 2, n = 1.  τ = 10: tφ(0.01) = 0.1 ≤ 1 so the
        // off-diagonal branch gives 0.1·10^{−1} = 0.01; τ = 0.1: tφ(100) =
        // 10 > 1 so the diagonal branch gives (φ⁻¹(1))^{1/2} = 1.
        let m = BernsteinSpec::stable(0.5).unwrap();
        let p = HeatProfile::gaussian(1.0, 1.0, 1.0).unwrap();
        let (form, q) = heat_estimate_form(&m, &p, 1.0, 10.0).unwrap();
        assert!((q - 0.1).abs() < 1e-12);
        assert!((form - 0.01).abs() < 1e-12);
        let (form, q) = heat_estimate_form(&m, &p, 1.0, 0.1).unwrap();
        assert!((q - 10.0).abs() < 1e-12);
        assert!((form - 1.0).abs() < 1e-10);
    }

    #[test]
    fn half_stable_gaussian_closed_form() {
        // With p(t,s) = (t/(2√π)) s^{−3/2} e^{−t²/(4s)} and Φ(u) = e^{−u²},
        // n = 1, γ = 2: H = ∫ s^{−1/2} e^{−τ²/s} p(t,s) ds =
        // t / (2√π (τ² + t²/4)).
        let m = BernsteinSpec::stable(0.5).unwrap();
        let p = HeatProfile::gaussian(1.0, 1.0, 1.0).unwrap();
        for &(t, tau) in &[(1.0, 10.0), (1.0, 0.1), (0.5, 2.0), (2.0, 1.0)] {
            let r = heat_kernel_subordinated(&m, &p, t, tau).unwrap();
            let oracle = t / (2.0 * sqrt_pi() * (tau * tau + t * t / 4.0));
            assert!(
                (r.lower / oracle - 1.0).abs() < 1e-5,
                "t={t}, τ={tau}: {} vs {oracle}",
                r.lower
            );
            assert!((r.upper / r.lower - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn comparability_with_estimate_form() {
        // The quadrature/estimate ratio stays within one decade across the
        // regime boundary.
        let m = BernsteinSpec::stable(0.5).unwrap();
        let p = HeatProfile::gaussian(1.0, 1.0, 1.0).unwrap();
        for &tau in &[0.01, 0.1, 1.0, 10.0, 100.0] {
            let r = heat_kernel_subordinated(&m, &p, 1.0, tau).unwrap();
            let ratio = r.upper / r.estimate_form;
            assert!(
                (0.1..=10.0).contains(&ratio),
                "τ={tau}: ratio {ratio}"
            );
        }
    }

    #[test]
    fn gaussian_pair_brackets_and_orders() {
        let m = BernsteinSpec::stable(0.7).unwrap();
        let p = HeatProfile::gaussian(2.0, 1.0, 0.25).unwrap();
        let r = heat_kernel_subordinated(&m, &p, 1.0, 2.0).unwrap();
        assert!(r.lower > 0.0 && r.lower < r.upper, "{} !< {}", r.lower, r.upper);
    }

    #[test]
    fn hypothesis_failures_are_capability_errors() {
        let p = HeatProfile::gaussian(1.0, 1.0, 1.0).unwrap();
        // Drift violates lim φ′ = 0 (and the sharp hypotheses).
        let drifty = BernsteinSpec::custom_tabulated(
            0.5,
            alloc::vec![(0.1, 1.0), (1.0, 0.1), (10.0, 0.001)],
            (1.5, 2.5),
            1.0,
        )
        .unwrap();
        assert!(heat_kernel_subordinated(&drifty, &p, 1.0, 1.0).is_err());
        // Spatial window: τ^{−γ} must exceed x₀.
        let m = BernsteinSpec::stable(0.5).unwrap().with_x0(1.0);
        assert!(heat_kernel_subordinated(&m, &p, 1.0, 2.0).is_err());
        assert!(heat_kernel_subordinated(&m, &p, 1.0, 0.5).is_ok());
    }

    #[test]
    fn catalog_and_reference_forms() {
        let cat = example_profiles();
        assert_eq!(cat.len(), 2);
        assert!(cat.iter().all(|e| e.profile.validate().is_ok()));
        // Log-stable companions: positive, with the expected t-monotonicity
        // of the diagonal form.
        let m = log_stable_model(0.5, 1.0).unwrap();
        assert!(m.eval_phi(1.0).unwrap() > 0.0);
        let d1 = log_stable_diagonal_form(0.5, 1.0, 1.0, 2.0, 0.1);
        let d2 = log_stable_diagonal_form(0.5, 1.0, 1.0, 2.0, 1.0);
        assert!(d1 > d2 && d2 > 0.0);
        assert!(log_stable_offdiagonal_form(0.5, 1.0, 1.0, 2.0, 1.0, 3.0) > 0.0);
    }
}
