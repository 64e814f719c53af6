//! Model and profile specification files (JSON) and their translation into
//! engine types.  Parse failures carry enough context for the exit-3
//! "malformed spec" diagnostic.

use serde::Deserialize;
use subdense_core::heat::HeatProfile;
use subdense_core::BernsteinSpec;

use crate::error::AppError;

/// On-disk model document, dispatched on the `family` tag.
#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// φ(λ) = λ^α.
    Stable {
        alpha: f64,
        #[serde(default)]
        x0: f64,
    },
    /// ν(s) = c·s^{−1−α} with optional drift (no closed form attached).
    Power {
        c: f64,
        alpha: f64,
        #[serde(default)]
        drift: f64,
        #[serde(default)]
        x0: f64,
    },
    /// ν(s) = c·s^{−1−α}·log^σ(2+1/s).
    PowerLog {
        c: f64,
        alpha: f64,
        sigma: f64,
        #[serde(default)]
        drift: f64,
        #[serde(default)]
        x0: f64,
    },
    /// ν(s) = c·s^{−1−α}·e^{−θs}; α = 0 is the Gamma-type subordinator.
    Tempered {
        c: f64,
        alpha: f64,
        theta: f64,
        #[serde(default)]
        drift: f64,
        #[serde(default)]
        x0: f64,
    },
    /// φ(λ) = ln(1+λ): shorthand for tempered c=1, α=0, θ=1.
    Gamma {},
    /// φ(λ) = λ^α·log^σ(2+λ).
    LogStable { alpha: f64, sigma: f64 },
    /// Pure drift T_t = b·t.
    Drift { b: f64 },
    /// Tabulated monotone Lévy density with declared extrapolation.
    Custom {
        #[serde(default)]
        drift: f64,
        levy: LevySpec,
        #[serde(default)]
        x0: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LevySpec {
    Tabulated {
        points: Vec<(f64, f64)>,
        tail_exponents: (f64, f64),
        mono_constant: f64,
    },
}

impl ModelSpec {
    pub fn build(self) -> Result<BernsteinSpec, AppError> {
        let model = match self {
            ModelSpec::Stable { alpha, x0 } => BernsteinSpec::stable(alpha)?.with_x0(x0),
            ModelSpec::Power { c, alpha, drift, x0 } => {
                BernsteinSpec::power(c, alpha, drift)?.with_x0(x0)
            }
            ModelSpec::PowerLog { c, alpha, sigma, drift, x0 } => {
                BernsteinSpec::power_log(c, alpha, sigma, drift)?.with_x0(x0)
            }
            ModelSpec::Tempered { c, alpha, theta, drift, x0 } => {
                BernsteinSpec::tempered(c, alpha, theta, drift)?.with_x0(x0)
            }
            ModelSpec::Gamma {} => BernsteinSpec::gamma_type(),
            ModelSpec::LogStable { alpha, sigma } => BernsteinSpec::log_stable(alpha, sigma)?,
            ModelSpec::Drift { b } => BernsteinSpec::pure_drift(b)?,
            ModelSpec::Custom { drift, levy, x0 } => {
                let LevySpec::Tabulated { points, tail_exponents, mono_constant } = levy;
                BernsteinSpec::custom_tabulated(drift, points, tail_exponents, mono_constant)?
                    .with_x0(x0)
            }
        };
        Ok(model)
    }
}

/// On-disk heat-kernel profile document, dispatched on the `kind` tag.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Fractal { n: f64, gamma: f64 },
    Gaussian { c1: f64, c2: f64, n: f64 },
}

impl ProfileSpec {
    pub fn build(self) -> Result<HeatProfile, AppError> {
        Ok(match self {
            ProfileSpec::Fractal { n, gamma } => HeatProfile::fractal(n, gamma)?,
            ProfileSpec::Gaussian { c1, c2, n } => HeatProfile::gaussian(n, c1, c2)?,
        })
    }
}

fn read_spec_file(path: &std::path::Path) -> Result<String, AppError> {
    std::fs::read_to_string(path).map_err(|e| {
        AppError::Malformed(format!("cannot read spec file {}: {e}", path.display()))
    })
}

/// Loads and builds a model from a JSON spec file.
pub fn load_model(path: &std::path::Path) -> Result<BernsteinSpec, AppError> {
    let text = read_spec_file(path)?;
    let spec: ModelSpec = serde_json::from_str(&text).map_err(|e| {
        AppError::Malformed(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    match spec.build() {
        Ok(m) => Ok(m),
        // Structurally valid JSON with invalid parameters is still a
        // malformed spec for exit-code purposes.
        Err(AppError::Engine(e))
            if e.kind() == subdense_core::ErrorKind::ModelInvalid =>
        {
            Err(AppError::Malformed(format!("{}: {e}", path.display())))
        }
        Err(other) => Err(other),
    }
}

/// Loads and builds a heat profile from a JSON spec file.
pub fn load_profile(path: &std::path::Path) -> Result<HeatProfile, AppError> {
    let text = read_spec_file(path)?;
    let spec: ProfileSpec = serde_json::from_str(&text).map_err(|e| {
        AppError::Malformed(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    match spec.build() {
        Ok(p) => Ok(p),
        Err(AppError::Engine(e))
            if e.kind() == subdense_core::ErrorKind::ModelInvalid =>
        {
            Err(AppError::Malformed(format!("{}: {e}", path.display())))
        }
        Err(other) => Err(other),
    }
}
