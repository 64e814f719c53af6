//! Command-line front-end: argument definitions and subcommand execution.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use subdense_core::bounds::SharpEngine;
use subdense_core::density::{
    density_bromwich, density_with_m0, AccuracyFlag, DensityResult, Method, M0_DEFAULT,
};
use subdense_core::green::green;
use subdense_core::heat::heat_kernel_subordinated;
use subdense_core::sampler::{half_stable_cdf, sample};
use subdense_core::scale::{
    estimate_scaling, inequality_audit, log_grid, ScalingSide,
};
use subdense_core::{BernsteinSpec, EngineError};

use crate::emit::{fmt_num, write_output, Csv};
use crate::error::AppError;
use crate::grid::parse_log_grid;
use crate::spec_io::{load_model, load_profile};
use crate::verify::verify;

#[derive(Parser)]
#[command(
    name = "subdense",
    version,
    about = "Subordinator transition densities, estimate envelopes, Green \
             functions and Monte Carlo oracles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Saddle,
    Bromwich,
    Both,
}

#[derive(Subcommand)]
pub enum Command {
    /// Transition density p(t, x) by saddle asymptotics and/or contour
    /// inversion; CSV columns (t,x,value,method,w,saddle_mass,exponent,ratio,flag).
    Density {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, conflicts_with = "x_grid")]
        x: Option<f64>,
        /// Log grid "lo:hi:n".
        #[arg(long)]
        x_grid: Option<String>,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
        /// Saddle-mass threshold below which saddle values are flagged.
        #[arg(long, default_value_t = M0_DEFAULT)]
        m0: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-sided estimate envelope against the contour density; CSV columns
    /// (t,x,regime,lower_form,upper_form,p_bromwich,ratio).
    Bounds {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        x_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hypothesis and inequality audit as a JSON verdict.
    Audit {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scaling-index estimates as JSON, with optional CSV traces of the
    /// scale functions for plotting.
    ScalingReport {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV of (x, phi, phi_prime, neg_phi_pp, varphi) traces.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Green function G(x) against 1/(x·φ(1/x)); CSV columns
    /// (x,value,estimate_form,ratio,piece_inner,piece_outer).
    Green {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, conflicts_with = "x_grid")]
        x: Option<f64>,
        #[arg(long)]
        x_grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Subordinated heat-kernel bounds; CSV columns
    /// (t,tau,lower,upper,estimate_form,regime_coordinate).
    HeatKernel {
        #[arg(long)]
        model: PathBuf,
        /// Profile spec JSON: {"kind":"fractal",...} | {"kind":"gaussian",...}.
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, conflicts_with = "tau_grid")]
        tau: Option<f64>,
        #[arg(long)]
        tau_grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compound-Poisson sampler; emits samples and a JSON summary.
    Sample {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample output path (summary goes to --summary or stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
        /// "csv" (one sample per line) or "bin" (little-endian f64).
        #[arg(long, default_value = "csv")]
        format: String,
        /// Include the KS distance against the closed-form CDF (stable α=1/2).
        #[arg(long, default_value_t = false)]
        ks_analytic: bool,
    },
    /// Full verification suite; JSON verdict, exit 1 on any failed check.
    Verify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// The saddle asymptotic is only meaningful under −φ″ ∈ WLSC(α−2) with
/// α > 0; models like the Gamma subordinator (−φ″ index −2) are rejected
/// with a capability error before any point is evaluated.
fn check_saddle_scaling(model: &BernsteinSpec) -> Result<(), AppError> {
    if model.is_degenerate() {
        return Err(AppError::Engine(EngineError::capability(
            "degenerate: φ″≡0, no density exists",
        )));
    }
    let range = if model.x0() > 0.0 { (model.x0(), model.x0() * 1e6) } else { (1e-3, 1e3) };
    let rep = estimate_scaling(
        |y| model.neg_phi_pp(y).unwrap_or(f64::NAN),
        range,
        ScalingSide::Lower,
        "neg_phi_pp",
    )?;
    if rep.index_estimate <= -2.0 + 2e-2 {
        return Err(AppError::Engine(EngineError::capability(format!(
            "WLSC(α−2), α>0: failed (lower index estimate {:.4} of −φ″ is not above −2)",
            rep.index_estimate
        ))));
    }
    Ok(())
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Saddle => "saddle",
        Method::Bromwich => "bromwich",
        Method::Both => "both",
    }
}

fn flag_name(f: AccuracyFlag) -> &'static str {
    match f {
        AccuracyFlag::Ok => "ok",
        AccuracyFlag::OutsideRegion => "outside-region",
        AccuracyFlag::QuadratureWarning => "quadrature-warning",
        AccuracyFlag::SupportBoundary => "support-boundary",
    }
}

fn density_row(r: &DensityResult) -> Vec<String> {
    let (w, mass, expo) = match &r.saddle {
        Some(s) => (s.w, s.saddle_mass, s.exponent),
        None => (f64::NAN, f64::NAN, f64::NAN),
    };
    vec![
        fmt_num(r.t),
        fmt_num(r.x),
        fmt_num(r.value),
        method_name(r.method).to_string(),
        fmt_num(w),
        fmt_num(mass),
        fmt_num(expo),
        fmt_num(r.ratio.unwrap_or(f64::NAN)),
        flag_name(r.flag).to_string(),
    ]
}

fn scaling_report_json(model: &BernsteinSpec) -> Result<Value, AppError> {
    let phi = |y: f64| model.eval_phi(y).unwrap_or(f64::NAN);
    let neg_pp = |y: f64| model.neg_phi_pp(y).unwrap_or(f64::NAN);
    let range = if model.x0() > 0.0 { (model.x0(), model.x0() * 1e6) } else { (1e-3, 1e3) };
    let mut reports = Vec::new();
    for (side, f, name) in [
        (ScalingSide::Lower, &phi as &dyn Fn(f64) -> f64, "phi"),
        (ScalingSide::Upper, &phi, "phi"),
        (ScalingSide::Lower, &neg_pp, "neg_phi_pp"),
        (ScalingSide::Upper, &neg_pp, "neg_phi_pp"),
    ] {
        let rep = estimate_scaling(f, range, side, name)?;
        reports.push(json!({
            "target": rep.target,
            "side": match rep.side { ScalingSide::Lower => "lower", ScalingSide::Upper => "upper" },
            "index_estimate": rep.index_estimate,
            "constant_estimate": rep.constant_estimate,
            "x0": rep.x0,
            "pass": rep.pass,
        }));
    }
    Ok(json!({
        "model": model.family_tag(),
        "window": [range.0, range.1],
        "reports": reports,
    }))
}

pub fn run(cli: Cli) -> Result<i32, AppError> {
    match cli.command {
        Command::Density { model, t, x, x_grid, method, m0, out } => {
            let model = load_model(&model)?;
            let method = match method {
                MethodArg::Saddle => Method::Saddle,
                MethodArg::Bromwich => Method::Bromwich,
                MethodArg::Both => Method::Both,
            };
            if !matches!(method, Method::Bromwich) {
                check_saddle_scaling(&model)?;
            }
            let xs = resolve_points(x, x_grid.as_deref(), "--x or --x-grid")?;
            let rows: Result<Vec<DensityResult>, EngineError> = xs
                .par_iter()
                .map(|&xv| density_with_m0(&model, t, xv, method, m0))
                .collect();
            let mut csv = Csv::new(&[
                "t", "x", "value", "method", "w", "saddle_mass", "exponent", "ratio", "flag",
            ]);
            for r in rows? {
                csv.row(&density_row(&r));
            }
            write_output(out.as_deref(), &csv.into_bytes())?;
            Ok(0)
        }
        Command::Bounds { model, t, x_grid, out } => {
            let model = load_model(&model)?;
            let engine = SharpEngine::new(&model)?;
            let xs = parse_log_grid(&x_grid)?;
            let rows: Result<Vec<_>, EngineError> = xs
                .par_iter()
                .map(|&xv| {
                    let band = engine.estimate(t, xv)?;
                    let p = density_bromwich(&model, t, xv)?.value;
                    Ok((xv, band, p))
                })
                .collect();
            let mut csv = Csv::new(&[
                "t", "x", "regime", "lower_form", "upper_form", "p_bromwich", "ratio",
            ]);
            for (xv, band, p) in rows? {
                let regime = if band.plateau_form.is_some() {
                    "plateau"
                } else {
                    match band.regime {
                        subdense_core::bounds::Regime::Bulk => "bulk",
                        subdense_core::bounds::Regime::Tail => "tail",
                    }
                };
                csv.row(&[
                    fmt_num(t),
                    fmt_num(xv),
                    regime.to_string(),
                    fmt_num(band.lower_form),
                    fmt_num(band.upper_form),
                    fmt_num(p),
                    fmt_num(p / band.upper_form),
                ]);
            }
            write_output(out.as_deref(), &csv.into_bytes())?;
            Ok(0)
        }
        Command::Audit { model, out } => {
            let model = load_model(&model)?;
            let report = if model.is_degenerate() {
                json!({
                    "model": model.family_tag(),
                    "verdict": "degenerate: φ″≡0",
                    "pass": true,
                })
            } else {
                let audit = inequality_audit(&model)?;
                let rows: Vec<Value> = audit
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "name": c.name,
                            "min_ratio": c.min_ratio,
                            "max_ratio": c.max_ratio,
                            "pass": c.pass,
                        })
                    })
                    .collect();
                let scaling = scaling_report_json(&model)?;
                json!({
                    "model": model.family_tag(),
                    "inequalities": rows,
                    "scaling": scaling,
                    "pass": audit.pass,
                })
            };
            let ok = report["pass"].as_bool().unwrap_or(false);
            let bytes = serde_json::to_vec_pretty(&report).expect("serializable report");
            write_output(out.as_deref(), &bytes)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::ScalingReport { model, out, csv } => {
            let model = load_model(&model)?;
            if model.is_degenerate() {
                return Err(AppError::Engine(EngineError::capability(
                    "degenerate: φ″≡0, scaling indices are undefined",
                )));
            }
            let report = scaling_report_json(&model)?;
            let bytes = serde_json::to_vec_pretty(&report).expect("serializable report");
            write_output(out.as_deref(), &bytes)?;
            if let Some(csv_path) = csv {
                let mut table =
                    Csv::new(&["x", "phi", "phi_prime", "neg_phi_pp", "varphi"]);
                for x in log_grid(1e-4, 1e4, 129) {
                    table.row(&[
                        fmt_num(x),
                        fmt_num(model.eval_phi(x).unwrap_or(f64::NAN)),
                        fmt_num(model.eval_phi_derivative(x, 1).unwrap_or(f64::NAN)),
                        fmt_num(model.neg_phi_pp(x).unwrap_or(f64::NAN)),
                        fmt_num(model.varphi(x).unwrap_or(f64::NAN)),
                    ]);
                }
                write_output(Some(&csv_path), &table.into_bytes())?;
            }
            Ok(0)
        }
        Command::Green { model, x, x_grid, out } => {
            let model = load_model(&model)?;
            let xs = resolve_points(x, x_grid.as_deref(), "--x or --x-grid")?;
            let rows: Result<Vec<_>, EngineError> =
                xs.par_iter().map(|&xv| green(&model, xv).map(|g| (xv, g))).collect();
            let mut csv = Csv::new(&[
                "x", "value", "estimate_form", "ratio", "piece_inner", "piece_outer",
            ]);
            for (xv, g) in rows? {
                csv.row(&[
                    fmt_num(xv),
                    fmt_num(g.value),
                    fmt_num(g.estimate_form),
                    fmt_num(g.ratio),
                    fmt_num(g.piece_inner),
                    fmt_num(g.piece_outer),
                ]);
            }
            write_output(out.as_deref(), &csv.into_bytes())?;
            Ok(0)
        }
        Command::HeatKernel { model, profile, t, tau, tau_grid, out } => {
            let model = load_model(&model)?;
            let profile = load_profile(&profile)?;
            let taus = resolve_points(tau, tau_grid.as_deref(), "--tau or --tau-grid")?;
            let rows: Result<Vec<_>, EngineError> = taus
                .par_iter()
                .map(|&tv| heat_kernel_subordinated(&model, &profile, t, tv).map(|h| (tv, h)))
                .collect();
            let mut csv = Csv::new(&[
                "t", "tau", "lower", "upper", "estimate_form", "regime_coordinate",
            ]);
            for (tv, h) in rows? {
                csv.row(&[
                    fmt_num(t),
                    fmt_num(tv),
                    fmt_num(h.lower),
                    fmt_num(h.upper),
                    fmt_num(h.estimate_form),
                    fmt_num(h.regime_coordinate),
                ]);
            }
            write_output(out.as_deref(), &csv.into_bytes())?;
            Ok(0)
        }
        Command::Sample { model, t, n, eps, seed, out, summary, format, ks_analytic } => {
            let model = load_model(&model)?;
            let dist = sample(&model, t, n, eps, seed)?;
            if let Some(path) = out {
                match format.as_str() {
                    "csv" => {
                        let mut csv = Csv::new(&["sample"]);
                        for &s in dist.samples() {
                            csv.row(&[fmt_num(s)]);
                        }
                        write_output(Some(&path), &csv.into_bytes())?;
                    }
                    "bin" => {
                        let mut bytes = Vec::with_capacity(8 * dist.len());
                        for &s in dist.samples() {
                            bytes.extend_from_slice(&s.to_le_bytes());
                        }
                        write_output(Some(&path), &bytes)?;
                    }
                    other => {
                        return Err(AppError::Malformed(format!(
                            "unknown sample format \"{other}\" (use csv or bin)"
                        )))
                    }
                }
            }
            let mut doc = json!({
                "n": dist.len(),
                "t": t,
                "eps": eps,
                "seed": seed,
                "small_jump_variance": dist.small_jump_variance(),
                "quantiles": {
                    "q01": dist.quantile(0.01),
                    "q10": dist.quantile(0.10),
                    "q25": dist.quantile(0.25),
                    "q50": dist.quantile(0.50),
                    "q75": dist.quantile(0.75),
                    "q90": dist.quantile(0.90),
                    "q99": dist.quantile(0.99),
                },
                // Stable-type laws have no finite moments beyond fractional
                // ones; the empirical mean is reported as-is.
                "empirical_mean": dist.mean(),
            });
            if let Some(w) = dist.warning() {
                doc["warning"] = json!(w);
            }
            if ks_analytic {
                if model.family_tag() == "stable(0.5)" {
                    doc["ks_analytic"] = json!(dist.ks_vs_cdf(|x| half_stable_cdf(t, x)));
                } else {
                    return Err(AppError::Engine(EngineError::capability(
                        "analytic CDF oracle is only available for stable α = 1/2",
                    )));
                }
            }
            let bytes = serde_json::to_vec_pretty(&doc).expect("serializable summary");
            write_output(summary.as_deref(), &bytes)?;
            Ok(0)
        }
        Command::Verify { model, out } => {
            let model = load_model(&model)?;
            let (report, all_pass) = verify(&model)?;
            let bytes = serde_json::to_vec_pretty(&report).expect("serializable report");
            write_output(out.as_deref(), &bytes)?;
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

fn resolve_points(
    scalar: Option<f64>,
    grid: Option<&str>,
    what: &str,
) -> Result<Vec<f64>, AppError> {
    match (scalar, grid) {
        (Some(v), None) => Ok(vec![v]),
        (None, Some(g)) => parse_log_grid(g),
        _ => Err(AppError::Malformed(format!("exactly one of {what} is required"))),
    }
}
