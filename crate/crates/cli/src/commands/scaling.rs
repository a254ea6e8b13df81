//! `lle scaling`: Σ f(μ_k) against L and the fitted boundary slope.

use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use lle_core::coeffs::{coeff_for, DEFAULT_TOL};
use lle_core::disk_spectra::{cutoff_bias, entropy_from_spectrum};
use lle_core::landau_kernel::{LevelSelector, MagneticSetup};
use lle_core::region_sim::{scaling_fit, FitModel, ScalingSeries};

use super::spectrum::{compute, disk_radius, expected_trace, resolution, unit, Solver};
use super::{function_spec, parse_function, usage};
use crate::output::{metadata, num, write_csv, write_json};
use crate::{config, CliError, Context};

#[derive(Args, Serialize)]
pub struct ScalingArgs {
    /// Region JSON, inline or `@path`.
    #[arg(long)]
    region: Option<String>,
    /// Field strength B.
    #[arg(long)]
    b: Option<f64>,
    /// single:ℓ or upto:n.
    #[arg(long)]
    levels: Option<LevelSelector>,
    /// Spectral function: renyi:α, monomial:m or gtilde.
    #[arg(long, value_parser = function_spec)]
    f: Option<String>,
    /// Scales as start:stop:step or a comma-separated list.
    #[arg(long)]
    scales: Option<String>,
    /// linear fits after removing the exact area term; quadratic fits the raw values.
    #[arg(long, value_enum)]
    model: Option<Model>,
    /// Default: disk for disks, nystrom2d otherwise.
    #[arg(long, value_enum)]
    solver: Option<Solver>,
    /// Accuracy of the predicted coefficient.
    #[arg(long)]
    tol: Option<f64>,
    /// CSV of (L, S); written next to the fit report.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Fit report; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Linear,
    Quadratic,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    pub region: lle_core::geometry::Region,
    #[serde(default = "unit")]
    pub b: f64,
    pub levels: LevelSelector,
    #[serde(default = "entropy")]
    pub f: String,
    pub scales: Vec<f64>,
    #[serde(default = "linear")]
    pub model: Model,
    #[serde(default)]
    pub solver: Option<Solver>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn entropy() -> String {
    "renyi:1".into()
}

fn linear() -> Model {
    Model::Linear
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

pub fn run(ctx: &Context, args: ScalingArgs) -> Result<(), CliError> {
    let cfg: ScalingConfig = config::resolve(ctx, &args, |m| {
        config::load_region(m)?;
        config::parse_key(m, "scales", config::scale_list)
    })?;
    let setup = MagneticSetup::new(cfg.b).map_err(|e| usage(e.to_string()))?;
    let f = parse_function(&cfg.f)?;
    if cfg.scales.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(usage("scales must be positive"));
    }
    let is_disk = disk_radius(&cfg.region).is_some();
    let nystrom = match cfg.solver.unwrap_or(if is_disk {
        Solver::Disk
    } else {
        Solver::Nystrom2d
    }) {
        Solver::Disk if is_disk => false,
        Solver::Nystrom2d => true,
        Solver::Disk => return Err(usage("the disk solver needs a disk region")),
        Solver::Compare => return Err(usage("scaling runs a single solver")),
    };

    let runs = cfg
        .scales
        .par_iter()
        .map(|&l| {
            let res = resolution(cfg.b, &cfg.region, l, None, None);
            let (spec, _) = compute(setup, cfg.levels, &cfg.region, l, nystrom, res)?;
            Ok((entropy_from_spectrum(&spec, &f), cutoff_bias(&spec, &f)))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let area_term = |l: f64| expected_trace(cfg.b, cfg.levels, &cfg.region, l) * f.value_at_one();
    let subtract = cfg.model == Model::Linear;
    let points: Vec<(f64, f64)> = cfg
        .scales
        .iter()
        .zip(&runs)
        .map(|(&l, &(s, _))| (l, if subtract { s - area_term(l) } else { s }))
        .collect();
    let series = ScalingSeries::new(points, json!({ "f": cfg.f, "levels": cfg.levels }))
        .map_err(|e| usage(e.to_string()))?;
    let model = match cfg.model {
        Model::Linear => FitModel::Linear,
        Model::Quadratic => FitModel::Quadratic,
    };
    let fit = scaling_fit(&series, model)?;
    let coeff = coeff_for(cfg.levels, &f, cfg.tol)?;
    let predicted = cfg.b.sqrt() * cfg.region.perimeter() * coeff.value;

    let mut doc = metadata(ctx, "scaling", &cfg);
    doc["result"] = json!({
        "solver": if nystrom { "nystrom2d" } else { "disk-sector" },
        "area_subtracted": subtract,
        "area_coefficient": area_term(1.0),
        "points": cfg.scales.iter().zip(&runs).map(|(&l, &(s, _))| [l, s]).collect::<Vec<_>>(),
        "cutoff_bias": runs.iter().map(|r| r.1).fold(0.0, f64::max),
        "c1": fit.c1,
        "c0": fit.c0,
        "residual": fit.residual_norm,
        "predicted": predicted,
        "ratio": fit.c1 / predicted,
        "coefficient": coeff,
        "fit": fit,
        "note": "fit-window tolerances are empirical",
    });
    if let Some(path) = &cfg.csv {
        let rows: Vec<Vec<String>> = cfg
            .scales
            .iter()
            .zip(&runs)
            .map(|(&l, &(s, _))| vec![num(Some(l)), num(Some(s))])
            .collect();
        write_csv(
            Some(path),
            &["L", "S"],
            &rows,
            &metadata(ctx, "scaling", &cfg),
        )?;
    }
    write_json(cfg.output.as_deref(), &doc)
}
