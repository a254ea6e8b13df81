//! `lle spectrum`: eigenvalues of 1_{LΛ} P 1_{LΛ}.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use lle_core::disk_spectra::{disk_spectrum, sector_window, LocalSpectrum};
use lle_core::geometry::{Region, RegionKind};
use lle_core::landau_kernel::{LevelSelector, MagneticSetup};
use lle_core::region_sim::{region_spectrum, Resolution};

use super::usage;
use crate::output::{metadata, write_json};
use crate::{config, CliError, Context};

/// Eigenvalues above this enter the cross-solver comparison.
pub const COMPARE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Solver {
    /// Angular-momentum sectors of a disk.
    #[serde(rename = "disk")]
    #[value(name = "disk")]
    Disk,
    /// Nyström discretization of the region.
    #[serde(rename = "nystrom2d")]
    #[value(name = "nystrom2d")]
    Nystrom2d,
    /// Both, with the largest eigenvalue difference.
    #[serde(rename = "compare")]
    #[value(name = "compare")]
    Compare,
}

#[derive(Args, Serialize)]
pub struct SpectrumArgs {
    /// Region JSON, inline or `@path`.
    #[arg(long)]
    region: Option<String>,
    /// Field strength B.
    #[arg(long)]
    b: Option<f64>,
    /// single:ℓ or upto:n.
    #[arg(long)]
    levels: Option<LevelSelector>,
    /// Scale L of the region.
    #[arg(short = 'L', long)]
    scale: Option<f64>,
    /// Default: disk for disks, nystrom2d otherwise.
    #[arg(long, value_enum)]
    solver: Option<Solver>,
    /// Nyström radial nodes (per triangle direction for polygons).
    #[arg(long)]
    radial: Option<usize>,
    /// Nyström angular nodes.
    #[arg(long)]
    angular: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub region: Region,
    #[serde(default = "unit")]
    pub b: f64,
    pub levels: LevelSelector,
    pub scale: f64,
    #[serde(default)]
    pub solver: Option<Solver>,
    #[serde(default)]
    pub radial: Option<usize>,
    #[serde(default)]
    pub angular: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

pub fn unit() -> f64 {
    1.0
}

pub fn disk_radius(region: &Region) -> Option<f64> {
    match region.kind() {
        RegionKind::Disk { radius, .. } => Some(*radius),
        _ => None,
    }
}

pub fn resolution(
    b: f64,
    region: &Region,
    scale: f64,
    radial: Option<usize>,
    angular: Option<usize>,
) -> Resolution {
    let auto = Resolution::auto(b, region, scale);
    Resolution {
        radial: radial.unwrap_or(auto.radial),
        angular: angular.unwrap_or(auto.angular),
    }
}

/// One spectrum with the settings that produced it.
pub fn compute(
    setup: MagneticSetup,
    selector: LevelSelector,
    region: &Region,
    scale: f64,
    nystrom: bool,
    res: Resolution,
) -> Result<(LocalSpectrum, Value), CliError> {
    if nystrom {
        let spec = region_spectrum(setup, selector, region, scale, res)?;
        let dim = spec.eigenvalues.len() + spec.dropped;
        Ok((
            spec,
            json!({ "solver": "nystrom2d", "resolution": res, "dimension": dim }),
        ))
    } else {
        let r = disk_radius(region).ok_or_else(|| usage("the disk solver needs a disk region"))?;
        let spec = disk_spectrum(setup, selector, scale * r)?;
        let k = sector_window(setup.b, scale * r, selector.top());
        Ok((
            spec,
            json!({ "solver": "disk-sector", "sector_window": [-(selector.top() as i64), k] }),
        ))
    }
}

/// B L² |Λ| (levels)/2π.
pub fn expected_trace(b: f64, selector: LevelSelector, region: &Region, scale: f64) -> f64 {
    b * scale * scale * region.area() * selector.count() as f64 / (2.0 * PI)
}

/// Largest difference of the sorted eigenvalues above `floor`; an unmatched
/// eigenvalue counts with its own size.
pub fn max_difference(a: &[f64], b: &[f64], floor: f64) -> f64 {
    let mut x: Vec<f64> = a.iter().copied().filter(|&v| v > floor).collect();
    let mut y: Vec<f64> = b.iter().copied().filter(|&v| v > floor).collect();
    x.sort_by(|p, q| q.total_cmp(p));
    y.sort_by(|p, q| q.total_cmp(p));
    let n = x.len().max(y.len());
    (0..n)
        .map(|i| (x.get(i).copied().unwrap_or(0.0) - y.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

pub fn run(ctx: &Context, args: SpectrumArgs) -> Result<(), CliError> {
    let cfg: SpectrumConfig = config::resolve(ctx, &args, config::load_region)?;
    let setup = MagneticSetup::new(cfg.b).map_err(|e| usage(e.to_string()))?;
    if !(cfg.scale > 0.0 && cfg.scale.is_finite()) {
        return Err(usage(format!("scale must be positive, got {}", cfg.scale)));
    }
    let is_disk = disk_radius(&cfg.region).is_some();
    let solver = cfg.solver.unwrap_or(if is_disk {
        Solver::Disk
    } else {
        Solver::Nystrom2d
    });
    if solver != Solver::Nystrom2d && !is_disk {
        return Err(usage("the disk solver needs a disk region"));
    }
    let res = resolution(cfg.b, &cfg.region, cfg.scale, cfg.radial, cfg.angular);
    let expected = expected_trace(cfg.b, cfg.levels, &cfg.region, cfg.scale);
    let mut doc = metadata(ctx, "spectrum", &cfg);
    match solver {
        Solver::Disk | Solver::Nystrom2d => {
            let (spec, mut settings) = compute(
                setup,
                cfg.levels,
                &cfg.region,
                cfg.scale,
                solver == Solver::Nystrom2d,
                res,
            )?;
            settings["cutoff"] = json!(spec.cutoff);
            settings["expected_trace"] = json!(expected);
            doc["settings"] = settings;
            doc["result"] = serde_json::to_value(&spec).expect("spectrum serializes");
        }
        Solver::Compare => {
            let (disk, ds) = compute(setup, cfg.levels, &cfg.region, cfg.scale, false, res)?;
            let (nys, ns) = compute(setup, cfg.levels, &cfg.region, cfg.scale, true, res)?;
            let above =
                |s: &LocalSpectrum| s.eigenvalues.iter().filter(|&&v| v > COMPARE_FLOOR).count();
            doc["settings"] = json!({ "disk": ds, "nystrom2d": ns, "expected_trace": expected });
            doc["result"] = json!({
                "floor": COMPARE_FLOOR,
                "max_abs_diff": max_difference(&disk.eigenvalues, &nys.eigenvalues, COMPARE_FLOOR),
                "count_disk": above(&disk),
                "count_nystrom2d": above(&nys),
                "trace_disk": disk.trace,
                "trace_nystrom2d": nys.trace,
                "trace_relative_error": (nys.trace - expected).abs() / expected,
                "disk": disk,
                "nystrom2d": nys,
            });
        }
    }
    write_json(cfg.output.as_deref(), &doc)
}
