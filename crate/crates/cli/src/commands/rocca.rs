//! `lle rocca`: |Λ∖Λ_ε| against its first- and second-order expansion.

use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use lle_core::geometry::{
    intersect_translates_area_with, roccaforte_terms, AreaOptions, Region, TranslateFamily,
};
use lle_core::landau_kernel::Point2;

use super::usage;
use crate::output::{metadata, num, write_csv, write_json, Format};
use crate::{config, CliError, Context};

#[derive(Args, Serialize)]
pub struct RoccaArgs {
    /// Region JSON, inline or `@path`.
    #[arg(long)]
    region: Option<String>,
    /// Translation vectors as a JSON list of pairs, e.g. [[1,0],[0,1]].
    #[arg(long)]
    vectors: Option<String>,
    /// ε values: comma-separated numbers, 2^k, or 2^a..2^b.
    #[arg(long)]
    eps: Option<String>,
    /// Absolute tolerance of the area quadrature.
    #[arg(long)]
    area_tol: Option<f64>,
    /// Seed of the Monte Carlo fallback.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoccaConfig {
    pub region: Region,
    pub vectors: Vec<[f64; 2]>,
    pub eps: Vec<f64>,
    #[serde(default = "default_area_tol")]
    pub area_tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_area_tol() -> f64 {
    1e-13
}

struct Row {
    eps: f64,
    exact: f64,
    first: f64,
    second: Option<f64>,
    std_error: Option<f64>,
    method: &'static str,
}

impl Row {
    fn residual_first(&self) -> f64 {
        if self.eps == 0.0 {
            0.0
        } else {
            (self.exact - self.first) / self.eps
        }
    }

    fn residual_second(&self) -> Option<f64> {
        self.second.map(|s| {
            if self.eps == 0.0 {
                0.0
            } else {
                (self.exact - s) / (self.eps * self.eps)
            }
        })
    }
}

pub fn run(ctx: &Context, args: RoccaArgs) -> Result<(), CliError> {
    let cfg: RoccaConfig = config::resolve(ctx, &args, |m| {
        config::load_region(m)?;
        config::parse_key(m, "vectors", config::json_value)?;
        config::parse_key(m, "eps", config::number_list)
    })?;
    if cfg.vectors.is_empty() {
        return Err(usage("at least one vector is required"));
    }
    if cfg.eps.iter().any(|&e| !(e >= 0.0 && e.is_finite())) {
        return Err(usage("ε values must be non-negative"));
    }
    if !(cfg.area_tol > 0.0) {
        return Err(usage("area_tol must be positive"));
    }
    let vectors: Vec<Point2> = cfg
        .vectors
        .iter()
        .map(|v| Point2::new(v[0], v[1]))
        .collect();
    let terms = roccaforte_terms(&cfg.region, &vectors)?;
    let opts = AreaOptions {
        tol: cfg.area_tol,
        seed: cfg.seed,
        ..AreaOptions::default()
    };
    let rows = cfg
        .eps
        .par_iter()
        .map(|&eps| {
            let fam =
                TranslateFamily::new(vectors.clone(), eps).map_err(|e| usage(e.to_string()))?;
            let area = intersect_translates_area_with(&cfg.region, &fam, opts)?;
            let first = eps * terms.first;
            Ok(Row {
                eps,
                exact: area.complement,
                first,
                second: terms.second.map(|t2| first + eps * eps * t2),
                std_error: area.std_error,
                method: area.method,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut meta = metadata(ctx, "rocca", &cfg);
    meta["terms"] = json!(terms);
    match cfg.format {
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        num(Some(r.eps)),
                        num(Some(r.exact)),
                        num(Some(r.first)),
                        num(r.second),
                        num(Some(r.residual_first())),
                        num(r.residual_second()),
                        num(r.std_error),
                        r.method.to_string(),
                    ]
                })
                .collect();
            let header = [
                "eps",
                "exact",
                "first_order",
                "second_order",
                "residual_first_over_eps",
                "residual_second_over_eps2",
                "std_error",
                "method",
            ];
            write_csv(cfg.output.as_deref(), &header, &table, &meta)
        }
        Format::Json => {
            meta["result"] = rows
                .iter()
                .map(|r| {
                    json!({
                        "eps": r.eps,
                        "exact": r.exact,
                        "first_order": r.first,
                        "second_order": r.second,
                        "residual_first_over_eps": r.residual_first(),
                        "residual_second_over_eps2": r.residual_second(),
                        "std_error": r.std_error,
                        "method": r.method,
                    })
                })
                .collect();
            write_json(cfg.output.as_deref(), &meta)
        }
    }
}
