//! `lle coeff`: tables of boundary coefficients.

use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use lle_core::coeffs::{coeff_for, DEFAULT_TOL};
use lle_core::landau_kernel::LevelSelector;

use super::{function_spec, parse_function, usage};
use crate::output::{metadata, num, write_csv, write_json, Format};
use crate::{config, CliError, Context};

#[derive(Args, Serialize)]
pub struct CoeffArgs {
    /// Level selectors, comma separated: single:ℓ or upto:n.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<LevelSelector>>,
    /// Spectral functions, comma separated: renyi:α, monomial:m or gtilde.
    #[arg(long, value_delimiter = ',', value_parser = function_spec)]
    f: Option<Vec<String>>,
    /// Target absolute accuracy.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffConfig {
    pub levels: Vec<LevelSelector>,
    pub f: Vec<String>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

pub fn run(ctx: &Context, args: CoeffArgs) -> Result<(), CliError> {
    let cfg: CoeffConfig = config::resolve(ctx, &args, |_| Ok(()))?;
    if cfg.levels.is_empty() || cfg.f.is_empty() {
        return Err(usage(
            "at least one level selector and one function are required",
        ));
    }
    if !(cfg.tol > 0.0 && cfg.tol < 1.0) {
        return Err(usage(format!("tol must lie in (0,1), got {}", cfg.tol)));
    }
    let fs = cfg
        .f
        .iter()
        .map(|s| parse_function(s))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(LevelSelector, usize)> = cfg
        .levels
        .iter()
        .flat_map(|&l| (0..fs.len()).map(move |i| (l, i)))
        .collect();
    let values = jobs
        .par_iter()
        .map(|&(sel, i)| coeff_for(sel, &fs[i], cfg.tol))
        .collect::<Result<Vec<_>, _>>()?;

    let meta = metadata(ctx, "coeff", &cfg);
    match cfg.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = jobs
                .iter()
                .zip(&values)
                .map(|(&(sel, i), c)| {
                    vec![
                        sel.to_string(),
                        fs[i].to_string(),
                        num(Some(c.value)),
                        num(Some(c.error)),
                    ]
                })
                .collect();
            write_csv(
                cfg.output.as_deref(),
                &["levels", "f", "value", "error"],
                &rows,
                &meta,
            )
        }
        Format::Json => {
            let rows: Vec<_> = jobs
                .iter()
                .zip(&values)
                .map(|(&(sel, i), c)| {
                    json!({
                        "levels": sel,
                        "f": fs[i].to_string(),
                        "value": c.value,
                        "error": c.error,
                        "xi_max": c.xi_max,
                        "nodes": c.nodes,
                    })
                })
                .collect();
            let mut doc = meta;
            doc["result"] = json!(rows);
            write_json(cfg.output.as_deref(), &doc)
        }
    }
}
