//! `lle verify`: randomized identity suites.

use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use lle_core::identities::{run_suite, Suite};

use super::usage;
use crate::output::{metadata, write_json};
use crate::{config, CliError, Context};

fn suite_spec(s: &str) -> Result<String, String> {
    Suite::parse_selection(s)
        .map(|_| s.to_string())
        .map_err(|e| e.to_string())
}

#[derive(Args, Serialize)]
pub struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, value_parser = suite_spec)]
    suite: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random cases per suite.
    #[arg(long)]
    cases: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "all")]
    pub suite: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_cases")]
    pub cases: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn all() -> String {
    "all".into()
}

fn default_cases() -> usize {
    1000
}

pub fn run(ctx: &Context, args: VerifyArgs) -> Result<(), CliError> {
    let cfg: VerifyConfig = config::resolve(ctx, &args, |_| Ok(()))?;
    let suites = Suite::parse_selection(&cfg.suite).map_err(|e| usage(e.to_string()))?;
    if cfg.cases == 0 {
        return Err(usage("cases must be positive"));
    }
    let reports: Vec<_> = suites
        .iter()
        .map(|&s| run_suite(s, cfg.cases, cfg.seed))
        .collect();
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.identity.as_str())
        .collect();
    let mut doc = metadata(ctx, "verify", &cfg);
    doc["result"] = json!({ "passed": failed.is_empty(), "reports": reports });
    write_json(cfg.output.as_deref(), &doc)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(failed.join(", ")))
    }
}
