//! Command line and config-file parsing for the `gs-spectral` binary.
//!
//! Flags override config-file keys; unknown config keys are errors. Every
//! default is spelled out in `--help`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::harness::study::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "gs-spectral", version, about = "Spectral Galerkin FEM solver for the 2-D Gray-Scott system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a convergence sweep and write the table as CSV.
    Run(RunArgs),
}

#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// Benchmark problem: 1 (trig exact solution), 2 (manufactured
    /// realistic parameters) or 3 (pattern formation, self-convergence).
    #[arg(long)]
    pub example: Option<u32>,

    /// Spectral order parameter; element degree is q + 1 [default: 2]
    #[arg(long)]
    pub q: Option<usize>,

    /// Comma-separated grid exponents l, cell size 2^-l [default: 2,3,4]
    #[arg(long = "h-exp", value_delimiter = ',')]
    pub h_exp: Option<Vec<u32>>,

    /// Comma-separated step exponents l, sigma = 2^-l [default: 3,4,5,6,7]
    #[arg(long = "sigma-exp", value_delimiter = ',')]
    pub sigma_exp: Option<Vec<u32>>,

    /// Final time override [default: the problem's own horizon]
    #[arg(long = "t-final")]
    pub t_final: Option<f64>,

    /// Reference step exponent for example 3 self-convergence
    #[arg(long = "ref-sigma-exp")]
    pub ref_sigma_exp: Option<u32>,

    /// Output directory for CSV tables and snapshots [default: out]
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Comma-separated times at which to write field snapshots
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<f64>>,

    /// Relative tolerance of the implicit-stage fixed point [default: 1e-12]
    #[arg(long = "fp-tol")]
    pub fp_tol: Option<f64>,

    /// Sweep cap of the implicit-stage fixed point [default: 100]
    #[arg(long = "fp-max-iter")]
    pub fp_max_iter: Option<usize>,

    /// Worker threads for sweep rows [default: all cores]
    #[arg(long)]
    pub threads: Option<usize>,

    /// Optional TOML config file; explicit flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Config-file counterpart of [`RunArgs`]; unknown keys are rejected.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    example: Option<u32>,
    q: Option<usize>,
    h_exp: Option<Vec<u32>>,
    sigma_exp: Option<Vec<u32>>,
    t_final: Option<f64>,
    ref_sigma_exp: Option<u32>,
    out: Option<PathBuf>,
    snapshots: Option<Vec<f64>>,
    fp_tol: Option<f64>,
    fp_max_iter: Option<usize>,
    threads: Option<usize>,
}

/// Merges CLI flags over the optional config file and fills in defaults.
pub fn parse_config(args: RunArgs) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            toml::from_str::<FileConfig>(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    let defaults = RunConfig::default();
    let config = RunConfig {
        example: args
            .example
            .or(file.example)
            .ok_or_else(|| Error::Config("--example is required (1, 2 or 3)".into()))?,
        q: args.q.or(file.q).unwrap_or(defaults.q),
        h_exponents: args
            .h_exp
            .or(file.h_exp)
            .unwrap_or(defaults.h_exponents),
        sigma_exponents: args
            .sigma_exp
            .or(file.sigma_exp)
            .unwrap_or(defaults.sigma_exponents),
        t_final: args.t_final.or(file.t_final),
        ref_sigma_exponent: args.ref_sigma_exp.or(file.ref_sigma_exp),
        out_dir: args.out.or(file.out).unwrap_or(defaults.out_dir),
        snapshot_times: args
            .snapshots
            .or(file.snapshots)
            .unwrap_or(defaults.snapshot_times),
        fp_tol: args.fp_tol.or(file.fp_tol).unwrap_or(defaults.fp_tol),
        fp_max_iter: args
            .fp_max_iter
            .or(file.fp_max_iter)
            .unwrap_or(defaults.fp_max_iter),
        threads: args.threads.or(file.threads),
    };
    config.validate()?;
    Ok(config)
}
