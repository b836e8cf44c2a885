//! Command-line interface.
//!
//! ```text
//! pfla run   --env E1 --eta 0.99 --mc-samples 1000 --reps 10000 --seed 42
//! pfla suite --reps 10000 --seed 42 --format csv --out suite.csv
//! pfla tune  --scheme synthetic --env E5 --ne 750 --repeats 20
//! ```
//!
//! `--env` accepts a benchmark identifier (`E1`..`E9`) or a comma-separated
//! probability list such as `0.9,0.6` for a custom environment. Results go
//! to stdout (or `--out`); all diagnostics go to stderr.

use crate::experiment::{run_experiment, suite_configs, ExperimentConfig, ExperimentReport};
use crate::report::{emit_report, ReportFormat};
use crate::tuner::{
    default_gamma_range, tune_gamma_grid, SyntheticScheme, TuneParams, DEFAULT_BUDGET, DEFAULT_NE,
    DEFAULT_REPEATS,
};
use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use pfla_core::{EnvironmentSpec, RngStream};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "pfla",
    about = "Parameter-free learning automaton benchmark runner",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment on a single environment.
    Run(RunArgs),
    /// Run the full E1..E9 benchmark suite.
    Suite(SuiteArgs),
    /// Tune a resolution-based scheme with the standard search.
    Tune(TuneArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Benchmark id (E1..E9) or comma-separated probabilities.
    #[arg(long)]
    pub env: String,
    /// Convergence threshold.
    #[arg(long, default_value_t = 0.99)]
    pub eta: f64,
    /// Monte Carlo samples per estimate.
    #[arg(long, default_value_t = 1000)]
    pub mc_samples: u32,
    /// Independent replications.
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Per-run iteration cap.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_iter: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    pub format: ReportFormat,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Use the closed-form estimator (two-action environments only).
    #[arg(long)]
    pub exact_two_action: bool,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.99)]
    pub eta: f64,
    #[arg(long, default_value_t = 1000)]
    pub mc_samples: u32,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_iter: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    pub format: ReportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    /// Scheme to tune; only "synthetic" ships with the harness.
    #[arg(long, default_value = "synthetic")]
    pub scheme: String,
    #[arg(long)]
    pub env: String,
    /// Consecutive error-free experiments required.
    #[arg(long, default_value_t = DEFAULT_NE)]
    pub ne: u64,
    /// Search repetitions to average.
    #[arg(long, default_value_t = DEFAULT_REPEATS)]
    pub repeats: u32,
    #[arg(long)]
    pub gamma_min: Option<u32>,
    #[arg(long)]
    pub gamma_max: Option<u32>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Interaction budget for the search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Synthetic scheme: smallest correct resolution.
    #[arg(long, default_value_t = 7)]
    pub n_star: u32,
    /// Synthetic scheme: fastest perturbation value.
    #[arg(long, default_value_t = 3)]
    pub gamma_star: u32,
}

/// Parse `--env`: a benchmark id or a custom probability list.
pub fn parse_env_arg(arg: &str) -> anyhow::Result<EnvironmentSpec> {
    let trimmed = arg.trim();
    if trimmed.to_ascii_uppercase().starts_with('E') && !trimmed.contains(',') {
        return EnvironmentSpec::benchmark(&trimmed.to_ascii_uppercase())
            .with_context(|| format!("invalid environment {arg:?}"));
    }
    let probs: Vec<f64> = trimmed
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid probability {tok:?} in {arg:?}"))
        })
        .collect::<anyhow::Result<_>>()?;
    // Semicolons keep the label a single CSV token.
    let label = format!(
        "custom({})",
        probs
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(";")
    );
    EnvironmentSpec::new(label, probs).context("invalid custom environment")
}

pub fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run(args) => {
            let env = parse_env_arg(&args.env)?;
            let config = ExperimentConfig {
                env,
                eta: args.eta,
                mc_samples: args.mc_samples,
                replications: args.reps,
                seed: args.seed,
                max_iter: args.max_iter,
                exact_two_action: args.exact_two_action,
            };
            eprintln!(
                "running {} x{} (eta={}, N={}, seed={})",
                config.env.label(),
                config.replications,
                config.eta,
                config.mc_samples,
                config.seed
            );
            let report = run_experiment(&config)?;
            log_report(&report);
            emit_report(&[report], args.format, args.out.as_deref())?;
            Ok(())
        }
        Command::Suite(args) => {
            let configs = suite_configs(args.reps, args.seed, args.eta, args.mc_samples, args.max_iter);
            let mut reports: Vec<ExperimentReport> = Vec::with_capacity(configs.len());
            for config in &configs {
                eprintln!(
                    "running {} x{} (eta={}, N={}, seed={})",
                    config.env.label(),
                    config.replications,
                    config.eta,
                    config.mc_samples,
                    config.seed
                );
                let report = run_experiment(config)?;
                log_report(&report);
                reports.push(report);
            }
            emit_report(&reports, args.format, args.out.as_deref())?;
            Ok(())
        }
        Command::Tune(args) => {
            if args.scheme != "synthetic" {
                bail!(
                    "unknown scheme {:?}; available schemes: synthetic",
                    args.scheme
                );
            }
            let env = parse_env_arg(&args.env)?;
            let scheme = SyntheticScheme {
                threshold: args.n_star,
                best_gamma: args.gamma_star,
                ..SyntheticScheme::default()
            };
            let range = match (args.gamma_min, args.gamma_max) {
                (Some(lo), Some(hi)) => lo..=hi,
                (None, None) => default_gamma_range(&env),
                (lo, hi) => {
                    let default = default_gamma_range(&env);
                    lo.unwrap_or(*default.start())..=hi.unwrap_or(*default.end())
                }
            };
            let params = TuneParams {
                ne: args.ne,
                repeats: args.repeats,
                budget: args.budget,
            };
            eprintln!(
                "tuning {} on {} (NE={}, repeats={}, gamma {}..={})",
                args.scheme,
                env.label(),
                params.ne,
                params.repeats,
                range.start(),
                range.end()
            );
            let outcome = tune_gamma_grid(
                &scheme,
                &env,
                range.clone(),
                &params,
                &RngStream::new(args.seed, 0),
            )?;
            let summary = serde_json::json!({
                "scheme": args.scheme,
                "env": env.label(),
                "ne": params.ne,
                "repeats": params.repeats,
                "gamma_min": range.start(),
                "gamma_max": range.end(),
                "best_n": outcome.best_n,
                "best_gamma": outcome.best_gamma,
                "best_mean_iterations": outcome.best_mean_iterations,
                "tuning_interactions": outcome.interactions,
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(())
        }
    }
}

fn log_report(report: &ExperimentReport) {
    eprintln!(
        "  {}: accuracy={:.4} mean_iters={:.1} stddev={:.1} nonconverged={} ({:.1}s)",
        report.env,
        report.accuracy,
        report.mean_iterations,
        report.stddev_iterations,
        report.nonconverged,
        report.wall_time_s
    );
}
