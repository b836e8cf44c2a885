//! Replicated experiments and their aggregate statistics.
//!
//! One experiment runs many independent automaton replications on disjoint
//! rng streams (stream id = replication index) and aggregates:
//!
//! - accuracy: the fraction of replications that converged to an optimal
//!   action of the environment;
//! - mean and standard deviation of the iteration count, over correctly
//!   converged runs only;
//! - the number of replications that hit the iteration cap.
//!
//! Aggregation uses exact integer sums, so running replications serially or
//! in parallel produces bit-identical reports (wall time aside).

use pfla_core::{run, EnvironmentSpec, PflaError, RngStream, RunConfig, RunOutcome};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("replications must be at least 1")]
    NoReplications,
    #[error("relative improvement needs a positive baseline iteration count, got {got}")]
    NonPositiveBaseline { got: f64 },
    #[error(transparent)]
    Run(#[from] PflaError),
}

/// Everything needed to reproduce one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub env: EnvironmentSpec,
    /// Convergence threshold η.
    pub eta: f64,
    /// Monte Carlo replications per estimate.
    pub mc_samples: u32,
    /// Independent automaton runs.
    pub replications: u64,
    /// Base seed; replication i uses stream (seed, i).
    pub seed: u64,
    /// Per-run iteration cap.
    pub max_iter: u64,
    /// Use the closed-form estimator (two-action environments only).
    pub exact_two_action: bool,
}

impl ExperimentConfig {
    /// Standard configuration: η = 0.99, N = 1000, 10,000 replications,
    /// cap 10⁶.
    pub fn new(env: EnvironmentSpec) -> Self {
        ExperimentConfig {
            env,
            eta: 0.99,
            mc_samples: 1000,
            replications: 10_000,
            seed: 42,
            max_iter: 1_000_000,
            exact_two_action: false,
        }
    }

    fn run_config(&self) -> RunConfig {
        RunConfig {
            eta: self.eta,
            mc_samples: self.mc_samples,
            max_iter: self.max_iter,
            exact_two_action: self.exact_two_action,
        }
    }
}

/// Aggregate over one experiment, one row of the suite report.
///
/// Serialized field names double as the CSV column names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub env: String,
    pub eta: f64,
    pub n_mc: u32,
    pub replications: u64,
    pub seed: u64,
    pub accuracy: f64,
    pub mean_iterations: f64,
    pub stddev_iterations: f64,
    pub nonconverged: u64,
    pub wall_time_s: f64,
}

/// Order-independent tallies; exact integers so merge order cannot matter.
#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    correct: u64,
    nonconverged: u64,
    iter_sum: u128,
    iter_sq_sum: u128,
}

impl Tally {
    fn absorb(&mut self, outcome: &RunOutcome, correct: bool) {
        if !outcome.converged {
            self.nonconverged += 1;
        }
        if correct {
            self.correct += 1;
            self.iter_sum += outcome.iterations as u128;
            self.iter_sq_sum += (outcome.iterations as u128) * (outcome.iterations as u128);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.correct += other.correct;
        self.nonconverged += other.nonconverged;
        self.iter_sum += other.iter_sum;
        self.iter_sq_sum += other.iter_sq_sum;
        self
    }

    fn into_report(self, config: &ExperimentConfig, wall_time_s: f64) -> ExperimentReport {
        let k = self.correct as f64;
        let mean = if self.correct > 0 {
            self.iter_sum as f64 / k
        } else {
            0.0
        };
        let stddev = if self.correct > 1 {
            let sum = self.iter_sum as f64;
            let sq = self.iter_sq_sum as f64;
            ((sq - sum * sum / k).max(0.0) / (k - 1.0)).sqrt()
        } else {
            0.0
        };
        ExperimentReport {
            env: config.env.label().to_string(),
            eta: config.eta,
            n_mc: config.mc_samples,
            replications: config.replications,
            seed: config.seed,
            accuracy: self.correct as f64 / config.replications as f64,
            mean_iterations: mean,
            stddev_iterations: stddev,
            nonconverged: self.nonconverged,
            wall_time_s,
        }
    }
}

fn one_replication(config: &ExperimentConfig, rep: u64) -> Result<(RunOutcome, bool), HarnessError> {
    let stream = RngStream::new(config.seed, rep);
    let outcome = run(&config.env, &config.run_config(), &stream)?;
    let correct = outcome.converged && config.env.is_optimal(outcome.converged_action);
    Ok((outcome, correct))
}

/// Run all replications in parallel and aggregate.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    if config.replications == 0 {
        return Err(HarnessError::NoReplications);
    }
    let start = Instant::now();
    let tally = (0..config.replications)
        .into_par_iter()
        .try_fold(Tally::default, |mut tally, rep| {
            let (outcome, correct) = one_replication(config, rep)?;
            tally.absorb(&outcome, correct);
            Ok::<Tally, HarnessError>(tally)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    Ok(tally.into_report(config, start.elapsed().as_secs_f64()))
}

/// Serial reference path; aggregates identically to [`run_experiment`].
pub fn run_experiment_serial(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    if config.replications == 0 {
        return Err(HarnessError::NoReplications);
    }
    let start = Instant::now();
    let mut tally = Tally::default();
    for rep in 0..config.replications {
        let (outcome, correct) = one_replication(config, rep)?;
        tally.absorb(&outcome, correct);
    }
    Ok(tally.into_report(config, start.elapsed().as_secs_f64()))
}

/// Configurations for the full `E1`..`E9` benchmark suite, in order.
pub fn suite_configs(
    replications: u64,
    seed: u64,
    eta: f64,
    mc_samples: u32,
    max_iter: u64,
) -> Vec<ExperimentConfig> {
    EnvironmentSpec::all_benchmarks()
        .into_iter()
        .map(|env| ExperimentConfig {
            env,
            eta,
            mc_samples,
            replications,
            seed,
            max_iter,
            exact_two_action: false,
        })
        .collect()
}

/// Signed fractional speed difference (pfla − other) / pfla.
///
/// Positive when the comparison converges faster than the automaton.
pub fn relative_improvement(iters_pfla: f64, iters_other: f64) -> Result<f64, HarnessError> {
    if iters_pfla.is_nan() || iters_pfla <= 0.0 {
        return Err(HarnessError::NonPositiveBaseline { got: iters_pfla });
    }
    Ok((iters_pfla - iters_other) / iters_pfla)
}
