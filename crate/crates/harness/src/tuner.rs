//! The standard parameter-tuning procedure for resolution-based schemes.
//!
//! Classical automata carry a resolution parameter `n` (and stochastic
//! estimator variants a perturbation parameter `γ`) that must be tuned per
//! environment. The standard search starts `n` at 1, bumps it by one on
//! every wrong convergence, and accepts the current `n` once `NE`
//! consecutive error-free experiments have been observed. The whole search
//! repeats (20 times by default) and the best values are averaged. For
//! `(n, γ)` pairs, the search runs once per `γ` in a grid, each resulting
//! pair's convergence speed is evaluated on fresh replications, and the
//! fastest pair wins.
//!
//! Every environment interaction consumed anywhere in the search counts
//! toward the reported tuning cost, which is the cost a self-judging
//! automaton avoids entirely.
//!
//! The PFLA engine has no resolution parameter, so the only bundled
//! [`TunableScheme`] is a synthetic one used to exercise the tuner itself.

use pfla_core::{EnvError, EnvironmentSpec, RngStream, RunOutcome};
use thiserror::Error;

/// Consecutive error-free experiments required to accept a resolution.
pub const DEFAULT_NE: u64 = 750;
/// Independent repetitions of the search to average over.
pub const DEFAULT_REPEATS: u32 = 20;
/// Cap on total environment interactions during a search.
pub const DEFAULT_BUDGET: u64 = 10_000_000_000;
/// Replications used to evaluate the speed of one (n, γ) pair.
pub const SPEED_EVAL_REPLICATIONS: u64 = 1000;

/// A scheme whose behavior is governed by a resolution parameter and an
/// optional perturbation parameter. Any `n >= 1` must be accepted.
pub trait TunableScheme {
    fn run(
        &self,
        env: &EnvironmentSpec,
        resolution: u32,
        gamma: Option<u32>,
        rng: &mut RngStream,
    ) -> Result<RunOutcome, EnvError>;
}

/// Deterministic test scheme: converges correctly iff `n >= threshold`,
/// with an iteration cost minimized at `gamma = best_gamma`.
#[derive(Debug, Clone)]
pub struct SyntheticScheme {
    /// Smallest resolution that converges correctly.
    pub threshold: u32,
    /// Perturbation value at which the scheme is fastest.
    pub best_gamma: u32,
    /// Iterations at the optimum.
    pub base_iterations: u64,
    /// Extra iterations per unit of |γ − best_gamma|.
    pub gamma_penalty: u64,
    /// Extra iterations per unit of resolution.
    pub resolution_cost: u64,
}

impl Default for SyntheticScheme {
    fn default() -> Self {
        SyntheticScheme {
            threshold: 7,
            best_gamma: 3,
            base_iterations: 40,
            gamma_penalty: 5,
            resolution_cost: 2,
        }
    }
}

impl SyntheticScheme {
    /// Iterations one run consumes at the given parameters.
    pub fn iterations(&self, resolution: u32, gamma: Option<u32>) -> u64 {
        let gamma_term = gamma
            .map(|g| self.gamma_penalty * (g as i64 - self.best_gamma as i64).unsigned_abs())
            .unwrap_or(0);
        self.base_iterations + self.resolution_cost * resolution as u64 + gamma_term
    }
}

impl TunableScheme for SyntheticScheme {
    fn run(
        &self,
        env: &EnvironmentSpec,
        resolution: u32,
        gamma: Option<u32>,
        rng: &mut RngStream,
    ) -> Result<RunOutcome, EnvError> {
        let iterations = self.iterations(resolution, gamma);
        // Consume real environment interactions so cost accounting is honest.
        let optimal = env.optimal_actions()[0];
        let mut action = optimal;
        for _ in 0..iterations {
            env.pull(action, rng)?;
            action = (action + 1) % env.arity();
        }
        let converged_action = if resolution >= self.threshold {
            optimal
        } else {
            (optimal + 1) % env.arity()
        };
        Ok(RunOutcome {
            converged_action,
            iterations,
            converged: true,
            terminal_max_prob: 1.0,
        })
    }
}

/// Search parameters; defaults follow the standard procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneParams {
    /// Consecutive error-free experiments required.
    pub ne: u64,
    /// Times the search is repeated and averaged.
    pub repeats: u32,
    /// Interaction budget across the whole search.
    pub budget: u64,
}

impl Default for TuneParams {
    fn default() -> Self {
        TuneParams {
            ne: DEFAULT_NE,
            repeats: DEFAULT_REPEATS,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Result of a resolution search.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneOutcome {
    /// Best resolution averaged over repeats.
    pub mean_best_n: f64,
    /// Best resolution found by each repeat.
    pub best_n_per_repeat: Vec<u32>,
    /// Environment interactions consumed by the search.
    pub interactions: u64,
}

/// Result of a full (n, γ) grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOutcome {
    pub best_n: u32,
    pub best_gamma: u32,
    /// Mean iterations of the winning pair in the evaluation phase.
    pub best_mean_iterations: f64,
    /// Total interactions across tuning and evaluation.
    pub interactions: u64,
    /// (γ, tuned n, evaluated mean iterations) per grid point.
    pub per_gamma: Vec<(u32, u32, f64)>,
}

#[derive(Debug, Error)]
pub enum TuneError {
    #[error("interaction budget of {budget} exhausted before {ne} consecutive successes")]
    BudgetExceeded {
        budget: u64,
        ne: u64,
        partial: TuneOutcome,
    },
    #[error("gamma range is empty")]
    EmptyGammaRange,
    #[error(transparent)]
    Env(#[from] EnvError),
}

/// The resolution search: `n` starts at 1 and increments on every wrong
/// convergence; a repeat finishes after `ne` consecutive error-free
/// experiments at the current `n`. A wrong convergence restarts the
/// success counter but never the accumulated interaction cost.
pub fn tune_resolution(
    scheme: &dyn TunableScheme,
    env: &EnvironmentSpec,
    gamma: Option<u32>,
    params: &TuneParams,
    rng: &RngStream,
) -> Result<TuneOutcome, TuneError> {
    let mut interactions = 0u64;
    let mut best_n_per_repeat = Vec::with_capacity(params.repeats as usize);

    for repeat in 0..params.repeats {
        let mut run_rng = rng.substream(repeat as u64);
        let mut n = 1u32;
        let mut streak = 0u64;
        while streak < params.ne {
            let outcome = scheme.run(env, n, gamma, &mut run_rng)?;
            interactions += outcome.iterations;
            if interactions > params.budget {
                let achieved = best_n_per_repeat.clone();
                return Err(TuneError::BudgetExceeded {
                    budget: params.budget,
                    ne: params.ne,
                    partial: TuneOutcome {
                        mean_best_n: mean_of(&achieved),
                        best_n_per_repeat: achieved,
                        interactions,
                    },
                });
            }
            let correct = outcome.converged && env.is_optimal(outcome.converged_action);
            if correct {
                streak += 1;
            } else {
                n += 1;
                streak = 0;
            }
        }
        best_n_per_repeat.push(n);
    }

    Ok(TuneOutcome {
        mean_best_n: mean_of(&best_n_per_repeat),
        best_n_per_repeat,
        interactions,
    })
}

fn mean_of(values: &[u32]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().map(|&v| v as f64).sum::<f64>() / values.len() as f64
}

/// Grid search over γ: tune the resolution for each γ, evaluate every
/// resulting (n, γ) pair on fresh replications, and return the fastest.
pub fn tune_gamma_grid(
    scheme: &dyn TunableScheme,
    env: &EnvironmentSpec,
    gamma_range: std::ops::RangeInclusive<u32>,
    params: &TuneParams,
    rng: &RngStream,
) -> Result<GridOutcome, TuneError> {
    if gamma_range.is_empty() {
        return Err(TuneError::EmptyGammaRange);
    }
    let mut interactions = 0u64;
    let mut per_gamma = Vec::new();
    let mut best: Option<(u32, u32, f64)> = None;

    for gamma in gamma_range {
        let tuned = tune_resolution(
            scheme,
            env,
            Some(gamma),
            params,
            &rng.substream(2 * gamma as u64),
        )
        .map_err(|e| bump_partial_cost(e, interactions))?;
        interactions += tuned.interactions;
        let n = (tuned.mean_best_n.round() as u32).max(1);

        // Speed evaluation on fresh replications.
        let mut eval_rng = rng.substream(2 * gamma as u64 + 1);
        let mut correct_runs = 0u64;
        let mut iter_sum = 0u64;
        for _ in 0..SPEED_EVAL_REPLICATIONS {
            let outcome = scheme.run(env, n, Some(gamma), &mut eval_rng)?;
            interactions += outcome.iterations;
            if outcome.converged && env.is_optimal(outcome.converged_action) {
                correct_runs += 1;
                iter_sum += outcome.iterations;
            }
        }
        let mean_iters = if correct_runs > 0 {
            iter_sum as f64 / correct_runs as f64
        } else {
            f64::INFINITY
        };
        per_gamma.push((gamma, n, mean_iters));
        if best.is_none_or(|(_, _, m)| mean_iters < m) {
            best = Some((n, gamma, mean_iters));
        }
    }

    let (best_n, best_gamma, best_mean_iterations) = best.expect("nonempty grid");
    Ok(GridOutcome {
        best_n,
        best_gamma,
        best_mean_iterations,
        interactions,
        per_gamma,
    })
}

fn bump_partial_cost(err: TuneError, already_spent: u64) -> TuneError {
    match err {
        TuneError::BudgetExceeded {
            budget,
            ne,
            mut partial,
        } => {
            partial.interactions += already_spent;
            TuneError::BudgetExceeded {
                budget,
                ne,
                partial,
            }
        }
        other => other,
    }
}

/// The standard γ search range for an environment: 1..=10 for two-action
/// environments, 1..=30 for the hardest benchmark `E7`, 1..=20 otherwise.
pub fn default_gamma_range(env: &EnvironmentSpec) -> std::ops::RangeInclusive<u32> {
    if env.label() == "E7" {
        1..=30
    } else if env.arity() == 2 {
        1..=10
    } else {
        1..=20
    }
}
