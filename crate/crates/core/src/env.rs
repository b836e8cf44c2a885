//! Stationary P-model Bernoulli environments.
//!
//! An environment is a fixed vector of reward probabilities `C = {c_1..c_r}`,
//! one per action. Pulling action `i` returns a binary feedback that is a
//! reward with probability `c_i`, independently of everything else. Every
//! `c_i` must lie strictly inside `(0, 1)` and there must be at least two
//! actions.
//!
//! The nine standard benchmark instances (`E1`..`E9`) are built in: four
//! two-action and five ten-action environments.

use crate::rng::RngStream;
use thiserror::Error;

/// Binary feedback from a P-model environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feedback {
    Reward,
    Penalty,
}

/// Errors from environment construction or interaction.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum EnvError {
    #[error("reward probability c[{index}] = {value} must lie strictly inside (0, 1)")]
    InvalidProbability { index: usize, value: f64 },
    #[error("environment needs at least 2 actions, got {got}")]
    TooFewActions { got: usize },
    #[error("unknown benchmark environment {id:?}; valid identifiers are E1..E9")]
    UnknownBenchmark { id: String },
    #[error("action index {action} out of range for {arity}-action environment")]
    ActionOutOfRange { action: usize, arity: usize },
}

/// The nine benchmark reward-probability vectors.
const BENCHMARKS: [(&str, &[f64]); 9] = [
    ("E1", &[0.90, 0.60]),
    ("E2", &[0.80, 0.50]),
    ("E3", &[0.80, 0.60]),
    ("E4", &[0.20, 0.50]),
    (
        "E5",
        &[0.65, 0.50, 0.45, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10],
    ),
    (
        "E6",
        &[0.60, 0.50, 0.45, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10],
    ),
    (
        "E7",
        &[0.55, 0.50, 0.45, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10],
    ),
    (
        "E8",
        &[0.70, 0.50, 0.30, 0.20, 0.40, 0.50, 0.40, 0.30, 0.50, 0.20],
    ),
    (
        "E9",
        &[0.10, 0.45, 0.84, 0.76, 0.20, 0.40, 0.60, 0.70, 0.50, 0.30],
    ),
];

/// A stationary P-model environment: reward probabilities plus a label.
///
/// Immutable once constructed; freely shareable across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentSpec {
    reward_probs: Vec<f64>,
    label: String,
}

impl EnvironmentSpec {
    /// Validate and build an environment from a reward-probability vector.
    pub fn new(label: impl Into<String>, reward_probs: Vec<f64>) -> Result<Self, EnvError> {
        if reward_probs.len() < 2 {
            return Err(EnvError::TooFewActions {
                got: reward_probs.len(),
            });
        }
        for (index, &value) in reward_probs.iter().enumerate() {
            if !(value > 0.0 && value < 1.0) {
                return Err(EnvError::InvalidProbability { index, value });
            }
        }
        Ok(EnvironmentSpec {
            reward_probs,
            label: label.into(),
        })
    }

    /// One of the nine standard benchmark environments, `"E1"`..`"E9"`.
    pub fn benchmark(id: &str) -> Result<Self, EnvError> {
        BENCHMARKS
            .iter()
            .find(|(label, _)| *label == id)
            .map(|(label, probs)| EnvironmentSpec {
                reward_probs: probs.to_vec(),
                label: (*label).to_string(),
            })
            .ok_or_else(|| EnvError::UnknownBenchmark { id: id.to_string() })
    }

    /// Benchmark identifiers in suite order.
    pub fn benchmark_ids() -> impl Iterator<Item = &'static str> {
        BENCHMARKS.iter().map(|(label, _)| *label)
    }

    /// All nine benchmark environments in suite order.
    pub fn all_benchmarks() -> Vec<Self> {
        Self::benchmark_ids()
            .map(|id| Self::benchmark(id).expect("built-in benchmark"))
            .collect()
    }

    /// Number of actions `r`.
    pub fn arity(&self) -> usize {
        self.reward_probs.len()
    }

    pub fn reward_probs(&self) -> &[f64] {
        &self.reward_probs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// One interaction: reward with probability `c_action`.
    ///
    /// Advances `rng` deterministically; identical streams replay identical
    /// feedback sequences.
    pub fn pull(&self, action: usize, rng: &mut RngStream) -> Result<Feedback, EnvError> {
        let c = *self
            .reward_probs
            .get(action)
            .ok_or(EnvError::ActionOutOfRange {
                action,
                arity: self.arity(),
            })?;
        Ok(if rng.uniform() < c {
            Feedback::Reward
        } else {
            Feedback::Penalty
        })
    }

    /// Indices attaining the maximum reward probability.
    ///
    /// The benchmarks all have a unique maximum; custom environments may tie,
    /// in which case a run converging to any member of the set counts as
    /// correct.
    pub fn optimal_actions(&self) -> Vec<usize> {
        let max = self
            .reward_probs
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        self.reward_probs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == max)
            .map(|(i, _)| i)
            .collect()
    }

    /// Whether `action` attains the maximum reward probability.
    pub fn is_optimal(&self, action: usize) -> bool {
        self.optimal_actions().contains(&action)
    }
}
