//! The learning automaton engine.
//!
//! One run proceeds in iterations. Each iteration re-estimates the
//! hypothesis probabilities from scratch with a fresh Monte Carlo draw,
//! identifies the two most probably optimal actions, plays whichever of the
//! two has been observed less, and folds the binary feedback into that
//! action's posterior. The run stops as soon as some estimate exceeds the
//! threshold η; the automaton judges its own convergence, so nothing needs
//! tuning per environment.
//!
//! Randomness is split into three lanes per run (Monte Carlo sampling, tie
//! breaking, environment feedback), so changing the Monte Carlo sample count
//! never perturbs the feedback sequence.
//!
//! The convergence check runs right after each estimation, before the pull:
//! a pre-satisfied threshold therefore terminates without a wasted
//! interaction, and `iterations` counts exactly the environment pulls made.

use crate::beta::BetaPosterior;
use crate::env::{EnvError, EnvironmentSpec, Feedback};
use crate::exact;
use crate::mc::{self, HypothesisProbs, McError};
use crate::rng::RngStream;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PflaError {
    #[error("automaton needs at least 2 actions, got {got}")]
    TooFewActions { got: usize },
    #[error("threshold eta must lie strictly inside (0, 1), got {eta}")]
    InvalidEta { eta: f64 },
    #[error("max_iter must be at least 1")]
    InvalidMaxIter,
    #[error("the exact two-action estimator requires exactly 2 actions, got {got}")]
    ExactRequiresTwoActions { got: usize },
    #[error(transparent)]
    Estimate(#[from] McError),
    #[error(transparent)]
    Env(#[from] EnvError),
}

/// Per-run randomness lanes.
#[derive(Debug, Clone)]
pub struct RunRngs {
    /// Monte Carlo posterior sampling.
    pub mc: RngStream,
    /// Random choices among tied actions.
    pub tie: RngStream,
    /// Environment feedback.
    pub env: RngStream,
}

impl RunRngs {
    pub fn from_stream(stream: &RngStream) -> Self {
        RunRngs {
            mc: stream.substream(1),
            tie: stream.substream(2),
            env: stream.substream(3),
        }
    }
}

/// Mutable state of one automaton run.
#[derive(Debug, Clone)]
pub struct PflaState {
    posteriors: Vec<BetaPosterior>,
    t: u64,
    last_probs: Option<HypothesisProbs>,
}

impl PflaState {
    /// Fresh state over `r` actions: every posterior starts at the
    /// optimistic prior Beta(2, 1) and no interactions have happened.
    pub fn init(r: usize) -> Result<Self, PflaError> {
        if r < 2 {
            return Err(PflaError::TooFewActions { got: r });
        }
        Ok(PflaState {
            posteriors: vec![BetaPosterior::optimistic(); r],
            t: 0,
            last_probs: None,
        })
    }

    pub fn posteriors(&self) -> &[BetaPosterior] {
        &self.posteriors
    }

    /// Environment interactions so far.
    pub fn t(&self) -> u64 {
        self.t
    }

    /// Most recent Monte Carlo estimate, if one has been computed.
    pub fn last_probs(&self) -> Option<&HypothesisProbs> {
        self.last_probs.as_ref()
    }

    /// Per-action selection counts; they always sum to `t`.
    pub fn selection_counts(&self) -> Vec<u64> {
        self.posteriors.iter().map(|p| p.selections()).collect()
    }
}

/// Of the two candidates, the one observed less; ties flip a fair coin.
fn pick_less_sampled(
    posteriors: &[BetaPosterior],
    i1: usize,
    i2: usize,
    rng: &mut RngStream,
) -> usize {
    let s1 = posteriors[i1].selections();
    let s2 = posteriors[i2].selections();
    if s1 < s2 {
        i1
    } else if s2 < s1 {
        i2
    } else if rng.uniform() < 0.5 {
        i1
    } else {
        i2
    }
}

/// Select the next action: take the two actions with the top two estimates
/// (resolving ties at the maximum by a random pair among the tied set, and
/// ties for second place at random among the tied) and play whichever of
/// the two has the smaller selection count.
pub fn select_action(
    probs: &HypothesisProbs,
    posteriors: &[BetaPosterior],
    rng: &mut RngStream,
) -> usize {
    debug_assert_eq!(probs.len(), posteriors.len());
    let top = probs.argmax_set();
    let (i1, i2) = if top.len() >= 2 {
        // Two distinct picks from the tied maximum set.
        let a = rng.index(top.len());
        let mut b = rng.index(top.len() - 1);
        if b >= a {
            b += 1;
        }
        (top[a], top[b])
    } else {
        let first = top[0];
        let counts = probs.counts();
        let second_best = counts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != first)
            .map(|(_, &c)| c)
            .max()
            .expect("at least two actions");
        let seconds: Vec<usize> = counts
            .iter()
            .enumerate()
            .filter(|&(i, &c)| i != first && c == second_best)
            .map(|(i, _)| i)
            .collect();
        let pick = if seconds.len() == 1 {
            seconds[0]
        } else {
            seconds[rng.index(seconds.len())]
        };
        (first, pick)
    };
    pick_less_sampled(posteriors, i1, i2, rng)
}

/// One full iteration: estimate, select, pull, update.
///
/// `pull` is the environment handle; it receives the chosen action and the
/// feedback lane. Exactly one posterior changes, by exactly one count, and
/// `t` advances by one.
pub fn step<F>(
    state: &mut PflaState,
    pull: F,
    mc_samples: u32,
    rngs: &mut RunRngs,
) -> Result<(), PflaError>
where
    F: FnOnce(usize, &mut RngStream) -> Result<Feedback, EnvError>,
{
    let probs = mc::estimate_hypothesis_probs(&state.posteriors, mc_samples, &mut rngs.mc)?;
    let action = select_action(&probs, &state.posteriors, &mut rngs.tie);
    state.last_probs = Some(probs);
    let feedback = pull(action, &mut rngs.env)?;
    state.posteriors[action].update(feedback);
    state.t += 1;
    Ok(())
}

/// Parameters of a run. The defaults (η = 0.99, N = 1000) are the single
/// configuration used across every benchmark environment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Convergence threshold η in (0, 1).
    pub eta: f64,
    /// Monte Carlo replications N per estimate.
    pub mc_samples: u32,
    /// Safety cap on interactions; exhausting it flags the run as
    /// nonconverged instead of hanging.
    pub max_iter: u64,
    /// Replace the Monte Carlo estimator with the closed form (two-action
    /// environments only).
    pub exact_two_action: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            eta: 0.99,
            mc_samples: 1000,
            max_iter: 1_000_000,
            exact_two_action: false,
        }
    }
}

impl RunConfig {
    fn validate(&self, arity: usize) -> Result<(), PflaError> {
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(PflaError::InvalidEta { eta: self.eta });
        }
        if self.mc_samples == 0 {
            return Err(PflaError::Estimate(McError::ZeroSamples));
        }
        if self.max_iter == 0 {
            return Err(PflaError::InvalidMaxIter);
        }
        if self.exact_two_action && arity != 2 {
            return Err(PflaError::ExactRequiresTwoActions { got: arity });
        }
        Ok(())
    }
}

/// Outcome of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOutcome {
    /// Action the automaton settled on (argmax of the final estimate).
    pub converged_action: usize,
    /// Environment interactions performed.
    pub iterations: u64,
    /// Whether the threshold was crossed before `max_iter` ran out.
    pub converged: bool,
    /// The final maximum hypothesis probability.
    pub terminal_max_prob: f64,
}

/// Run the automaton on `env` until some hypothesis estimate exceeds η or
/// `max_iter` interactions have been spent.
pub fn run(
    env: &EnvironmentSpec,
    config: &RunConfig,
    stream: &RngStream,
) -> Result<RunOutcome, PflaError> {
    config.validate(env.arity())?;
    let mut rngs = RunRngs::from_stream(stream);
    let mut state = PflaState::init(env.arity())?;

    loop {
        let (argmax, max_prob) = if config.exact_two_action {
            let p =
                exact::prob_first_beats_second(&state.posteriors[0], &state.posteriors[1]).value;
            if p >= 0.5 {
                (0, p)
            } else {
                (1, 1.0 - p)
            }
        } else {
            let probs =
                mc::estimate_hypothesis_probs(&state.posteriors, config.mc_samples, &mut rngs.mc)?;
            let m = probs.max();
            state.last_probs = Some(probs);
            m
        };

        if max_prob > config.eta {
            return Ok(RunOutcome {
                converged_action: argmax,
                iterations: state.t,
                converged: true,
                terminal_max_prob: max_prob,
            });
        }
        if state.t >= config.max_iter {
            return Ok(RunOutcome {
                converged_action: argmax,
                iterations: state.t,
                converged: false,
                terminal_max_prob: max_prob,
            });
        }

        let action = if config.exact_two_action {
            pick_less_sampled(&state.posteriors, 0, 1, &mut rngs.tie)
        } else {
            select_action(
                state.last_probs.as_ref().expect("estimated this iteration"),
                &state.posteriors,
                &mut rngs.tie,
            )
        };
        let feedback = env.pull(action, &mut rngs.env)?;
        state.posteriors[action].update(feedback);
        state.t += 1;
    }
}
