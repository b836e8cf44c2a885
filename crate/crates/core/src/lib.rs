//! A parameter-free learning automaton (PFLA) for stationary P-model
//! Bernoulli environments.
//!
//! The automaton keeps one integer-count beta posterior per action and
//! explicitly estimates, every iteration, the probability of each hypothesis
//! "action i is optimal". It plays the less-observed of the two most
//! probably optimal actions and stops on its own once some hypothesis
//! probability exceeds a threshold η. A single configuration (η = 0.99,
//! N = 1000 Monte Carlo replications) works across environments, so there
//! is no per-environment parameter tuning.
//!
//! Crate layout:
//!
//! - [`env`]: stationary Bernoulli environments and the `E1`..`E9`
//!   benchmark instances.
//! - [`beta`]: integer-count beta posteriors, log-beta and incomplete-beta
//!   special functions, beta sampling.
//! - [`exact`]: closed-form Pr(e₁ > e₂) for two actions, with the
//!   recurrence identities behind the exploration rule.
//! - [`mc`]: Monte Carlo estimation of the hypothesis probabilities for
//!   any number of actions.
//! - [`engine`]: the automaton itself: optimistic initialization, top-two /
//!   least-sampled selection, self-judged termination.
//! - [`rng`]: seeded, splittable random streams for reproducible
//!   replications.

pub mod beta;
pub mod engine;
pub mod env;
pub mod exact;
pub mod mc;
pub mod rng;

pub use beta::{log_beta, BetaError, BetaPosterior};
pub use engine::{
    run, select_action, step, PflaError, PflaState, RunConfig, RunOutcome, RunRngs,
};
pub use env::{EnvError, EnvironmentSpec, Feedback};
pub use exact::{
    h_factor, prob_first_beats_second, prob_first_beats_second_forms, recurrence_check,
    ExactProbResult, RecurrenceCheck,
};
pub use mc::{estimate_hypothesis_probs, HypothesisProbs, McError};
pub use rng::RngStream;
