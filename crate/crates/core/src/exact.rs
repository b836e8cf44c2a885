//! Closed-form Pr(e₁ > e₂) for two beta posteriors.
//!
//! For integer-parameter posteriors e₁ ~ Beta(α₁, β₁) and e₂ ~ Beta(α₂, β₂),
//! the probability g(α₁,β₁,α₂,β₂) = Pr(e₁ > e₂) has four equivalent finite
//! sums, with α₁, β₂, α₂ and β₁ terms respectively:
//!
//! ```text
//! g =     Σ_{i<α₁} B(α₂+i, β₁+β₂) / ((β₁+i) B(1+i, β₁) B(α₂, β₂))
//!   =     Σ_{i<β₂} B(β₁+i, α₁+α₂) / ((α₂+i) B(1+i, α₂) B(α₁, β₁))
//!   = 1 − Σ_{i<α₂} B(α₁+i, β₁+β₂) / ((β₂+i) B(1+i, β₂) B(α₁, β₁))
//!   = 1 − Σ_{i<β₁} B(β₂+i, α₁+α₂) / ((α₁+i) B(1+i, α₁) B(α₂, β₂))
//! ```
//!
//! Evaluation picks whichever form needs the fewest terms, so the cost is
//! O(min(α₁, α₂, β₁, β₂)). Terms are computed in log space and accumulated
//! with a running max shift; counts grow into the thousands during long runs
//! and the raw beta values would underflow.
//!
//! The one-step recurrences in each parameter share the factor
//! h = B(α₁+α₂, β₁+β₂) / (B(α₁,β₁) B(α₂,β₂)):
//!
//! ```text
//! g(α₁+1, ·) = g + h/α₁      g(·, β₁+1) = g − h/β₁
//! g(α₂+1, ·) = g − h/α₂      g(·, β₂+1) = g + h/β₂
//! ```
//!
//! which is what makes the "pick the less-sampled of the top two" exploration
//! rule drop out of the maximum-possible-increment objective.

use crate::beta::{log_beta, BetaPosterior};

/// Tolerance for the recurrence identity checks.
pub const RECURRENCE_TOLERANCE: f64 = 1e-9;

/// Result of a closed-form evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactProbResult {
    /// Pr(e₁ > e₂), clamped to [0, 1].
    pub value: f64,
    /// Terms in the sum that was evaluated: min(α₁, α₂, β₁, β₂).
    pub terms_summed: u64,
}

/// The base finite sum with `a1` terms:
/// Σ_{i=0}^{a1−1} B(a2+i, b1+b2) / ((b1+i) B(1+i, b1) B(a2, b2)).
///
/// The other three forms are this sum under parameter swaps.
fn base_sum(a1: u64, b1: u64, a2: u64, b2: u64) -> f64 {
    let (b1f, a2f, b2f) = (b1 as f64, a2 as f64, b2 as f64);
    let lb_a2b2 = log_beta(a2f, b2f).expect("positive counts");
    let mut max_log = f64::NEG_INFINITY;
    let mut acc = 0.0;
    for i in 0..a1 {
        let i = i as f64;
        let log_term = log_beta(a2f + i, b1f + b2f).expect("positive counts")
            - (b1f + i).ln()
            - log_beta(1.0 + i, b1f).expect("positive counts")
            - lb_a2b2;
        if log_term <= max_log {
            acc += (log_term - max_log).exp();
        } else {
            acc = acc * (max_log - log_term).exp() + 1.0;
            max_log = log_term;
        }
    }
    acc * max_log.exp()
}

/// All four equivalent closed forms of Pr(e₁ > e₂), in the order
/// [α₁-term, β₂-term, α₂-term, β₁-term].
pub fn prob_first_beats_second_forms(p1: &BetaPosterior, p2: &BetaPosterior) -> [f64; 4] {
    let (a1, b1) = (p1.alpha(), p1.beta());
    let (a2, b2) = (p2.alpha(), p2.beta());
    [
        base_sum(a1, b1, a2, b2),
        base_sum(b2, a2, b1, a1),
        1.0 - base_sum(a2, b2, a1, b1),
        1.0 - base_sum(b1, a1, b2, a2),
    ]
}

/// Pr(e₁ > e₂) by the cheapest of the four sums.
///
/// Ties in term count resolve in the fixed order [α₁, β₂, α₂, β₁].
pub fn prob_first_beats_second(p1: &BetaPosterior, p2: &BetaPosterior) -> ExactProbResult {
    let (a1, b1) = (p1.alpha(), p1.beta());
    let (a2, b2) = (p2.alpha(), p2.beta());
    let term_counts = [a1, b2, a2, b1];
    let pick = term_counts
        .iter()
        .enumerate()
        .min_by_key(|(_, &n)| n)
        .map(|(i, _)| i)
        .expect("nonempty");
    let value = match pick {
        0 => base_sum(a1, b1, a2, b2),
        1 => base_sum(b2, a2, b1, a1),
        2 => 1.0 - base_sum(a2, b2, a1, b1),
        _ => 1.0 - base_sum(b1, a1, b2, a2),
    };
    ExactProbResult {
        value: value.clamp(0.0, 1.0),
        terms_summed: term_counts[pick],
    }
}

/// The shared recurrence factor
/// h = B(α₁+α₂, β₁+β₂) / (B(α₁,β₁) B(α₂,β₂)), always finite and positive.
pub fn h_factor(p1: &BetaPosterior, p2: &BetaPosterior) -> f64 {
    let (a1, b1) = (p1.alpha() as f64, p1.beta() as f64);
    let (a2, b2) = (p2.alpha() as f64, p2.beta() as f64);
    let log_h = log_beta(a1 + a2, b1 + b2).expect("positive counts")
        - log_beta(a1, b1).expect("positive counts")
        - log_beta(a2, b2).expect("positive counts");
    log_h.exp()
}

/// Outcome of checking the four one-step recurrences against direct
/// evaluation, each within [`RECURRENCE_TOLERANCE`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecurrenceCheck {
    /// g(α₁+1) = g + h/α₁
    pub alpha1_up: bool,
    /// g(β₁+1) = g − h/β₁
    pub beta1_up: bool,
    /// g(α₂+1) = g − h/α₂
    pub alpha2_up: bool,
    /// g(β₂+1) = g + h/β₂
    pub beta2_up: bool,
}

impl RecurrenceCheck {
    pub fn all_hold(&self) -> bool {
        self.alpha1_up && self.beta1_up && self.alpha2_up && self.beta2_up
    }
}

/// Verify the four recurrence identities at (p1, p2) by comparing the
/// predicted one-step values against direct closed-form evaluations.
pub fn recurrence_check(p1: &BetaPosterior, p2: &BetaPosterior) -> RecurrenceCheck {
    let g = prob_first_beats_second(p1, p2).value;
    let h = h_factor(p1, p2);
    let (a1, b1) = (p1.alpha(), p1.beta());
    let (a2, b2) = (p2.alpha(), p2.beta());

    let eval = |q1: BetaPosterior, q2: BetaPosterior| prob_first_beats_second(&q1, &q2).value;
    let post = |a, b| BetaPosterior::new(a, b).expect("positive counts");

    let direct_a1 = eval(post(a1 + 1, b1), *p2);
    let direct_b1 = eval(post(a1, b1 + 1), *p2);
    let direct_a2 = eval(*p1, post(a2 + 1, b2));
    let direct_b2 = eval(*p1, post(a2, b2 + 1));

    let within = |direct: f64, predicted: f64| (direct - predicted).abs() <= RECURRENCE_TOLERANCE;

    RecurrenceCheck {
        alpha1_up: within(direct_a1, g + h / a1 as f64),
        beta1_up: within(direct_b1, g - h / b1 as f64),
        alpha2_up: within(direct_a2, g - h / a2 as f64),
        beta2_up: within(direct_b2, g + h / b2 as f64),
    }
}
