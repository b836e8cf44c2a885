//! Monte Carlo estimation of the hypothesis probabilities.
//!
//! Hypothesis Hᵢ is the event that action i has the maximum reward
//! probability. Given the per-action posteriors, each of N replications
//! draws one sample per posterior and credits the action holding the strict
//! maximum; the estimate is the credited count over N:
//!
//! ```text
//! P̂r(Hᵢ) = (1/N) Σₙ I(xᵢⁿ),   I(xᵢⁿ) = 1 iff xᵢⁿ > xⱼⁿ for all j ≠ i
//! ```
//!
//! Counts partition N, so the estimates sum to one exactly and each is an
//! integer multiple of 1/N. Exactly equal samples (probability zero in
//! theory, possible in floats) credit the lowest index.

use crate::beta::BetaPosterior;
use crate::rng::RngStream;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum McError {
    #[error("hypothesis estimation needs at least 2 posteriors, got {got}")]
    TooFewActions { got: usize },
    #[error("sample count must be at least 1")]
    ZeroSamples,
}

/// Estimated hypothesis probabilities, stored as the winning counts so the
/// partition of N is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisProbs {
    counts: Vec<u64>,
    n_samples: u64,
}

impl HypothesisProbs {
    /// Build from explicit winning counts; `N` is their sum.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self, McError> {
        if counts.len() < 2 {
            return Err(McError::TooFewActions { got: counts.len() });
        }
        let n_samples = counts.iter().sum();
        if n_samples == 0 {
            return Err(McError::ZeroSamples);
        }
        Ok(HypothesisProbs { counts, n_samples })
    }

    /// Winning count per action; sums to `n_samples` exactly.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// P̂r(Hᵢ) as a real number.
    pub fn prob(&self, i: usize) -> f64 {
        self.counts[i] as f64 / self.n_samples as f64
    }

    pub fn probs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.prob(i)).collect()
    }

    /// Index and value of the largest estimate (lowest index on ties).
    pub fn max(&self) -> (usize, f64) {
        let (idx, _) = self
            .counts
            .iter()
            .enumerate()
            .max_by_key(|&(i, &c)| (c, std::cmp::Reverse(i)))
            .expect("nonempty");
        (idx, self.prob(idx))
    }

    /// All indices attaining the maximum count.
    pub fn argmax_set(&self) -> Vec<usize> {
        let best = *self.counts.iter().max().expect("nonempty");
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == best)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Estimate the hypothesis probabilities from `n_samples` Monte Carlo
/// replications.
///
/// Samples are drawn per replication, one draw per posterior in action
/// order, so a replication is a self-contained comparison and the estimate
/// is reproducible bit for bit under a fixed stream.
pub fn estimate_hypothesis_probs(
    posteriors: &[BetaPosterior],
    n_samples: u32,
    rng: &mut RngStream,
) -> Result<HypothesisProbs, McError> {
    if posteriors.len() < 2 {
        return Err(McError::TooFewActions {
            got: posteriors.len(),
        });
    }
    if n_samples == 0 {
        return Err(McError::ZeroSamples);
    }

    let samplers: Vec<_> = posteriors.iter().map(|p| p.sampler()).collect();
    let mut counts = vec![0u64; posteriors.len()];
    for _ in 0..n_samples {
        let mut best = 0usize;
        let mut best_x = samplers[0].sample(rng);
        for (i, sampler) in samplers.iter().enumerate().skip(1) {
            let x = sampler.sample(rng);
            if x > best_x {
                best = i;
                best_x = x;
            }
        }
        counts[best] += 1;
    }

    let total: u64 = counts.iter().sum();
    assert_eq!(total, n_samples as u64, "winner counts must partition N");

    Ok(HypothesisProbs {
        counts,
        n_samples: n_samples as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;

    fn post(a: u64, b: u64) -> BetaPosterior {
        BetaPosterior::new(a, b).unwrap()
    }

    #[test]
    fn identical_posteriors_split_evenly() {
        let n = 100_000u32;
        for r in [2usize, 5, 10] {
            let posteriors = vec![BetaPosterior::optimistic(); r];
            let mut rng = RngStream::new(55, r as u64);
            let probs = estimate_hypothesis_probs(&posteriors, n, &mut rng).unwrap();
            let band = 3.0 * (0.25 / n as f64).sqrt();
            for i in 0..r {
                let p = probs.prob(i);
                assert!(
                    (p - 1.0 / r as f64).abs() <= band,
                    "r={r}, i={i}: {p} outside band around {}",
                    1.0 / r as f64
                );
            }
        }
    }

    #[test]
    fn counts_partition_n_exactly() {
        let posteriors = vec![post(3, 2), post(10, 1), post(1, 10), post(7, 7)];
        let mut rng = RngStream::new(56, 0);
        for n in [1u32, 7, 100, 9999] {
            let probs = estimate_hypothesis_probs(&posteriors, n, &mut rng).unwrap();
            assert_eq!(probs.counts().iter().sum::<u64>(), n as u64);
            for i in 0..probs.len() {
                let p = probs.prob(i);
                assert!((0.0..=1.0).contains(&p));
                // Each estimate is count/N by construction.
                assert_eq!(p, probs.counts()[i] as f64 / n as f64);
            }
        }
    }

    #[test]
    fn agrees_with_closed_form_on_two_actions() {
        let p1 = post(102, 1);
        let p2 = post(2, 101);
        let exact = exact::prob_first_beats_second(&p1, &p2).value;
        let n = 100_000u32;
        let mut rng = RngStream::new(57, 0);
        let probs = estimate_hypothesis_probs(&[p1, p2], n, &mut rng).unwrap();
        let band = 3.0 * (0.25 / n as f64).sqrt();
        assert!(
            (probs.prob(0) - exact).abs() <= band,
            "estimate {} vs exact {exact}",
            probs.prob(0)
        );
    }

    #[test]
    fn estimates_are_reproducible() {
        let posteriors = vec![post(5, 4), post(4, 5), post(9, 2)];
        let mut a = RngStream::new(58, 3);
        let mut b = RngStream::new(58, 3);
        let pa = estimate_hypothesis_probs(&posteriors, 5000, &mut a).unwrap();
        let pb = estimate_hypothesis_probs(&posteriors, 5000, &mut b).unwrap();
        assert_eq!(pa, pb);
    }

    #[test]
    fn estimator_error_variance_is_bounded() {
        // Worst case: indicator variance 0.25, so Var(P̂r) <= 0.25/N. With a
        // symmetric pair the true value is 1/2 and the bound is tight.
        let p1 = BetaPosterior::optimistic();
        let p2 = BetaPosterior::optimistic();
        let truth = exact::prob_first_beats_second(&p1, &p2).value;
        assert!((truth - 0.5).abs() < 1e-12);
        let n = 1000u32;
        let estimates = 200;
        let mut rng = RngStream::new(59, 0);
        let mut sq = 0.0;
        for _ in 0..estimates {
            let probs = estimate_hypothesis_probs(&[p1, p2], n, &mut rng).unwrap();
            let err = probs.prob(0) - truth;
            sq += err * err;
        }
        let var = sq / estimates as f64;
        assert!(
            var <= 1.5 * 0.25 / n as f64,
            "error variance {var} well above bound"
        );
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let mut rng = RngStream::new(60, 0);
        assert_eq!(
            estimate_hypothesis_probs(&[], 10, &mut rng),
            Err(McError::TooFewActions { got: 0 })
        );
        assert_eq!(
            estimate_hypothesis_probs(&[post(1, 1)], 10, &mut rng),
            Err(McError::TooFewActions { got: 1 })
        );
        assert_eq!(
            estimate_hypothesis_probs(&[post(1, 1), post(1, 1)], 0, &mut rng),
            Err(McError::ZeroSamples)
        );
    }

    #[test]
    fn max_breaks_ties_toward_lowest_index() {
        let probs = HypothesisProbs::from_counts(vec![3, 5, 5, 2]).unwrap();
        assert_eq!(probs.max().0, 1);
        assert_eq!(probs.argmax_set(), vec![1, 2]);
    }

    #[test]
    fn from_counts_validates() {
        assert!(HypothesisProbs::from_counts(vec![5]).is_err());
        assert!(HypothesisProbs::from_counts(vec![0, 0]).is_err());
        let p = HypothesisProbs::from_counts(vec![1, 3]).unwrap();
        assert_eq!(p.n_samples(), 4);
        assert_eq!(p.prob(1), 0.75);
    }
}
