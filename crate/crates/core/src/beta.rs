//! Beta posteriors over Bernoulli reward probabilities, plus the special
//! functions they need.
//!
//! Each action's reward probability estimate is a random variable
//! `e ~ Beta(α, β)` whose parameters are integer counts: starting from the
//! optimistic prior `Beta(2, 1)`, a reward increments `α` and a penalty
//! increments `β`. Relative to that prior an action has been rewarded
//! `Z = α − 2` times, penalized `W = β − 1` times, and selected
//! `S = Z + W = α + β − 3` times.
//!
//! Counts are kept as integers for exact bookkeeping and converted to reals
//! only at the special-function boundary.

use crate::env::Feedback;
use crate::rng::RngStream;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use thiserror::Error;

/// Errors from posterior construction or special-function domains.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum BetaError {
    #[error("log_beta arguments must be positive, got ({a}, {b})")]
    NonPositiveArgument { a: f64, b: f64 },
    #[error("posterior counts must both be >= 1, got ({alpha}, {beta})")]
    InvalidCounts { alpha: u64, beta: u64 },
}

// Stirling-series coefficients B_{2n} / (2n (2n-1)).
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_7;

/// Stirling correction φ(x) with ln Γ(x) = (x−½)ln x − x + ½ln 2π + φ(x),
/// accurate to a few ulps for x ≥ 10.
fn stirling_correction(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = STIRLING[6];
    for k in (0..6).rev() {
        series = STIRLING[k] + series * inv2;
    }
    series * inv
}

/// ln Γ(x) for x > 0.
///
/// Stirling's series after shifting the argument above 10 with
/// ln Γ(x) = ln Γ(x+1) − ln x.
pub fn ln_gamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut shift = 0.0;
    while x < 10.0 {
        shift += x.ln();
        x += 1.0;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + stirling_correction(x) - shift
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a+b), for a, b > 0.
///
/// The naive three-term difference loses digits once the arguments are
/// large (two nearly equal values of magnitude a·ln a cancel to something
/// of magnitude b·ln a). For max(a,b) ≥ 10 the Stirling expansions of
/// ln Γ(max) and ln Γ(a+b) are combined analytically instead:
///
/// ```text
/// ln B(a,b) = ln Γ(lo) − lo·ln(hi+lo) − (hi−½)·ln1p(lo/hi) + lo
///             + φ(hi) − φ(hi+lo)
/// ```
///
/// which keeps the relative error at a few ulps across the integer range
/// used by the automaton.
pub fn log_beta(a: f64, b: f64) -> Result<f64, BetaError> {
    if a.is_nan() || b.is_nan() || a <= 0.0 || b <= 0.0 {
        return Err(BetaError::NonPositiveArgument { a, b });
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi < 10.0 {
        return Ok(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
    }
    Ok(ln_gamma(lo) - lo * (hi + lo).ln() - (hi - 0.5) * (lo / hi).ln_1p() + lo
        + stirling_correction(hi)
        - stirling_correction(hi + lo))
}

/// Regularized incomplete beta function I_x(a, b) for a, b > 0.
///
/// Continued-fraction evaluation (modified Lentz), switched through the
/// symmetry I_x(a,b) = 1 − I_{1−x}(b,a) so the fraction always converges
/// quickly.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "shape parameters must be positive");
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front =
        a * x.ln() + b * (1.0 - x).ln() - log_beta(a, b).expect("positive shapes");
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const FPMIN: f64 = 1e-300;
    const EPS: f64 = 1e-15;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=500 {
        let m = m as f64;
        let m2 = 2.0 * m;
        // Even step.
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        // Odd step.
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Integer-count beta posterior for one action's reward probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BetaPosterior {
    alpha: u64,
    beta: u64,
}

impl BetaPosterior {
    /// A posterior with explicit counts; both must be at least 1.
    pub fn new(alpha: u64, beta: u64) -> Result<Self, BetaError> {
        if alpha < 1 || beta < 1 {
            return Err(BetaError::InvalidCounts { alpha, beta });
        }
        Ok(BetaPosterior { alpha, beta })
    }

    /// The optimistic prior Beta(2, 1): mean 2/3, biased toward 1 so that
    /// rarely sampled actions keep looking attractive and get explored.
    pub fn optimistic() -> Self {
        BetaPosterior { alpha: 2, beta: 1 }
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    /// Posterior mean α / (α + β).
    pub fn mean(&self) -> f64 {
        self.alpha as f64 / (self.alpha + self.beta) as f64
    }

    /// Posterior variance αβ / ((α+β)² (α+β+1)).
    pub fn variance(&self) -> f64 {
        let s = (self.alpha + self.beta) as f64;
        (self.alpha as f64) * (self.beta as f64) / (s * s * (s + 1.0))
    }

    /// Times the action has been selected, relative to the optimistic
    /// Beta(2, 1) prior (saturates at 0 for other priors).
    pub fn selections(&self) -> u64 {
        (self.alpha + self.beta).saturating_sub(3)
    }

    /// Conjugate update: a reward increments α, a penalty increments β.
    pub fn update(&mut self, feedback: Feedback) {
        match feedback {
            Feedback::Reward => self.alpha += 1,
            Feedback::Penalty => self.beta += 1,
        }
    }

    /// One draw from Beta(α, β), strictly inside (0, 1).
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.sampler().sample(rng)
    }

    /// Reusable sampler; amortizes setup when many draws are needed.
    pub fn sampler(&self) -> BetaSampler {
        BetaSampler::new(self.alpha as f64, self.beta as f64)
    }

    /// CDF of the posterior at `x`, i.e. I_x(α, β).
    pub fn cdf(&self, x: f64) -> f64 {
        regularized_incomplete_beta(self.alpha as f64, self.beta as f64, x)
    }

    /// Probability mass the posterior places on `[lo, hi]`.
    pub fn interval_mass(&self, lo: f64, hi: f64) -> f64 {
        (self.cdf(hi) - self.cdf(lo)).max(0.0)
    }
}

/// Beta sampler built from two gamma variates: if X ~ Gamma(α) and
/// Y ~ Gamma(β) then X / (X + Y) ~ Beta(α, β), valid for all shapes.
#[derive(Debug, Clone)]
pub struct BetaSampler {
    ga: Gamma<f64>,
    gb: Gamma<f64>,
}

impl BetaSampler {
    pub fn new(alpha: f64, beta: f64) -> Self {
        BetaSampler {
            ga: Gamma::new(alpha, 1.0).expect("positive shape"),
            gb: Gamma::new(beta, 1.0).expect("positive shape"),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = self.ga.sample(rng);
        let y = self.gb.sample(rng);
        let s = x / (x + y);
        // Keep draws strictly inside (0, 1) against underflow at the edges.
        if s <= 0.0 {
            f64::MIN_POSITIVE
        } else if s >= 1.0 {
            1.0 - f64::EPSILON / 2.0
        } else {
            s
        }
    }
}
