//! Probabilistic primitives: the hacker's valuation distribution, the
//! ransom-payment-willingness family and splittable random streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{GameError, Result};

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// The hacker's subjective distribution of the victim's file valuation.
///
/// Support is contained in `[0, ∞)`. Sampling is by inverse transform, so
/// `sample` and `quantile` are exactly consistent with `cdf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ValuationDistribution {
    Exponential { rate: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl ValuationDistribution {
    /// Collects every violated constraint into `errors`.
    pub(crate) fn collect_validation_errors(&self, errors: &mut Vec<String>) {
        match *self {
            Self::Exponential { rate } => {
                if !(rate > 0.0 && rate.is_finite()) {
                    errors.push(format!("valuation rate must be positive and finite, got {rate}"));
                }
            }
            Self::LogNormal { mu, sigma } => {
                if !mu.is_finite() {
                    errors.push(format!("valuation mu must be finite, got {mu}"));
                }
                if !(sigma > 0.0 && sigma.is_finite()) {
                    errors.push(format!("valuation sigma must be positive and finite, got {sigma}"));
                }
            }
            Self::Uniform { lo, hi } => {
                if !(lo >= 0.0 && lo.is_finite()) {
                    errors.push(format!("valuation lo must be non-negative and finite, got {lo}"));
                }
                if !(hi > lo && hi.is_finite()) {
                    errors.push(format!("valuation hi must exceed lo, got lo={lo}, hi={hi}"));
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut errors = Vec::new();
        self.collect_validation_errors(&mut errors);
        if errors.is_empty() {
            Ok(())
        } else {
            Err(GameError::InvalidParams(errors.join("; ")))
        }
    }

    /// P(V ≤ x). Zero below the support.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Self::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    std_normal().cdf((x.ln() - mu) / sigma)
                }
            }
            Self::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
        }
    }

    /// P(V > x) = 1 − cdf(x), evaluated directly for tail accuracy.
    pub fn survival(&self, x: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-rate * x).exp()
                }
            }
            Self::LogNormal { mu, sigma } => {
                if x <= 0.0 {
                    1.0
                } else {
                    std_normal().sf((x.ln() - mu) / sigma)
                }
            }
            Self::Uniform { lo, hi } => 1.0 - ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
        }
    }

    /// Inverse of `cdf` on `[0, 1)`; `q = 1` maps to the supremum of the support.
    pub fn quantile(&self, q: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&q), "quantile level {q} outside [0, 1]");
        match *self {
            Self::Exponential { rate } => {
                if q >= 1.0 {
                    f64::INFINITY
                } else {
                    -(-q).ln_1p() / rate
                }
            }
            Self::LogNormal { mu, sigma } => {
                if q <= 0.0 {
                    0.0
                } else if q >= 1.0 {
                    f64::INFINITY
                } else {
                    (mu + sigma * std_normal().inverse_cdf(q)).exp()
                }
            }
            Self::Uniform { lo, hi } => lo + q.clamp(0.0, 1.0) * (hi - lo),
        }
    }

    /// Draws one valuation by inverse transform of a uniform variate.
    pub fn sample(&self, stream: &mut RngStream) -> f64 {
        self.quantile(stream.uniform())
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::LogNormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
        }
    }
}

/// The probability `p2(r)` that the victim pays the ransom (with the
/// punishment fee) after a failed crack, as a function of the ransom.
///
/// Every family is continuous, non-increasing, maps into `[0, 1]` and
/// vanishes at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PaymentWillingness {
    /// `(1 + r)^(-exponent)`. Exponents below one leave `r * p2(r)` unbounded.
    PowerDecay { exponent: f64 },
    /// `exp(-scale * r)`.
    ExpDecay { scale: f64 },
    /// `level * max(0, 1 - r / cutoff)`: constant slope down to zero at the cutoff.
    CutoffLinear { level: f64, cutoff: f64 },
}

impl PaymentWillingness {
    pub(crate) fn collect_validation_errors(&self, errors: &mut Vec<String>) {
        match *self {
            Self::PowerDecay { exponent } => {
                if !(exponent > 0.0 && exponent.is_finite()) {
                    errors.push(format!("willingness exponent must be positive, got {exponent}"));
                }
            }
            Self::ExpDecay { scale } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    errors.push(format!("willingness scale must be positive, got {scale}"));
                }
            }
            Self::CutoffLinear { level, cutoff } => {
                if !((0.0..=1.0).contains(&level) && level.is_finite()) {
                    errors.push(format!("willingness level must lie in [0, 1], got {level}"));
                }
                if !(cutoff > 0.0 && cutoff.is_finite()) {
                    errors.push(format!("willingness cutoff must be positive, got {cutoff}"));
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut errors = Vec::new();
        self.collect_validation_errors(&mut errors);
        if errors.is_empty() {
            Ok(())
        } else {
            Err(GameError::InvalidParams(errors.join("; ")))
        }
    }

    /// Evaluates `p2(r)` for `r ≥ 0`.
    pub fn eval(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0, "ransom {r} must be non-negative");
        match *self {
            Self::PowerDecay { exponent } => (1.0 + r).powf(-exponent),
            Self::ExpDecay { scale } => (-scale * r).exp(),
            Self::CutoffLinear { level, cutoff } => level * (1.0 - r / cutoff).max(0.0),
        }
    }

    /// Analytic bound on `sup_r r * p2(r)`, the quantity that must stay
    /// finite for hacker expected payoffs to attain a maximum.
    pub fn revenue_bound(&self) -> RevenueBound {
        match *self {
            Self::PowerDecay { exponent } => {
                if exponent < 1.0 {
                    RevenueBound { bounded: false, bound: f64::INFINITY }
                } else if exponent == 1.0 {
                    // r / (1 + r) increases towards its supremum of one.
                    RevenueBound { bounded: true, bound: 1.0 }
                } else {
                    // Stationary point of r (1 + r)^(-a) at r = 1 / (a - 1).
                    let a = exponent;
                    RevenueBound { bounded: true, bound: (a - 1.0).powf(a - 1.0) / a.powf(a) }
                }
            }
            // Maximum of r e^(-λ r) at r = 1 / λ.
            Self::ExpDecay { scale } => RevenueBound { bounded: true, bound: 1.0 / (scale * std::f64::consts::E) },
            // Maximum of q0 r (1 - r / R0) at r = R0 / 2.
            Self::CutoffLinear { level, cutoff } => RevenueBound { bounded: true, bound: level * cutoff / 4.0 },
        }
    }
}

/// Whether `r * p2(r)` stays bounded, and the analytic bound itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevenueBound {
    pub bounded: bool,
    pub bound: f64,
}

/// Deterministic, splittable random stream.
///
/// Sub-streams with distinct indices are statistically independent ChaCha
/// streams over the same key, so parallel sweeps stay reproducible for a
/// fixed root seed.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        Self { rng: ChaCha12Rng::seed_from_u64(seed) }
    }

    /// Derives the `index`-th independent sub-stream without consuming state.
    pub fn substream(&self, index: u64) -> Self {
        let mut rng = self.rng.clone();
        rng.set_stream(index.wrapping_add(1));
        Self { rng }
    }

    /// Uniform draw on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn bernoulli(&mut self, prob: f64) -> bool {
        self.uniform() < prob
    }

    /// Uniform draw on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}
