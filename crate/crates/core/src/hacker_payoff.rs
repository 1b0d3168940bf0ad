//! Closed-form hacker expected payoffs against the victim's dominant
//! strategy, payoff curves over ransom grids, and the revenue gap between
//! the two hacker types.

use serde::{Deserialize, Serialize};

use crate::best_response::{discard_threshold, pay_threshold, regime, region_boundary, RansomRegime};
use crate::error::{GameError, Result};
use crate::game_core::{GameParams, GameVariant, HackerType};

/// One evaluated grid point of a payoff curve.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CurvePoint {
    pub r: f64,
    /// Compactified coordinate `1 / (1 + r)`, used for plotting the whole axis.
    pub u: f64,
    pub revenue_minus_cost: f64,
    /// Whether the attack clears the cost gate at this ransom.
    pub launched: bool,
}

/// Expected payoff of one hacker type over a strictly increasing ransom grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PayoffCurve {
    pub variant: GameVariant,
    pub hacker_type: HackerType,
    /// Regime boundary for the parameter set.
    pub boundary: f64,
    pub points: Vec<CurvePoint>,
}

/// Ransom grid specification for curve emission.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum GridSpec {
    /// Uniform in the ransom itself, from zero to `max` inclusive.
    Ransom { max: f64, points: usize },
    /// Uniform in the compactified coordinate `(r + 1)^(-1)` over `(0, 1]`,
    /// which spreads the whole half-line over the unit interval.
    Transformed { points: usize },
}

impl GridSpec {
    /// The grid in ascending ransom order.
    pub fn ransoms(&self) -> Result<Vec<f64>> {
        match *self {
            GridSpec::Ransom { max, points } => {
                if points == 0 {
                    return Err(GameError::InvalidArgument("empty ransom grid".to_string()));
                }
                let max_valid = max.is_finite() && max > 0.0;
                if points > 1 && !max_valid {
                    return Err(GameError::InvalidArgument(format!("grid max must be positive, got {max}")));
                }
                if points == 1 {
                    return Ok(vec![0.0]);
                }
                Ok((0..points).map(|i| max * i as f64 / (points - 1) as f64).collect())
            }
            GridSpec::Transformed { points } => {
                if points == 0 {
                    return Err(GameError::InvalidArgument("empty ransom grid".to_string()));
                }
                Ok((1..=points).rev().map(|j| points as f64 / j as f64 - 1.0).collect())
            }
        }
    }
}

/// Expected ransom revenue of `hacker_type` at ransom `r`, excluding the
/// attack cost, when the victim plays the dominant strategy.
///
/// The small-ransom branch integrates over the discard/pay/contest bands;
/// the large-ransom branch has no pay band.
pub fn expected_revenue(
    params: &GameParams,
    variant: GameVariant,
    hacker_type: HackerType,
    r: f64,
) -> Result<f64> {
    let (p3, _) = params.recovery(variant)?;
    let survive = 1.0 - p3;
    let ransom_paid_weight = params.willingness.eval(r) * (1.0 - params.p1) * survive;
    let small = regime(params, variant, r)? == RansomRegime::Small;
    let contest_edge = if small {
        pay_threshold(params, variant, r)?
    } else {
        discard_threshold(params, variant, r)?
    };
    let sf = |x: f64| params.valuation.survival(x);

    let value = match hacker_type {
        HackerType::Genuine => {
            let mut e = r * ransom_paid_weight * sf(contest_edge);
            if small {
                e += r * (sf(r / params.p) - sf(contest_edge));
            }
            e
        }
        HackerType::Fake => {
            let contest_income = params.b1 * (p3 + survive * params.p1)
                + (params.b2 + r * params.willingness.eval(r)) * (1.0 - params.p1) * survive;
            let mut e = contest_income * sf(contest_edge);
            if small {
                e += (params.b2 + r) * (sf(r / params.p) - sf(contest_edge))
                    + params.b1 * params.valuation.cdf(r / params.p);
            } else {
                e += params.b1 * params.valuation.cdf(contest_edge);
            }
            e
        }
    };
    Ok(value)
}

/// Expected-payoff curve (revenue minus attack cost) over a ransom grid.
pub fn payoff_curve(
    params: &GameParams,
    variant: GameVariant,
    hacker_type: HackerType,
    grid: &GridSpec,
) -> Result<PayoffCurve> {
    let boundary = region_boundary(params, variant)?.boundary;
    let mut points = Vec::new();
    for r in grid.ransoms()? {
        let revenue = expected_revenue(params, variant, hacker_type, r)?;
        points.push(CurvePoint {
            r,
            u: 1.0 / (1.0 + r),
            revenue_minus_cost: revenue - params.c4,
            launched: revenue > params.c4,
        });
    }
    Ok(PayoffCurve { variant, hacker_type, boundary, points })
}

/// Revenue gap between the fake and genuine hacker at the same ransom.
///
/// Piecewise form evaluated directly; equal to
/// `expected_revenue(Fake) - expected_revenue(Genuine)` by algebra, which the
/// tests assert through the independent route.
pub fn type_revenue_gap(params: &GameParams, variant: GameVariant, r: f64) -> Result<f64> {
    let (p3, _) = params.recovery(variant)?;
    // probability that the contest route reaches the pay decision at all
    let reach_pay = (1.0 - params.p1) * (1.0 - p3);
    let gap = match regime(params, variant, r)? {
        RansomRegime::Small => {
            let edge = pay_threshold(params, variant, r)?;
            params.b2
                + (params.b1 - params.b2)
                    * ((1.0 - reach_pay) * params.valuation.survival(edge)
                        + params.valuation.cdf(r / params.p))
        }
        RansomRegime::Large => {
            let edge = discard_threshold(params, variant, r)?;
            params.b1 + (params.b2 - params.b1) * reach_pay * params.valuation.survival(edge)
        }
    };
    Ok(gap)
}
