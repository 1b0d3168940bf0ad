//! The victim's weakly dominant strategy: valuation thresholds, the
//! small/large ransom regimes and the boundary between them.

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::game_core::{GameParams, GameVariant, VictimAction};

/// Ransom-size regime. The pay band exists only for small ransoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RansomRegime {
    Small,
    Large,
}

/// Root of the regime indicator: ransoms at or below `boundary` are in the
/// small regime, ransoms above it in the large one.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RegionPartition {
    pub variant: GameVariant,
    pub boundary: f64,
    /// `|indicator(boundary)|` after bisection.
    pub residual: f64,
}

/// The valuation thresholds that drive the victim's dominant strategy at a
/// given ransom, in the shape used for boundary-curve emission.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StrategyRegion {
    pub regime: RansomRegime,
    /// Discard at or below this valuation.
    pub discard_below: f64,
    /// Pay between `discard_below` and this valuation; absent in the large regime.
    pub pay_below: Option<f64>,
}

/// Effective weight of the pay-after-failed-contest route at ransom `r`:
/// `p2(r) * (1 - p1) * (1 - p3)`, with `p3 = 0` in the no-backup game.
fn contest_payment_weight(params: &GameParams, variant: GameVariant, r: f64) -> Result<(f64, f64, f64)> {
    let (p3, c3) = params.recovery(variant)?;
    let survive = 1.0 - p3;
    let q = params.willingness.eval(r) * (1.0 - params.p1);
    Ok((q, survive, c3))
}

/// Upper edge of the pay band in the small-ransom regime: valuations above it
/// prefer the contest action, valuations in `(r/p, threshold]` pay.
///
/// At `p = 1` the pay-versus-contest comparison no longer involves the
/// valuation and the edge is the matching signed infinity.
pub fn pay_threshold(params: &GameParams, variant: GameVariant, r: f64) -> Result<f64> {
    let (q, survive, c3) = contest_payment_weight(params, variant, r)?;
    let mass = 1.0 - q * survive;
    if mass <= 0.0 {
        return Err(GameError::DegenerateParams(format!(
            "payment probability mass {} at or above one at r = {r}",
            q * survive
        )));
    }
    Ok(((params.c1 + (params.c2 + r) * q) * survive + c3 - r) / ((1.0 - params.p) * mass))
}

/// Discard edge in the large-ransom regime: valuations at or below it discard,
/// above it the victim contests and never pays first.
pub fn discard_threshold(params: &GameParams, variant: GameVariant, r: f64) -> Result<f64> {
    let (q, survive, c3) = contest_payment_weight(params, variant, r)?;
    let denom = 1.0 - q * survive * (1.0 - params.p);
    if denom <= 0.0 {
        return Err(GameError::DegenerateParams(format!(
            "discard threshold denominator {denom} at r = {r}"
        )));
    }
    Ok(((params.c1 + (params.c2 + r) * q) * survive + c3) / denom)
}

/// Sign function of the regime split: non-negative at `r` means the small
/// regime (pay band present), negative means the large one.
///
/// Both thresholds minus `r/p`, and their difference, share its sign.
pub fn regime_indicator(params: &GameParams, variant: GameVariant, r: f64) -> Result<f64> {
    let (q, survive, c3) = contest_payment_weight(params, variant, r)?;
    Ok(params.c1 * params.p * survive + (params.c2 * params.p + r) * q * survive + c3 * params.p - r)
}

pub fn regime(params: &GameParams, variant: GameVariant, r: f64) -> Result<RansomRegime> {
    Ok(if regime_indicator(params, variant, r)? >= 0.0 {
        RansomRegime::Small
    } else {
        RansomRegime::Large
    })
}

/// Residual target for the boundary root.
const BOUNDARY_TOL: f64 = 1e-9;

fn search_cap(params: &GameParams) -> f64 {
    let c3 = params.c3.unwrap_or(0.0);
    (100.0 * (params.c1 + params.c2 + c3 + 1.0)).max(params.valuation.quantile(0.9999)) * 10.0
}

/// Finds the smallest root of the regime indicator by bracketing and
/// bisection, then verifies the one-sign-change pattern on a dense grid.
///
/// The indicator starts non-negative at zero and falls below every bound as
/// the ransom grows, so a root exists for all supported willingness families;
/// the cap is a guard, not a tuning knob. Bisection is used because the
/// indicator may be non-differentiable at willingness cutoffs.
pub fn region_boundary(params: &GameParams, variant: GameVariant) -> Result<RegionPartition> {
    let cap = search_cap(params);
    let f = |r: f64| regime_indicator(params, variant, r);

    // Scan in the compactified coordinate so small ransoms get the resolution.
    let n = 4096usize;
    let u_cap = 1.0 / (1.0 + cap);
    let grid_r = |j: usize| {
        let u = 1.0 + (u_cap - 1.0) * (j as f64 / n as f64);
        1.0 / u - 1.0
    };

    let at_origin = f(0.0)?;
    let (mid, residual) = if at_origin == 0.0 {
        // Costless game: the indicator starts at its root.
        (0.0, 0.0)
    } else {
        let mut lo = 0.0;
        let mut f_lo = at_origin;
        let mut bracket = None;
        for j in 1..=n {
            let hi = grid_r(j);
            let f_hi = f(hi)?;
            if f_lo >= 0.0 && f_hi < 0.0 {
                bracket = Some((lo, hi));
                break;
            }
            lo = hi;
            f_lo = f_hi;
        }
        let (mut lo, mut hi) = match bracket {
            Some(b) => b,
            None => return Err(GameError::BoundarySearchFailed { cap }),
        };

        let mut mid = 0.5 * (lo + hi);
        let mut f_mid = f(mid)?;
        for _ in 0..200 {
            if (hi - lo) <= 1e-13 * (1.0 + mid) {
                break;
            }
            if f_mid >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            mid = 0.5 * (lo + hi);
            f_mid = f(mid)?;
        }
        if f_mid.abs() > BOUNDARY_TOL {
            return Err(GameError::SignPatternViolation { boundary: mid, at: mid, value: f_mid });
        }
        (mid, f_mid.abs())
    };

    // One sign change only: non-negative before the root, non-positive after.
    let slack = BOUNDARY_TOL * (1.0 + at_origin.abs());
    for j in 0..=n {
        let r = grid_r(j);
        let v = f(r)?;
        let bad = if r < mid { v < -slack } else { r > mid && v > slack };
        if bad {
            return Err(GameError::SignPatternViolation { boundary: mid, at: r, value: v });
        }
    }

    Ok(RegionPartition { variant, boundary: mid, residual })
}

/// The victim's weakly dominant action for valuation `x` and ransom `r`.
///
/// Ties go to discarding; on the pay band's closed upper edge the victim
/// pays. At the regime boundary both regimes prescribe the same action.
pub fn best_response(params: &GameParams, variant: GameVariant, x: f64, r: f64) -> Result<VictimAction> {
    debug_assert!(x >= 0.0 && r >= 0.0);
    match regime(params, variant, r)? {
        RansomRegime::Small => {
            if x <= r / params.p {
                Ok(VictimAction::Discard)
            } else if x <= pay_threshold(params, variant, r)? {
                Ok(VictimAction::Pay)
            } else {
                Ok(variant.contest_action())
            }
        }
        RansomRegime::Large => {
            if x <= discard_threshold(params, variant, r)? {
                Ok(VictimAction::Discard)
            } else {
                Ok(variant.contest_action())
            }
        }
    }
}

/// The thresholds behind `best_response`, for boundary-curve emission.
pub fn strategy_region(params: &GameParams, variant: GameVariant, r: f64) -> Result<StrategyRegion> {
    match regime(params, variant, r)? {
        RansomRegime::Small => Ok(StrategyRegion {
            regime: RansomRegime::Small,
            discard_below: r / params.p,
            pay_below: Some(pay_threshold(params, variant, r)?),
        }),
        RansomRegime::Large => Ok(StrategyRegion {
            regime: RansomRegime::Large,
            discard_below: discard_threshold(params, variant, r)?,
            pay_below: None,
        }),
    }
}
