//! Pure and randomized Bayesian Nash equilibria of the hacker side, ransom
//! ordering between the two hacker types, comparative statics sweeps and the
//! backup-versus-no-backup comparison.

use serde::{Deserialize, Serialize};

use crate::best_response::{regime, region_boundary, RansomRegime};
use crate::error::{GameError, Result};
use crate::game_core::{GameParams, GameVariant, HackerType};
use crate::hacker_payoff::expected_revenue;
use crate::stochastics::PaymentWillingness;

/// Controls for the grid-then-refine maximization of the expected revenue.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// Grid points in the compactified coordinate `(r + 1)^(-1)` over `(0, 1]`.
    pub grid_points: usize,
    /// Relative width target of each refinement bracket.
    pub refine_rel_width: f64,
    /// Relative tolerance for collecting tied maximizers.
    pub argmax_rel_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { grid_points: 4096, refine_rel_width: 1e-8, argmax_rel_tol: 1e-9 }
    }
}

/// One support atom of a randomized hacker strategy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RandomizedAtom {
    pub ransom: f64,
    pub weight: f64,
}

/// Equilibrium outcome for one hacker type.
///
/// A ransom of zero with `launched = false` encodes "no attack". `ransom`
/// is the smallest maximizer whenever the attack clears the cost gate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub variant: GameVariant,
    pub hacker_type: HackerType,
    pub ransom: f64,
    pub launched: bool,
    /// Revenue minus attack cost at the equilibrium ransom; zero when not launched.
    pub payoff: f64,
    /// Every maximizer whose revenue ties the maximum within tolerance, ascending.
    pub argmax_set: Vec<f64>,
    /// Present only for an explicitly randomized strategy over `argmax_set`.
    pub randomized: Option<Vec<RandomizedAtom>>,
}

/// Golden-section maximization on `[a, b]`; keeps the best point evaluated.
fn golden_max<F>(f: F, mut a: f64, mut b: f64, xtol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let (mut best_x, mut best_f) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    while b - a > xtol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
        let (x, fx) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        if fx > best_f {
            best_x = x;
            best_f = fx;
        }
    }
    Ok((best_x, best_f))
}

/// Grid in ascending ransom order, uniform in the compactified coordinate.
fn search_grid(n: usize) -> Vec<f64> {
    (1..=n).rev().map(|j| n as f64 / j as f64 - 1.0).collect()
}

/// Pure Bayesian Nash equilibrium of one hacker type: the smallest maximizer
/// of the expected revenue, gated by the attack cost.
///
/// The revenue is continuous but kinked at the regime boundary and may be
/// multimodal, so the search is a dense grid in the compactified coordinate
/// followed by derivative-free refinement of every local maximum.
pub fn find_equilibrium(
    params: &GameParams,
    variant: GameVariant,
    hacker_type: HackerType,
    config: &SearchConfig,
) -> Result<EquilibriumResult> {
    let bound = params.willingness.revenue_bound();
    if !bound.bounded {
        return Err(GameError::UnboundedRevenue(format!(
            "{:?} admits no maximizer: r * p2(r) grows without bound",
            params.willingness
        )));
    }

    let f = |r: f64| expected_revenue(params, variant, hacker_type, r);
    let n = config.grid_points.max(16);
    let grid = search_grid(n);
    let mut values = Vec::with_capacity(grid.len());
    for &r in &grid {
        values.push(f(r)?);
    }

    // Refine every grid-local maximum (plateau points included).
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for i in 0..grid.len() {
        let left_ok = i == 0 || values[i] >= values[i - 1];
        let right_ok = i + 1 == grid.len() || values[i] >= values[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let a = if i == 0 { grid[0] } else { grid[i - 1] };
        let b = if i + 1 == grid.len() { grid[grid.len() - 1] } else { grid[i + 1] };
        let mut cand = (grid[i], values[i]);
        if b > a {
            let xtol = config.refine_rel_width * (1.0 + grid[i]);
            let refined = golden_max(f, a, b, xtol)?;
            if refined.1 > cand.1 {
                cand = refined;
            }
        }
        candidates.push(cand);
    }

    let max_revenue = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let tol = config.argmax_rel_tol * (1.0 + max_revenue.abs());
    let mut argmax: Vec<f64> = candidates
        .into_iter()
        .filter(|c| c.1 >= max_revenue - tol)
        .map(|c| c.0)
        .collect();
    argmax.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Merge refinement duplicates that converged to the same peak.
    argmax.dedup_by(|next, prev| (*next - *prev) <= 4.0 * config.refine_rel_width * (1.0 + *next));

    let smallest = argmax[0];
    let revenue = f(smallest)?;
    let launched = revenue > params.c4;
    Ok(EquilibriumResult {
        variant,
        hacker_type,
        ransom: if launched { smallest } else { 0.0 },
        launched,
        payoff: if launched { revenue - params.c4 } else { 0.0 },
        argmax_set: argmax,
        randomized: None,
    })
}

/// Randomized equilibrium over a tied argmax set. Any distribution over the
/// tied maximizers attains the same expected payoff.
pub fn randomized_equilibrium(
    params: &GameParams,
    variant: GameVariant,
    hacker_type: HackerType,
    weights: &[f64],
    config: &SearchConfig,
) -> Result<EquilibriumResult> {
    let mut result = find_equilibrium(params, variant, hacker_type, config)?;
    if result.argmax_set.len() < 2 {
        return Err(GameError::InvalidArgument(
            "the argmax set is a singleton; the pure equilibrium applies".to_string(),
        ));
    }
    if weights.len() != result.argmax_set.len() {
        return Err(GameError::InvalidArgument(format!(
            "{} weights for {} tied maximizers",
            weights.len(),
            result.argmax_set.len()
        )));
    }
    if weights.iter().any(|w| !(0.0..=1.0).contains(w)) {
        return Err(GameError::InvalidArgument("weights must lie in [0, 1]".to_string()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(GameError::InvalidArgument(format!("weights sum to {total}, expected 1")));
    }
    result.randomized = Some(
        result
            .argmax_set
            .iter()
            .zip(weights)
            .map(|(&ransom, &weight)| RandomizedAtom { ransom, weight })
            .collect(),
    );
    Ok(result)
}

/// Outcome of the equilibrium-ransom ordering check between the two types.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderingReport {
    pub variant: GameVariant,
    /// Whether `r * p2(r)` is non-increasing on the large-ransom regime,
    /// the premise the ordering rests on.
    pub applicable: bool,
    pub genuine_ransom: f64,
    pub fake_ransom: f64,
    /// Regime of the fake hacker's equilibrium ransom.
    pub fake_regime: Option<RansomRegime>,
    /// Whether the predicted inequality holds; `None` when not applicable.
    pub holds: Option<bool>,
}

/// Checks the ransom ordering between hacker types: with the fake type's
/// equilibrium in the small regime the genuine type asks for at least as
/// much, in the large regime at most as much.
///
/// The premise is checked on the large regime only: the revenue `r * p2(r)`
/// rises from zero near the origin for every supported family, and the
/// ordering argument only needs the thresholds to fall where the revenue
/// falls, which below the boundary holds unconditionally.
pub fn check_ordering(
    params: &GameParams,
    variant: GameVariant,
    config: &SearchConfig,
) -> Result<OrderingReport> {
    let genuine = find_equilibrium(params, variant, HackerType::Genuine, config)?;
    let fake = find_equilibrium(params, variant, HackerType::Fake, config)?;
    let (g, k) = (genuine.argmax_set[0], fake.argmax_set[0]);

    let boundary = region_boundary(params, variant)?.boundary;
    let span_end = (4.0 * boundary).max(boundary + 10.0).max(params.valuation.quantile(0.9999));
    let mut applicable = true;
    let mut prev = boundary * params.willingness.eval(boundary);
    for i in 1..=512 {
        let r = boundary + (span_end - boundary) * i as f64 / 512.0;
        let rev = r * params.willingness.eval(r);
        if rev > prev + 1e-12 * (1.0 + prev.abs()) {
            applicable = false;
            break;
        }
        prev = rev;
    }

    if !applicable {
        return Ok(OrderingReport {
            variant,
            applicable,
            genuine_ransom: g,
            fake_ransom: k,
            fake_regime: None,
            holds: None,
        });
    }

    let fake_regime = regime(params, variant, k)?;
    let tol = 1e-6 * (1.0 + g.abs() + k.abs());
    let holds = match fake_regime {
        RansomRegime::Small => g >= k - tol,
        RansomRegime::Large => g <= k + tol,
    };
    Ok(OrderingReport {
        variant,
        applicable,
        genuine_ransom: g,
        fake_ransom: k,
        fake_regime: Some(fake_regime),
        holds: Some(holds),
    })
}

/// Exogenous quantity swept by a comparative-statics run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    C1,
    C2,
    C3,
    C4,
    P,
    P1,
    P3,
    /// The primary shape parameter of the willingness family.
    WillingnessScale,
}

impl std::fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::C1 => "c1",
            Self::C2 => "c2",
            Self::C3 => "c3",
            Self::C4 => "c4",
            Self::P => "p",
            Self::P1 => "p1",
            Self::P3 => "p3",
            Self::WillingnessScale => "willingness_scale",
        })
    }
}

/// Where the payoff is evaluated while the parameter moves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EvalMode {
    /// Hold the ransom fixed; the cost monotonicity claims are per-ransom.
    FixedRansom(f64),
    /// Re-solve the equilibrium at every grid point.
    Equilibrium,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Regime the expectation applies to. `All` marks directions independent of
/// the regime (the attack cost and the genuine-type prior).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeScope {
    Small,
    Large,
    All,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComparativePoint {
    pub value: f64,
    /// Revenue minus attack cost, ungated, at the evaluation ransom.
    pub payoff: f64,
    pub ransom: f64,
    pub regime: RansomRegime,
}

/// Result of one monotonicity sweep for one hacker type.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparativeReport {
    pub variant: GameVariant,
    pub hacker_type: HackerType,
    pub parameter: SweepParameter,
    pub mode: EvalMode,
    pub direction: Direction,
    pub scope: RegimeScope,
    /// The claimed direction in the large regime is not established for the
    /// event probabilities (two factors pull against each other), so those
    /// runs report violations without gating on them.
    pub advisory: bool,
    pub points: Vec<ComparativePoint>,
    /// Grid points skipped because the regime flipped under the perturbation.
    pub excluded: usize,
    pub violations: usize,
}

fn apply_parameter(params: &GameParams, parameter: SweepParameter, value: f64) -> Result<GameParams> {
    let mut out = params.clone();
    match parameter {
        SweepParameter::C1 => out.c1 = value,
        SweepParameter::C2 => out.c2 = value,
        SweepParameter::C3 => out.c3 = Some(value),
        SweepParameter::C4 => out.c4 = value,
        SweepParameter::P => out.p = value,
        SweepParameter::P1 => out.p1 = value,
        SweepParameter::P3 => out.p3 = Some(value),
        SweepParameter::WillingnessScale => {
            out.willingness = match out.willingness {
                PaymentWillingness::PowerDecay { .. } => PaymentWillingness::PowerDecay { exponent: value },
                PaymentWillingness::ExpDecay { .. } => PaymentWillingness::ExpDecay { scale: value },
                PaymentWillingness::CutoffLinear { cutoff, .. } => {
                    PaymentWillingness::CutoffLinear { level: value, cutoff }
                }
            };
        }
    }
    out.validate()?;
    Ok(out)
}

/// Expected payoff direction for a parameter within a regime.
///
/// A larger scale makes the power and exponential families pay less at every
/// ransom, while a larger level makes the cutoff family pay more, hence the
/// split on the willingness kind.
fn expected_direction(
    parameter: SweepParameter,
    scope: RegimeScope,
    willingness: &PaymentWillingness,
) -> (Direction, bool) {
    use Direction::*;
    use SweepParameter::*;
    let scale_lowers_willingness = !matches!(willingness, PaymentWillingness::CutoffLinear { .. });
    match (parameter, scope) {
        (C4, _) => (Decreasing, false),
        (P, _) => (Increasing, false),
        (C1 | C2 | C3, RegimeScope::Large) => (Decreasing, false),
        (C1 | C2 | C3, _) => (Increasing, false),
        (P1 | P3, RegimeScope::Large) => (Increasing, true),
        (P1 | P3, _) => (Decreasing, false),
        (WillingnessScale, scope) => {
            let more_willing_direction = if scope == RegimeScope::Large { Decreasing } else { Increasing };
            let advisory = scope == RegimeScope::Large;
            if scale_lowers_willingness {
                let flipped = match more_willing_direction {
                    Increasing => Decreasing,
                    Decreasing => Increasing,
                };
                (flipped, advisory)
            } else {
                (more_willing_direction, advisory)
            }
        }
    }
}

/// Sweeps one parameter over a sorted grid and counts monotonicity
/// violations of the expected payoff against the predicted direction.
///
/// Points whose ransom regime differs from the sweep's scope are excluded
/// rather than compared: the monotonicity claims hold per regime and the regime
/// itself moves with the parameters.
pub fn comparative_statics(
    params: &GameParams,
    variant: GameVariant,
    hacker_type: HackerType,
    parameter: SweepParameter,
    grid: &[f64],
    mode: EvalMode,
    config: &SearchConfig,
) -> Result<ComparativeReport> {
    if grid.len() < 2 {
        return Err(GameError::InvalidArgument("sweep grid needs at least two points".to_string()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GameError::InvalidArgument("sweep grid must be strictly increasing".to_string()));
    }

    let mut points = Vec::with_capacity(grid.len());
    for &value in grid {
        let perturbed = apply_parameter(params, parameter, value)?;
        let (ransom, payoff) = match mode {
            EvalMode::FixedRansom(r) => {
                (r, expected_revenue(&perturbed, variant, hacker_type, r)? - perturbed.c4)
            }
            EvalMode::Equilibrium => {
                let eq = find_equilibrium(&perturbed, variant, hacker_type, config)?;
                let r = eq.argmax_set[0];
                (r, expected_revenue(&perturbed, variant, hacker_type, r)? - perturbed.c4)
            }
        };
        let point_regime = regime(&perturbed, variant, ransom)?;
        points.push(ComparativePoint { value, payoff, ransom, regime: point_regime });
    }

    // Scope comes from the first grid point; regime flips are excluded.
    let scope = match (parameter, points[0].regime) {
        (SweepParameter::C4 | SweepParameter::P, _) => RegimeScope::All,
        (_, RansomRegime::Small) => RegimeScope::Small,
        (_, RansomRegime::Large) => RegimeScope::Large,
    };
    let (direction, advisory) = expected_direction(parameter, scope, &params.willingness);

    let in_scope = |p: &ComparativePoint| match scope {
        RegimeScope::All => true,
        RegimeScope::Small => p.regime == RansomRegime::Small,
        RegimeScope::Large => p.regime == RansomRegime::Large,
    };
    let excluded = points.iter().filter(|p| !in_scope(p)).count();

    let mut violations = 0;
    let mut prev: Option<&ComparativePoint> = None;
    for point in points.iter().filter(|p| in_scope(p)) {
        if let Some(last) = prev {
            let slack = 1e-9 * (1.0 + last.payoff.abs());
            let ok = match direction {
                Direction::Increasing => point.payoff >= last.payoff - slack,
                Direction::Decreasing => point.payoff <= last.payoff + slack,
            };
            if !ok {
                violations += 1;
            }
        }
        prev = Some(point);
    }

    Ok(ComparativeReport {
        variant,
        hacker_type,
        parameter,
        mode,
        direction,
        scope,
        advisory,
        points,
        excluded,
        violations,
    })
}

/// Expected revenues of both games at one ransom.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub r: f64,
    /// Whether `r` is in the small regime of the backup game, where the
    /// dominance claim applies.
    pub backup_small: bool,
    pub genuine_no_backup: f64,
    pub genuine_backup: f64,
    pub fake_no_backup: f64,
    pub fake_backup: f64,
}

/// Pointwise comparison of the two games over a ransom grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameComparison {
    /// `c3 <= p3 * c1`: recovery cheap relative to cracking. Under it the
    /// backup game pays the hacker less on the backup-small regime.
    pub condition_holds: bool,
    pub rows: Vec<ComparisonRow>,
    /// Dominance failures on backup-small rows; checked only when the
    /// condition holds.
    pub dominance_violations: usize,
    pub max_genuine_no_backup: f64,
    pub max_genuine_backup: f64,
    pub max_fake_no_backup: f64,
    pub max_fake_backup: f64,
}

/// Evaluates both games' revenues on a grid; asserts the cheap-recovery
/// dominance where it applies and reports grid maxima for the expensive-
/// recovery comparison.
pub fn compare_games(params: &GameParams, ransoms: &[f64]) -> Result<GameComparison> {
    let (p3, c3) = params.recovery(GameVariant::Backup)?;
    let condition_holds = c3 <= p3 * params.c1;
    let mut rows = Vec::with_capacity(ransoms.len());
    let mut dominance_violations = 0;
    let mut maxima = [f64::NEG_INFINITY; 4];
    for &r in ransoms {
        let row = ComparisonRow {
            r,
            backup_small: regime(params, GameVariant::Backup, r)? == RansomRegime::Small,
            genuine_no_backup: expected_revenue(params, GameVariant::NoBackup, HackerType::Genuine, r)?,
            genuine_backup: expected_revenue(params, GameVariant::Backup, HackerType::Genuine, r)?,
            fake_no_backup: expected_revenue(params, GameVariant::NoBackup, HackerType::Fake, r)?,
            fake_backup: expected_revenue(params, GameVariant::Backup, HackerType::Fake, r)?,
        };
        if condition_holds && row.backup_small {
            let slack = 1e-9;
            if row.genuine_backup > row.genuine_no_backup + slack * (1.0 + row.genuine_no_backup.abs())
                || row.fake_backup > row.fake_no_backup + slack * (1.0 + row.fake_no_backup.abs())
            {
                dominance_violations += 1;
            }
        }
        for (m, v) in maxima.iter_mut().zip([
            row.genuine_no_backup,
            row.genuine_backup,
            row.fake_no_backup,
            row.fake_backup,
        ]) {
            *m = m.max(v);
        }
        rows.push(row);
    }
    Ok(GameComparison {
        condition_holds,
        rows,
        dominance_violations,
        max_genuine_no_backup: maxima[0],
        max_genuine_backup: maxima[1],
        max_fake_no_backup: maxima[2],
        max_fake_backup: maxima[3],
    })
}
