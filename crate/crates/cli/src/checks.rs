//! The `check` subcommand: every monotonicity, ordering and dominance
//! property the solver claims, run against one parameter set.

use anyhow::Result;
use serde::Serialize;

use ransom_game::best_response::region_boundary;
use ransom_game::equilibrium::{
    check_ordering, compare_games, comparative_statics, ComparativeReport, EvalMode, GameComparison,
    OrderingReport, SearchConfig, SweepParameter,
};
use ransom_game::hacker_payoff::{expected_revenue, type_revenue_gap};
use ransom_game::stochastics::PaymentWillingness;
use ransom_game::{GameParams, GameVariant, HackerType};

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub variant: GameVariant,
    pub ordering: OrderingReport,
    pub sweeps: Vec<ComparativeReport>,
    /// Ransoms at which the fake type earned less than the genuine type.
    pub fake_dominance_violations: usize,
    /// Shape failures of the type gap (fall-then-rise around the boundary);
    /// checked only when the ordering premise applies.
    pub gap_shape_violations: Option<usize>,
    /// Backup-versus-no-backup comparison, when the backup fields exist.
    pub game_comparison: Option<GameComparison>,
    /// Total gating violations; advisory sweeps are excluded.
    pub violations: usize,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Multiplicative grid around a base value; additive when the base is zero.
fn around(base: f64, n: usize) -> Vec<f64> {
    if base > 0.0 {
        linspace(0.8 * base, 1.6 * base, n)
    } else {
        linspace(0.0, 0.5, n)
    }
}

fn willingness_scale_grid(w: &PaymentWillingness, n: usize) -> Option<Vec<f64>> {
    let (value, lo_cap, hi_cap) = match *w {
        PaymentWillingness::PowerDecay { exponent } => (exponent, 1.0, f64::INFINITY),
        PaymentWillingness::ExpDecay { scale } => (scale, f64::MIN_POSITIVE, f64::INFINITY),
        PaymentWillingness::CutoffLinear { level, .. } => (level, 0.0, 1.0),
    };
    let lo = (0.85 * value).max(lo_cap);
    let hi = (1.3 * value).min(hi_cap);
    (hi > lo).then(|| linspace(lo, hi, n))
}

pub fn run(params: &GameParams, variant: GameVariant, points: usize) -> Result<CheckReport> {
    let cfg = SearchConfig::default();
    let n = points.max(3);
    let boundary = region_boundary(params, variant)?.boundary;

    let ordering = check_ordering(params, variant, &cfg)?;
    let mut violations = usize::from(ordering.holds == Some(false));

    let mut sweeps = Vec::new();
    let mut push_sweep = |report: ComparativeReport, violations: &mut usize| {
        if !report.advisory {
            *violations += report.violations;
        }
        sweeps.push(report);
    };

    // cost monotonicity at a fixed ransom on each side of the boundary
    let fixed_ransoms = [(2.0 / 3.0) * boundary, (5.0 / 3.0) * boundary + 0.5];
    let mut cost_parameters = vec![
        (SweepParameter::C1, around(params.c1, n)),
        (SweepParameter::C2, around(params.c2, n)),
        (SweepParameter::C4, around(params.c4, n)),
    ];
    if variant == GameVariant::Backup {
        cost_parameters.push((SweepParameter::C3, around(params.c3.unwrap_or(0.0), n)));
    }
    for (parameter, grid) in &cost_parameters {
        for &r in &fixed_ransoms {
            for hacker_type in HackerType::ALL {
                let report = comparative_statics(
                    params,
                    variant,
                    hacker_type,
                    *parameter,
                    grid,
                    EvalMode::FixedRansom(r),
                    &cfg,
                )?;
                push_sweep(report, &mut violations);
            }
        }
    }

    // event-probability monotonicity at equilibrium
    let mut probability_grids: Vec<(SweepParameter, Vec<f64>)> = Vec::new();
    let p_lo = (params.p1 + 0.02).max(0.45);
    let p_hi = 0.97;
    if p_hi > p_lo {
        probability_grids.push((SweepParameter::P, linspace(p_lo, p_hi, n)));
    }
    let p1_hi = (2.5 * params.p1).min(params.p - 0.02);
    let p1_lo = (0.5 * params.p1).max(1e-3);
    if p1_hi > p1_lo {
        probability_grids.push((SweepParameter::P1, linspace(p1_lo, p1_hi, n)));
    }
    if variant == GameVariant::Backup {
        let p3 = params.p3.unwrap_or(0.0);
        let p3_lo = (0.5 * p3).max(0.02);
        let p3_hi = (2.0 * p3).min(0.9);
        if p3_hi > p3_lo {
            probability_grids.push((SweepParameter::P3, linspace(p3_lo, p3_hi, n)));
        }
    }
    if let Some(grid) = willingness_scale_grid(&params.willingness, n) {
        probability_grids.push((SweepParameter::WillingnessScale, grid));
    }
    for (parameter, grid) in &probability_grids {
        for hacker_type in HackerType::ALL {
            let report = comparative_statics(
                params,
                variant,
                hacker_type,
                *parameter,
                grid,
                EvalMode::Equilibrium,
                &cfg,
            )?;
            push_sweep(report, &mut violations);
        }
    }

    // the fake type never earns less than the genuine type
    let span = (3.0 * boundary).max(5.0);
    let mut fake_dominance_violations = 0usize;
    for i in 0..(4 * n) {
        let r = span * i as f64 / (4 * n - 1) as f64;
        let genuine = expected_revenue(params, variant, HackerType::Genuine, r)?;
        let fake = expected_revenue(params, variant, HackerType::Fake, r)?;
        if fake < genuine - 1e-12 * (1.0 + genuine.abs()) {
            fake_dominance_violations += 1;
        }
    }
    violations += fake_dominance_violations;

    // type-gap shape: non-increasing up to the boundary, non-decreasing after
    let gap_shape_violations = if ordering.applicable {
        let mut bad = 0usize;
        let mut prev = f64::INFINITY;
        for i in 0..=(4 * n) {
            let r = boundary * i as f64 / (4 * n) as f64;
            let gap = type_revenue_gap(params, variant, r)?;
            if gap > prev + 1e-9 * (1.0 + prev.abs()) {
                bad += 1;
            }
            prev = gap;
        }
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=(4 * n) {
            let r = boundary + (span - boundary).max(1.0) * i as f64 / (4 * n) as f64;
            let gap = type_revenue_gap(params, variant, r)?;
            if gap < prev - 1e-9 * (1.0 + prev.abs()) {
                bad += 1;
            }
            prev = gap;
        }
        violations += bad;
        Some(bad)
    } else {
        None
    };

    // with backup fields present, compare the two games
    let game_comparison = if params.p3.is_some() && params.c3.is_some() {
        let grid = linspace(0.0, span, 4 * n);
        let cmp = compare_games(params, &grid)?;
        if cmp.condition_holds {
            violations += cmp.dominance_violations;
        }
        Some(cmp)
    } else {
        None
    };

    Ok(CheckReport {
        variant,
        ordering,
        sweeps,
        fake_dominance_violations,
        gap_shape_violations,
        game_comparison,
        violations,
    })
}

impl CheckReport {
    pub fn print_summary(&self) {
        let o = &self.ordering;
        if o.applicable {
            let regime = match o.fake_regime {
                Some(ransom_game::RansomRegime::Small) => "small",
                Some(ransom_game::RansomRegime::Large) => "large",
                None => "unknown",
            };
            eprintln!(
                "ordering: genuine r* = {}, fake r* = {} ({regime} regime), holds = {}",
                o.genuine_ransom,
                o.fake_ransom,
                o.holds == Some(true)
            );
        } else {
            eprintln!("ordering: not applicable (ransom revenue is not non-increasing past the boundary)");
        }
        for s in &self.sweeps {
            let status = if s.violations == 0 {
                "ok"
            } else if s.advisory {
                "violated (advisory)"
            } else {
                "VIOLATED"
            };
            eprintln!(
                "sweep {} {} {:?} expected {:?} on {:?}: {} ({} excluded)",
                s.hacker_type, s.parameter, s.variant, s.direction, s.scope, status, s.excluded
            );
        }
        eprintln!("fake-dominance violations: {}", self.fake_dominance_violations);
        match self.gap_shape_violations {
            Some(bad) => eprintln!("type-gap shape violations: {bad}"),
            None => eprintln!("type-gap shape: skipped (premise not applicable)"),
        }
        if let Some(cmp) = &self.game_comparison {
            if cmp.condition_holds {
                eprintln!(
                    "cheap recovery: backup game dominated on the small regime, {} violations",
                    cmp.dominance_violations
                );
            } else {
                eprintln!(
                    "dear recovery: max payoffs no-backup (genuine {}, fake {}) vs backup (genuine {}, fake {})",
                    cmp.max_genuine_no_backup,
                    cmp.max_fake_no_backup,
                    cmp.max_genuine_backup,
                    cmp.max_fake_backup
                );
            }
        }
        eprintln!("total gating violations: {}", self.violations);
    }
}
