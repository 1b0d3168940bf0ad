//! Acceptance suite: one test per gate criterion, each printing a PASS line
//! (run with `--nocapture` to see them). Every tolerance is pinned here.

use std::time::Instant;

use ransom_game::best_response::{
    best_response, discard_threshold, pay_threshold, regime, regime_indicator, region_boundary,
    RansomRegime,
};
use ransom_game::equilibrium::{
    compare_games, comparative_statics, find_equilibrium, EvalMode, SearchConfig, SweepParameter,
};
use ransom_game::game_core::{victim_expected_payoff, GameParams, GameVariant, HackerType, VictimAction};
use ransom_game::hacker_payoff::{expected_revenue, type_revenue_gap};
use ransom_game::simulation::playout;
use ransom_game::stochastics::{PaymentWillingness, RngStream, ValuationDistribution};

fn example_params() -> GameParams {
    GameParams {
        p: 0.9,
        p1: 0.1,
        p3: None,
        c1: 1.0,
        c2: 0.5,
        c3: None,
        c4: 0.2,
        b1: 1.0,
        b2: 1.5,
        willingness: PaymentWillingness::PowerDecay { exponent: 2.0 },
        valuation: ValuationDistribution::Exponential { rate: 1.0 },
    }
}

fn example_params_backup() -> GameParams {
    GameParams { p3: Some(0.3), c3: Some(0.2), ..example_params() }
}

/// Frozen regression fixtures, first computed by the fine-grid search below
/// and cross-checked against two independent maximizers.
const BOUNDARY_NO_BACKUP: f64 = 1.206238937782051;
const BOUNDARY_BACKUP: f64 = 1.0358518813619507;
const GENUINE_RANSOM_NO_BACKUP: f64 = 0.862269510;
const FAKE_RANSOM_NO_BACKUP: f64 = 0.399999894;
const GENUINE_PAYOFF_NO_BACKUP: f64 = 0.129952908787;
const FAKE_PAYOFF_NO_BACKUP: f64 = 1.377062347644;
const GENUINE_RANSOM_BACKUP: f64 = 0.758142513;
const FAKE_RANSOM_BACKUP: f64 = 0.399853450;
const GENUINE_PAYOFF_BACKUP: f64 = 0.122462396902;
const FAKE_PAYOFF_BACKUP: f64 = 1.377058303653;

fn random_params(s: &mut RngStream, backup: bool) -> GameParams {
    let p1 = s.uniform_in(0.02, 0.6);
    let p = s.uniform_in(p1 + 0.05, 0.98);
    let willingness = match (s.uniform() * 3.0) as usize {
        0 => PaymentWillingness::PowerDecay { exponent: s.uniform_in(1.0, 4.0) },
        1 => PaymentWillingness::ExpDecay { scale: s.uniform_in(0.2, 3.0) },
        _ => PaymentWillingness::CutoffLinear {
            level: s.uniform_in(0.0, 1.0),
            cutoff: s.uniform_in(0.5, 8.0),
        },
    };
    let valuation = match (s.uniform() * 3.0) as usize {
        0 => ValuationDistribution::Exponential { rate: s.uniform_in(0.25, 2.5) },
        1 => ValuationDistribution::LogNormal {
            mu: s.uniform_in(-1.0, 1.0),
            sigma: s.uniform_in(0.25, 1.25),
        },
        _ => {
            let lo = s.uniform_in(0.0, 2.0);
            ValuationDistribution::Uniform { lo, hi: lo + s.uniform_in(0.5, 6.0) }
        }
    };
    let b1 = s.uniform_in(0.0, 2.0);
    let (p3, c3) = if backup {
        (Some(s.uniform_in(0.0, 0.9)), Some(s.uniform_in(0.0, 2.0)))
    } else {
        (None, None)
    };
    GameParams {
        p,
        p1,
        p3,
        c1: s.uniform_in(0.0, 3.0),
        c2: s.uniform_in(0.0, 2.0),
        c3,
        c4: s.uniform_in(0.0, 1.0),
        b1,
        b2: b1 + s.uniform_in(0.0, 2.0),
        willingness,
        valuation,
    }
}

/// Tie order: discarding wins any tie, the contest action beats paying.
fn oracle_best_response(params: &GameParams, variant: GameVariant, x: f64, r: f64) -> VictimAction {
    let e = |a| victim_expected_payoff(params, variant, x, a, r).unwrap();
    let contest = variant.contest_action();
    let (ed, ep, ec) = (e(VictimAction::Discard), e(VictimAction::Pay), e(contest));
    if ed >= ep && ed >= ec {
        VictimAction::Discard
    } else if ec >= ep {
        contest
    } else {
        VictimAction::Pay
    }
}

#[test]
fn criterion_1_best_response_matches_exhaustive_argmax() {
    let started = Instant::now();
    let mut stream = RngStream::from_seed(0xA11CE);
    let draws_per_variant = 12_000;
    for variant in [GameVariant::NoBackup, GameVariant::Backup] {
        let mut mismatches = 0usize;
        for _ in 0..draws_per_variant {
            let params = random_params(&mut stream, variant == GameVariant::Backup);
            params.validate().unwrap();
            let x = if stream.bernoulli(0.5) {
                params.valuation.sample(&mut stream)
            } else {
                stream.uniform_in(0.0, params.valuation.quantile(0.999))
            };
            let r = if stream.bernoulli(0.05) { 0.0 } else { 1.0 / stream.uniform_in(0.1, 1.0) - 1.0 };
            let fast = best_response(&params, variant, x, r).unwrap();
            let slow = oracle_best_response(&params, variant, x, r);
            if fast != slow {
                mismatches += 1;
                eprintln!("mismatch: {variant} x={x} r={r} fast={fast} slow={slow} params={params:?}");
            }
        }
        assert_eq!(mismatches, 0, "{variant}: {mismatches} mismatches in {draws_per_variant} draws");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    println!(
        "[acceptance] criterion 1 PASS — threshold strategy equals exhaustive argmax on {} draws per variant ({elapsed:?})",
        draws_per_variant
    );
}

#[test]
fn criterion_2_closed_form_revenue_matches_monte_carlo() {
    let started = Instant::now();
    let n = 1_000_000u64;
    let cases: Vec<(GameParams, GameVariant, f64)> = [0.3, 0.8622695, 1.0, 1.5, 3.0]
        .iter()
        .map(|&r| (example_params(), GameVariant::NoBackup, r))
        .chain(
            [0.3, 0.7581425, 1.0, 1.2, 2.5]
                .iter()
                .map(|&r| (example_params_backup(), GameVariant::Backup, r)),
        )
        .collect();

    let mut pair = 0usize;
    for (case_idx, (params, variant, r)) in cases.iter().enumerate() {
        // spread the pairs across both regimes
        let base = RngStream::from_seed(9000 + case_idx as u64);
        let mut stats = [(0u64, 0.0f64, 0.0f64); 2]; // (count, mean, m2) per type
        for i in 0..n {
            let mut s = base.substream(i);
            let rec = playout(params, *variant, *r, &mut s).unwrap();
            let slot = if rec.hacker_type == HackerType::Genuine { 0 } else { 1 };
            let (count, mean, m2) = &mut stats[slot];
            *count += 1;
            let delta = rec.hacker_payoff - *mean;
            *mean += delta / *count as f64;
            *m2 += delta * (rec.hacker_payoff - *mean);
        }
        for (slot, hacker_type) in HackerType::ALL.iter().enumerate() {
            pair += 1;
            let (count, mean, m2) = stats[slot];
            let se = (m2 / (count - 1) as f64).sqrt() / (count as f64).sqrt();
            let closed = expected_revenue(params, *variant, *hacker_type, *r).unwrap() - params.c4;
            let dev = (mean - closed).abs();
            assert!(
                dev <= 3.0 * se,
                "pair {pair} ({variant} {hacker_type} r={r}): |{mean} - {closed}| = {dev} > 3se = {}",
                3.0 * se
            );
        }
    }
    let elapsed = started.elapsed();
    assert_eq!(pair, 20);
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}, budget 2 min");
    println!("[acceptance] criterion 2 PASS — 20 Monte Carlo pairs within 3 standard errors ({elapsed:?})");
}

fn sign_of(v: f64) -> i32 {
    if v.abs() <= 1e-12 {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

#[test]
fn criterion_3_threshold_signs_follow_the_regime_indicator() {
    let mut stream = RngStream::from_seed(0x51A7);
    let mut violations = 0usize;
    for set in 0..50 {
        let backup = set % 2 == 1;
        let variant = if backup { GameVariant::Backup } else { GameVariant::NoBackup };
        let params = random_params(&mut stream, backup);
        let part = region_boundary(&params, variant).unwrap();
        assert!(part.residual <= 1e-9, "set {set}: residual {}", part.residual);
        let span = (3.0 * part.boundary + 5.0).min(params.valuation.quantile(0.9999) * 20.0 + 10.0);
        for i in 0..1000 {
            let r = span * i as f64 / 999.0;
            let ind = regime_indicator(&params, variant, r).unwrap();
            let ps = pay_threshold(&params, variant, r).unwrap();
            let pl = discard_threshold(&params, variant, r).unwrap();
            let rp = r / params.p;
            for v in [ps - rp, pl - rp, ps - pl] {
                let (a, b) = (sign_of(v), sign_of(ind));
                if a != 0 && b != 0 && a != b {
                    violations += 1;
                    eprintln!("set {set} r={r}: sign {a} vs indicator {b} ({params:?})");
                }
            }
        }
    }
    assert_eq!(violations, 0);
    println!("[acceptance] criterion 3 PASS — sign structure holds on 50 random parameter sets x 1000-point grids");
}

/// Exhaustive search over a million-point compactified grid; the independent
/// oracle behind the frozen equilibrium fixtures.
fn fine_grid_max(params: &GameParams, variant: GameVariant, hacker_type: HackerType) -> (f64, f64) {
    let n = 1_000_000usize;
    let mut best = (0.0, f64::NEG_INFINITY);
    for j in (1..=n).rev() {
        let r = n as f64 / j as f64 - 1.0;
        let v = expected_revenue(params, variant, hacker_type, r).unwrap();
        if v > best.1 {
            best = (r, v);
        }
    }
    best
}

#[test]
fn criterion_4_no_backup_example_reproduction() {
    let params = example_params();
    let variant = GameVariant::NoBackup;
    let cfg = SearchConfig::default();
    let genuine = find_equilibrium(&params, variant, HackerType::Genuine, &cfg).unwrap();
    let fake = find_equilibrium(&params, variant, HackerType::Fake, &cfg).unwrap();

    assert!(genuine.launched && fake.launched);
    assert!(fake.ransom < genuine.ransom);
    assert_eq!(regime(&params, variant, fake.ransom).unwrap(), RansomRegime::Small);

    let boundary = region_boundary(&params, variant).unwrap().boundary;
    assert!((boundary - 1.205).abs() <= 0.01, "bisection boundary {boundary}");
    assert!((boundary - BOUNDARY_NO_BACKUP).abs() <= 1e-6);
    assert!((genuine.ransom - GENUINE_RANSOM_NO_BACKUP).abs() <= 1e-6);
    assert!((fake.ransom - FAKE_RANSOM_NO_BACKUP).abs() <= 1e-6);
    assert!((genuine.payoff - GENUINE_PAYOFF_NO_BACKUP).abs() <= 1e-9);
    assert!((fake.payoff - FAKE_PAYOFF_NO_BACKUP).abs() <= 1e-9);

    // independent oracle: exhaustive fine-grid search
    for (t, eq) in [(HackerType::Genuine, &genuine), (HackerType::Fake, &fake)] {
        let (r_grid, v_grid) = fine_grid_max(&params, variant, t);
        assert!(
            expected_revenue(&params, variant, t, eq.ransom).unwrap() >= v_grid - 1e-9,
            "{t}: solver value below grid max"
        );
        assert!((eq.ransom - r_grid).abs() <= 1e-3, "{t}: solver {} vs grid {r_grid}", eq.ransom);
    }

    // facing the genuine hacker: higher discard threshold, narrower pay band
    let discard_genuine = genuine.ransom / params.p;
    let discard_fake = fake.ransom / params.p;
    assert!(discard_genuine > discard_fake);
    let band_genuine = pay_threshold(&params, variant, genuine.ransom).unwrap() - discard_genuine;
    let band_fake = pay_threshold(&params, variant, fake.ransom).unwrap() - discard_fake;
    assert!(band_genuine < band_fake);

    println!("[acceptance] criterion 4 PASS — no-backup example: both launch, fake asks less, fixtures regress to 1e-6");
}

#[test]
fn criterion_5_backup_example_reproduction() {
    let params = example_params_backup();
    let variant = GameVariant::Backup;
    let cfg = SearchConfig::default();
    let genuine = find_equilibrium(&params, variant, HackerType::Genuine, &cfg).unwrap();
    let fake = find_equilibrium(&params, variant, HackerType::Fake, &cfg).unwrap();

    assert!(genuine.launched && fake.launched);
    assert!(fake.ransom < genuine.ransom);
    assert_eq!(regime(&params, variant, fake.ransom).unwrap(), RansomRegime::Small);

    let boundary = region_boundary(&params, variant).unwrap().boundary;
    assert!((boundary - BOUNDARY_BACKUP).abs() <= 1e-6);
    assert!((genuine.ransom - GENUINE_RANSOM_BACKUP).abs() <= 1e-6);
    assert!((fake.ransom - FAKE_RANSOM_BACKUP).abs() <= 1e-6);
    assert!((genuine.payoff - GENUINE_PAYOFF_BACKUP).abs() <= 1e-9);
    assert!((fake.payoff - FAKE_PAYOFF_BACKUP).abs() <= 1e-9);

    let discard_genuine = genuine.ransom / params.p;
    let discard_fake = fake.ransom / params.p;
    assert!(discard_genuine > discard_fake);
    let band_genuine = pay_threshold(&params, variant, genuine.ransom).unwrap() - discard_genuine;
    let band_fake = pay_threshold(&params, variant, fake.ransom).unwrap() - discard_fake;
    assert!(band_genuine < band_fake);

    println!("[acceptance] criterion 5 PASS — backup example: fake asks less, fixtures regress to 1e-6");
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn criterion_6_proposition_suites() {
    let cfg = SearchConfig::default();
    let no_backup = example_params();
    let backup = example_params_backup();
    let mut runs = 0usize;

    // cost monotonicity at fixed ransoms, regime-resolved
    let cost_cases: Vec<(GameParams, GameVariant, SweepParameter, Vec<f64>, f64)> = vec![
        (no_backup.clone(), GameVariant::NoBackup, SweepParameter::C1, linspace(0.8, 1.6, 30), 1.0),
        (no_backup.clone(), GameVariant::NoBackup, SweepParameter::C1, linspace(0.8, 1.6, 30), 2.0),
        (no_backup.clone(), GameVariant::NoBackup, SweepParameter::C2, linspace(0.2, 1.4, 30), 1.0),
        (no_backup.clone(), GameVariant::NoBackup, SweepParameter::C2, linspace(0.2, 1.4, 30), 2.0),
        (no_backup.clone(), GameVariant::NoBackup, SweepParameter::C4, linspace(0.05, 1.0, 30), 1.0),
        (backup.clone(), GameVariant::Backup, SweepParameter::C1, linspace(0.8, 1.6, 30), 0.8),
        (backup.clone(), GameVariant::Backup, SweepParameter::C1, linspace(0.8, 1.6, 30), 2.0),
        (backup.clone(), GameVariant::Backup, SweepParameter::C2, linspace(0.2, 1.4, 30), 0.8),
        (backup.clone(), GameVariant::Backup, SweepParameter::C2, linspace(0.2, 1.4, 30), 2.0),
        (backup.clone(), GameVariant::Backup, SweepParameter::C3, linspace(0.05, 0.4, 30), 0.8),
        (backup.clone(), GameVariant::Backup, SweepParameter::C3, linspace(0.05, 0.4, 30), 2.0),
        (backup.clone(), GameVariant::Backup, SweepParameter::C4, linspace(0.05, 1.0, 30), 0.8),
    ];
    for (params, variant, parameter, grid, r) in cost_cases {
        for t in HackerType::ALL {
            let report = comparative_statics(
                &params,
                variant,
                t,
                parameter,
                &grid,
                EvalMode::FixedRansom(r),
                &cfg,
            )
            .unwrap();
            assert_eq!(
                report.violations, 0,
                "{variant} {t} {parameter} at r={r}: {} violations",
                report.violations
            );
            runs += 1;
        }
    }

    // event-probability monotonicity at equilibrium
    let prob_cases: Vec<(GameParams, GameVariant, SweepParameter, Vec<f64>)> = vec![
        (no_backup.clone(), GameVariant::NoBackup, SweepParameter::P, linspace(0.5, 0.95, 30)),
        (no_backup.clone(), GameVariant::NoBackup, SweepParameter::P1, linspace(0.05, 0.3, 30)),
        (no_backup.clone(), GameVariant::NoBackup, SweepParameter::WillingnessScale, linspace(1.6, 3.0, 30)),
        (backup.clone(), GameVariant::Backup, SweepParameter::P, linspace(0.5, 0.95, 30)),
        (backup.clone(), GameVariant::Backup, SweepParameter::P1, linspace(0.05, 0.3, 30)),
        (backup.clone(), GameVariant::Backup, SweepParameter::P3, linspace(0.1, 0.6, 30)),
        (backup.clone(), GameVariant::Backup, SweepParameter::WillingnessScale, linspace(1.6, 3.0, 30)),
    ];
    for (params, variant, parameter, grid) in prob_cases {
        for t in HackerType::ALL {
            let report =
                comparative_statics(&params, variant, t, parameter, &grid, EvalMode::Equilibrium, &cfg)
                    .unwrap();
            assert!(!report.advisory, "{variant} {t} {parameter}: unexpectedly advisory");
            assert_eq!(report.violations, 0, "{variant} {t} {parameter}: {report:?}");
            runs += 1;
        }
    }

    // cheap recovery: the backup game pays the hacker less on the small regime
    let cmp = compare_games(&backup, &linspace(0.0, 3.0, 30)).unwrap();
    assert!(cmp.condition_holds);
    assert_eq!(cmp.dominance_violations, 0);

    println!("[acceptance] criterion 6 PASS — {runs} monotonicity sweeps and the dominance grid show zero violations");
}

#[test]
fn criterion_7_expensive_recovery_counterexample() {
    let params = GameParams {
        c1: 0.3,
        p1: 0.3,
        p3: Some(0.3),
        c3: Some(0.6),
        ..example_params()
    };
    let (p3, c3) = (0.3, 0.6);
    assert!(c3 > p3 * params.c1);
    let cfg = SearchConfig::default();
    let mut maxima = [[0.0f64; 2]; 2];
    for (vi, variant) in [GameVariant::NoBackup, GameVariant::Backup].into_iter().enumerate() {
        for (ti, t) in HackerType::ALL.into_iter().enumerate() {
            let eq = find_equilibrium(&params, variant, t, &cfg).unwrap();
            maxima[vi][ti] = expected_revenue(&params, variant, t, eq.argmax_set[0]).unwrap() - params.c4;
        }
    }
    assert!(
        maxima[1][0] > maxima[0][0],
        "genuine: backup max {} must exceed no-backup max {}",
        maxima[1][0],
        maxima[0][0]
    );
    assert!(
        maxima[1][1] > maxima[0][1],
        "fake: backup max {} must exceed no-backup max {}",
        maxima[1][1],
        maxima[0][1]
    );
    println!("[acceptance] criterion 7 PASS — with dear recovery both types earn more in the backup game");
}

#[test]
fn criterion_8_vanishing_recovery_reduces_to_no_backup() {
    let params = GameParams { p3: Some(0.0), c3: Some(0.0), ..example_params() };
    let cfg = SearchConfig::default();
    for i in 0..400 {
        let r = i as f64 * 0.02;
        let ps = pay_threshold(&params, GameVariant::NoBackup, r).unwrap();
        let ps_b = pay_threshold(&params, GameVariant::Backup, r).unwrap();
        assert!((ps - ps_b).abs() <= 1e-12 * (1.0 + ps.abs()));
        let pl = discard_threshold(&params, GameVariant::NoBackup, r).unwrap();
        let pl_b = discard_threshold(&params, GameVariant::Backup, r).unwrap();
        assert!((pl - pl_b).abs() <= 1e-12 * (1.0 + pl.abs()));
        for t in HackerType::ALL {
            let e = expected_revenue(&params, GameVariant::NoBackup, t, r).unwrap();
            let e_b = expected_revenue(&params, GameVariant::Backup, t, r).unwrap();
            assert!((e - e_b).abs() <= 1e-12 * (1.0 + e.abs()));
        }
    }
    for t in HackerType::ALL {
        let a = find_equilibrium(&params, GameVariant::NoBackup, t, &cfg).unwrap();
        let b = find_equilibrium(&params, GameVariant::Backup, t, &cfg).unwrap();
        assert!((a.ransom - b.ransom).abs() <= 1e-12);
        assert!((a.payoff - b.payoff).abs() <= 1e-12);
        assert_eq!(a.launched, b.launched);
    }
    println!("[acceptance] criterion 8 PASS — zero-probability free recovery reproduces the no-backup game to 1e-12");
}

#[test]
fn criterion_9_fake_dominates_and_the_gap_dips_at_the_boundary() {
    for (params, variant) in [
        (example_params(), GameVariant::NoBackup),
        (example_params_backup(), GameVariant::Backup),
    ] {
        for i in 0..600 {
            let r = i as f64 * 0.02;
            let genuine = expected_revenue(&params, variant, HackerType::Genuine, r).unwrap();
            let fake = expected_revenue(&params, variant, HackerType::Fake, r).unwrap();
            assert!(fake >= genuine - 1e-12, "{variant} r={r}: fake {fake} < genuine {genuine}");
        }

        // gap shape: falling before the boundary, rising after
        let boundary = region_boundary(&params, variant).unwrap().boundary;
        let mut prev = f64::INFINITY;
        for i in 0..=300 {
            let r = boundary * i as f64 / 300.0;
            let gap = type_revenue_gap(&params, variant, r).unwrap();
            assert!(gap <= prev + 1e-9, "{variant}: gap rose before the boundary at r={r}");
            prev = gap;
        }
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=300 {
            let r = boundary + 8.0 * i as f64 / 300.0;
            let gap = type_revenue_gap(&params, variant, r).unwrap();
            assert!(gap >= prev - 1e-9, "{variant}: gap fell after the boundary at r={r}");
            prev = gap;
        }
    }
    println!("[acceptance] criterion 9 PASS — fake revenue dominates pointwise; the type gap is unimodal with its minimum at the boundary");
}
