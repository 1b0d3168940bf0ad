//! Monte Carlo playout of the full game — the independent oracle for every
//! closed-form expectation in the solver.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::best_response::best_response;
use crate::error::{GameError, Result};
use crate::game_core::{GameParams, GameVariant, HackerType, VictimAction};
use crate::stochastics::RngStream;

/// One fully resolved play of the game.
///
/// Branch flags are present only when the branch was reached: crack flags
/// under the contest action (after a failed recovery where one exists),
/// the payment flag only after a failed crack.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PlayoutRecord {
    pub valuation: f64,
    pub hacker_type: HackerType,
    pub action: VictimAction,
    pub recovery_succeeded: Option<bool>,
    pub crack_succeeded: Option<bool>,
    pub paid_after_crack_fail: Option<bool>,
    pub victim_payoff: f64,
    pub hacker_payoff: f64,
}

/// Aggregate of `n` independent playouts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub n: u64,
    pub mean_hacker_payoff: f64,
    /// Sample standard deviation of the hacker payoff divided by sqrt(n).
    pub std_error: f64,
    pub mean_victim_payoff: f64,
    pub action_frequencies: BTreeMap<VictimAction, f64>,
}

/// Plays the game once at ransom `r`: draws the valuation and the hacker
/// type, lets the victim act by the dominant strategy and resolves the
/// branch randomness in order recover → crack → pay.
///
/// Valuation losses follow the utility tables: the file value is charged on
/// discard and whenever a fake hacker is paid, never on the walk-away branch
/// of a failed contest.
pub fn playout(
    params: &GameParams,
    variant: GameVariant,
    r: f64,
    stream: &mut RngStream,
) -> Result<PlayoutRecord> {
    let (p3, c3) = params.recovery(variant)?;
    let valuation = params.valuation.sample(stream);
    let hacker_type = if stream.bernoulli(params.p) { HackerType::Genuine } else { HackerType::Fake };
    let action = best_response(params, variant, valuation, r)?;

    let mut recovery_succeeded = None;
    let mut crack_succeeded = None;
    let mut paid_after_crack_fail = None;

    let fake = hacker_type == HackerType::Fake;
    let side = |amount: f64| if fake { amount } else { 0.0 };

    let (victim_payoff, hacker_income) = match action {
        VictimAction::Discard => (-valuation, side(params.b1)),
        VictimAction::Pay => {
            let victim = if fake { -valuation - r } else { -r };
            (victim, side(params.b2) + r)
        }
        VictimAction::Crack | VictimAction::Recover => {
            let mut victim_cost = 0.0;
            let mut recovered = false;
            if action == VictimAction::Recover {
                victim_cost += c3;
                let ok = stream.bernoulli(p3);
                recovery_succeeded = Some(ok);
                recovered = ok;
            }
            if recovered {
                (-victim_cost, side(params.b1))
            } else {
                victim_cost += params.c1;
                let cracked = stream.bernoulli(params.p1);
                crack_succeeded = Some(cracked);
                if cracked {
                    (-victim_cost, side(params.b1))
                } else {
                    let paid = stream.bernoulli(params.willingness.eval(r));
                    paid_after_crack_fail = Some(paid);
                    if paid {
                        victim_cost += params.c2 + r;
                        if fake {
                            victim_cost += valuation;
                        }
                        (-victim_cost, side(params.b2) + r)
                    } else {
                        (-victim_cost, side(params.b2))
                    }
                }
            }
        }
    };

    Ok(PlayoutRecord {
        valuation,
        hacker_type,
        action,
        recovery_succeeded,
        crack_succeeded,
        paid_after_crack_fail,
        victim_payoff,
        hacker_payoff: hacker_income - params.c4,
    })
}

/// Runs `n` playouts on independent sub-streams of `seed` and aggregates.
///
/// Deterministic for a fixed seed; the mean and variance use Welford
/// updates so the aggregation order cannot degrade them.
pub fn simulate(
    params: &GameParams,
    variant: GameVariant,
    r: f64,
    n: u64,
    seed: u64,
) -> Result<SimulationSummary> {
    if n == 0 {
        return Err(GameError::InvalidArgument("simulation needs at least one playout".to_string()));
    }
    let base = RngStream::from_seed(seed);
    let mut mean_hacker = 0.0;
    let mut m2_hacker = 0.0;
    let mut mean_victim = 0.0;
    let mut counts: BTreeMap<VictimAction, u64> =
        variant.admissible_actions().iter().map(|&a| (a, 0)).collect();

    for i in 0..n {
        let mut stream = base.substream(i);
        let record = playout(params, variant, r, &mut stream)?;
        let k = (i + 1) as f64;
        let delta = record.hacker_payoff - mean_hacker;
        mean_hacker += delta / k;
        m2_hacker += delta * (record.hacker_payoff - mean_hacker);
        mean_victim += (record.victim_payoff - mean_victim) / k;
        *counts.get_mut(&record.action).expect("admissible action") += 1;
    }

    let std_error = if n > 1 { (m2_hacker / (n - 1) as f64).sqrt() / (n as f64).sqrt() } else { 0.0 };
    let action_frequencies = counts.into_iter().map(|(a, c)| (a, c as f64 / n as f64)).collect();
    Ok(SimulationSummary { n, mean_hacker_payoff: mean_hacker, std_error, mean_victim_payoff: mean_victim, action_frequencies })
}
