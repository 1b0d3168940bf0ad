//! Game parameters and the exact per-profile utility functions of both
//! players, for the no-backup and with-backup variants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::stochastics::{PaymentWillingness, ValuationDistribution};

/// The hacker's private type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HackerType {
    /// Returns the decryption key once paid.
    #[serde(rename = "A1")]
    Genuine,
    /// Never returns the key; earns side income from the compromised machine.
    #[serde(rename = "A2")]
    Fake,
}

impl HackerType {
    pub const ALL: [Self; 2] = [Self::Genuine, Self::Fake];
}

impl fmt::Display for HackerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Genuine => "A1",
            Self::Fake => "A2",
        })
    }
}

/// The victim's move once the ransom demand is on the screen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VictimAction {
    /// Give up the files, pay nothing.
    #[serde(rename = "D")]
    Discard,
    /// Pay the ransom outright.
    #[serde(rename = "P")]
    Pay,
    /// Try to crack; on failure pay (with the punishment fee) with probability `p2(r)`.
    #[serde(rename = "C")]
    Crack,
    /// Restore from backup first; on failure fall through to the crack route.
    #[serde(rename = "R")]
    Recover,
}

impl fmt::Display for VictimAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Discard => "D",
            Self::Pay => "P",
            Self::Crack => "C",
            Self::Recover => "R",
        })
    }
}

/// Which game is being played.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameVariant {
    /// No backup: the victim chooses among discard, pay, crack.
    NoBackup,
    /// Backup available: the victim chooses among discard, pay, recover.
    Backup,
}

impl GameVariant {
    pub fn admissible_actions(self) -> &'static [VictimAction] {
        match self {
            Self::NoBackup => &[VictimAction::Discard, VictimAction::Pay, VictimAction::Crack],
            Self::Backup => &[VictimAction::Discard, VictimAction::Pay, VictimAction::Recover],
        }
    }

    /// The crack-style action of this variant.
    pub fn contest_action(self) -> VictimAction {
        match self {
            Self::NoBackup => VictimAction::Crack,
            Self::Backup => VictimAction::Recover,
        }
    }
}

impl fmt::Display for GameVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NoBackup => "no_backup",
            Self::Backup => "backup",
        })
    }
}

/// Exogenous probabilities and costs of the game, plus the two
/// distributional inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameParams {
    /// Prior probability that the hacker is genuine.
    pub p: f64,
    /// Probability that cracking succeeds.
    pub p1: f64,
    /// Probability that recovery from backup succeeds (backup game only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p3: Option<f64>,
    /// Cost of the cracking attempt.
    pub c1: f64,
    /// Punishment fee charged on paying after a failed crack. Not paid to the hacker.
    pub c2: f64,
    /// Cost of the recovery attempt (backup game only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c3: Option<f64>,
    /// The hacker's cost of planning and launching the attack.
    pub c4: f64,
    /// Fake hacker's side earning when the victim discards, cracks or recovers successfully.
    pub b1: f64,
    /// Fake hacker's side earning otherwise (excluding the ransom).
    pub b2: f64,
    pub willingness: PaymentWillingness,
    pub valuation: ValuationDistribution,
}

impl GameParams {
    /// Validates every constraint at once and reports all violations together.
    pub fn validate(&self) -> Result<()> {
        let mut errors = Vec::new();
        for (name, v) in [("p", self.p), ("p1", self.p1)] {
            if !((0.0..=1.0).contains(&v) && v.is_finite()) {
                errors.push(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if self.p <= self.p1 {
            errors.push(format!("p must exceed p1, got p={}, p1={}", self.p, self.p1));
        }
        if let Some(p3) = self.p3 {
            if !((0.0..=1.0).contains(&p3) && p3.is_finite()) {
                errors.push(format!("p3 must lie in [0, 1], got {p3}"));
            }
        }
        for (name, v) in [("c1", self.c1), ("c2", self.c2), ("c4", self.c4), ("b1", self.b1), ("b2", self.b2)] {
            if !(v >= 0.0 && v.is_finite()) {
                errors.push(format!("{name} must be non-negative and finite, got {v}"));
            }
        }
        if let Some(c3) = self.c3 {
            if !(c3 >= 0.0 && c3.is_finite()) {
                errors.push(format!("c3 must be non-negative and finite, got {c3}"));
            }
        }
        if self.b1 > self.b2 {
            errors.push(format!("b1 must not exceed b2, got b1={}, b2={}", self.b1, self.b2));
        }
        if self.p3.is_some() != self.c3.is_some() {
            errors.push("p3 and c3 must be given together".to_string());
        }
        self.willingness.collect_validation_errors(&mut errors);
        self.valuation.collect_validation_errors(&mut errors);
        if errors.is_empty() {
            Ok(())
        } else {
            Err(GameError::InvalidParams(errors.join("; ")))
        }
    }

    /// Recovery probability and cost effective in `variant`.
    ///
    /// The no-backup game has no recovery stage, which is the same as a
    /// recovery stage that never succeeds and costs nothing.
    pub fn recovery(&self, variant: GameVariant) -> Result<(f64, f64)> {
        match variant {
            GameVariant::NoBackup => Ok((0.0, 0.0)),
            GameVariant::Backup => match (self.p3, self.c3) {
                (Some(p3), Some(c3)) => Ok((p3, c3)),
                _ => Err(GameError::InvalidParams(
                    "the backup game requires p3 and c3".to_string(),
                )),
            },
        }
    }

    fn check_admissible(&self, variant: GameVariant, action: VictimAction) -> Result<()> {
        if variant.admissible_actions().contains(&action) {
            Ok(())
        } else {
            Err(GameError::InadmissibleAction { variant, action })
        }
    }
}

/// Probability that the contest route ends with a ransom payment: the crack
/// fails and the victim pays, after a failed recovery where one exists.
fn payment_weight(params: &GameParams, r: f64, survive_recovery: f64) -> f64 {
    params.willingness.eval(r) * (1.0 - params.p1) * survive_recovery
}

/// The victim's payoff for a full profile `(x, type, action, ransom)`.
///
/// Always non-positive; the valuation enters the contest rows only through
/// the pay-a-fake branch.
pub fn victim_utility(
    params: &GameParams,
    variant: GameVariant,
    x: f64,
    hacker_type: HackerType,
    action: VictimAction,
    r: f64,
) -> Result<f64> {
    params.check_admissible(variant, action)?;
    debug_assert!(x >= 0.0 && r >= 0.0);
    let value = match action {
        VictimAction::Discard => -x,
        VictimAction::Pay => match hacker_type {
            HackerType::Genuine => -r,
            HackerType::Fake => -x - r,
        },
        VictimAction::Crack | VictimAction::Recover => {
            let (p3, c3) = params.recovery(variant)?;
            let survive = 1.0 - p3;
            let pay = payment_weight(params, r, survive);
            let base = -c3 - (params.c1 + (params.c2 + r) * params.willingness.eval(r) * (1.0 - params.p1)) * survive;
            match hacker_type {
                HackerType::Genuine => base,
                HackerType::Fake => base - x * pay,
            }
        }
    };
    Ok(value)
}

/// The hacker's payoff for a full profile, attack cost included.
pub fn hacker_utility(
    params: &GameParams,
    variant: GameVariant,
    _x: f64,
    hacker_type: HackerType,
    action: VictimAction,
    r: f64,
) -> Result<f64> {
    params.check_admissible(variant, action)?;
    debug_assert!(r >= 0.0);
    let value = match (hacker_type, action) {
        (HackerType::Genuine, VictimAction::Discard) => 0.0,
        (HackerType::Genuine, VictimAction::Pay) => r,
        (HackerType::Genuine, VictimAction::Crack | VictimAction::Recover) => {
            let (p3, _) = params.recovery(variant)?;
            r * payment_weight(params, r, 1.0 - p3)
        }
        (HackerType::Fake, VictimAction::Discard) => params.b1,
        (HackerType::Fake, VictimAction::Pay) => params.b2 + r,
        (HackerType::Fake, VictimAction::Crack | VictimAction::Recover) => {
            let (p3, _) = params.recovery(variant)?;
            let survive = 1.0 - p3;
            // b1 on the branches that end with the files restored without payment,
            // b2 (plus the ransom with probability p2) otherwise.
            params.b1 * (p3 + survive * params.p1)
                + (params.b2 + r * params.willingness.eval(r)) * (1.0 - params.p1) * survive
        }
    };
    Ok(value - params.c4)
}

/// The victim's expected payoff for an action, averaging over the hacker type
/// with weights `{p, 1 - p}`.
pub fn victim_expected_payoff(
    params: &GameParams,
    variant: GameVariant,
    x: f64,
    action: VictimAction,
    r: f64,
) -> Result<f64> {
    params.check_admissible(variant, action)?;
    let value = match action {
        VictimAction::Discard => -x,
        VictimAction::Pay => -x * (1.0 - params.p) - r,
        VictimAction::Crack | VictimAction::Recover => {
            let (p3, c3) = params.recovery(variant)?;
            let survive = 1.0 - p3;
            let pay = payment_weight(params, r, survive);
            -x * pay * (1.0 - params.p)
                - (params.c1 + (params.c2 + r) * params.willingness.eval(r) * (1.0 - params.p1)) * survive
                - c3
        }
    };
    Ok(value)
}
