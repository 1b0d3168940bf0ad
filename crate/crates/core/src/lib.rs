//! Solver for a two-player ransomware game with incomplete information.
//!
//! A hacker of hidden type (genuine, who decrypts once paid, or fake, who
//! never does) picks a ransom; a victim with a private file valuation then
//! discards, pays, or contests — cracking, or recovering from backup and
//! cracking on failure. The crate computes the victim's weakly dominant
//! strategy, the hackers' expected payoffs in closed form, pure and
//! randomized Bayesian Nash equilibria, comparative statics, and validates
//! all of it against a Monte Carlo playout of the full game tree.
//!
//! Entry points:
//! - [`best_response::best_response`] and [`best_response::strategy_region`]
//!   for the victim side,
//! - [`hacker_payoff::expected_revenue`] and [`hacker_payoff::payoff_curve`]
//!   for the hacker side,
//! - [`equilibrium::find_equilibrium`] and friends for equilibria and checks,
//! - [`simulation::simulate`] for the playout oracle.

pub mod best_response;
pub mod equilibrium;
pub mod error;
pub mod game_core;
pub mod hacker_payoff;
pub mod simulation;
pub mod stochastics;

pub use best_response::{RansomRegime, RegionPartition, StrategyRegion};
pub use equilibrium::{EquilibriumResult, SearchConfig};
pub use error::{GameError, Result};
pub use game_core::{GameParams, GameVariant, HackerType, VictimAction};
pub use hacker_payoff::{GridSpec, PayoffCurve};
pub use simulation::{PlayoutRecord, SimulationSummary};
pub use stochastics::{PaymentWillingness, RngStream, ValuationDistribution};
