//! Error type shared by all solver modules.

use thiserror::Error;

use crate::game_core::{GameVariant, VictimAction};

/// Errors produced by the solver.
#[derive(Debug, Clone, Error)]
pub enum GameError {
    /// Parameter validation failed. The message aggregates every violated
    /// constraint so a bad config is reported in one shot.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A threshold denominator is not strictly positive, which happens only
    /// for degenerate parameter combinations (effective payment probability
    /// mass at or above one, or a prior of exactly one).
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),

    /// The payment-willingness family has no finite bound on the ransom
    /// revenue `r * p2(r)`, so expected payoffs need not attain a maximum.
    #[error("unbounded ransom revenue: {0}")]
    UnboundedRevenue(String),

    /// The requested action is not part of the variant's action set.
    #[error("action {action} is not available in the {variant} game")]
    InadmissibleAction {
        variant: GameVariant,
        action: VictimAction,
    },

    /// No sign change of the regime indicator was found below the search cap.
    #[error("no regime boundary found below the search cap {cap}")]
    BoundarySearchFailed { cap: f64 },

    /// The regime indicator does not keep a single sign on each side of the
    /// returned boundary, i.e. the root is not unique.
    #[error("regime indicator changes sign again at r = {at} (boundary {boundary}, value {value})")]
    SignPatternViolation { boundary: f64, at: f64, value: f64 },

    /// A caller-supplied argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, GameError>;
