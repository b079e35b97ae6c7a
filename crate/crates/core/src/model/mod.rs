//! Boards, states, schedules and utility families.

mod board;
mod utility;

pub use board::{successor_states, GameState, PrizeLadder, RoundSchedule, MAX_LADDER};
pub use utility::{certainty_equivalent, utility_value, UtilitySpec, LOG_GAMMA_EPS};

use serde::{Deserialize, Serialize};
use std::fmt;

/// The contestant's choice at an offer point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    /// Take the banker's offer; ends the game.
    Deal,
    /// Refuse and keep opening cases.
    NoDeal,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Deal => "Deal",
            Action::NoDeal => "No Deal",
        })
    }
}
