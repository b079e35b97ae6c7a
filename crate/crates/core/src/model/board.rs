use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest board representable by the bitmask state encoding.
pub const MAX_LADDER: usize = 64;

/// Distinct, strictly positive prizes in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<f64>", try_from = "Vec<f64>")]
pub struct PrizeLadder {
    prizes: Vec<f64>,
}

impl PrizeLadder {
    /// Builds a ladder from prizes in any order.
    pub fn new(mut prizes: Vec<f64>) -> Result<Self> {
        if prizes.len() < 2 {
            return Err(Error::InvalidLadder(format!(
                "need at least 2 prizes, got {}",
                prizes.len()
            )));
        }
        if prizes.len() > MAX_LADDER {
            return Err(Error::InvalidLadder(format!(
                "at most {MAX_LADDER} prizes are supported, got {}",
                prizes.len()
            )));
        }
        if let Some(bad) = prizes.iter().find(|p| !p.is_finite() || **p <= 0.0) {
            return Err(Error::InvalidLadder(format!(
                "prizes must be finite and strictly positive, got {bad}"
            )));
        }
        prizes.sort_by(f64::total_cmp);
        if let Some((a, _)) = prizes.iter().tuple_windows().find(|(a, b)| a == b) {
            return Err(Error::InvalidLadder(format!("duplicate prize {a}")));
        }
        Ok(Self { prizes })
    }

    pub fn prizes(&self) -> &[f64] {
        &self.prizes
    }

    pub fn len(&self) -> usize {
        self.prizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prizes.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.prizes[self.prizes.len() - 1]
    }

    /// Mask with every ladder position set.
    pub fn full_mask(&self) -> u64 {
        if self.prizes.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.prizes.len()) - 1
        }
    }

    /// Ladder position of an exact prize value.
    pub fn position(&self, prize: f64) -> Option<usize> {
        self.prizes.iter().position(|p| *p == prize)
    }

    /// Mask for a set of prize values, all of which must sit on the ladder.
    pub fn mask_of(&self, values: &[f64]) -> Result<u64> {
        let mut mask = 0u64;
        for v in values {
            let i = self
                .position(*v)
                .ok_or_else(|| Error::InvalidState(format!("prize {v} is not on the board")))?;
            if mask & (1 << i) != 0 {
                return Err(Error::InvalidState(format!("prize {v} listed twice")));
            }
            mask |= 1 << i;
        }
        Ok(mask)
    }
}

impl TryFrom<Vec<f64>> for PrizeLadder {
    type Error = Error;

    fn try_from(prizes: Vec<f64>) -> Result<Self> {
        Self::new(prizes)
    }
}

impl From<PrizeLadder> for Vec<f64> {
    fn from(l: PrizeLadder) -> Self {
        l.prizes
    }
}

impl TryFrom<Vec<usize>> for RoundSchedule {
    type Error = Error;

    fn try_from(opens: Vec<usize>) -> Result<Self> {
        Self::new(opens)
    }
}

impl From<RoundSchedule> for Vec<usize> {
    fn from(s: RoundSchedule) -> Self {
        s.opens_per_round
    }
}

/// Number of cases opened after each refused offer.
///
/// Entry `r` is consumed when the contestant refuses the offer made at
/// offer point `r`. Once the schedule runs out, refusing the last offer
/// reveals the contestant's own case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct RoundSchedule {
    opens_per_round: Vec<usize>,
}

impl RoundSchedule {
    pub fn new(opens_per_round: Vec<usize>) -> Result<Self> {
        if opens_per_round.contains(&0) {
            return Err(Error::InvalidSchedule(
                "every round must open at least one case".into(),
            ));
        }
        Ok(Self { opens_per_round })
    }

    /// One case per round until a single case remains.
    pub fn one_at_a_time(prizes: usize) -> Self {
        Self {
            opens_per_round: vec![1; prizes.saturating_sub(1)],
        }
    }

    pub fn opens(&self) -> &[usize] {
        &self.opens_per_round
    }

    pub fn total_opens(&self) -> usize {
        self.opens_per_round.iter().sum()
    }

    /// Cases opened after refusing at `round`, for a state with `remaining`
    /// prizes. Past the end of the schedule every other case is opened.
    pub fn opens_after(&self, round: usize, remaining: usize) -> usize {
        self.opens_per_round
            .get(round)
            .copied()
            .unwrap_or(remaining.saturating_sub(1))
    }

    /// Checks the schedule against a board of `prizes` cases.
    pub fn validate_for(&self, prizes: usize) -> Result<()> {
        let total = self.total_opens();
        if total + 1 > prizes {
            return Err(Error::InvalidSchedule(format!(
                "schedule opens {total} cases but only {} can be opened from {prizes}",
                prizes.saturating_sub(1)
            )));
        }
        Ok(())
    }

    /// Prizes remaining at offer point `round` of a board that starts with
    /// `prizes` cases, or `None` if the round is past the end of the game.
    /// The round after the schedule runs out holds the revealed last case.
    pub fn remaining_at(&self, prizes: usize, round: usize) -> Option<usize> {
        let scheduled = self.opens_per_round.len();
        if round > scheduled {
            let last = self.remaining_at(prizes, scheduled)?;
            return (round == scheduled + 1 && last > 1).then_some(1);
        }
        let opened: usize = self.opens_per_round[..round].iter().sum();
        prizes.checked_sub(opened).filter(|n| *n >= 1)
    }
}

/// Remaining prizes (as ladder positions) at an offer point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GameState {
    pub round: usize,
    pub remaining: u64,
}

impl GameState {
    pub fn new(remaining: u64, round: usize) -> Self {
        Self { remaining, round }
    }

    pub fn initial(ladder: &PrizeLadder) -> Self {
        Self::new(ladder.full_mask(), 0)
    }

    pub fn len(&self) -> usize {
        self.remaining.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.remaining == 0
    }

    pub fn is_terminal(&self) -> bool {
        self.len() == 1
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64).filter(move |i| self.remaining & (1u64 << i) != 0)
    }

    /// Remaining prize values, ascending.
    pub fn prizes(&self, ladder: &PrizeLadder) -> Vec<f64> {
        self.positions().map(|i| ladder.prizes()[i]).collect()
    }

    pub fn mean(&self, ladder: &PrizeLadder) -> f64 {
        let prizes = self.prizes(ladder);
        prizes.iter().sum::<f64>() / prizes.len() as f64
    }

    pub fn check_against(&self, ladder: &PrizeLadder) -> Result<()> {
        if self.remaining == 0 {
            return Err(Error::InvalidState("no prizes remain".into()));
        }
        if self.remaining & !ladder.full_mask() != 0 {
            return Err(Error::InvalidState(
                "state references positions beyond the ladder".into(),
            ));
        }
        Ok(())
    }
}

/// Every state reachable by opening `k` of the remaining cases, each with
/// probability `1 / C(n, k)`, ordered by ascending bitmask. The round
/// index advances by one.
pub fn successor_states(state: &GameState, k: usize) -> Result<Vec<(GameState, f64)>> {
    let n = state.len();
    if k == 0 || k >= n {
        return Err(Error::TooManyOpens {
            opens: k,
            remaining: n,
        });
    }
    let positions: Vec<usize> = state.positions().collect();
    let mut next: Vec<u64> = positions
        .iter()
        .combinations(k)
        .map(|opened| opened.iter().fold(state.remaining, |m, i| m & !(1u64 << **i)))
        .collect();
    next.sort_unstable();
    let p = 1.0 / next.len() as f64;
    Ok(next
        .into_iter()
        .map(|mask| (GameState::new(mask, state.round + 1), p))
        .collect())
}
