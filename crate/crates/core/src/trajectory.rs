//! Observed contestant records: remaining prizes, offers and decisions per round.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Action, GameState, PrizeLadder, RoundSchedule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub remaining: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offer: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<Action>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub contestant: String,
    pub currency: String,
    pub rounds: Vec<RoundRecord>,
    /// Show round number of `rounds[0]`; not part of the file format.
    #[serde(skip, default = "first_round_default")]
    pub first_round: usize,
}

fn first_round_default() -> usize {
    1
}

/// Parses and validates a trajectory document.
pub fn parse_trajectory(document: &str) -> Result<Trajectory> {
    let traj: Trajectory = serde_json::from_str(document)
        .map_err(|e| Error::trajectory(None, format!("schema violation: {e}")))?;
    traj.validate()?;
    Ok(traj)
}

impl Trajectory {
    /// Show round number of the record at `index`.
    pub fn round_number(&self, index: usize) -> usize {
        self.first_round + index
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds.is_empty() {
            return Err(Error::trajectory(None, "no rounds recorded"));
        }
        let last = self.rounds.len() - 1;
        let mut previous: Option<BTreeSet<u64>> = None;
        for (i, r) in self.rounds.iter().enumerate() {
            let round = self.round_number(i);
            if r.remaining.is_empty() {
                return Err(Error::trajectory(round, "no remaining prizes"));
            }
            if let Some(bad) = r.remaining.iter().find(|p| !p.is_finite() || **p <= 0.0) {
                return Err(Error::trajectory(round, format!("non-positive prize {bad}")));
            }
            let set: BTreeSet<u64> = r.remaining.iter().map(|p| p.to_bits()).collect();
            if set.len() != r.remaining.len() {
                return Err(Error::trajectory(round, "duplicate prize in remaining set"));
            }
            if let Some(prev) = &previous {
                if !(set.is_subset(prev) && set.len() < prev.len()) {
                    return Err(Error::trajectory(
                        round,
                        "remaining prizes are not a strict subset of the previous round",
                    ));
                }
            }
            if let Some(offer) = r.offer {
                if !(offer.is_finite() && offer > 0.0) {
                    return Err(Error::trajectory(round, format!("offer must be positive, got {offer}")));
                }
            }
            match r.decision {
                Some(_) if r.offer.is_none() => {
                    return Err(Error::trajectory(round, "decision recorded without an offer"));
                }
                Some(Action::Deal) if i != last => {
                    return Err(Error::trajectory(round, "a deal must be the last recorded round"));
                }
                Some(_) if r.remaining.len() == 1 => {
                    return Err(Error::trajectory(round, "no decision is possible with one case left"));
                }
                _ => {}
            }
            previous = Some(set);
        }
        Ok(())
    }

    /// Board made of the prizes still in play at the first recorded round.
    pub fn ladder(&self) -> Result<PrizeLadder> {
        PrizeLadder::new(self.rounds[0].remaining.clone())
    }

    /// Cases opened between consecutive recorded rounds.
    pub fn schedule(&self) -> Result<RoundSchedule> {
        RoundSchedule::new(
            self.rounds
                .windows(2)
                .map(|w| w[0].remaining.len() - w[1].remaining.len())
                .collect(),
        )
    }

    /// Solver state for the record at `index`, relative to [`Self::ladder`].
    pub fn state(&self, index: usize, ladder: &PrizeLadder) -> Result<GameState> {
        let mask = ladder
            .mask_of(&self.rounds[index].remaining)
            .map_err(|e| Error::trajectory(self.round_number(index), e.to_string()))?;
        Ok(GameState::new(mask, index))
    }

    /// The records from show round `from_round` on.
    pub fn window(&self, from_round: usize) -> Result<Trajectory> {
        let start = from_round
            .checked_sub(self.first_round)
            .filter(|i| *i < self.rounds.len())
            .ok_or_else(|| Error::trajectory(from_round, "round is outside the trajectory"))?;
        Ok(Trajectory {
            contestant: self.contestant.clone(),
            currency: self.currency.clone(),
            rounds: self.rounds[start..].to_vec(),
            first_round: from_round,
        })
    }

    /// Index of the last record carrying a decision.
    pub fn last_decision(&self) -> Option<usize> {
        self.rounds.iter().rposition(|r| r.decision.is_some())
    }
}
