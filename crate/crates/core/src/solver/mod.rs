//! Exact backward induction over the reachable subset states.
//!
//! `Q(s, Deal) = u(B(s))` and `Q(s, NoDeal)` is the uniform average of
//! `max_a Q(s', a)` over the states left after the scheduled number of
//! cases is opened. A single remaining case is worth its prize under
//! either action. Ties go to Deal.

pub(crate) mod lattice;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::banker::{BankerModel, OfferRule};
use crate::error::{Error, Result};
use crate::model::{Action, GameState, PrizeLadder, RoundSchedule, UtilitySpec};
use crate::trajectory::Trajectory;

use lattice::{Lattice, NodeValue};

/// Default refusal limits for a single solve.
pub const DEFAULT_MAX_PRIZES: usize = 22;
pub const DEFAULT_MAX_EDGES: f64 = 5e8;
/// Environment variable overriding [`DEFAULT_MAX_EDGES`].
pub const GUARD_EDGES_ENV: &str = "DOND_GUARD_EDGES";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub max_prizes: usize,
    pub max_edges: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_prizes: DEFAULT_MAX_PRIZES,
            max_edges: DEFAULT_MAX_EDGES,
        }
    }
}

impl SolverConfig {
    /// Defaults, with the edge budget taken from `DOND_GUARD_EDGES` when set.
    pub fn from_env() -> Self {
        let mut config = Self::default();
        if let Some(edges) = std::env::var(GUARD_EDGES_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|v| *v > 0.0)
        {
            config.max_edges = edges;
        }
        config
    }
}

/// Everything needed to value a game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub ladder: PrizeLadder,
    pub schedule: RoundSchedule,
    pub banker: BankerModel,
    pub utility: UtilitySpec,
}

impl GameSpec {
    pub fn new(
        ladder: PrizeLadder,
        schedule: RoundSchedule,
        banker: BankerModel,
        utility: UtilitySpec,
    ) -> Result<Self> {
        schedule.validate_for(ladder.len())?;
        banker.validate()?;
        utility.validate()?;
        Ok(Self {
            ladder,
            schedule,
            banker,
            utility,
        })
    }

    /// A game that opens one case per round on `prizes`.
    pub fn one_at_a_time(prizes: &[f64], banker: BankerModel, utility: UtilitySpec) -> Result<Self> {
        let ladder = PrizeLadder::new(prizes.to_vec())?;
        let schedule = RoundSchedule::one_at_a_time(ladder.len());
        Self::new(ladder, schedule, banker, utility)
    }

    /// The game implied by a trajectory: its first round's prizes, the
    /// observed opening counts, and the given banker and utility.
    pub fn from_trajectory(traj: &Trajectory, banker: BankerModel, utility: UtilitySpec) -> Result<Self> {
        Self::new(traj.ladder()?, traj.schedule()?, banker, utility)
    }

    pub fn with_utility(&self, utility: UtilitySpec) -> Self {
        Self {
            utility,
            ..self.clone()
        }
    }

    pub fn initial_state(&self) -> GameState {
        GameState::initial(&self.ladder)
    }

    /// State for a set of prize values at `round`.
    pub fn state(&self, remaining: &[f64], round: usize) -> Result<GameState> {
        let s = GameState::new(self.ladder.mask_of(remaining)?, round);
        self.validate_state(&s)?;
        Ok(s)
    }

    /// Round at which `remaining` prizes are left under the schedule.
    pub fn round_for(&self, remaining: usize) -> Result<usize> {
        (0..=self.schedule.opens().len() + 1)
            .find(|r| self.schedule.remaining_at(self.ladder.len(), *r) == Some(remaining))
            .ok_or_else(|| {
                Error::InvalidState(format!(
                    "the schedule never leaves exactly {remaining} prizes"
                ))
            })
    }

    /// Checks that `s` is on the board and its size matches the schedule.
    pub fn validate_state(&self, s: &GameState) -> Result<()> {
        s.check_against(&self.ladder)?;
        match self.schedule.remaining_at(self.ladder.len(), s.round) {
            Some(n) if n == s.len() => Ok(()),
            Some(n) => Err(Error::InvalidState(format!(
                "round {} should have {n} prizes remaining, state has {}",
                s.round,
                s.len()
            ))),
            None => Err(Error::InvalidState(format!(
                "round {} is beyond the schedule",
                s.round
            ))),
        }
    }
}

/// Valuation of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QResult {
    pub q_deal: f64,
    pub q_nodeal: f64,
    pub offer: f64,
    pub ce_nodeal: f64,
    pub action: Action,
    /// Banker branch that produced `offer`.
    pub offer_rule: OfferRule,
}

impl QResult {
    fn from_node(lattice: &Lattice, i: usize, v: NodeValue, utility: &UtilitySpec) -> Result<Self> {
        let node = &lattice.nodes[i];
        let offer = node.offer();
        let ce_nodeal = if node.state.is_terminal() {
            offer.amount
        } else {
            utility.certainty_equivalent(v.q_nodeal)?
        };
        Ok(Self {
            q_deal: v.q_deal,
            q_nodeal: v.q_nodeal,
            offer: offer.amount,
            ce_nodeal,
            action: v.action(),
            offer_rule: offer.rule,
        })
    }

    /// Valuation of a lone case, which needs no board or banker.
    pub fn terminal(utility: &UtilitySpec, prize: f64) -> Result<Self> {
        let v = utility.value(prize)?;
        Ok(Self {
            q_deal: v,
            q_nodeal: v,
            offer: prize,
            ce_nodeal: prize,
            action: Action::Deal,
            offer_rule: OfferRule::Terminal,
        })
    }
}

/// Q-values and optimal action at `state`.
pub fn q_values(spec: &GameSpec, state: &GameState) -> Result<QResult> {
    q_values_with(spec, state, &SolverConfig::from_env())
}

pub fn q_values_with(spec: &GameSpec, state: &GameState, config: &SolverConfig) -> Result<QResult> {
    spec.validate_state(state)?;
    let lattice = Lattice::build(spec, *state, config)?;
    let values = lattice.evaluate(&spec.utility, 1.0)?;
    QResult::from_node(&lattice, 0, values[0], &spec.utility)
}

/// Optimal action at every state reachable from the full board.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Policy {
    pub states: BTreeMap<GameState, QResult>,
}

impl Policy {
    pub fn get(&self, state: &GameState) -> Option<&QResult> {
        self.states.get(state)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

pub fn optimal_policy(spec: &GameSpec) -> Result<Policy> {
    optimal_policy_with(spec, &SolverConfig::from_env())
}

pub fn optimal_policy_with(spec: &GameSpec, config: &SolverConfig) -> Result<Policy> {
    let lattice = Lattice::build(spec, spec.initial_state(), config)?;
    let values = lattice.evaluate(&spec.utility, 1.0)?;
    let states = values
        .iter()
        .enumerate()
        .map(|(i, v)| Ok((lattice.nodes[i].state, QResult::from_node(&lattice, i, *v, &spec.utility)?)))
        .collect::<Result<_>>()?;
    Ok(Policy { states })
}

/// One point of the evolving-values figure: the offer against the
/// certainty equivalent of continuing, both in money.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub round: usize,
    pub gamma: f64,
    pub deal_value: f64,
    pub nodeal_value: f64,
}

/// Offer and continuation value at every recorded round, for each CRRA γ.
///
/// `spec` must be the game implied by `trajectory` (see
/// [`GameSpec::from_trajectory`]); its utility is replaced by CRRA(γ).
pub fn action_value_series(spec: &GameSpec, trajectory: &Trajectory, gammas: &[f64]) -> Result<Vec<SeriesRow>> {
    let config = SolverConfig::from_env();
    let mut rows = Vec::with_capacity(trajectory.rounds.len() * gammas.len());
    for i in 0..trajectory.rounds.len() {
        let state = trajectory.state(i, &spec.ladder)?;
        spec.validate_state(&state)?;
        let lattice = Lattice::build(spec, state, &config)?;
        let prizes = state.prizes(&spec.ladder);
        let (lo, hi) = (prizes[0], prizes[prizes.len() - 1]);
        let offer = lattice.nodes[0].offer().amount;
        for &gamma in gammas {
            let utility = UtilitySpec::crra(gamma);
            utility.validate()?;
            let nodeal_value = if state.is_terminal() {
                offer
            } else {
                // certainty equivalents scale with money
                let scale = lattice::crra_unit(gamma, lo, hi);
                let values = lattice.evaluate(&utility, scale)?;
                utility.certainty_equivalent(values[0].q_nodeal)? * scale
            };
            rows.push(SeriesRow {
                round: trajectory.round_number(i),
                gamma,
                deal_value: offer,
                nodeal_value,
            });
        }
    }
    Ok(rows)
}
