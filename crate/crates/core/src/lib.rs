//! Exact decision engine for the Deal or No Deal game show.
//!
//! The crate values every reachable board state by backward induction,
//! compares the banker's offer against the certainty equivalent of
//! playing on, and turns observed contestant choices into bounds on a
//! constant relative risk aversion coefficient.
//!
//! ```
//! use dond::{BankerModel, GameSpec, UtilitySpec, Action};
//!
//! let game = GameSpec::one_at_a_time(&[750.0, 500.0, 25.0], BankerModel::online(), UtilitySpec::Log)?;
//! let q = dond::q_values(&game, &game.initial_state())?;
//! assert_eq!(q.action, Action::NoDeal);
//! assert_eq!(q.offer, 241.25);
//! # Ok::<(), dond::Error>(())
//! ```

pub mod api;
pub mod banker;
pub mod error;
pub mod inversion;
pub mod model;
pub mod replication;
pub mod solver;
pub mod trajectory;

pub use banker::{banker_offer, implied_multiplier, BankerModel, Extrapolation, OfferRule, OnlineRule};
pub use error::{Error, Result};
pub use inversion::{decision_thresholds, enjoyment_benefit, infer_gamma_bounds, BoundsReport, GammaPolicy};
pub use model::{
    certainty_equivalent, successor_states, utility_value, Action, GameState, PrizeLadder, RoundSchedule,
    UtilitySpec,
};
pub use solver::{action_value_series, optimal_policy, q_values, GameSpec, Policy, QResult, SeriesRow, SolverConfig};
pub use trajectory::{parse_trajectory, RoundRecord, Trajectory};
