//! The same board under the online banker, plus the full optimal policy.
//!
//!     cargo run --example online_banker

use dond::{optimal_policy, BankerModel, GameSpec, UtilitySpec};

fn main() -> dond::Result<()> {
    let game = GameSpec::one_at_a_time(&[750.0, 500.0, 25.0], BankerModel::online(), UtilitySpec::Log)?;
    let policy = optimal_policy(&game)?;
    for (state, q) in &policy.states {
        println!(
            "round {} {:?}: offer {:>7.2} ({:?})  Q(Deal) {:.4}  Q(NoDeal) {:.4}  -> {}",
            state.round,
            state.prizes(&game.ladder),
            q.offer,
            q.offer_rule,
            q.q_deal,
            q.q_nodeal,
            q.action
        );
    }
    Ok(())
}
