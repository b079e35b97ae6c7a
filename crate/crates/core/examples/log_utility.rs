//! Three-prize game with an expected-value banker and log utility.
//!
//!     cargo run --example log_utility

use dond::{q_values, BankerModel, GameSpec, UtilitySpec};

fn main() -> dond::Result<()> {
    let game = GameSpec::one_at_a_time(&[750.0, 500.0, 25.0], BankerModel::ExpectedValue, UtilitySpec::Log)?;
    let q = q_values(&game, &game.initial_state())?;
    println!("offer      {}", q.offer);
    println!("Q(Deal)    {:.4}", q.q_deal);
    println!("Q(NoDeal)  {:.4}", q.q_nodeal);
    println!("CE(NoDeal) {:.2}", q.ce_nodeal);
    println!("best       {}", q.action);
    Ok(())
}
