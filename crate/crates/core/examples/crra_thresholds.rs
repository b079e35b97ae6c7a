//! Where the optimal action switches as CRRA risk aversion varies.
//!
//!     cargo run --example crra_thresholds

use dond::inversion::{decision_thresholds, GammaRange};
use dond::{BankerModel, GameSpec, UtilitySpec};

fn main() -> dond::Result<()> {
    let game = GameSpec::one_at_a_time(&[750.0, 500.0, 25.0], BankerModel::online(), UtilitySpec::Log)?;
    let range = GammaRange::new(0.0, 20.0)?;
    for remaining in [vec![750.0, 500.0, 25.0], vec![750.0, 25.0], vec![500.0, 25.0]] {
        let round = game.round_for(remaining.len())?;
        let state = game.state(&remaining, round)?;
        let policy = decision_thresholds(&game, &state, range)?;
        println!("{remaining:?}");
        for (interval, action) in policy.intervals() {
            println!("  {:>9.5} < gamma < {:<9.5} {action}", interval.lo, interval.hi);
        }
    }
    Ok(())
}
