//! Offer multipliers and the final-round puzzle in the bundled Frank record.
//!
//!     cargo run --release --example frank

use dond::replication::{dataset, implied_multipliers, replicate_case_study};

fn main() -> dond::Result<()> {
    for m in implied_multipliers(&dataset("frank")?)? {
        println!("round {}: offer {:>7} / mean {:>10.2} = {:.4}", m.round, m.offer, m.mean, m.multiplier);
    }
    let study = replicate_case_study("frank")?;
    for flag in &study.report.bounds.flags {
        println!("{flag}");
    }
    Ok(())
}
