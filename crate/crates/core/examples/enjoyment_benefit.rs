//! The bonus for playing on that would make refusing a final offer rational.
//!
//!     cargo run --example enjoyment_benefit

use dond::enjoyment_benefit;

fn main() -> dond::Result<()> {
    let (offer, prizes) = (125_000.0, [100_000.0, 150_000.0]);
    for gamma in [0.0, 0.5, 1.0, 1.54085, 2.5] {
        println!("gamma {gamma:<8} b = {:.2}", enjoyment_benefit(offer, &prizes, gamma)?);
    }
    Ok(())
}
