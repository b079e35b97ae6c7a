//! Risk-aversion bound for the bundled Suzanne record.
//!
//!     cargo run --release --example suzanne

use dond::replication::replicate_case_study;

fn main() -> dond::Result<()> {
    let study = replicate_case_study("suzanne")?;
    let r = &study.report;
    println!("window multipliers from round {}: {:.4?}", r.window_start, r.window_multipliers);
    for round in &r.thresholds {
        for s in &round.states {
            let mark = if s.observed { "*" } else { " " };
            println!("{mark} round {} {:?}: switches at {:.5?}", round.round, s.remaining, s.policy.breakpoints);
        }
    }
    if let Some(hi) = r.bounds.upper_bound {
        println!("gamma < {hi:.5}");
    }
    println!("infeasible for gamma > 0: rounds {:?}", r.bounds.infeasible_rounds);
    if let Some(b) = &r.benefit {
        println!("benefit needed at round {} (gamma {:.5}): {:.2}", b.round, b.gamma, b.benefit);
    }
    print!("{}", study.figure_csv);
    Ok(())
}
