//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the console.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use common::{brute_q, crra_gap, random_board, random_prizes, random_schedule, Board, RefBanker};
use dond::inversion::{decision_thresholds, reachable_thresholds, GammaRange};
use dond::replication::{dataset, implied_multipliers, replicate_case_study};
use dond::{enjoyment_benefit, optimal_policy, q_values, Action, BankerModel, GameSpec, UtilitySpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Collects mismatches for one criterion.
#[derive(Default)]
struct Check(Vec<String>);

impl Check {
    fn near(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        if !((got - want).abs() <= tol) {
            self.0.push(format!("{what} = {got:.6}, want {want} ± {tol}"));
        }
    }

    fn that(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.0.push(what.into());
        }
    }
}

fn three_prize(banker: BankerModel) -> GameSpec {
    GameSpec::one_at_a_time(&[25.0, 500.0, 750.0], banker, UtilitySpec::Log).unwrap()
}

fn expected_value_three_prize_regression(c: &mut Check) {
    let t = Instant::now();
    let spec = three_prize(BankerModel::ExpectedValue);
    let q = q_values(&spec, &spec.initial_state()).unwrap();
    c.near("q_deal", q.q_deal, 6.052, 1e-3);
    c.near("q_nodeal", q.q_nodeal, 5.989, 1e-3);
    c.that(q.action == Action::Deal, format!("action {}", q.action));
    c.that(t.elapsed().as_secs_f64() < 1.0, format!("took {:?}", t.elapsed()));
}

fn online_three_prize_regression(c: &mut Check) {
    let spec = three_prize(BankerModel::online());
    let root = q_values(&spec, &spec.initial_state()).unwrap();
    c.that(root.offer == 241.25, format!("offer {}", root.offer));
    c.near("q_nodeal", root.q_nodeal, 5.764, 1e-3);
    c.near("ce_nodeal", root.ce_nodeal, 318.62, 0.05);
    c.that(root.action == Action::NoDeal, format!("action {}", root.action));
    for (pair, nodeal, deal) in [([500.0, 750.0], 6.415, 6.246), ([25.0, 750.0], 4.9194, 5.63), ([25.0, 500.0], 4.716, 5.247)] {
        let q = q_values(&spec, &spec.state(&pair, 1).unwrap()).unwrap();
        c.near(&format!("{pair:?} q_nodeal"), q.q_nodeal, nodeal, 1e-3);
        c.near(&format!("{pair:?} q_deal"), q.q_deal, deal, 1e-3);
    }
}

fn online_thresholds_and_jensen(c: &mut Check) {
    let spec = three_prize(BankerModel::online());
    let range = GammaRange::default();
    let root = decision_thresholds(&spec, &spec.initial_state(), range).unwrap();
    c.that(root.breakpoints.len() == 1, format!("root breakpoints {:?}", root.breakpoints));
    c.near("root breakpoint", root.breakpoints[0], 4.5963, 1e-3);
    let children = reachable_thresholds(&spec, &spec.initial_state(), range).unwrap();
    for (pair, want) in [([25.0, 750.0], 0.5175), ([25.0, 500.0], 0.5602)] {
        let state = spec.state(&pair, 1).unwrap();
        match children.iter().find(|(s, _)| *s == state) {
            Some((_, p)) if p.breakpoints.len() == 1 => c.near(&format!("{pair:?} breakpoint"), p.breakpoints[0], want, 1e-3),
            other => c.that(false, format!("{pair:?}: {other:?}")),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let positive = GammaRange::new(1e-9, 20.0).unwrap();
    for _ in 0..200 {
        let prizes = random_prizes(&mut rng, 2, 0.5, 1e6);
        let spec = GameSpec::one_at_a_time(&prizes, BankerModel::ExpectedValue, UtilitySpec::Log).unwrap();
        let p = decision_thresholds(&spec, &spec.initial_state(), positive).unwrap();
        c.that(p.actions == [Action::Deal], format!("{prizes:?}: {:?}", p.actions));
    }
}

fn suzanne_thresholds_and_bounds(c: &mut Check) {
    let prizes = [0.5, 1000.0, 100_000.0, 150_000.0];
    let board = Board {
        prizes: prizes.to_vec(),
        schedule: vec![1, 1],
        banker: RefBanker::Mult(vec![0.7331, 0.90, 1.00]),
    };
    let spec = board.spec(UtilitySpec::Log);
    let states = reachable_thresholds(&spec, &spec.initial_state(), GammaRange::default()).unwrap();
    for (remaining, want) in [
        ([0.5, 1000.0, 150_000.0], 0.22077),
        ([0.5, 1000.0, 100_000.0], 0.22617),
        ([0.5, 100_000.0, 150_000.0], 1.50645),
        ([1000.0, 100_000.0, 150_000.0], 1.54085),
    ] {
        let state = spec.state(&remaining, 1).unwrap();
        match states.iter().find(|(s, _)| *s == state) {
            Some((_, p)) => {
                let positive: Vec<f64> = p.breakpoints.iter().copied().filter(|g| *g > 0.0).collect();
                c.that(positive.len() == 1, format!("{remaining:?}: {:?}", p.breakpoints));
                c.near(&format!("{remaining:?} threshold"), positive[0], want, 1e-3);
            }
            None => c.that(false, format!("{remaining:?} unreachable")),
        }
    }
    let bounds = replicate_case_study("suzanne").unwrap().report.bounds;
    match bounds.upper_bound {
        Some(b) => c.near("upper bound", b, 1.54085, 1e-3),
        None => c.that(false, "no upper bound"),
    }
    c.that(bounds.infeasible_rounds == [9], format!("infeasible {:?}", bounds.infeasible_rounds));
}

fn frank_multipliers(c: &mut Check) {
    let m = implied_multipliers(&dataset("frank").unwrap()).unwrap();
    for (round, want) in [(7, 0.9571), (8, 1.0469), (9, 1.1988)] {
        match m.iter().find(|r| r.round == round) {
            Some(r) => c.near(&format!("round {round} multiplier"), r.multiplier, want, 1e-4),
            None => c.that(false, format!("round {round} missing")),
        }
    }
}

fn enjoyment_benefit_values(c: &mut Check) {
    let prizes = [100_000.0, 150_000.0];
    c.near("benefit", enjoyment_benefit(125_000.0, &prizes, 1.54085).unwrap(), 3761.90, 0.5);
    let zero = enjoyment_benefit(125_000.0, &prizes, 0.0).unwrap();
    c.that(zero == 0.0, format!("gamma 0 benefit {zero}"));
}

fn solver_matches_brute_force_and_breakpoints_bracket(c: &mut Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..50 {
        let board = random_board(&mut rng, 2, 6);
        let utility = if rng.random_bool(0.25) { UtilitySpec::Log } else { UtilitySpec::crra(rng.random_range(-1.5..4.0)) };
        let spec = board.spec(utility);
        let u = |x: f64| utility.value(x).unwrap();
        for (state, q) in &optimal_policy(&spec).unwrap().states {
            let (d, n) = brute_q(&state.prizes(&spec.ladder), state.round, &board.schedule, &board.banker, &u);
            let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1.0);
            c.that(rel(q.q_deal, d) <= 1e-10 && rel(q.q_nodeal, n) <= 1e-10, format!("{board:?} {utility} {state:?}"));
        }
        let policy = decision_thresholds(&spec, &spec.initial_state(), GammaRange::new(-3.0, 8.0).unwrap()).unwrap();
        for g in &policy.breakpoints {
            let below = crra_gap(&board.prizes, 0, &board.schedule, &board.banker, g - 1e-5);
            let above = crra_gap(&board.prizes, 0, &board.schedule, &board.banker, g + 1e-5);
            c.that((below > 0.0) != (above > 0.0), format!("{board:?}: breakpoint {g} ({below:e}, {above:e})"));
        }
    }
}

fn property_suites(c: &mut Check) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst: f64 = 0.0;
    for i in 0..10_000 {
        let u = if i % 2 == 0 { UtilitySpec::Log } else { UtilitySpec::crra(rng.random_range(-2.0..2.0)) };
        let x: f64 = rng.random_range(0.01f64.ln()..1e6f64.ln()).exp();
        let back = u.certainty_equivalent(u.value(x).unwrap()).unwrap();
        worst = worst.max((back - x).abs() / x);
    }
    c.that(worst < 1e-9, format!("CE roundtrip worst rel err {worst:e}"));

    let (mut gap, mut at): (f64, f64) = (0.0, 0.0);
    let mut x: f64 = 0.5;
    while x <= 5e6 {
        for g in [1.0 - 1e-6, 1.0 + 1e-6] {
            let d = (UtilitySpec::crra(g).value(x).unwrap() - x.ln()).abs();
            if d > gap {
                (gap, at) = (d, x);
            }
        }
        x = (x * 1.1).min(if x < 5e6 { 5e6 } else { f64::INFINITY });
    }
    c.that(gap < 1e-4, format!("CRRA-to-log gap {gap:e} at x = {at:.0}"));

    for _ in 0..20 {
        let n = rng.random_range(3..=7);
        let board = Board {
            prizes: random_prizes(&mut rng, n, 1.0, 1000.0),
            schedule: random_schedule(&mut rng, n),
            banker: common::random_banker(&mut rng),
        };
        let utility = UtilitySpec::crra(rng.random_range(-1.0..3.0));
        let scale: f64 = rng.random_range(0.01f64.ln()..100f64.ln()).exp();
        let scaled = Board { prizes: board.prizes.iter().map(|p| p * scale).collect(), ..board.clone() };
        let a = optimal_policy(&board.spec(utility)).unwrap();
        let b = optimal_policy(&scaled.spec(utility)).unwrap();
        let same = a.states.iter().zip(&b.states).all(|((_, x), (_, y))| x.action == y.action);
        c.that(same, format!("affine invariance broken on {board:?} {utility} x{scale}"));
    }

    for _ in 0..20 {
        let n = rng.random_range(3..=7);
        let prizes = random_prizes(&mut rng, n, 0.5, 1e5);
        let schedule = random_schedule(&mut rng, n);
        let m: Vec<f64> = (0..schedule.len().max(1)).map(|_| rng.random_range(0.2..1.2)).collect();
        let raised: Vec<f64> = m.iter().map(|x| x + rng.random_range(0.0..0.3)).collect();
        let spec = |mult: Vec<f64>| Board { prizes: prizes.clone(), schedule: schedule.clone(), banker: RefBanker::Mult(mult) }.spec(UtilitySpec::Log);
        let low = optimal_policy(&spec(m.clone())).unwrap();
        let high = optimal_policy(&spec(raised)).unwrap();
        let ok = low.states.iter().zip(&high.states).all(|((_, l), (_, h))| {
            h.q_deal >= l.q_deal - 1e-12 * l.q_deal.abs().max(1.0) && h.q_nodeal >= l.q_nodeal - 1e-12 * l.q_nodeal.abs().max(1.0)
        });
        c.that(ok, format!("raising multipliers {m:?} lowered a value"));
    }
    c.that(t.elapsed().as_secs() < 60, format!("took {:?}", t.elapsed()));
}

fn replication_artifacts(c: &mut Check) {
    let runs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for name in ["suzanne", "frank"] {
        for dir in &runs {
            let status = Command::new(env!("CARGO_BIN_EXE_dond"))
                .args(["replicate", name, "--out"])
                .arg(dir.path())
                .output()
                .unwrap()
                .status;
            c.that(status.success(), format!("replicate {name}: {status}"));
        }
        for file in [format!("{name}_report.json"), format!("{name}_figure.csv")] {
            let read = |i: usize| std::fs::read(runs[i].path().join(&file)).unwrap_or_default();
            c.that(!read(0).is_empty() && read(0) == read(1), format!("{file} missing or not deterministic"));
        }
    }
    let csv = std::fs::read_to_string(runs[0].path().join("suzanne_figure.csv")).unwrap_or_default();
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        if f[0] == 9.0 && f[1] > 0.0 {
            rows += 1;
            c.that(f[3] < f[2], format!("round 9 gamma {}: ce {} vs offer {}", f[1], f[3], f[2]));
        }
    }
    c.that(rows > 0, "no round 9 rows with gamma > 0");
}

type Criterion = (&'static str, fn(&mut Check));

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("expected-value three-prize regression", expected_value_three_prize_regression),
        ("online-banker three-prize regression", online_three_prize_regression),
        ("online thresholds and expected-value Jensen property", online_thresholds_and_jensen),
        ("Suzanne thresholds and bounds", suzanne_thresholds_and_bounds),
        ("Frank implied multipliers", frank_multipliers),
        ("enjoyment benefit", enjoyment_benefit_values),
        ("oracle equivalence and breakpoint bracketing", solver_matches_brute_force_and_breakpoints_bracket),
        ("property suites", property_suites),
        ("replication artifacts", replication_artifacts),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let mut check = Check::default();
        if let Err(e) = catch_unwind(AssertUnwindSafe(|| run(&mut check))) {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            check.0.push(format!("panicked: {}", msg.unwrap_or_default()));
        }
        if check.0.is_empty() {
            println!("PASS {name}");
        } else {
            failed += 1;
            println!("FAIL {name}: {}", check.0.join("; "));
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
