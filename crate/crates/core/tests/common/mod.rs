//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use dond::{BankerModel, GameSpec, PrizeLadder, RoundSchedule, UtilitySpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Banker rules written out directly from their definitions.
#[derive(Debug, Clone)]
pub enum RefBanker {
    Mean,
    /// Multiplier per round, last one held.
    Mult(Vec<f64>),
    /// 0.305·big + 0.5·small with three prizes, 0.355·big + 0.5·small
    /// with two, the mean otherwise.
    Online,
}

impl RefBanker {
    pub fn offer(&self, prizes: &[f64], round: usize) -> f64 {
        let mean = prizes.iter().sum::<f64>() / prizes.len() as f64;
        let big = prizes.iter().copied().fold(f64::MIN, f64::max);
        let small = prizes.iter().copied().fold(f64::MAX, f64::min);
        match self {
            RefBanker::Mean => mean,
            RefBanker::Mult(m) => m[round.min(m.len() - 1)] * mean,
            RefBanker::Online => match prizes.len() {
                3 => 0.305 * big + 0.5 * small,
                2 => 0.355 * big + 0.5 * small,
                _ => mean,
            },
        }
    }

    pub fn model(&self) -> BankerModel {
        match self {
            RefBanker::Mean => BankerModel::ExpectedValue,
            RefBanker::Mult(m) => BankerModel::multipliers(m.clone()),
            RefBanker::Online => BankerModel::online(),
        }
    }
}

/// Plain tree recursion with no memo: `(Q(Deal), Q(NoDeal))` at the
/// sorted prize set `prizes` at offer point `round`.
pub fn brute_q(
    prizes: &[f64],
    round: usize,
    schedule: &[usize],
    banker: &RefBanker,
    u: &dyn Fn(f64) -> f64,
) -> (f64, f64) {
    let n = prizes.len();
    if n == 1 {
        let v = u(prizes[0]);
        return (v, v);
    }
    let k = schedule.get(round).copied().unwrap_or(n - 1);
    let keep = n - k;
    let subsets: Vec<u64> = (0u64..(1 << n)).filter(|m| m.count_ones() as usize == keep).collect();
    let p = 1.0 / subsets.len() as f64;
    let mut q_nodeal = 0.0;
    for mask in subsets {
        let child: Vec<f64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| prizes[i]).collect();
        let (d, c) = brute_q(&child, round + 1, schedule, banker, u);
        q_nodeal += p * d.max(c);
    }
    (u(banker.offer(prizes, round)), q_nodeal)
}

/// CRRA written out from its definition.
pub fn crra(gamma: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| {
        if gamma == 1.0 {
            x.ln()
        } else {
            (x.powf(1.0 - gamma) - 1.0) / (1.0 - gamma)
        }
    }
}

/// NoDeal minus Deal under CRRA(γ), with money in units of the smallest
/// prize (γ < 1) or the largest (γ ≥ 1) so the comparison keeps its precision.
pub fn crra_gap(prizes: &[f64], round: usize, schedule: &[usize], banker: &RefBanker, gamma: f64) -> f64 {
    let unit = if gamma < 1.0 { prizes[0] } else { prizes[prizes.len() - 1] };
    let u = crra(gamma);
    let scaled = move |x: f64| u(x / unit);
    let (d, c) = brute_q(prizes, round, schedule, banker, &scaled);
    c - d
}

#[derive(Debug, Clone)]
pub struct Board {
    pub prizes: Vec<f64>,
    pub schedule: Vec<usize>,
    pub banker: RefBanker,
}

impl Board {
    pub fn spec(&self, utility: UtilitySpec) -> GameSpec {
        GameSpec::new(
            PrizeLadder::new(self.prizes.clone()).unwrap(),
            RoundSchedule::new(self.schedule.clone()).unwrap(),
            self.banker.model(),
            utility,
        )
        .unwrap()
    }
}

/// Distinct prizes, log-uniform on [lo, hi], rounded to cents, ascending.
pub fn random_prizes(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    while out.len() < n {
        let x = (rng.random_range(lo.ln()..hi.ln())).exp();
        let x = (x * 100.0).round() / 100.0;
        if x > 0.0 && !out.contains(&x) {
            out.push(x);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Random positive opening counts totalling at most `n - 1`.
pub fn random_schedule(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut left = n - 1;
    let mut out = Vec::new();
    while left > 0 {
        let k = rng.random_range(1..=left);
        out.push(k);
        left -= k;
        if left > 0 && rng.random_bool(0.2) {
            break;
        }
    }
    out
}

pub fn random_banker(rng: &mut ChaCha8Rng) -> RefBanker {
    match rng.random_range(0..3) {
        0 => RefBanker::Mean,
        1 => {
            let len = rng.random_range(1..=4);
            RefBanker::Mult((0..len).map(|_| rng.random_range(0.3..1.3)).collect())
        }
        _ => RefBanker::Online,
    }
}

pub fn random_board(rng: &mut ChaCha8Rng, min_n: usize, max_n: usize) -> Board {
    let n = rng.random_range(min_n..=max_n);
    Board {
        prizes: random_prizes(rng, n, 0.5, 1e5),
        schedule: random_schedule(rng, n),
        banker: random_banker(rng),
    }
}
