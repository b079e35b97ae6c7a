//! Risk-aversion thresholds and bounds implied by observed choices.
//!
//! For CRRA utility the sign of `Q(s, NoDeal) - Q(s, Deal)` as a function
//! of γ decides the optimal action at `s`. That difference is continuous
//! in γ but only piecewise smooth: it kinks wherever a downstream state
//! switches action. Thresholds are therefore found bottom-up. Each
//! state's switching points split the γ range for its parents, and every
//! resulting piece is scanned on a fixed grid and refined by bisection.
//!
//! Money is measured in units of the smallest prize in play for γ < 1
//! and of the largest for γ > 1. CRRA choices do not depend on the unit,
//! and in raw money the utilities of very different prizes collapse onto
//! the same constant, which drowns the comparison in rounding.

use serde::{Deserialize, Serialize};

use crate::banker::BankerModel;
use crate::error::{Error, Result};
use crate::model::{Action, GameState, RoundSchedule, UtilitySpec};
use crate::solver::lattice::{crra_unit, Lattice, NodeKind, NodeValue};
use crate::solver::{GameSpec, SolverConfig};
use crate::trajectory::Trajectory;

/// Uniform cells in the sign scan over the γ range.
pub const GRID_POINTS: usize = 512;
/// Bisection stops once the bracket is this narrow.
pub const ROOT_TOLERANCE: f64 = 1e-7;
/// Breakpoints closer than this are the same breakpoint.
pub const DEDUP_TOLERANCE: f64 = 1e-6;
/// Default ceiling on states below an analyzed state.
pub const DEFAULT_MAX_NODES: usize = 4_096;
/// State budget used to pick the first analysed round of a trajectory.
pub const AUTO_WINDOW_NODES: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaRange {
    pub lo: f64,
    pub hi: f64,
}

impl Default for GammaRange {
    fn default() -> Self {
        Self { lo: -5.0, hi: 20.0 }
    }
}

impl GammaRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Invalid(format!("invalid gamma range [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }
}

/// An open interval of γ values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, g: f64) -> bool {
        self.lo < g && g < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (hi - lo > DEDUP_TOLERANCE).then_some(Interval { lo, hi })
    }
}

/// Optimal action at one state as a piecewise-constant function of γ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaPolicy {
    pub range: GammaRange,
    /// Values of γ where the action at this state switches.
    pub breakpoints: Vec<f64>,
    /// Action on each interval; one more entry than `breakpoints`.
    pub actions: Vec<Action>,
    /// Switching points of downstream states, where this state's
    /// Q-difference changes form.
    pub child_breakpoints: Vec<f64>,
}

impl GammaPolicy {
    pub fn intervals(&self) -> Vec<(Interval, Action)> {
        let mut edges = vec![self.range.lo];
        edges.extend(&self.breakpoints);
        edges.push(self.range.hi);
        edges
            .windows(2)
            .zip(&self.actions)
            .map(|(w, a)| (Interval { lo: w[0], hi: w[1] }, *a))
            .collect()
    }

    pub fn action_at(&self, gamma: f64) -> Action {
        let i = self.breakpoints.iter().take_while(|b| **b < gamma).count();
        self.actions[i]
    }

    /// Own and downstream breakpoints, merged.
    pub fn all_breakpoints(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(&self.child_breakpoints)
            .copied()
            .collect();
        dedup_sorted(&mut all);
        all
    }

    fn constant(range: GammaRange, action: Action) -> Self {
        Self {
            range,
            breakpoints: vec![],
            actions: vec![action],
            child_breakpoints: vec![],
        }
    }
}

fn dedup_sorted(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|b, a| (*b - *a).abs() < DEDUP_TOLERANCE);
}

/// Switching points of a decision state's Q-difference over a range.
struct ThresholdSolver<'a> {
    lattice: &'a Lattice,
    range: GammaRange,
    /// Smallest and largest prize at the analyzed state.
    span: (f64, f64),
    scratch: Vec<f64>,
}

impl<'a> ThresholdSolver<'a> {
    fn new(lattice: &'a Lattice, range: GammaRange, span: (f64, f64)) -> Self {
        Self {
            lattice,
            range,
            span,
            scratch: vec![0.0; lattice.len()],
        }
    }

    fn q(&mut self, order: &[usize], gamma: f64, frozen: Option<&[Action]>) -> Result<NodeValue> {
        let v = self.lattice.evaluate_subtree(
            order,
            &UtilitySpec::crra(gamma),
            crra_unit(gamma, self.span.0, self.span.1),
            &mut self.scratch,
            frozen,
        )?;
        if !(v.q_deal.is_finite() && v.q_nodeal.is_finite()) {
            return Err(Error::NonFinite(format!("Q-difference at gamma = {gamma}")));
        }
        Ok(v)
    }

    /// Grid scan plus bisection; returns the sign changes of NoDeal-vs-Deal.
    fn roots(&mut self, order: &[usize], cuts: &[f64], frozen: Option<&[Action]>) -> Result<Vec<f64>> {
        // Between downstream breakpoints the difference is smooth, so a
        // uniform grid refined at every breakpoint brackets each root
        // that is not paired with another inside one grid cell.
        let mut grid: Vec<f64> = (0..=GRID_POINTS)
            .map(|j| self.range.lo + (self.range.hi - self.range.lo) * j as f64 / GRID_POINTS as f64)
            .chain(cuts.iter().copied().filter(|c| self.range.lo < *c && *c < self.range.hi))
            .collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();

        let mut roots = Vec::new();
        let mut prev: Option<(f64, Action)> = None;
        for &g in &grid {
            let a = self.q(order, g, frozen)?.action();
            if let Some((pg, pa)) = prev {
                if pa != a {
                    roots.push(self.bisect(order, pg, pa, g, frozen)?);
                }
            }
            prev = Some((g, a));
        }
        dedup_sorted(&mut roots);
        Ok(roots)
    }

    fn bisect(&mut self, order: &[usize], mut lo: f64, lo_action: Action, mut hi: f64, frozen: Option<&[Action]>) -> Result<f64> {
        while hi - lo > ROOT_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if self.q(order, mid, frozen)?.action() == lo_action {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Piecewise policy at `node` given its children's policies.
    fn policy(&mut self, node: usize, child_cuts: Vec<f64>) -> Result<GammaPolicy> {
        let order = self.lattice.reachable_from(node);
        let roots = self.roots(&order, &child_cuts, None)?;

        let mut edges = vec![self.range.lo];
        edges.extend(&roots);
        edges.push(self.range.hi);
        let mut breakpoints = Vec::new();
        let mut actions: Vec<Action> = Vec::new();
        for (k, w) in edges.windows(2).enumerate() {
            let a = self.q(&order, 0.5 * (w[0] + w[1]), None)?.action();
            match actions.last() {
                Some(last) if *last == a => {}
                _ => {
                    if k > 0 {
                        breakpoints.push(w[0]);
                    }
                    actions.push(a);
                }
            }
        }
        Ok(GammaPolicy {
            range: self.range,
            breakpoints,
            actions,
            child_breakpoints: child_cuts,
        })
    }

    /// Policies for every node of the lattice, children first.
    fn all_policies(&mut self) -> Result<Vec<GammaPolicy>> {
        let n = self.lattice.len();
        let mut policies: Vec<Option<GammaPolicy>> = vec![None; n];
        for i in (0..n).rev() {
            let p = match &self.lattice.nodes[i].kind {
                NodeKind::Terminal { .. } => GammaPolicy::constant(self.range, Action::Deal),
                NodeKind::Decision { children, .. } => {
                    let mut cuts: Vec<f64> = children
                        .iter()
                        .flat_map(|(c, _)| {
                            let cp = policies[*c].as_ref().expect("children are solved first");
                            cp.breakpoints.iter().chain(&cp.child_breakpoints).copied()
                        })
                        .filter(|g| self.range.lo < *g && *g < self.range.hi)
                        .collect();
                    dedup_sorted(&mut cuts);
                    self.policy(i, cuts)?
                }
            };
            policies[i] = Some(p);
        }
        Ok(policies.into_iter().map(|p| p.expect("every node solved")).collect())
    }
}

fn threshold_lattice(spec: &GameSpec, state: &GameState, max_nodes: usize) -> Result<(Lattice, (f64, f64))> {
    spec.validate_state(state)?;
    let lattice = Lattice::build(spec, *state, &SolverConfig::from_env())?;
    if lattice.len() > max_nodes {
        return Err(Error::ThresholdGuard {
            nodes: lattice.len(),
            max_nodes,
        });
    }
    let prizes = state.prizes(&spec.ladder);
    Ok((lattice, (prizes[0], prizes[prizes.len() - 1])))
}

/// Piecewise-in-γ optimal action at `state` under CRRA utility. The
/// utility in `spec` is ignored.
pub fn decision_thresholds(spec: &GameSpec, state: &GameState, range: GammaRange) -> Result<GammaPolicy> {
    decision_thresholds_with(spec, state, range, DEFAULT_MAX_NODES)
}

pub fn decision_thresholds_with(
    spec: &GameSpec,
    state: &GameState,
    range: GammaRange,
    max_nodes: usize,
) -> Result<GammaPolicy> {
    let (lattice, span) = threshold_lattice(spec, state, max_nodes)?;
    let mut solver = ThresholdSolver::new(&lattice, range, span);
    Ok(solver.all_policies()?.swap_remove(0))
}

/// Thresholds of `state` and of every decision state reachable from it.
pub fn reachable_thresholds(
    spec: &GameSpec,
    state: &GameState,
    range: GammaRange,
) -> Result<Vec<(GameState, GammaPolicy)>> {
    let (lattice, span) = threshold_lattice(spec, state, DEFAULT_MAX_NODES)?;
    let mut solver = ThresholdSolver::new(&lattice, range, span);
    let policies = solver.all_policies()?;
    let mut out: Vec<(GameState, GammaPolicy)> = lattice
        .nodes
        .iter()
        .zip(policies)
        .filter(|(n, _)| !n.state.is_terminal())
        .map(|(n, p)| (n.state, p))
        .collect();
    out.sort_by_key(|a| a.0);
    Ok(out)
}

/// The Q-difference at a state with every downstream action held at
/// its optimum for one child-induced interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchCrossing {
    /// γ interval on which the frozen downstream policy is optimal.
    pub branch: Interval,
    /// Where the frozen Q-difference changes sign anywhere in the range.
    pub crossings: Vec<f64>,
}

/// Per-branch crossing diagnostics at `state`: for each interval between
/// downstream breakpoints, the γ values at which Deal and NoDeal would
/// trade places if the downstream policy of that interval applied
/// everywhere. Only crossings inside their own branch are real
/// breakpoints.
pub fn branch_crossings(spec: &GameSpec, state: &GameState, range: GammaRange) -> Result<Vec<BranchCrossing>> {
    let (lattice, span) = threshold_lattice(spec, state, DEFAULT_MAX_NODES)?;
    let mut solver = ThresholdSolver::new(&lattice, range, span);
    let policies = solver.all_policies()?;
    let order = lattice.reachable_from(0);
    let cuts = policies[0].child_breakpoints.clone();

    let mut edges = vec![range.lo];
    edges.extend(&cuts);
    edges.push(range.hi);
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let values = lattice.evaluate(&UtilitySpec::crra(mid), crra_unit(mid, span.0, span.1))?;
        let frozen: Vec<Action> = values.iter().map(NodeValue::action).collect();
        let crossings = solver.roots(&order, &[], Some(&frozen))?;
        out.push(BranchCrossing {
            branch: Interval { lo: w[0], hi: w[1] },
            crossings,
        });
    }
    Ok(out)
}

/// What one observed decision says about γ > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    Below { bound: f64 },
    Above { bound: f64 },
    /// Every γ > 0 in the range is consistent with the choice.
    None,
    /// No γ > 0 explains the choice; only risk-neutral or risk-seeking
    /// preferences (or a non-monetary benefit) do.
    InfeasibleForPositiveGamma,
    /// The choice is optimal on several disjoint intervals.
    Union { intervals: Vec<Interval> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundBound {
    pub round: usize,
    pub remaining: Vec<f64>,
    pub offer: f64,
    pub action: Action,
    pub constraint: Constraint,
    /// The γ set as intervals; empty when infeasible.
    pub consistent_gammas: Vec<Interval>,
    pub policy: GammaPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub contestant: String,
    pub first_round: usize,
    pub gamma_range: GammaRange,
    pub per_round: Vec<RoundBound>,
    /// γ > 0 values consistent with every round that admits any.
    pub intersection: Vec<Interval>,
    pub upper_bound: Option<f64>,
    pub lower_bound: Option<f64>,
    /// Rounds no γ > 0 can explain.
    pub infeasible_rounds: Vec<usize>,
    /// True when every round is explained by a common γ > 0.
    pub consistent: bool,
    /// Human-readable remarks on rounds that need another explanation.
    pub flags: Vec<String>,
    pub note: String,
}

const LOWER_BOUND_NOTE: &str = "Only a Deal can bound gamma from below, and a Deal ends the game, \
so a trajectory yields at most one lower bound.";

fn classify(sets: &[Interval], positive: Interval) -> Constraint {
    match sets {
        [] => Constraint::InfeasibleForPositiveGamma,
        [one] => {
            let open_lo = one.lo <= positive.lo;
            let open_hi = one.hi >= positive.hi;
            match (open_lo, open_hi) {
                (true, true) => Constraint::None,
                (true, false) => Constraint::Below { bound: one.hi },
                (false, true) => Constraint::Above { bound: one.lo },
                (false, false) => Constraint::Union {
                    intervals: vec![*one],
                },
            }
        }
        many => Constraint::Union {
            intervals: many.to_vec(),
        },
    }
}

fn intersect_sets(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    a.iter()
        .flat_map(|x| b.iter().filter_map(move |y| x.intersect(y)))
        .collect()
}

/// Bounds on γ from every decision in `traj`, with offers at unobserved
/// states supplied by `banker` (round-indexed from the first record).
pub fn infer_gamma_bounds(traj: &Trajectory, banker: &BankerModel, range: GammaRange) -> Result<BoundsReport> {
    infer_gamma_bounds_with(traj, banker, range, &InversionOptions::default())
}

#[derive(Debug, Clone, PartialEq)]
pub struct InversionOptions {
    pub max_nodes: usize,
    /// Full opening schedule of the game. By default it is read off the
    /// trajectory, and any cases left after the last record are assumed
    /// to be resolved in a single reveal.
    pub schedule: Option<RoundSchedule>,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self {
            max_nodes: DEFAULT_MAX_NODES,
            schedule: None,
        }
    }
}

pub fn infer_gamma_bounds_with(
    traj: &Trajectory,
    banker: &BankerModel,
    range: GammaRange,
    options: &InversionOptions,
) -> Result<BoundsReport> {
    traj.validate()?;
    if range.hi <= 0.0 {
        return Err(Error::Invalid("gamma range must include positive values".into()));
    }
    let positive = Interval {
        lo: range.lo.max(0.0),
        hi: range.hi,
    };
    let mut spec = GameSpec::from_trajectory(traj, banker.clone(), UtilitySpec::Log)?;
    if let Some(schedule) = &options.schedule {
        let observed = spec.schedule.opens();
        if schedule.opens().get(..observed.len()) != Some(observed) {
            return Err(Error::InvalidSchedule(format!(
                "schedule {:?} does not match the observed openings {observed:?}",
                schedule.opens()
            )));
        }
        spec = GameSpec::new(spec.ladder, schedule.clone(), spec.banker, spec.utility)?;
    }

    let mut per_round = Vec::new();
    for (i, record) in traj.rounds.iter().enumerate() {
        let Some(action) = record.decision else { continue };
        let round = traj.round_number(i);
        let state = traj.state(i, &spec.ladder)?;
        let policy = decision_thresholds_with(&spec, &state, range, options.max_nodes)?;
        let consistent_gammas: Vec<Interval> = policy
            .intervals()
            .into_iter()
            .filter(|(_, a)| *a == action)
            .filter_map(|(iv, _)| iv.intersect(&positive))
            .collect();
        per_round.push(RoundBound {
            round,
            remaining: record.remaining.clone(),
            offer: record.offer.expect("validated: decisions carry offers"),
            action,
            constraint: classify(&consistent_gammas, positive),
            consistent_gammas,
            policy,
        });
    }

    let infeasible_rounds: Vec<usize> = per_round
        .iter()
        .filter(|r| r.consistent_gammas.is_empty())
        .map(|r| r.round)
        .collect();
    let intersection = per_round
        .iter()
        .filter(|r| !r.consistent_gammas.is_empty())
        .fold(vec![positive], |acc, r| intersect_sets(&acc, &r.consistent_gammas));
    let (upper_bound, lower_bound) = match intersection.as_slice() {
        [] => (None, None),
        sets => {
            let lo = sets[0].lo;
            let hi = sets[sets.len() - 1].hi;
            (
                (hi < positive.hi).then_some(hi),
                (lo > positive.lo).then_some(lo),
            )
        }
    };
    let flags = per_round
        .iter()
        .filter(|r| r.consistent_gammas.is_empty())
        .map(|r| match r.action {
            Action::NoDeal => format!(
                "round {}: refusing {} is not optimal for any gamma > 0; \
                 it fits only risk-neutral or risk-seeking preferences, or a non-monetary benefit of playing on",
                r.round, r.offer
            ),
            Action::Deal => format!(
                "round {}: accepting {} is not optimal for any gamma > 0 in the range",
                r.round, r.offer
            ),
        })
        .collect();
    Ok(BoundsReport {
        flags,
        contestant: traj.contestant.clone(),
        first_round: traj.first_round,
        gamma_range: range,
        consistent: infeasible_rounds.is_empty() && !intersection.is_empty(),
        per_round,
        intersection,
        upper_bound,
        lower_bound,
        infeasible_rounds,
        note: LOWER_BOUND_NOTE.into(),
    })
}

/// Earliest show round from which threshold analysis of `traj` fits in
/// `max_nodes` states per decision.
pub fn auto_start_round(traj: &Trajectory, max_nodes: usize) -> usize {
    let sizes: Vec<usize> = traj.rounds.iter().map(|r| r.remaining.len()).collect();
    let count = |start: usize| -> f64 {
        let n0 = sizes[start];
        let mut total = 0.0;
        let mut n = n0;
        let mut i = start;
        loop {
            total += crate::solver::lattice::binomial(n0, n);
            if n <= 1 {
                break;
            }
            let next = sizes.get(i + 1).copied().unwrap_or(1);
            n = next;
            i += 1;
        }
        total
    };
    (0..sizes.len())
        .find(|i| count(*i) <= max_nodes as f64)
        .map(|i| traj.round_number(i))
        .unwrap_or_else(|| traj.round_number(sizes.len() - 1))
}

/// Smallest non-monetary bonus `b ≥ 0`, added to every prize, that makes
/// refusing `offer` for a uniform draw from `prizes` optimal:
/// `u(offer) ≤ mean u(p + b)`. Found by bisection to 0.01 money units.
pub fn enjoyment_benefit(offer: f64, prizes: &[f64], gamma: f64) -> Result<f64> {
    let top = prizes.iter().copied().fold(f64::NAN, f64::max);
    enjoyment_benefit_with_cap(offer, prizes, gamma, 10.0 * top)
}

pub fn enjoyment_benefit_with_cap(offer: f64, prizes: &[f64], gamma: f64, cap: f64) -> Result<f64> {
    if prizes.is_empty() {
        return Err(Error::Invalid("no prizes given".into()));
    }
    if !(offer > 0.0 && offer.is_finite()) || prizes.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
        return Err(Error::Invalid("offer and prizes must be positive".into()));
    }
    let u = UtilitySpec::crra(gamma);
    u.validate()?;
    let target = u.value(offer)?;
    let surplus = |b: f64| -> Result<f64> {
        let mut sum = 0.0;
        for p in prizes {
            sum += u.value(p + b)?;
        }
        Ok(sum / prizes.len() as f64 - target)
    };
    if surplus(0.0)? >= 0.0 {
        return Ok(0.0);
    }
    if surplus(cap)? < 0.0 {
        return Err(Error::UnboundedBenefit { cap });
    }
    let (mut lo, mut hi) = (0.0, cap);
    while hi - lo > 0.01 {
        let mid = 0.5 * (lo + hi);
        if surplus(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PrizeLadder;

    fn online_game() -> GameSpec {
        GameSpec::one_at_a_time(&[750.0, 500.0, 25.0], BankerModel::online(), UtilitySpec::Log).unwrap()
    }

    /// Root of (a^p + b^p)/2 = o^p in γ = 1 - p, by plain bisection on p.
    fn two_prize_root(a: f64, b: f64, offer: f64) -> f64 {
        let f = |p: f64| (a.powf(p) + b.powf(p)) / 2.0 - offer.powf(p);
        let (mut lo, mut hi) = (0.05, 0.95);
        assert!(f(lo).signum() != f(hi).signum());
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if f(mid).signum() == f(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        1.0 - 0.5 * (lo + hi)
    }

    #[test]
    fn two_prize_online_threshold() {
        let g = online_game();
        let s = g.state(&[750.0, 25.0], 1).unwrap();
        let p = decision_thresholds(&g, &s, GammaRange::new(0.0, 20.0).unwrap()).unwrap();
        let oracle = two_prize_root(750.0, 25.0, 278.75);
        assert_eq!(p.breakpoints.len(), 1);
        assert!((p.breakpoints[0] - oracle).abs() < 1e-6);
        assert!((oracle - 0.43981).abs() < 1e-5);
        assert_eq!(p.actions, vec![Action::NoDeal, Action::Deal]);
    }

    #[test]
    fn root_threshold_with_children() {
        let g = online_game();
        let p = decision_thresholds(&g, &g.initial_state(), GammaRange::default()).unwrap();
        let positive: Vec<f64> = p.breakpoints.iter().copied().filter(|b| *b > 0.0).collect();
        assert_eq!(positive.len(), 1);
        assert!((positive[0] - 4.5963).abs() < 1e-3);
        let kids: Vec<f64> = p.child_breakpoints.iter().copied().filter(|b| *b > 0.0).collect();
        assert_eq!(kids.len(), 2);
        assert!((kids[0] - two_prize_root(750.0, 25.0, 278.75)).abs() < 1e-6);
        assert!((kids[1] - two_prize_root(500.0, 25.0, 190.0)).abs() < 1e-6);
        assert_eq!(p.action_at(4.5), Action::NoDeal);
        assert_eq!(p.action_at(4.7), Action::Deal);
    }

    #[test]
    fn expected_value_two_prizes_deal_for_positive_gamma() {
        let g = GameSpec::one_at_a_time(&[40.0, 7000.0], BankerModel::ExpectedValue, UtilitySpec::Log).unwrap();
        let p = decision_thresholds(&g, &g.initial_state(), GammaRange::new(0.0, 20.0).unwrap()).unwrap();
        assert!(p.breakpoints.is_empty());
        assert_eq!(p.actions, vec![Action::Deal]);
    }

    #[test]
    fn midpoint_consistency_and_invariants() {
        let g = online_game();
        let range = GammaRange::default();
        let p = decision_thresholds(&g, &g.initial_state(), range).unwrap();
        assert!(p.breakpoints.windows(2).all(|w| w[1] - w[0] >= DEDUP_TOLERANCE));
        assert!(p.actions.windows(2).all(|w| w[0] != w[1]));
        for (iv, a) in p.intervals() {
            let q = crate::solver::q_values(&g.with_utility(UtilitySpec::crra(0.5 * (iv.lo + iv.hi))), &g.initial_state()).unwrap();
            assert_eq!(q.action, a);
        }
    }

    #[test]
    fn non_finite_difference_is_reported() {
        let g = GameSpec::one_at_a_time(&[1e-3, 1e8], BankerModel::ExpectedValue, UtilitySpec::Log).unwrap();
        let err = decision_thresholds(&g, &g.initial_state(), GammaRange::new(0.0, 80.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
    }

    #[test]
    fn threshold_guard() {
        let prizes: Vec<f64> = (1..=12).map(f64::from).collect();
        let g = GameSpec::one_at_a_time(&prizes, BankerModel::ExpectedValue, UtilitySpec::Log).unwrap();
        let err = decision_thresholds_with(&g, &g.initial_state(), GammaRange::default(), 100).unwrap_err();
        assert_eq!(err.code(), "guard");
    }

    #[test]
    fn benefit_examples() {
        let b = enjoyment_benefit(125_000.0, &[100_000.0, 150_000.0], 1.54085).unwrap();
        assert!((b - 3761.90).abs() < 0.5);
        assert_eq!(enjoyment_benefit(125_000.0, &[100_000.0, 150_000.0], 0.0).unwrap(), 0.0);
    }

    #[test]
    fn benefit_log_agrees_with_grid_scan() {
        let (offer, prizes) = (6000.0, [10.0, 10000.0]);
        let b = enjoyment_benefit(offer, &prizes, 1.0).unwrap();
        // independent oracle: first b on a 0.001 grid where the condition holds
        let holds = |b: f64| ((10.0 + b) * (10000.0 + b)).ln() / 2.0 >= offer.ln();
        let mut lo = 0.0;
        while !holds(lo + 1.0) {
            lo += 1.0;
        }
        let mut x = lo;
        while !holds(x) {
            x += 0.001;
        }
        assert!((b - x).abs() < 0.01, "{b} vs {x}");
    }

    #[test]
    fn benefit_unbounded() {
        // an offer above 10x the top prize cannot be matched within the cap
        let err = enjoyment_benefit(1000.0, &[1.0, 10.0], 2.0).unwrap_err();
        assert!(matches!(err, Error::UnboundedBenefit { .. }));
    }

    #[test]
    fn classify_cases() {
        let pos = Interval { lo: 0.0, hi: 20.0 };
        assert_eq!(classify(&[], pos), Constraint::InfeasibleForPositiveGamma);
        assert_eq!(classify(&[pos], pos), Constraint::None);
        assert_eq!(
            classify(&[Interval { lo: 0.0, hi: 1.5 }], pos),
            Constraint::Below { bound: 1.5 }
        );
        assert_eq!(
            classify(&[Interval { lo: 4.0, hi: 20.0 }], pos),
            Constraint::Above { bound: 4.0 }
        );
        assert!(matches!(
            classify(&[Interval { lo: 0.0, hi: 1.0 }, Interval { lo: 2.0, hi: 20.0 }], pos),
            Constraint::Union { .. }
        ));
    }

    #[test]
    fn deal_at_online_root_gives_lower_bound() {
        let traj = crate::trajectory::parse_trajectory(
            r#"{"contestant":"synthetic","currency":"USD","rounds":[
                {"remaining":[25,500,750],"offer":241.25,"decision":"deal"}]}"#,
        )
        .unwrap();
        let options = InversionOptions {
            schedule: Some(RoundSchedule::new(vec![1, 1]).unwrap()),
            ..InversionOptions::default()
        };
        let r = infer_gamma_bounds_with(&traj, &BankerModel::online(), GammaRange::default(), &options).unwrap();
        let c = &r.per_round[0].constraint;
        let Constraint::Above { bound } = c else { panic!("{c:?}") };
        assert!((bound - 4.5963).abs() < 1e-3);
        // sign check on either side
        let g = GameSpec::one_at_a_time(&[25.0, 500.0, 750.0], BankerModel::online(), UtilitySpec::crra(4.5)).unwrap();
        let s = g.initial_state();
        assert_eq!(crate::solver::q_values(&g, &s).unwrap().action, Action::NoDeal);
        assert_eq!(crate::solver::q_values(&g.with_utility(UtilitySpec::crra(4.7)), &s).unwrap().action, Action::Deal);
        assert_eq!(r.lower_bound, Some(*bound));
    }

    #[test]
    fn auto_start_picks_smallest_feasible_window() {
        let ladder: Vec<f64> = (1..=10).map(f64::from).collect();
        let rounds: Vec<String> = [10usize, 6, 3, 2]
            .iter()
            .map(|n| {
                let r: Vec<String> = ladder[..*n].iter().map(|v| v.to_string()).collect();
                format!(r#"{{"remaining":[{}],"offer":1,"decision":"no_deal"}}"#, r.join(","))
            })
            .collect();
        let doc = format!(r#"{{"contestant":"x","currency":"EUR","rounds":[{}]}}"#, rounds.join(","));
        let t = crate::trajectory::parse_trajectory(&doc).unwrap();
        assert_eq!(auto_start_round(&t, 1_000_000), 1);
        // from 6 prizes: 1 + C(6,3) + C(6,2) + C(6,1) = 42 states
        assert_eq!(auto_start_round(&t, 42), 2);
        assert_eq!(auto_start_round(&t, 41), 3);
        let _ = PrizeLadder::new(ladder).unwrap();
    }
}
