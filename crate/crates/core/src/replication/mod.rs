//! Bundled contestant records and the end-to-end case-study reproduction.

use serde::{Deserialize, Serialize};

use crate::banker::{implied_multiplier, BankerModel, Extrapolation};
use crate::error::{Error, Result};
use crate::inversion::{
    branch_crossings, enjoyment_benefit, infer_gamma_bounds, reachable_thresholds, BoundsReport,
    BranchCrossing, GammaPolicy, GammaRange,
};
use crate::model::{Action, UtilitySpec};
use crate::solver::{action_value_series, GameSpec, SeriesRow};
use crate::trajectory::{parse_trajectory, Trajectory};

const SUZANNE: &str = include_str!("data/suzanne.json");
const FRANK: &str = include_str!("data/frank.json");

pub const DATASET_NAMES: [&str; 2] = ["suzanne", "frank"];

/// Case studies start at the first round with this many prizes left.
pub const WINDOW_PRIZES: usize = 4;

/// γ values of the evolving-values figure.
pub const FIGURE_GAMMAS: [f64; 5] = [0.0, 0.5, 1.0, 1.54085, 2.5];

pub const FIGURE_HEADER: &str = "round,gamma,deal_value,continuation_ce";

pub fn dataset(name: &str) -> Result<Trajectory> {
    let doc = match name.to_ascii_lowercase().as_str() {
        "suzanne" => SUZANNE,
        "frank" => FRANK,
        _ => return Err(Error::UnknownDataset(name.to_string())),
    };
    parse_trajectory(doc)
}

/// Every bundled dataset, keyed by name.
pub fn datasets() -> Vec<(&'static str, Trajectory)> {
    DATASET_NAMES
        .iter()
        .map(|n| (*n, dataset(n).expect("bundled datasets are valid")))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundMultiplier {
    pub round: usize,
    pub offer: f64,
    pub mean: f64,
    pub multiplier: f64,
}

/// Offer over mean remaining prize for every round that has an offer.
pub fn implied_multipliers(traj: &Trajectory) -> Result<Vec<RoundMultiplier>> {
    let ladder = traj.ladder()?;
    let mut out = Vec::new();
    for (i, r) in traj.rounds.iter().enumerate() {
        let Some(offer) = r.offer else { continue };
        let state = traj.state(i, &ladder)?;
        out.push(RoundMultiplier {
            round: traj.round_number(i),
            offer,
            mean: state.mean(&ladder),
            multiplier: implied_multiplier(offer, &state, &ladder)?,
        });
    }
    Ok(out)
}

/// Multiplier banker reproducing the observed offers, indexed from the
/// first record. Offers must be recorded on a prefix of the rounds.
pub fn calibrate_multipliers(traj: &Trajectory, extrapolation: Extrapolation) -> Result<BankerModel> {
    let observed = implied_multipliers(traj)?;
    for (k, m) in observed.iter().enumerate() {
        if m.round != traj.round_number(k) {
            return Err(Error::trajectory(
                traj.round_number(k),
                "offers must be recorded for every round up to the last offer",
            ));
        }
    }
    if observed.is_empty() {
        return Err(Error::EmptySchedule);
    }
    let model = BankerModel::Multipliers {
        multipliers: observed.iter().map(|m| m.multiplier).collect(),
        extrapolation,
    };
    model.validate()?;
    Ok(model)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateThreshold {
    pub remaining: Vec<f64>,
    /// Whether this is the state the contestant actually faced.
    pub observed: bool,
    pub policy: GammaPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundThresholds {
    pub round: usize,
    pub states: Vec<StateThreshold>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenefitResult {
    pub round: usize,
    pub offer: f64,
    pub prizes: Vec<f64>,
    pub gamma: f64,
    pub benefit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyReport {
    pub contestant: String,
    pub currency: String,
    /// Offer over mean for every recorded round.
    pub multipliers: Vec<RoundMultiplier>,
    /// First show round of the analysis window.
    pub window_start: usize,
    /// Banker schedule used inside the window, indexed from its first round.
    pub window_multipliers: Vec<f64>,
    /// Thresholds of every state the game could reach in the window.
    pub thresholds: Vec<RoundThresholds>,
    /// Frozen-downstream crossings at the window's first state.
    pub branch_diagnostics: Vec<BranchCrossing>,
    pub bounds: BoundsReport,
    /// Bonus needed to justify the last refusal at the upper γ bound.
    pub benefit: Option<BenefitResult>,
    pub figure: Vec<SeriesRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseStudy {
    pub report: CaseStudyReport,
    pub figure_csv: String,
}

impl CaseStudy {
    pub fn report_json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("report serializes") + "\n"
    }
}

/// Reproduces a bundled case study.
pub fn replicate_case_study(name: &str) -> Result<CaseStudy> {
    let traj = dataset(name)?;
    let start = traj
        .rounds
        .iter()
        .position(|r| r.remaining.len() <= WINDOW_PRIZES)
        .map(|i| traj.round_number(i))
        .unwrap_or(traj.first_round);
    replicate(&traj, start, GammaRange::default())
}

/// Calibration, thresholds, bounds, benefit and figure data for `traj`
/// analysed from show round `window_start`.
pub fn replicate(traj: &Trajectory, window_start: usize, range: GammaRange) -> Result<CaseStudy> {
    traj.validate()?;
    let multipliers = implied_multipliers(traj)?;
    let window = traj.window(window_start)?;
    let banker = calibrate_multipliers(&window, Extrapolation::HoldLast)?;
    let window_multipliers = match &banker {
        BankerModel::Multipliers { multipliers, .. } => multipliers.clone(),
        _ => unreachable!("calibration yields a multiplier schedule"),
    };
    let spec = GameSpec::from_trajectory(&window, banker.clone(), UtilitySpec::Log)?;
    let root = window.state(0, &spec.ladder)?;

    let observed: Vec<_> = (0..window.rounds.len())
        .map(|i| window.state(i, &spec.ladder))
        .collect::<Result<_>>()?;
    let mut thresholds: Vec<RoundThresholds> = Vec::new();
    for (state, policy) in reachable_thresholds(&spec, &root, range)? {
        let entry = StateThreshold {
            remaining: state.prizes(&spec.ladder),
            observed: observed.contains(&state),
            policy,
        };
        let round = window.round_number(state.round);
        match thresholds.iter_mut().find(|t| t.round == round) {
            Some(t) => t.states.push(entry),
            None => thresholds.push(RoundThresholds {
                round,
                states: vec![entry],
            }),
        }
    }
    thresholds.sort_by_key(|t| t.round);

    let branch_diagnostics = branch_crossings(&spec, &root, range)?;
    let bounds = infer_gamma_bounds(&window, &banker, range)?;

    let benefit = match (bounds.upper_bound, window.last_decision()) {
        (Some(gamma), Some(i)) if window.rounds[i].decision == Some(Action::NoDeal) => {
            let r = &window.rounds[i];
            let offer = r.offer.expect("validated: decisions carry offers");
            Some(BenefitResult {
                round: window.round_number(i),
                offer,
                prizes: r.remaining.clone(),
                gamma,
                benefit: enjoyment_benefit(offer, &r.remaining, gamma)?,
            })
        }
        _ => None,
    };

    let figure = action_value_series(&spec, &window, &FIGURE_GAMMAS)?;
    let figure_csv = figure_csv(&figure);
    Ok(CaseStudy {
        report: CaseStudyReport {
            contestant: traj.contestant.clone(),
            currency: traj.currency.clone(),
            multipliers,
            window_start,
            window_multipliers,
            thresholds,
            branch_diagnostics,
            bounds,
            benefit,
            figure,
        },
        figure_csv,
    })
}

pub fn figure_csv(rows: &[SeriesRow]) -> String {
    let mut out = String::from(FIGURE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.round,
            sig6(r.gamma),
            sig6(r.deal_value),
            sig6(r.nodeal_value)
        ));
    }
    out
}

/// `%.6g` formatting.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
