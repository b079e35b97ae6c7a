//! Request and response payloads shared by the HTTP service and the CLI's
//! `--json` output, plus the handlers that compute them.

pub mod http;

use serde::{Deserialize, Serialize};

use crate::banker::{BankerModel, Extrapolation};
use crate::error::{Error, Result};
use crate::inversion::{
    auto_start_round, decision_thresholds, enjoyment_benefit, infer_gamma_bounds_with, BoundsReport, GammaPolicy,
    GammaRange, InversionOptions, AUTO_WINDOW_NODES,
};
use crate::model::{PrizeLadder, RoundSchedule, UtilitySpec};
use crate::replication::{calibrate_multipliers, datasets, implied_multipliers, RoundMultiplier};
use crate::solver::{q_values, GameSpec, QResult};
use crate::trajectory::Trajectory;

/// A banker or utility given either in its short text form
/// (`"online"`, `"crra:2"`) or as a full JSON object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Descriptor {
    Text(String),
    Object(serde_json::Value),
}

impl Descriptor {
    pub fn banker(&self) -> Result<BankerModel> {
        let model: BankerModel = match self {
            Descriptor::Text(s) => s.parse()?,
            Descriptor::Object(v) => {
                serde_json::from_value(v.clone()).map_err(|e| Error::InvalidBanker(e.to_string()))?
            }
        };
        model.validate()?;
        Ok(model)
    }

    pub fn utility(&self) -> Result<UtilitySpec> {
        let u: UtilitySpec = match self {
            Descriptor::Text(s) => s.parse()?,
            Descriptor::Object(v) => {
                serde_json::from_value(v.clone()).map_err(|e| Error::InvalidUtility(e.to_string()))?
            }
        };
        u.validate()?;
        Ok(u)
    }
}

fn default_banker() -> Descriptor {
    Descriptor::Text("ev".into())
}

fn default_utility() -> Descriptor {
    Descriptor::Text("log".into())
}

/// A board and the state to evaluate on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoardRequest {
    pub ladder: Vec<f64>,
    /// Prizes still in play; the whole ladder when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remaining: Option<Vec<f64>>,
    /// Cases opened after each refused offer; one per round when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<usize>>,
    #[serde(default = "default_banker")]
    pub banker: Descriptor,
}

/// A validated game and the state of interest, or the lone prize when
/// only one case is left.
enum Board {
    Game { spec: GameSpec, state: crate::model::GameState },
    Single(f64),
}

impl BoardRequest {
    fn resolve(&self, utility: UtilitySpec) -> Result<Board> {
        let banker = self.banker.banker()?;
        utility.validate()?;
        if let [prize] = self.ladder[..] {
            if !(prize > 0.0 && prize.is_finite()) {
                return Err(Error::InvalidLadder(format!("prize must be positive, got {prize}")));
            }
            if let Some(r) = &self.remaining {
                if r.as_slice() != [prize] {
                    return Err(Error::InvalidState("remaining prizes are not on the ladder".into()));
                }
            }
            return Ok(Board::Single(prize));
        }
        let ladder = PrizeLadder::new(self.ladder.clone())?;
        let schedule = match &self.schedule {
            Some(s) => RoundSchedule::new(s.clone())?,
            None => RoundSchedule::one_at_a_time(ladder.len()),
        };
        let spec = GameSpec::new(ladder, schedule, banker, utility)?;
        let remaining = self.remaining.clone().unwrap_or_else(|| spec.ladder.prizes().to_vec());
        if let [prize] = remaining[..] {
            spec.ladder.mask_of(&remaining)?;
            return Ok(Board::Single(prize));
        }
        let round = spec.round_for(remaining.len())?;
        let state = spec.state(&remaining, round)?;
        Ok(Board::Game { spec, state })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRequest {
    #[serde(flatten)]
    pub board: BoardRequest,
    #[serde(default = "default_utility")]
    pub utility: Descriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub gamma: f64,
    #[serde(flatten)]
    pub result: QResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResponse {
    #[serde(flatten)]
    pub result: QResult,
    pub round: usize,
    pub remaining: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<GridPoint>>,
}

pub fn solve(req: &SolveRequest) -> Result<SolveResponse> {
    let utility = req.utility.utility()?;
    let grid_utilities: Vec<(f64, UtilitySpec)> = req
        .gamma_grid
        .iter()
        .flatten()
        .map(|g| {
            let u = UtilitySpec::crra(*g);
            u.validate().map(|_| (*g, u))
        })
        .collect::<Result<_>>()?;
    let (result, round, remaining, per_gamma) = match req.board.resolve(utility)? {
        Board::Single(prize) => {
            let per_gamma = grid_utilities
                .iter()
                .map(|(g, u)| Ok(GridPoint { gamma: *g, result: QResult::terminal(u, prize)? }))
                .collect::<Result<Vec<_>>>()?;
            (QResult::terminal(&utility, prize)?, 0, vec![prize], per_gamma)
        }
        Board::Game { spec, state } => {
            let per_gamma = grid_utilities
                .iter()
                .map(|(g, u)| {
                    Ok(GridPoint {
                        gamma: *g,
                        result: q_values(&spec.with_utility(*u), &state)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            (q_values(&spec, &state)?, state.round, state.prizes(&spec.ladder), per_gamma)
        }
    };
    Ok(SolveResponse {
        result,
        round,
        remaining,
        grid: req.gamma_grid.as_ref().map(|_| per_gamma),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdsRequest {
    #[serde(flatten)]
    pub board: BoardRequest,
    #[serde(default)]
    pub gamma_range: Option<GammaRange>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdsResponse {
    pub round: usize,
    pub remaining: Vec<f64>,
    pub policy: GammaPolicy,
    /// The state's own breakpoints merged with those of later states.
    pub all_breakpoints: Vec<f64>,
}

pub fn thresholds(req: &ThresholdsRequest) -> Result<ThresholdsResponse> {
    let range = checked_range(req.gamma_range)?;
    match req.board.resolve(UtilitySpec::Log)? {
        Board::Single(_) => Err(Error::InvalidState(
            "no decision is possible with one case left".into(),
        )),
        Board::Game { spec, state } => {
            let policy = decision_thresholds(&spec, &state, range)?;
            Ok(ThresholdsResponse {
                round: state.round,
                remaining: state.prizes(&spec.ladder),
                all_breakpoints: policy.all_breakpoints(),
                policy,
            })
        }
    }
}

fn checked_range(range: Option<GammaRange>) -> Result<GammaRange> {
    match range {
        Some(r) => GammaRange::new(r.lo, r.hi),
        None => Ok(GammaRange::default()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvertRequest {
    #[serde(flatten)]
    pub trajectory: Trajectory,
    /// Banker for unobserved states; calibrated from the offers when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub banker: Option<Descriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_range: Option<GammaRange>,
    /// First show round to analyse; chosen from the threshold budget when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from_round: Option<usize>,
    /// Full opening schedule, when the game went on past the last record.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvertResponse {
    pub window_start: usize,
    pub banker: BankerModel,
    /// Offer over mean for every recorded round with an offer.
    pub multipliers: Vec<RoundMultiplier>,
    pub report: BoundsReport,
}

pub fn invert(req: &InvertRequest) -> Result<InvertResponse> {
    let traj = &req.trajectory;
    traj.validate()?;
    let range = checked_range(req.gamma_range)?;
    let multipliers = implied_multipliers(traj)?;
    let start = req
        .from_round
        .unwrap_or_else(|| auto_start_round(traj, AUTO_WINDOW_NODES));
    let window = traj.window(start)?;
    let banker = match &req.banker {
        Some(d) => d.banker()?,
        None => calibrate_multipliers(&window, Extrapolation::HoldLast)?,
    };
    let schedule = match &req.schedule {
        Some(opens) => {
            // the supplied schedule is for the whole game; drop the rounds before the window
            let skip = start - traj.first_round;
            let rest = opens.get(skip..).ok_or_else(|| {
                Error::InvalidSchedule("schedule is shorter than the analysis window offset".into())
            })?;
            Some(RoundSchedule::new(rest.to_vec())?)
        }
        None => None,
    };
    let options = InversionOptions {
        schedule,
        ..InversionOptions::default()
    };
    let report = infer_gamma_bounds_with(&window, &banker, range, &options)?;
    Ok(InvertResponse {
        window_start: start,
        banker,
        multipliers,
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenefitRequest {
    pub offer: f64,
    pub prizes: Vec<f64>,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenefitResponse {
    pub benefit: f64,
}

pub fn benefit(req: &BenefitRequest) -> Result<BenefitResponse> {
    Ok(BenefitResponse {
        benefit: enjoyment_benefit(req.offer, &req.prizes, req.gamma)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub name: String,
    #[serde(flatten)]
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetsResponse {
    pub datasets: Vec<DatasetEntry>,
}

pub fn list_datasets() -> DatasetsResponse {
    DatasetsResponse {
        datasets: datasets()
            .into_iter()
            .map(|(name, trajectory)| DatasetEntry {
                name: name.to_string(),
                trajectory,
            })
            .collect(),
    }
}

/// Body of every error response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: ErrorDetail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorDetail {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round: Option<usize>,
}

impl From<&Error> for ErrorBody {
    fn from(e: &Error) -> Self {
        Self {
            error: ErrorDetail {
                code: e.code().to_string(),
                message: e.to_string(),
                round: e.round(),
            },
        }
    }
}

impl ErrorBody {
    pub fn malformed(message: impl Into<String>) -> Self {
        Self {
            error: ErrorDetail {
                code: "malformed_request".into(),
                message: message.into(),
                round: None,
            },
        }
    }
}
