use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid prize ladder: {0}")]
    InvalidLadder(String),

    #[error("invalid round schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid game state: {0}")]
    InvalidState(String),

    #[error("invalid utility: {0}")]
    InvalidUtility(String),

    #[error("invalid banker model: {0}")]
    InvalidBanker(String),

    /// Money outside the domain of the utility family.
    #[error("utility domain error: u({x}) is undefined")]
    UtilityDomain { x: f64 },

    /// A utility level that no money amount attains.
    #[error("utility {q} is outside the range of the utility function")]
    UtilityRange { q: f64 },

    #[error("non-finite value while evaluating {0}")]
    NonFinite(String),

    #[error("cannot open {opens} cases with {remaining} remaining (the contestant's case is never opened)")]
    TooManyOpens { opens: usize, remaining: usize },

    #[error("multiplier schedule is empty")]
    EmptySchedule,

    #[error(
        "state space too large: {prizes} prizes / ~{edges:.3e} transition edges \
         (limits: {max_prizes} prizes, {max_edges:.3e} edges)"
    )]
    Guard {
        prizes: usize,
        edges: f64,
        max_prizes: usize,
        max_edges: f64,
    },

    #[error("threshold analysis too large: {nodes} states below the observed state (limit {max_nodes})")]
    ThresholdGuard { nodes: usize, max_nodes: usize },

    #[error("invalid trajectory{}: {message}", round.map(|r| format!(" (round {r})")).unwrap_or_default())]
    Trajectory { round: Option<usize>, message: String },

    #[error("no enjoyment benefit up to {cap} satisfies the continuation condition")]
    UnboundedBenefit { cap: f64 },

    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable code, used by the JSON error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidLadder(_) => "invalid_ladder",
            Error::InvalidSchedule(_) => "invalid_schedule",
            Error::InvalidState(_) => "invalid_state",
            Error::InvalidUtility(_) => "invalid_utility",
            Error::InvalidBanker(_) => "invalid_banker",
            Error::UtilityDomain { .. } => "utility_domain",
            Error::UtilityRange { .. } => "utility_range",
            Error::NonFinite(_) => "non_finite",
            Error::TooManyOpens { .. } => "too_many_opens",
            Error::EmptySchedule => "empty_schedule",
            Error::Guard { .. } | Error::ThresholdGuard { .. } => "guard",
            Error::Trajectory { .. } => "invalid_trajectory",
            Error::UnboundedBenefit { .. } => "unbounded_benefit",
            Error::UnknownDataset(_) => "unknown_dataset",
            Error::Invalid(_) => "invalid_request",
        }
    }

    pub fn round(&self) -> Option<usize> {
        match self {
            Error::Trajectory { round, .. } => *round,
            _ => None,
        }
    }

    pub(crate) fn trajectory(round: impl Into<Option<usize>>, message: impl Into<String>) -> Self {
        Error::Trajectory {
            round: round.into(),
            message: message.into(),
        }
    }
}
