//! Banker offer models.
//!
//! Three rules are supported: the expected value of the remaining prizes,
//! a round-indexed multiple of that expected value, and the fixed
//! big/small coefficient rule used by the online edition of the game
//! (which only covers boards with two or three prizes left and delegates
//! everything else to a fallback model).

use serde::{Deserialize, Serialize};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{GameState, PrizeLadder};

/// How a multiplier schedule answers for rounds past its last entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extrapolation {
    #[default]
    HoldLast,
    /// Least-squares line through the observed multipliers, clamped at 0.
    LinearTrend,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnlineRule {
    #[serde(default = "OnlineRule::default_coeff3_big")]
    pub coeff3_big: f64,
    #[serde(default = "OnlineRule::default_small")]
    pub coeff3_small: f64,
    #[serde(default = "OnlineRule::default_coeff2_big")]
    pub coeff2_big: f64,
    #[serde(default = "OnlineRule::default_small")]
    pub coeff2_small: f64,
    /// Used when neither two nor three prizes remain.
    #[serde(default = "OnlineRule::default_fallback")]
    pub fallback: Box<BankerModel>,
}

impl OnlineRule {
    fn default_coeff3_big() -> f64 {
        0.305
    }
    fn default_coeff2_big() -> f64 {
        0.355
    }
    fn default_small() -> f64 {
        0.5
    }
    fn default_fallback() -> Box<BankerModel> {
        Box::new(BankerModel::ExpectedValue)
    }
}

impl Default for OnlineRule {
    fn default() -> Self {
        Self {
            coeff3_big: Self::default_coeff3_big(),
            coeff3_small: Self::default_small(),
            coeff2_big: Self::default_coeff2_big(),
            coeff2_small: Self::default_small(),
            fallback: Self::default_fallback(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BankerModel {
    /// Mean of the remaining prizes.
    #[serde(alias = "ev")]
    ExpectedValue,
    /// `m[round] × mean`.
    Multipliers {
        multipliers: Vec<f64>,
        #[serde(default)]
        extrapolation: Extrapolation,
    },
    Online(OnlineRule),
}

/// Which branch of a banker model produced an offer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OfferRule {
    ExpectedValue,
    Multiplier,
    OnlineThree,
    OnlineTwo,
    /// Single case left: the offer is the prize itself.
    Terminal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Offer {
    pub amount: f64,
    pub rule: OfferRule,
}

impl BankerModel {
    pub fn online() -> Self {
        BankerModel::Online(OnlineRule::default())
    }

    pub fn multipliers(multipliers: Vec<f64>) -> Self {
        BankerModel::Multipliers {
            multipliers,
            extrapolation: Extrapolation::HoldLast,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BankerModel::ExpectedValue => Ok(()),
            BankerModel::Multipliers { multipliers, .. } => {
                if let Some(m) = multipliers.iter().find(|m| !m.is_finite() || **m < 0.0) {
                    return Err(Error::InvalidBanker(format!(
                        "multipliers must be finite and >= 0, got {m}"
                    )));
                }
                Ok(())
            }
            BankerModel::Online(rule) => {
                let c = [
                    rule.coeff3_big,
                    rule.coeff3_small,
                    rule.coeff2_big,
                    rule.coeff2_small,
                ];
                if c.iter().any(|c| !c.is_finite() || *c < 0.0) {
                    return Err(Error::InvalidBanker(
                        "online coefficients must be finite and >= 0".into(),
                    ));
                }
                rule.fallback.validate()
            }
        }
    }

    /// Multiplier applied at `round`, extrapolating past the observed rounds.
    pub fn multiplier_at(multipliers: &[f64], extrapolation: Extrapolation, round: usize) -> Result<f64> {
        if let Some(m) = multipliers.get(round) {
            return Ok(*m);
        }
        let last = *multipliers.last().ok_or(Error::EmptySchedule)?;
        match extrapolation {
            Extrapolation::HoldLast => Ok(last),
            Extrapolation::LinearTrend => {
                let n = multipliers.len() as f64;
                if multipliers.len() < 2 {
                    return Ok(last);
                }
                let mean_x = (n - 1.0) / 2.0;
                let mean_y = multipliers.iter().sum::<f64>() / n;
                let (sxy, sxx) = multipliers.iter().enumerate().fold((0.0, 0.0), |(sxy, sxx), (i, y)| {
                    let dx = i as f64 - mean_x;
                    (sxy + dx * (y - mean_y), sxx + dx * dx)
                });
                let slope = sxy / sxx;
                Ok((mean_y + slope * (round as f64 - mean_x)).max(0.0))
            }
        }
    }

    pub fn offer(&self, state: &GameState, ladder: &PrizeLadder) -> Result<Offer> {
        let prizes = state.prizes(ladder);
        if prizes.is_empty() {
            return Err(Error::InvalidState("no prizes remain".into()));
        }
        let mean = prizes.iter().sum::<f64>() / prizes.len() as f64;
        let offer = match self {
            BankerModel::ExpectedValue => Offer {
                amount: mean,
                rule: OfferRule::ExpectedValue,
            },
            BankerModel::Multipliers {
                multipliers,
                extrapolation,
            } => Offer {
                amount: Self::multiplier_at(multipliers, *extrapolation, state.round)? * mean,
                rule: OfferRule::Multiplier,
            },
            BankerModel::Online(rule) => {
                let small = prizes[0];
                let big = prizes[prizes.len() - 1];
                match prizes.len() {
                    3 => Offer {
                        amount: rule.coeff3_big * big + rule.coeff3_small * small,
                        rule: OfferRule::OnlineThree,
                    },
                    2 => Offer {
                        amount: rule.coeff2_big * big + rule.coeff2_small * small,
                        rule: OfferRule::OnlineTwo,
                    },
                    _ => return rule.fallback.offer(state, ladder),
                }
            }
        };
        if !(offer.amount.is_finite() && offer.amount > 0.0) {
            return Err(Error::InvalidBanker(format!(
                "offer must be positive, got {}",
                offer.amount
            )));
        }
        Ok(offer)
    }
}

/// Parses the CLI forms `ev`, `online` and `multipliers:<m0>,<m1>,...`.
impl FromStr for BankerModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let model = match kind.trim().to_ascii_lowercase().as_str() {
            "ev" | "expected_value" if args.is_empty() => BankerModel::ExpectedValue,
            "online" if args.is_empty() => BankerModel::online(),
            "multipliers" => {
                let multipliers = args
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidBanker(format!("cannot parse multipliers {args:?}")))?;
                BankerModel::multipliers(multipliers)
            }
            _ => return Err(Error::InvalidBanker(format!("unknown banker {s:?}"))),
        };
        model.validate()?;
        Ok(model)
    }
}

pub fn banker_offer(model: &BankerModel, state: &GameState, ladder: &PrizeLadder) -> Result<f64> {
    model.offer(state, ladder).map(|o| o.amount)
}

/// Observed offer as a fraction of the mean remaining prize.
pub fn implied_multiplier(offer: f64, state: &GameState, ladder: &PrizeLadder) -> Result<f64> {
    if state.is_empty() {
        return Err(Error::InvalidState("no prizes remain".into()));
    }
    if !(offer.is_finite() && offer >= 0.0) {
        return Err(Error::Invalid(format!("offer must be >= 0, got {offer}")));
    }
    Ok(offer / state.mean(ladder))
}
