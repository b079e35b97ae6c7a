use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// CRRA coefficients this close to 1 are evaluated as log utility.
pub const LOG_GAMMA_EPS: f64 = 1e-9;

/// A parameterized utility-of-money family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum UtilitySpec {
    /// `ln x`
    Log,
    /// `(x^(1-γ) - 1) / (1-γ)`; γ < 0 is risk seeking, γ = 0 risk neutral.
    Crra { gamma: f64 },
    /// `(1 - exp(-α (W + x)^(1-γ))) / α`
    ExpPower { alpha: f64, gamma: f64, wealth: f64 },
}

impl UtilitySpec {
    pub fn crra(gamma: f64) -> Self {
        UtilitySpec::Crra { gamma }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            UtilitySpec::Log => Ok(()),
            UtilitySpec::Crra { gamma } if gamma.is_finite() => Ok(()),
            UtilitySpec::Crra { gamma } => {
                Err(Error::InvalidUtility(format!("gamma must be finite, got {gamma}")))
            }
            UtilitySpec::ExpPower {
                alpha,
                gamma,
                wealth,
            } => {
                if !(alpha.is_finite() && alpha > 0.0) {
                    return Err(Error::InvalidUtility(format!("alpha must be > 0, got {alpha}")));
                }
                // (W+x)^(1-γ) must increase with x for the family to be a utility.
                if !(gamma.is_finite() && gamma < 1.0) {
                    return Err(Error::InvalidUtility(format!(
                        "exp-power gamma must be < 1, got {gamma}"
                    )));
                }
                if !(wealth.is_finite() && wealth >= 0.0) {
                    return Err(Error::InvalidUtility(format!(
                        "wealth must be >= 0, got {wealth}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// The CRRA coefficient, treating log utility as γ = 1.
    pub fn gamma(&self) -> Option<f64> {
        match *self {
            UtilitySpec::Log => Some(1.0),
            UtilitySpec::Crra { gamma } => Some(gamma),
            UtilitySpec::ExpPower { .. } => None,
        }
    }

    /// Log utility or CRRA within [`LOG_GAMMA_EPS`] of 1.
    fn is_log(&self) -> bool {
        match *self {
            UtilitySpec::Log => true,
            UtilitySpec::Crra { gamma } => (gamma - 1.0).abs() < LOG_GAMMA_EPS,
            UtilitySpec::ExpPower { .. } => false,
        }
    }

    /// Utility of `x` units of money.
    pub fn value(&self, x: f64) -> Result<f64> {
        let v = match *self {
            _ if self.is_log() => {
                if !(x > 0.0) {
                    return Err(Error::UtilityDomain { x });
                }
                x.ln()
            }
            UtilitySpec::Crra { gamma } => {
                if !(x > 0.0) {
                    return Err(Error::UtilityDomain { x });
                }
                if gamma == 0.0 {
                    x - 1.0
                } else {
                    let e = 1.0 - gamma;
                    (e * x.ln()).exp_m1() / e
                }
            }
            UtilitySpec::ExpPower {
                alpha,
                gamma,
                wealth,
            } => {
                if !(x >= 0.0 && wealth + x > 0.0) {
                    return Err(Error::UtilityDomain { x });
                }
                -(-alpha * (wealth + x).powf(1.0 - gamma)).exp_m1() / alpha
            }
            UtilitySpec::Log => unreachable!(),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("{self}({x})")))
        }
    }

    /// Money whose utility is `q`.
    pub fn certainty_equivalent(&self, q: f64) -> Result<f64> {
        if !q.is_finite() {
            return Err(Error::UtilityRange { q });
        }
        let x = match *self {
            _ if self.is_log() => q.exp(),
            UtilitySpec::Crra { gamma } => {
                let e = 1.0 - gamma;
                let a = e * q;
                if a <= -1.0 {
                    return Err(Error::UtilityRange { q });
                }
                (a.ln_1p() / e).exp()
            }
            UtilitySpec::ExpPower {
                alpha,
                gamma,
                wealth,
            } => {
                let floor = self.value(0.0)?;
                if q < floor || alpha * q >= 1.0 {
                    return Err(Error::UtilityRange { q });
                }
                let z = -(-alpha * q).ln_1p() / alpha;
                let x = z.powf(1.0 / (1.0 - gamma)) - wealth;
                if x.is_finite() {
                    x.max(0.0)
                } else {
                    self.invert_by_bisection(q)?
                }
            }
            UtilitySpec::Log => unreachable!(),
        };
        let in_domain = match self {
            UtilitySpec::ExpPower { .. } => x >= 0.0,
            _ => x > 0.0,
        };
        if x.is_finite() && in_domain {
            Ok(x)
        } else {
            Err(Error::NonFinite(format!("certainty equivalent of {q} under {self}")))
        }
    }

    /// Bracketing inversion of `value`, used when the closed form overflows.
    fn invert_by_bisection(&self, q: f64) -> Result<f64> {
        let mut lo = 0.0;
        let mut hi = 1.0;
        while self.value(hi)? < q {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::UtilityRange { q });
            }
        }
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.value(mid)? < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

impl fmt::Display for UtilitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UtilitySpec::Log => write!(f, "log"),
            UtilitySpec::Crra { gamma } => write!(f, "crra:{gamma}"),
            UtilitySpec::ExpPower {
                alpha,
                gamma,
                wealth,
            } => write!(f, "exppower:{alpha},{gamma},{wealth}"),
        }
    }
}

/// Parses `log`, `crra:<γ>` or `exppower:<α>,<γ>,<W>`.
impl FromStr for UtilitySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidUtility(format!("cannot parse utility {s:?}"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let (family, args) = s.split_once(':').unwrap_or((s, ""));
        let u = match family.trim().to_ascii_lowercase().as_str() {
            "log" if args.is_empty() => UtilitySpec::Log,
            "crra" => UtilitySpec::Crra { gamma: num(args)? },
            "exppower" | "exp_power" => {
                let parts: Vec<&str> = args.split(',').collect();
                if parts.len() != 3 {
                    return Err(bad());
                }
                UtilitySpec::ExpPower {
                    alpha: num(parts[0])?,
                    gamma: num(parts[1])?,
                    wealth: num(parts[2])?,
                }
            }
            _ => return Err(bad()),
        };
        u.validate()?;
        Ok(u)
    }
}

pub fn utility_value(u: &UtilitySpec, x: f64) -> Result<f64> {
    u.value(x)
}

pub fn certainty_equivalent(u: &UtilitySpec, q: f64) -> Result<f64> {
    u.certainty_equivalent(q)
}
