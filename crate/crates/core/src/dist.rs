//! Parametric lifetime families: data-generating models, the log-logistic
//! reference for calibration, and oracles for true CDF/quantile/odds-rate
//! values.
//!
//! Scale parameters are fixed to 1 throughout; the odds-rate geometry this
//! crate works with is scale invariant, so a scale field would add nothing.
//!
//! Families and their CLI spec strings:
//!
//! | family | spec | CDF |
//! |---|---|---|
//! | log-logistic | `ll:a` | `x^a / (1 + x^a)` |
//! | Weibull | `w:a` | `1 - exp(-x^a)` |
//! | beta type II | `b2:a,b` | `I_{x/(1+x)}(a, b)` |
//! | Haupt-Schabe | `hs:a` | `sqrt(a^2 + (2a+1)x) - a` on `[0, 1]` |
//! | Birnbaum-Saunders | `bs:a` | `Phi((sqrt(x) - 1/sqrt(x)) / a)` |
//! | piecewise odds | `pw:a,b` | odds `x^a` below 1, `x^b` above |

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::special;
use crate::ttt::SortedSample;

/// Family and shape parameters, prior to validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    LogLogistic { shape: f64 },
    Weibull { shape: f64 },
    BetaTypeII { a: f64, b: f64 },
    HauptSchabe { a: f64 },
    BirnbaumSaunders { a: f64 },
    PiecewiseOdds { a: f64, b: f64 },
}

/// A validated distribution specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    family: Family,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be a positive finite real, got {v}"
        )))
    }
}

impl DistributionSpec {
    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::LogLogistic { shape } => positive("log-logistic shape", shape)?,
            Family::Weibull { shape } => positive("Weibull shape", shape)?,
            Family::BetaTypeII { a, b } => {
                positive("beta type II shape a", a)?;
                positive("beta type II shape b", b)?;
            }
            Family::HauptSchabe { a } => {
                if !(a.is_finite() && a > 0.5) {
                    return Err(Error::InvalidParameter(format!(
                        "Haupt-Schabe shape must exceed 1/2, got {a}"
                    )));
                }
            }
            Family::BirnbaumSaunders { a } => positive("Birnbaum-Saunders shape", a)?,
            Family::PiecewiseOdds { a, b } => {
                positive("piecewise-odds shape a", a)?;
                positive("piecewise-odds shape b", b)?;
            }
        }
        Ok(DistributionSpec { family })
    }

    pub fn log_logistic(shape: f64) -> Result<Self> {
        Self::new(Family::LogLogistic { shape })
    }

    pub fn weibull(shape: f64) -> Result<Self> {
        Self::new(Family::Weibull { shape })
    }

    pub fn beta_type_ii(a: f64, b: f64) -> Result<Self> {
        Self::new(Family::BetaTypeII { a, b })
    }

    pub fn haupt_schabe(a: f64) -> Result<Self> {
        Self::new(Family::HauptSchabe { a })
    }

    pub fn birnbaum_saunders(a: f64) -> Result<Self> {
        Self::new(Family::BirnbaumSaunders { a })
    }

    pub fn piecewise_odds(a: f64, b: f64) -> Result<Self> {
        Self::new(Family::PiecewiseOdds { a, b })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Short family code used in spec strings and study tables.
    pub fn code(&self) -> &'static str {
        match self.family {
            Family::LogLogistic { .. } => "ll",
            Family::Weibull { .. } => "w",
            Family::BetaTypeII { .. } => "b2",
            Family::HauptSchabe { .. } => "hs",
            Family::BirnbaumSaunders { .. } => "bs",
            Family::PiecewiseOdds { .. } => "pw",
        }
    }

    /// Shape parameters rendered as a comma-separated string.
    pub fn shape_string(&self) -> String {
        match self.family {
            Family::LogLogistic { shape } | Family::Weibull { shape } => format!("{shape}"),
            Family::HauptSchabe { a } | Family::BirnbaumSaunders { a } => format!("{a}"),
            Family::BetaTypeII { a, b } | Family::PiecewiseOdds { a, b } => format!("{a},{b}"),
        }
    }

    /// Right endpoint of the support (`1` for Haupt-Schabe, `+inf` otherwise).
    pub fn support_upper(&self) -> f64 {
        match self.family {
            Family::HauptSchabe { .. } => 1.0,
            _ => f64::INFINITY,
        }
    }

    /// CDF at `x >= 0`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::Domain(format!("cdf requires x >= 0, got {x}")));
        }
        Ok(match self.family {
            Family::LogLogistic { shape } => ll_cdf(x, shape),
            Family::Weibull { shape } => -(-x.powf(shape)).exp_m1(),
            Family::BetaTypeII { a, b } => special::beta_reg(a, b, x / (1.0 + x)),
            Family::HauptSchabe { a } => {
                if x >= 1.0 {
                    1.0
                } else {
                    (a * a + (2.0 * a + 1.0) * x).sqrt() - a
                }
            }
            Family::BirnbaumSaunders { a } => {
                if x == 0.0 {
                    0.0
                } else {
                    let s = x.sqrt();
                    special::normal_cdf((s - 1.0 / s) / a)
                }
            }
            Family::PiecewiseOdds { a, b } => {
                if x <= 1.0 {
                    ll_cdf(x, a)
                } else {
                    ll_cdf(x, b)
                }
            }
        })
    }

    /// Density at `x >= 0`; may be `0` or `+inf` at support boundaries.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::Domain(format!("pdf requires x >= 0, got {x}")));
        }
        Ok(match self.family {
            Family::LogLogistic { shape } => ll_pdf(x, shape),
            Family::Weibull { shape } => {
                shape * x.powf(shape - 1.0) * (-x.powf(shape)).exp()
            }
            Family::BetaTypeII { a, b } => {
                if x == 0.0 {
                    // limit of x^(a-1): 0 for a > 1, 1/B for a = 1, +inf below
                    if a > 1.0 {
                        0.0
                    } else if a == 1.0 {
                        (-ln_beta(a, b)).exp()
                    } else {
                        f64::INFINITY
                    }
                } else {
                    ((a - 1.0) * x.ln() - (a + b) * x.ln_1p() - ln_beta(a, b)).exp()
                }
            }
            Family::HauptSchabe { a } => {
                if x > 1.0 {
                    0.0
                } else {
                    (2.0 * a + 1.0) / (2.0 * (a * a + (2.0 * a + 1.0) * x).sqrt())
                }
            }
            Family::BirnbaumSaunders { a } => {
                if x == 0.0 {
                    0.0
                } else {
                    let s = x.sqrt();
                    let xi = (s - 1.0 / s) / a;
                    let dxi = (0.5 / s + 0.5 / (x * s)) / a;
                    special::normal_pdf(xi) * dxi
                }
            }
            Family::PiecewiseOdds { a, b } => {
                if x <= 1.0 {
                    ll_pdf(x, a)
                } else {
                    ll_pdf(x, b)
                }
            }
        })
    }

    /// Odds rate `f(x) / (1 - F(x))^2` at an interior point of the support.
    pub fn odds_rate(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x <= 0.0 {
            return Err(Error::Domain(format!(
                "odds rate requires an interior point, got {x}"
            )));
        }
        match self.family {
            // The log-logistic odds function is x^a, so the rate is exact.
            Family::LogLogistic { shape } => Ok(shape * x.powf(shape - 1.0)),
            Family::Weibull { shape } => {
                Ok(shape * x.powf(shape - 1.0) * x.powf(shape).exp())
            }
            Family::BetaTypeII { a, b } => {
                // Survival through the complementary incomplete beta keeps
                // precision in the right tail.
                let surv = special::beta_reg(b, a, 1.0 / (1.0 + x));
                Ok(self.pdf(x)? / (surv * surv))
            }
            Family::HauptSchabe { a } => {
                if x >= 1.0 {
                    return Err(Error::Domain(format!(
                        "odds rate of Haupt-Schabe is defined on (0, 1), got {x}"
                    )));
                }
                let root = (a * a + (2.0 * a + 1.0) * x).sqrt();
                let surv = 1.0 + a - root;
                Ok((2.0 * a + 1.0) / (2.0 * root) / (surv * surv))
            }
            Family::BirnbaumSaunders { a } => {
                let s = x.sqrt();
                let xi = (s - 1.0 / s) / a;
                let surv = 0.5 * special::erfc(xi / std::f64::consts::SQRT_2);
                Ok(self.pdf(x)? / (surv * surv))
            }
            Family::PiecewiseOdds { a, b } => {
                // The odds function is x^a below 1 and x^b above; for a > b
                // the rate has a downward jump at 1. The left branch wins at
                // the boundary, matching the CDF's branch choice.
                if x <= 1.0 {
                    Ok(a * x.powf(a - 1.0))
                } else {
                    Ok(b * x.powf(b - 1.0))
                }
            }
        }
    }

    /// Quantile on `[0, 1]`; `p = 1` maps to the right endpoint of the
    /// support, which is `+inf` for every family except Haupt-Schabe.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "quantile requires p in [0, 1], got {p}"
            )));
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        if p == 1.0 {
            return Ok(self.support_upper());
        }
        Ok(match self.family {
            Family::LogLogistic { shape } => (p / (1.0 - p)).powf(1.0 / shape),
            Family::Weibull { shape } => (-(-p).ln_1p()).powf(1.0 / shape),
            Family::BetaTypeII { a, b } => bisect_quantile(p, |x| special::beta_reg(a, b, x / (1.0 + x))),
            Family::HauptSchabe { a } => ((p + a) * (p + a) - a * a) / (2.0 * a + 1.0),
            Family::BirnbaumSaunders { a } => {
                let z = special::normal_quantile(p);
                let disc = (a * z).mul_add(a * z, 4.0).sqrt();
                // Rationalized form for z < 0 avoids cancellation.
                let s = if z >= 0.0 {
                    0.5 * (a * z + disc)
                } else {
                    2.0 / (disc - a * z)
                };
                s * s
            }
            Family::PiecewiseOdds { a, b } => {
                let odds = p / (1.0 - p);
                if p <= 0.5 {
                    odds.powf(1.0 / a)
                } else {
                    odds.powf(1.0 / b)
                }
            }
        })
    }

    /// Draws `n` observations by inverse transform and sorts them.
    pub fn sample(&self, n: usize, stream: &mut RandomStream) -> Result<SortedSample> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "sample size must be at least 1".into(),
            ));
        }
        let values: Vec<f64> = (0..n)
            .map(|_| {
                self.quantile(stream.uniform())
                    .expect("uniform draw lies in [0, 1)")
            })
            .collect();
        SortedSample::new(values)
    }
}

fn ll_cdf(x: f64, a: f64) -> f64 {
    // Stable on both sides of 1: never forms x^a / (1 + x^a) with huge x^a.
    if x == 0.0 {
        0.0
    } else if x <= 1.0 {
        let t = x.powf(a);
        t / (1.0 + t)
    } else {
        1.0 / (1.0 + x.powf(-a))
    }
}

fn ll_pdf(x: f64, a: f64) -> f64 {
    if x == 0.0 {
        // limit of a x^(a-1) / (1 + x^a)^2
        return match a.total_cmp(&1.0) {
            std::cmp::Ordering::Greater => 0.0,
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Less => f64::INFINITY,
        };
    }
    if x <= 1.0 {
        let t = x.powf(a);
        a * x.powf(a - 1.0) / ((1.0 + t) * (1.0 + t))
    } else {
        let t = x.powf(-a);
        a * x.powf(-a - 1.0) / ((1.0 + t) * (1.0 + t))
    }
}

fn ln_beta(a: f64, b: f64) -> f64 {
    special::ln_gamma(a) + special::ln_gamma(b) - special::ln_gamma(a + b)
}

/// Monotone bisection of `cdf(x) = p` on a doubling bracket.
///
/// The width cutoff is relative to the bracket, so quantiles many orders
/// of magnitude below 1 still resolve.
fn bisect_quantile(p: f64, cdf: impl Fn(f64) -> f64) -> f64 {
    let mut hi = 1.0;
    let mut guard = 0;
    while cdf(hi) < p && hi < 1e300 && guard < 1100 {
        hi *= 2.0;
        guard += 1;
    }
    let mut lo = 0.0;
    for _ in 0..1200 {
        let mid = 0.5 * (lo + hi);
        let c = cdf(mid);
        if (c - p).abs() <= 1e-13 {
            return mid;
        }
        if c < p {
            lo = mid;
        } else {
            hi = mid;
        }
        let width = hi - lo;
        if width <= hi * 1e-16 || width == 0.0 {
            break;
        }
    }
    0.5 * (lo + hi)
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.code(), self.shape_string())
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Parses spec strings such as `ll:1.2`, `w:0.5`, `b2:2,3`, `hs:0.6`,
    /// `bs:3`, `pw:5,1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("distribution spec '{s}': {msg}"));
        let (code, params) = s
            .split_once(':')
            .ok_or_else(|| bad("expected family:param[,param]"))?;
        let parts: Vec<f64> = params
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(&format!("cannot parse parameter '{t}'")))
            })
            .collect::<Result<_>>()?;
        let one = || -> Result<f64> {
            if parts.len() == 1 {
                Ok(parts[0])
            } else {
                Err(bad("expected exactly one shape parameter"))
            }
        };
        let two = || -> Result<(f64, f64)> {
            if parts.len() == 2 {
                Ok((parts[0], parts[1]))
            } else {
                Err(bad("expected exactly two shape parameters"))
            }
        };
        match code.trim() {
            "ll" => DistributionSpec::log_logistic(one()?),
            "w" => DistributionSpec::weibull(one()?),
            "b2" => {
                let (a, b) = two()?;
                DistributionSpec::beta_type_ii(a, b)
            }
            "hs" => DistributionSpec::haupt_schabe(one()?),
            "bs" => DistributionSpec::birnbaum_saunders(one()?),
            "pw" => {
                let (a, b) = two()?;
                DistributionSpec::piecewise_odds(a, b)
            }
            other => Err(bad(&format!("unknown family code '{other}'"))),
        }
    }
}
