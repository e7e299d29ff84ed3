//! Inter-arrival and service-time laws.
//!
//! Four parametric families cover every configuration used by the
//! simulator, the analytic engine, and the bound samplers. Values are
//! immutable and cheap to copy. The text grammar accepted by scenario
//! files and CLI flags is `deterministic(v)`, `exp(rate)`,
//! `sexp(shift,rate)` and `erlang(k,rate)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::rng::RngStream;

/// A positive-support probability law for inter-arrival or service times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec<R: Real> {
    /// Point mass at `value` (> 0).
    Deterministic { value: R },
    /// Exponential with the given rate (> 0).
    Exponential { rate: R },
    /// `shift` (>= 0) plus an exponential with the given rate (> 0).
    ShiftedExponential { shift: R, rate: R },
    /// Sum of `shape` (>= 1) exponentials, each with the given rate (> 0).
    Erlang { shape: u32, rate: R },
}

use DistributionSpec::*;

impl<R: Real> DistributionSpec<R> {
    pub fn deterministic(value: R) -> Result<Self> {
        if value > R::zero() && value.is_finite() {
            Ok(Deterministic { value })
        } else {
            Err(Error::InvalidParameter(format!(
                "deterministic value must be positive and finite, got {value}"
            )))
        }
    }

    pub fn exponential(rate: R) -> Result<Self> {
        if rate > R::zero() && rate.is_finite() {
            Ok(Exponential { rate })
        } else {
            Err(Error::InvalidParameter(format!(
                "exponential rate must be positive and finite, got {rate}"
            )))
        }
    }

    pub fn shifted_exponential(shift: R, rate: R) -> Result<Self> {
        if !(shift >= R::zero() && shift.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "shift must be non-negative and finite, got {shift}"
            )));
        }
        if !(rate > R::zero() && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "shifted-exponential rate must be positive and finite, got {rate}"
            )));
        }
        Ok(ShiftedExponential { shift, rate })
    }

    pub fn erlang(shape: u32, rate: R) -> Result<Self> {
        if shape == 0 {
            return Err(Error::InvalidParameter("erlang shape must be >= 1".into()));
        }
        if !(rate > R::zero() && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "erlang rate must be positive and finite, got {rate}"
            )));
        }
        Ok(Erlang { shape, rate })
    }

    /// One i.i.d. draw; advances the stream deterministically.
    pub fn sample(&self, rng: &mut RngStream) -> R {
        match *self {
            Deterministic { value } => value,
            Exponential { rate } => rng.exponential(rate),
            ShiftedExponential { shift, rate } => shift + rng.exponential(rate),
            Erlang { shape, rate } => {
                let mut log_prod = R::zero();
                for _ in 0..shape {
                    log_prod += rng.uniform_pos::<R>().ln();
                }
                -log_prod / rate
            }
        }
    }

    pub fn mean(&self) -> R {
        match *self {
            Deterministic { value } => value,
            Exponential { rate } => rate.recip(),
            ShiftedExponential { shift, rate } => shift + rate.recip(),
            Erlang { shape, rate } => R::from_f64(shape as f64) / rate,
        }
    }

    /// Mean rate 1/E, the lambda or mu of the law.
    pub fn rate(&self) -> R {
        self.mean().recip()
    }

    /// P(X <= x).
    pub fn cdf(&self, x: R) -> R {
        R::one() - self.ccdf(x)
    }

    /// P(X > x), computed directly so deep tails keep full precision.
    pub fn ccdf(&self, x: R) -> R {
        match *self {
            Deterministic { value } => {
                if x < value {
                    R::one()
                } else {
                    R::zero()
                }
            }
            Exponential { rate } => {
                if x <= R::zero() {
                    R::one()
                } else {
                    (-rate * x).exp()
                }
            }
            ShiftedExponential { shift, rate } => {
                if x <= shift {
                    R::one()
                } else {
                    (-rate * (x - shift)).exp()
                }
            }
            Erlang { shape, rate } => {
                if x <= R::zero() {
                    return R::one();
                }
                // e^{-rx} * sum_{j<k} (rx)^j / j!
                let rx = rate * x;
                let mut term = R::one();
                let mut sum = R::one();
                for j in 1..shape {
                    term = term * rx / R::from_f64(j as f64);
                    sum += term;
                }
                (-rx).exp() * sum
            }
        }
    }

    /// Density at `x`. Zero off the support; point masses report zero
    /// (integrate against [`Self::point_mass`] instead).
    pub fn pdf(&self, x: R) -> R {
        match *self {
            Deterministic { .. } => R::zero(),
            Exponential { rate } => {
                if x < R::zero() {
                    R::zero()
                } else {
                    rate * (-rate * x).exp()
                }
            }
            ShiftedExponential { shift, rate } => {
                if x < shift {
                    R::zero()
                } else {
                    rate * (-rate * (x - shift)).exp()
                }
            }
            Erlang { shape, rate } => {
                if x < R::zero() {
                    return R::zero();
                }
                let rx = rate * x;
                let mut num = rate; // r * (rx)^{k-1} / (k-1)!
                for j in 1..shape {
                    num = num * rx / R::from_f64(j as f64);
                }
                num * (-rx).exp()
            }
        }
    }

    /// The location of the point mass, if the law is deterministic.
    pub fn point_mass(&self) -> Option<R> {
        match *self {
            Deterministic { value } => Some(value),
            _ => None,
        }
    }

    /// Infimum of the support.
    pub fn support_lower(&self) -> R {
        match *self {
            Deterministic { value } => value,
            Exponential { .. } | Erlang { .. } => R::zero(),
            ShiftedExponential { shift, .. } => shift,
        }
    }

    /// Same family rescaled to the given mean (> 0). Used by lambda sweeps.
    pub fn with_mean(&self, mean: R) -> Result<Self> {
        if !(mean > R::zero() && mean.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "target mean must be positive and finite, got {mean}"
            )));
        }
        let factor = mean / self.mean();
        Ok(match *self {
            Deterministic { .. } => Deterministic { value: mean },
            Exponential { .. } => Exponential { rate: mean.recip() },
            ShiftedExponential { shift, rate } => ShiftedExponential {
                shift: shift * factor,
                rate: rate / factor,
            },
            Erlang { shape, rate } => Erlang {
                shape,
                rate: rate / factor,
            },
        })
    }
}

impl<R: Real> fmt::Display for DistributionSpec<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Deterministic { value } => write!(f, "deterministic({value})"),
            Exponential { rate } => write!(f, "exp({rate})"),
            ShiftedExponential { shift, rate } => write!(f, "sexp({shift},{rate})"),
            Erlang { shape, rate } => write!(f, "erlang({shape},{rate})"),
        }
    }
}

impl<R: Real> FromStr for DistributionSpec<R> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s
            .split_once('(')
            .ok_or_else(|| Error::Parse(format!("expected `name(args)`, got `{s}`")))?;
        let args = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("missing closing parenthesis in `{s}`")))?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();

        let num = |t: &str| -> Result<R> {
            t.parse::<f64>()
                .map(R::from_f64)
                .map_err(|_| Error::Parse(format!("invalid number `{t}` in `{s}`")))
        };

        match (name.trim(), parts.as_slice()) {
            ("deterministic", [v]) => Self::deterministic(num(v)?),
            ("exp", [r]) => Self::exponential(num(r)?),
            ("sexp", [sh, r]) => Self::shifted_exponential(num(sh)?, num(r)?),
            ("erlang", [k, r]) => {
                let shape: u32 = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid erlang shape `{k}` in `{s}`")))?;
                Self::erlang(shape, num(r)?)
            }
            _ => Err(Error::Parse(format!(
                "unknown distribution `{s}`; expected deterministic(v), exp(rate), \
                 sexp(shift,rate) or erlang(k,rate)"
            ))),
        }
    }
}
