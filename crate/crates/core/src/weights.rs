//! Weight functions `w(x)` and their antiderivatives.
//!
//! Only a closed catalog of kinds is supported so that every weight has an
//! exact antiderivative `W` with `W(0) = 0`, which the plug-in estimators use
//! to integrate piecewise-constant empirical functions without quadrature.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum WeightFunction {
    Constant {
        w0: f64,
    },
    Identity,
    PowerM {
        m: u32,
    },
    Log,
    /// `base((x - d) / c)`.
    Transformed {
        base: Box<WeightFunction>,
        c: f64,
        d: f64,
    },
}

impl WeightFunction {
    pub fn constant(w0: f64) -> Result<Self> {
        if !(w0.is_finite() && w0 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "constant weight requires w0 >= 0, got {w0}"
            )));
        }
        Ok(WeightFunction::Constant { w0 })
    }

    pub fn power(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "power weight requires m >= 1 (use const:1 for m = 0)".into(),
            ));
        }
        Ok(WeightFunction::PowerM { m })
    }

    /// Pointwise value. `Log` (and anything built on it) is undefined at
    /// nonpositive arguments.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            WeightFunction::Log if x <= 0.0 => Err(Error::DomainError(format!("log weight is undefined at x = {x}"))),
            WeightFunction::Transformed { base, c, d } => base.eval((x - d) / c),
            _ => Ok(self.value(x)),
        }
    }

    /// Infallible evaluation used inside integrands; `Log` maps `x <= 0` to
    /// `-inf`, which quadrature never samples because nodes are interior.
    pub(crate) fn value(&self, x: f64) -> f64 {
        match self {
            WeightFunction::Constant { w0 } => *w0,
            WeightFunction::Identity => x,
            WeightFunction::PowerM { m } => x.powi(*m as i32),
            WeightFunction::Log => {
                if x > 0.0 {
                    x.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            WeightFunction::Transformed { base, c, d } => base.value((x - d) / c),
        }
    }

    /// `W(x) = ∫₀ˣ w`, with the limit convention `W(0) = 0` for `Log`.
    pub fn antiderivative(&self, x: f64) -> Result<f64> {
        match self {
            WeightFunction::Transformed { base, c, d } => {
                if x < *d {
                    Ok(0.0)
                } else {
                    Ok(c * base.antiderivative((x - d) / c)?)
                }
            }
            _ if x < 0.0 => Err(Error::DomainError(format!(
                "antiderivative is defined for x >= 0, got {x}"
            ))),
            WeightFunction::Constant { w0 } => Ok(w0 * x),
            WeightFunction::Identity => Ok(0.5 * x * x),
            WeightFunction::PowerM { m } => Ok(x.powi(*m as i32 + 1) / (*m as f64 + 1.0)),
            WeightFunction::Log => {
                if x == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(x * x.ln() - x)
                }
            }
        }
    }

    /// Polynomial growth order at infinity, used for analytic divergence
    /// bookkeeping. `Log` grows slower than any power and counts as 0.
    pub fn growth_degree(&self) -> f64 {
        match self {
            WeightFunction::Constant { .. } | WeightFunction::Log => 0.0,
            WeightFunction::Identity => 1.0,
            WeightFunction::PowerM { m } => *m as f64,
            WeightFunction::Transformed { base, .. } => base.growth_degree(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            WeightFunction::Constant { w0 } => *w0 == 0.0,
            WeightFunction::Transformed { base, .. } => base.is_zero(),
            _ => false,
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self {
            WeightFunction::Constant { w0 } => Some(*w0),
            WeightFunction::Transformed { base, .. } => base.constant_value(),
            _ => None,
        }
    }

    /// Whether `w >= 0` everywhere on `[lo, hi]`.
    pub fn is_nonnegative_on(&self, lo: f64, hi: f64) -> bool {
        match self {
            WeightFunction::Constant { w0 } => *w0 >= 0.0,
            WeightFunction::Identity | WeightFunction::PowerM { .. } => {
                lo >= 0.0 || matches!(self, WeightFunction::PowerM { m } if m % 2 == 0)
            }
            WeightFunction::Log => lo >= 1.0,
            WeightFunction::Transformed { base, c, d } => base.is_nonnegative_on((lo - d) / c, (hi - d) / c),
        }
    }

    pub fn is_nondecreasing(&self) -> bool {
        match self {
            WeightFunction::Transformed { base, .. } => base.is_nondecreasing(),
            _ => true,
        }
    }
}

/// Wraps `w` so that the result evaluated at `c·x + d` equals `w(x)`.
pub fn transform_weight(w: &WeightFunction, c: f64, d: f64) -> Result<WeightFunction> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("transform scale must be > 0, got {c}")));
    }
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "transform shift must be >= 0, got {d}"
        )));
    }
    Ok(WeightFunction::Transformed {
        base: Box::new(w.clone()),
        c,
        d,
    })
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFunction::Constant { w0 } => write!(f, "const:{w0}"),
            WeightFunction::Identity => write!(f, "identity"),
            WeightFunction::PowerM { m } => write!(f, "pow:m={m}"),
            WeightFunction::Log => write!(f, "log"),
            WeightFunction::Transformed { base, c, d } => {
                // Nested transforms collapse to one: base((x - d2)/c2 - d1)/c1).
                let (mut inner, mut c, mut d) = (base.as_ref(), *c, *d);
                while let WeightFunction::Transformed { base: b, c: c1, d: d1 } = inner {
                    d += c * d1;
                    c *= c1;
                    inner = b.as_ref();
                }
                match inner {
                    WeightFunction::Constant { w0 } => {
                        write!(f, "shifted:base=const,w0={w0},c={c},d={d}")
                    }
                    WeightFunction::PowerM { m } => write!(f, "shifted:base=pow,m={m},c={c},d={d}"),
                    other => write!(f, "shifted:base={other},c={c},d={d}"),
                }
            }
        }
    }
}

impl Serialize for WeightFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{key}: expected a number, got '{v}'")))
}

pub(crate) fn parse_kv(body: &str) -> Result<Vec<(String, String)>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{kv}'")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

impl FromStr for WeightFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "const" | "constant" => {
                let w0 = if body.is_empty() {
                    1.0
                } else {
                    let body = body.strip_prefix("w0=").unwrap_or(body);
                    parse_f64("const", body)?
                };
                WeightFunction::constant(w0)
            }
            "identity" | "x" => Ok(WeightFunction::Identity),
            "log" => Ok(WeightFunction::Log),
            "pow" => {
                let kv = parse_kv(body)?;
                let m = kv
                    .iter()
                    .find(|(k, _)| k == "m")
                    .ok_or_else(|| Error::Parse("pow requires m=<int>".into()))?;
                let m: u32 =
                    m.1.parse()
                        .map_err(|_| Error::Parse(format!("pow: m must be a positive integer, got '{}'", m.1)))?;
                WeightFunction::power(m)
            }
            "shifted" => {
                let kv = parse_kv(body)?;
                let get = |key: &str| kv.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
                let c = get("c").map(|v| parse_f64("c", v)).transpose()?.unwrap_or(1.0);
                let d = get("d").map(|v| parse_f64("d", v)).transpose()?.unwrap_or(0.0);
                let base = match get("base").unwrap_or("identity") {
                    "identity" | "x" => WeightFunction::Identity,
                    "log" => WeightFunction::Log,
                    "const" | "constant" => {
                        WeightFunction::constant(get("w0").map(|v| parse_f64("w0", v)).transpose()?.unwrap_or(1.0))?
                    }
                    "pow" => {
                        let m = get("m").ok_or_else(|| Error::Parse("shifted pow base requires m=<int>".into()))?;
                        WeightFunction::power(
                            m.parse()
                                .map_err(|_| Error::Parse(format!("m must be a positive integer, got '{m}'")))?,
                        )?
                    }
                    other => return Err(Error::Parse(format!("unknown shifted base '{other}'"))),
                };
                transform_weight(&base, c, d)
            }
            other => Err(Error::Parse(format!(
                "unknown weight '{other}' (expected const, identity, pow, log, shifted)"
            ))),
        }
    }
}
