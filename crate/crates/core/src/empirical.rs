//! Plug-in estimators built on the empirical distribution function.
//!
//! The empirical survival function is a step function, so each estimator is
//! a finite sum over the gaps between order statistics, weighted by exact
//! increments of the weight antiderivative. No quadrature is involved.

use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{exponent, MeasureResult, Method, Warning};
use crate::weights::WeightFunction;

/// Sorted, validated observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Multiplies every observation by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Sample> {
        load_sample(self.values.iter().map(|v| v * c).collect())
    }
}

pub fn load_sample(mut rows: Vec<f64>) -> Result<Sample> {
    for (index, &v) in rows.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue { index });
        }
        if v < 0.0 {
            return Err(Error::NegativeValue { index, value: v });
        }
    }
    if rows.len() < 2 {
        return Err(Error::TooFewObservations(rows.len()));
    }
    rows.sort_by(f64::total_cmp);
    Ok(Sample { values: rows })
}

/// Parses one value per line. A single leading `value` header and blank lines
/// are ignored; LF and CRLF endings are both accepted.
pub fn parse_sample_csv(text: &str) -> Result<Sample> {
    let mut rows = Vec::new();
    let mut first = true;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if first && line.eq_ignore_ascii_case("value") {
            first = false;
            continue;
        }
        first = false;
        let v: f64 = line
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: '{line}' is not a number", lineno + 1)))?;
        rows.push(v);
    }
    load_sample(rows)
}

pub fn read_sample_csv(path: &Path) -> Result<Sample> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_sample_csv(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    ResidualMin,
    PastMax,
}

impl FromStr for EstimatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "residual-min" | "gwcrex_min" => Ok(EstimatorKind::ResidualMin),
            "past-max" | "gwcpex_max" => Ok(EstimatorKind::PastMax),
            other => Err(Error::Parse(format!("unknown estimator kind '{other}'"))),
        }
    }
}

fn step_sum(sample: &Sample, w: &WeightFunction, n: usize, residual: bool) -> Result<MeasureResult> {
    let p = exponent(n)? as i32;
    let x = &sample.values;
    let m = x.len();
    let mf = m as f64;
    // Gap i runs from x_(i) to x_(i+1) (1-based). The residual sum starts at
    // x_(0) = 0 where F̄_m = (m - i)/m; the past sum starts at x_(1) where
    // F_m = i/m.
    let (start, mut prev_w) = if residual {
        (0, w.antiderivative(0.0)?)
    } else {
        (1, w.antiderivative(x[0])?)
    };
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (i, &xi) in x.iter().enumerate().skip(start) {
        let level = if residual { (mf - i as f64) / mf } else { i as f64 / mf };
        let wr = w.antiderivative(xi)?;
        let term = level.powi(p) * (wr - prev_w);
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        prev_w = wr;
    }
    let magnitude = sum + comp;
    let mut r = MeasureResult::from_magnitude(magnitude, Method::Empirical, 0.0);
    if !w.is_nonnegative_on(if residual { 0.0 } else { x[0] }, x[m - 1]) {
        r.warnings.push(Warning::SignedWeight(format!(
            "{w} is negative on part of the sample range"
        )));
    }
    Ok(r)
}

/// Plug-in estimate of `-½∫ w·F̄^{2n}` with `x_(0) = 0`.
pub fn empirical_gwcrex_min(sample: &Sample, w: &WeightFunction, n: usize) -> Result<MeasureResult> {
    step_sum(sample, w, n, true)
}

/// Plug-in estimate of `-½∫ w·F^{2n}` over `[x_(1), x_(m)]`.
pub fn empirical_gwcpex_max(sample: &Sample, w: &WeightFunction, n: usize) -> Result<MeasureResult> {
    step_sum(sample, w, n, false)
}

pub fn estimate(sample: &Sample, kind: EstimatorKind, w: &WeightFunction, n: usize) -> Result<MeasureResult> {
    match kind {
        EstimatorKind::ResidualMin => empirical_gwcrex_min(sample, w, n),
        EstimatorKind::PastMax => empirical_gwcpex_max(sample, w, n),
    }
}

/// Linear-interpolation quantile of sorted data.
pub(crate) fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Percentile bootstrap interval for the signed estimate. Replicate `b` draws
/// from a generator seeded with `seed + b`, so results do not depend on
/// thread scheduling.
pub fn bootstrap_ci(
    sample: &Sample,
    kind: EstimatorKind,
    w: &WeightFunction,
    n: usize,
    replicates: usize,
    level: f64,
    seed: u64,
) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel(level));
    }
    if replicates < 100 {
        return Err(Error::InvalidParameter(format!(
            "bootstrap needs at least 100 replicates, got {replicates}"
        )));
    }
    exponent(n)?;
    let m = sample.len();
    let mut stats = (0..replicates)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(b as u64));
            let mut draw: Vec<f64> = (0..m).map(|_| sample.values[rng.random_range(0..m)]).collect();
            draw.sort_by(f64::total_cmp);
            estimate(&Sample { values: draw }, kind, w, n).map(|r| r.signed_value)
        })
        .collect::<Result<Vec<f64>>>()?;
    stats.sort_by(f64::total_cmp);
    let alpha = 0.5 * (1.0 - level);
    Ok((sorted_quantile(&stats, alpha), sorted_quantile(&stats, 1.0 - alpha)))
}
