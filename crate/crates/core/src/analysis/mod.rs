//! Stochastic-order checks and characterization screens.
//!
//! All checks evaluate on a finite grid and are necessary-condition screens:
//! a passing verdict is consistent with the hypothesis on that grid, not a
//! proof of family membership.

pub mod report;

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{Distribution, DistributionSpec};
use crate::dynamic::{gwdcpex_max, gwdcrex_min, gwdcrex_min_derivative, weighted_inactivity, InactivityVariant};
use crate::error::{Error, Result};
use crate::measures::{gwcpex_max, gwcrex_min};
use crate::quadrature::QuadratureSettings;
use crate::weights::WeightFunction;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub max_violation: f64,
    /// Grid point (a `t` or an `n`) where the violation is largest.
    pub witness: Option<f64>,
    pub grid: Vec<f64>,
    pub tolerance: f64,
    /// Grid points that failed to evaluate and were left out.
    pub skipped: usize,
}

impl Verdict {
    /// Builds a verdict from per-point violations (`<= 0` means satisfied).
    fn from_violations(grid: &[f64], violations: &[Option<f64>], tolerance: f64) -> Result<Verdict> {
        let skipped = violations.iter().filter(|v| v.is_none()).count();
        if skipped * 10 > grid.len() {
            return Err(Error::EvaluationFailure {
                failed: skipped,
                total: grid.len(),
                first: "more than 10% of the grid failed to evaluate".into(),
            });
        }
        let mut max_violation = 0.0;
        let mut witness = None;
        for (t, v) in grid.iter().zip(violations) {
            if let Some(v) = v {
                if *v > max_violation {
                    max_violation = *v;
                    witness = Some(*t);
                }
            }
        }
        Ok(Verdict {
            holds: max_violation <= tolerance,
            max_violation,
            witness,
            grid: grid.to_vec(),
            tolerance,
            skipped,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstancyStat {
    pub mean: f64,
    pub spread: f64,
    pub rel_spread: f64,
}

impl ConstancyStat {
    pub fn of(values: &[f64]) -> ConstancyStat {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let spread = (max - min).max(0.0);
        ConstancyStat {
            mean,
            spread,
            rel_spread: spread / mean.abs().max(1e-12),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    Hazard,
    ReversedHazard,
    /// Dynamic residual measure of `X_{1:n}`.
    Wdcrex,
    /// Dynamic past measure of `X_{n:n}`.
    Dcpwex,
}

impl FromStr for OrderKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "hazard" => OrderKind::Hazard,
            "reversed_hazard" | "reversed-hazard" => OrderKind::ReversedHazard,
            "wdcrex" => OrderKind::Wdcrex,
            "dcpwex" => OrderKind::Dcpwex,
            other => return Err(Error::Parse(format!("unknown order kind '{other}'"))),
        })
    }
}

fn order_quantity(
    kind: OrderKind,
    d: &Distribution,
    w: &WeightFunction,
    n: usize,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    match kind {
        OrderKind::Hazard => {
            d.check_in_support(t)?;
            d.hazard(t)
        }
        OrderKind::ReversedHazard => {
            d.check_in_support(t)?;
            d.reversed_hazard(t)
        }
        OrderKind::Wdcrex => Ok(gwdcrex_min(d, w, n, t, settings)?.signed_value),
        OrderKind::Dcpwex => Ok(gwdcpex_max(d, w, n, t, settings)?.signed_value),
    }
}

/// Checks `q_X(t) >= q_Y(t) - tol` on the grid, where `q` is the hazard,
/// reversed hazard, or the signed dynamic measure selected by `kind`.
#[allow(clippy::too_many_arguments)]
pub fn check_order(
    kind: OrderKind,
    x: &Distribution,
    y: &Distribution,
    w: &WeightFunction,
    n: usize,
    t_grid: &[f64],
    tol: f64,
    settings: &QuadratureSettings,
) -> Result<Verdict> {
    if t_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let violations: Vec<Option<f64>> = t_grid
        .par_iter()
        .map(|&t| {
            let qx = order_quantity(kind, x, w, n, t, settings).ok()?;
            let qy = order_quantity(kind, y, w, n, t, settings).ok()?;
            Some(qy - qx)
        })
        .collect();
    Verdict::from_violations(t_grid, &violations, tol)
}

/// Shape of the GPD-type law implied by a constant slope `c` with constant
/// weight, through its hazard `1/(c₁ t + c₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GpdShape {
    /// `c₁ = 0`.
    Exponential,
    /// `c₁ > 0`: survival `(k/(k+t))^h`.
    ParetoType,
    /// `c₁ < 0`: bounded support, outside the Pareto family.
    FiniteRangeType,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GpdOutcome {
    pub verdict: Verdict,
    pub stat: ConstancyStat,
    /// Fitted slope `c` (mean of the derivative over the grid).
    pub fitted_c: f64,
    /// `c₁ = 4nc/(2c - w0)`, available for constant weights.
    pub c1: Option<f64>,
    pub shape: Option<GpdShape>,
}

fn gpd_from_slopes(grid: &[f64], slopes: &[f64], w: &WeightFunction, n: usize, rel_tol: f64) -> GpdOutcome {
    let stat = ConstancyStat::of(slopes);
    let c = stat.mean;
    let (c1, shape) = match w.constant_value() {
        Some(w0) if w0 > 0.0 => {
            if c.abs() <= 1e-12 {
                (Some(0.0), Some(GpdShape::Exponential))
            } else {
                let c1 = 4.0 * n as f64 * c / (2.0 * c - w0);
                let shape = if c < 0.0 {
                    GpdShape::ParetoType
                } else {
                    GpdShape::FiniteRangeType
                };
                (Some(c1), Some(shape))
            }
        }
        _ => (None, None),
    };
    // A constant slope with c₁ < 0 characterizes a bounded law, not a Pareto
    // one; its distance from the admissible range counts as a violation.
    let shape_violation = c1.map_or(0.0, |c1| (-c1).max(0.0));
    let max_violation = stat.rel_spread.max(shape_violation);
    let witness = slopes
        .iter()
        .zip(grid)
        .max_by(|a, b| (a.0 - c).abs().total_cmp(&(b.0 - c).abs()))
        .map(|(_, t)| *t);
    GpdOutcome {
        verdict: Verdict {
            holds: max_violation <= rel_tol,
            max_violation,
            witness,
            grid: grid.to_vec(),
            tolerance: rel_tol,
            skipped: 0,
        },
        stat,
        fitted_c: c,
        c1,
        shape,
    }
}

/// Screens for the generalized Pareto law: the derivative of the dynamic
/// residual measure of `X_{1:n}` must be constant on the grid (and, for a
/// constant weight, imply a Pareto-type or exponential hazard).
pub fn gpd_test(
    dist: &Distribution,
    w: &WeightFunction,
    n: usize,
    t_grid: &[f64],
    rel_tol: f64,
    settings: &QuadratureSettings,
) -> Result<GpdOutcome> {
    if t_grid.len() < 8 {
        return Err(Error::InvalidParameter(format!(
            "the GPD screen needs at least 8 grid points, got {}",
            t_grid.len()
        )));
    }
    let slopes = t_grid
        .par_iter()
        .map(|&t| gwdcrex_min_derivative(dist, w, n, t, settings))
        .collect::<Result<Vec<f64>>>()?;
    Ok(gpd_from_slopes(t_grid, &slopes, w, n, rel_tol))
}

/// GPD screen on a precomputed curve `(t, 𝓔(t))`, using finite-difference
/// slopes at the interior points.
pub fn gpd_test_curve(
    t_grid: &[f64],
    values: &[f64],
    w: &WeightFunction,
    n: usize,
    rel_tol: f64,
) -> Result<GpdOutcome> {
    if t_grid.len() != values.len() {
        return Err(Error::InvalidParameter("grid and values differ in length".into()));
    }
    if t_grid.len() < 10 {
        return Err(Error::InvalidParameter(format!(
            "the curve GPD screen needs at least 10 points, got {}",
            t_grid.len()
        )));
    }
    let slopes: Vec<f64> = (1..t_grid.len() - 1)
        .map(|i| {
            let (h0, h1) = (t_grid[i] - t_grid[i - 1], t_grid[i + 1] - t_grid[i]);
            // second-order three-point slope on an uneven grid
            (values[i + 1] * h0 * h0 - values[i - 1] * h1 * h1 + values[i] * (h1 * h1 - h0 * h0))
                / (h0 * h1 * (h0 + h1))
        })
        .collect();
    Ok(gpd_from_slopes(&t_grid[1..t_grid.len() - 1], &slopes, w, n, rel_tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerOutcome {
    pub verdict: Verdict,
    pub stat: ConstancyStat,
    /// Fitted ratio `k` (mean over the grid).
    pub fitted_k: f64,
}

/// Screens for the power law: the dynamic past measure of `X_{n:n}` divided
/// by the weighted expected inactivity time must be constant.
pub fn power_test(
    dist: &Distribution,
    w: &WeightFunction,
    n: usize,
    t_grid: &[f64],
    rel_tol: f64,
    settings: &QuadratureSettings,
) -> Result<PowerOutcome> {
    if !dist.is_bounded() {
        return Err(Error::UnboundedSupport(format!(
            "{}: the power screen needs a bounded support",
            dist.family_name()
        )));
    }
    if t_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let ratios = t_grid
        .par_iter()
        .map(|&t| {
            let xi = gwdcpex_max(dist, w, n, t, settings)?.signed_value;
            let m = weighted_inactivity(dist, w, t, InactivityVariant::Ratio, settings)?;
            if m == 0.0 {
                return Err(Error::DegenerateDenominator(format!(
                    "inactivity time vanishes at t = {t}"
                )));
            }
            Ok(xi / m)
        })
        .collect::<Result<Vec<f64>>>()?;
    let stat = ConstancyStat::of(&ratios);
    let witness = ratios
        .iter()
        .zip(t_grid)
        .max_by(|a, b| (a.0 - stat.mean).abs().total_cmp(&(b.0 - stat.mean).abs()))
        .map(|(_, t)| *t);
    Ok(PowerOutcome {
        verdict: Verdict {
            holds: stat.rel_spread <= rel_tol,
            max_violation: stat.rel_spread,
            witness,
            grid: t_grid.to_vec(),
            tolerance: rel_tol,
            skipped: 0,
        },
        stat,
        fitted_k: stat.mean,
    })
}

/// The ratio a power law `Power{b, c}` gives in [`power_test`] with a constant
/// weight.
pub fn power_law_ratio(c: f64, n: usize) -> f64 {
    -(c + 2.0) / (2.0 * (2.0 * n as f64 * c + 1.0) * (c + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureSide {
    /// Residual measure of `X_{1:n}`.
    Residual,
    /// Past measure of `X_{n:n}`.
    Past,
}

fn side_measure(
    side: MeasureSide,
    d: &Distribution,
    w: &WeightFunction,
    n: usize,
    t: Option<f64>,
    settings: &QuadratureSettings,
) -> Result<f64> {
    Ok(match (side, t) {
        (MeasureSide::Residual, None) => gwcrex_min(d, w, n, settings)?.signed_value,
        (MeasureSide::Past, None) => gwcpex_max(d, w, n, settings)?.signed_value,
        (MeasureSide::Residual, Some(t)) => gwdcrex_min(d, w, n, t, settings)?.signed_value,
        (MeasureSide::Past, Some(t)) => gwdcpex_max(d, w, n, t, settings)?.signed_value,
    })
}

fn check_sequence(ns: &[usize]) -> Result<()> {
    if ns.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if ns[0] == 0 || ns.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidParameter(
            "n sequence must be positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Location-family screen: the measures of `X` and `Y` must agree for every
/// `n` in the sequence. With `times = Some((t_x, t_y))` the dynamic measures
/// are compared at the matched times instead.
#[allow(clippy::too_many_arguments)]
pub fn location_family_test(
    x: &Distribution,
    y: &Distribution,
    w: &WeightFunction,
    ns: &[usize],
    side: MeasureSide,
    times: Option<(f64, f64)>,
    tol: f64,
    settings: &QuadratureSettings,
) -> Result<Verdict> {
    check_sequence(ns)?;
    let violations = ns
        .iter()
        .map(|&n| {
            let a = side_measure(side, x, w, n, times.map(|t| t.0), settings)?;
            let b = side_measure(side, y, w, n, times.map(|t| t.1), settings)?;
            Ok(Some((a - b).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    let grid: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    Verdict::from_violations(&grid, &violations, tol)
}

/// Location-scale screen: the ratios `ξ̄(X_{n:n})/ξ̄(X)` must agree between `X`
/// and `Y` for every `n` in the sequence.
pub fn location_scale_ratio_test(
    x: &Distribution,
    y: &Distribution,
    wx: &WeightFunction,
    wy: &WeightFunction,
    ns: &[usize],
    tol: f64,
    settings: &QuadratureSettings,
) -> Result<Verdict> {
    check_sequence(ns)?;
    let base = |d: &Distribution, w: &WeightFunction| -> Result<f64> {
        let v = gwcpex_max(d, w, 1, settings)?.signed_value;
        if v == 0.0 {
            return Err(Error::ZeroDenominator(format!("past measure of {d} is zero at n = 1")));
        }
        Ok(v)
    };
    let (bx, by) = (base(x, wx)?, base(y, wy)?);
    let violations = ns
        .iter()
        .map(|&n| {
            let rx = gwcpex_max(x, wx, n, settings)?.signed_value / bx;
            let ry = gwcpex_max(y, wy, n, settings)?.signed_value / by;
            Ok(Some((rx - ry).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    let grid: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    Verdict::from_violations(&grid, &violations, tol)
}

/// Whether the spec names one of the two families the GPD screen accepts.
pub fn is_gpd_family(spec: &DistributionSpec) -> bool {
    matches!(
        spec,
        DistributionSpec::ParetoII { .. }
            | DistributionSpec::Exponential { .. }
            | DistributionSpec::FoldedCramer { .. }
    )
}
