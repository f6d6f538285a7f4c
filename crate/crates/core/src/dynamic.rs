//! Dynamic (time-conditioned) residual and past measures.
//!
//! Residual: `𝓔(t) = -½∫_t^∞ w(x)·(F̄(x)/F̄(t))^{2n} dx`, the measure of the
//! residual life of `X_{1:n}` given survival past `t`.
//! Past: `ξ̄(t) = -½∫^t w(x)·(F(x)/F(t))^{2n} dx` for `X_{n:n}` given failure
//! before `t`.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::distributions::{order_stat_cdf_raw, order_stat_sf_raw, Distribution, DistributionSpec};
use crate::error::{Error, Result};
use crate::measures::closed_form::{
    beta, binom, past_magnitude, power_law_past_integral, residual_magnitude, shape, Shape,
};
use crate::measures::{exponent, weight_warnings, MeasureResult, Method};
use crate::quadrature::{check_tail, integrate_breakpoints, power_functional_scaled, QuadratureSettings, Side};
use crate::weights::WeightFunction;

fn check_residual_time(dist: &Distribution, t: f64) -> Result<()> {
    let (lower, upper) = dist.support();
    if t.is_nan() || t < lower || t > upper {
        return Err(Error::OutOfSupport { x: t, lower, upper });
    }
    if dist.sf(t) <= 0.0 {
        return Err(Error::DegenerateDenominator(format!(
            "survival function vanishes at t = {t}"
        )));
    }
    Ok(())
}

fn check_past_time(dist: &Distribution, t: f64) -> Result<()> {
    let (lower, upper) = dist.support();
    if t.is_nan() || t < lower || t > upper {
        return Err(Error::OutOfSupport { x: t, lower, upper });
    }
    if dist.cdf(t) <= 0.0 {
        return Err(Error::DegenerateDenominator(format!(
            "distribution function vanishes at t = {t}"
        )));
    }
    Ok(())
}

/// `∫_t^∞ w(x)(F̄(x)/F̄(t))^p dx` in closed form.
fn residual_closed(dist: &Distribution, w: &WeightFunction, p: f64, t: f64) -> Option<f64> {
    use DistributionSpec::*;
    let s = shape(w)?;
    if t == dist.lower() {
        return residual_magnitude(dist, w, p);
    }
    match (dist.spec(), s) {
        (Exponential { lambda }, Shape::Monomial { scale, m }) => {
            // Σ_j m!/j! · t^j / c^{m-j+1}
            let c = p * lambda;
            let mut term = (1..=m).fold(1.0 / c, |acc, i| acc * i as f64 / c);
            let mut sum = term;
            for j in 0..m {
                term *= t * c / (j + 1) as f64;
                sum += term;
            }
            Some(scale * sum)
        }
        (Uniform { b, .. }, _) => {
            let rest = Distribution::new(Uniform { a: t, b: *b }).ok()?;
            residual_magnitude(&rest, w, p)
        }
        (ParetoII { k, h }, Shape::Monomial { scale, m }) => pareto_tail(k + t, p * h, t, scale, m),
        (FoldedCramer { h }, Shape::Monomial { scale, m }) => pareto_tail(1.0 / h + t, p, t, scale, m),
        (FiniteRange { a, b }, Shape::Monomial { scale, m }) => {
            // y = x - t, (1 - a x)/(1 - a t) = 1 - a' y
            let q = p * b;
            let a2 = a / (1.0 - a * t);
            let sum: f64 = (0..=m)
                .map(|j| binom(m, j) * t.powi((m - j) as i32) * beta(j as f64 + 1.0, q + 1.0) / a2.powi(j as i32 + 1))
                .sum();
            Some(scale * sum)
        }
        _ => None,
    }
}

/// `∫_0^∞ (t+y)^m (1 + y/s)^{-q} dy`.
fn pareto_tail(s: f64, q: f64, t: f64, scale: f64, m: u32) -> Option<f64> {
    if q <= m as f64 + 1.0 {
        return None;
    }
    let sum: f64 = (0..=m)
        .map(|j| binom(m, j) * t.powi((m - j) as i32) * s.powi(j as i32 + 1) * beta(j as f64 + 1.0, q - j as f64 - 1.0))
        .sum();
    Some(scale * sum)
}

/// Dynamic weighted cumulative residual extropy of `X_{1:n}` at time `t`.
pub fn gwdcrex_min(
    dist: &Distribution,
    w: &WeightFunction,
    n: usize,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<MeasureResult> {
    let p = exponent(n)?;
    check_residual_time(dist, t)?;
    check_tail(dist, w, p, Side::Survival)?;
    let upper = dist.upper();
    let warnings = weight_warnings(dist, w, t, upper);
    if let Some(m) = residual_closed(dist, w, p, t) {
        if m.is_finite() {
            return Ok(
                MeasureResult::from_magnitude(m, Method::ClosedForm, 8.0 * f64::EPSILON * m.abs())
                    .with_warnings(warnings),
            );
        }
    }
    let r = power_functional_scaled(dist, w, p, Side::Survival, t, upper, dist.log_sf(t), settings)?.into_result()?;
    Ok(MeasureResult::from_magnitude(r.value, Method::Quadrature, r.error_estimate).with_warnings(warnings))
}

/// `d𝓔/dt = 2n·k_F(t)·𝓔(t) + w(t)/2`, by Leibniz's rule on the definition.
/// Families whose curve is known in closed form return its exact slope.
pub fn gwdcrex_min_derivative(
    dist: &Distribution,
    w: &WeightFunction,
    n: usize,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    use DistributionSpec::*;
    let p = exponent(n)?;
    check_residual_time(dist, t)?;
    check_tail(dist, w, p, Side::Survival)?;
    if let WeightFunction::Constant { w0 } = w {
        match dist.spec() {
            Exponential { .. } => return Ok(0.0),
            ParetoII { h, .. } => return Ok(-w0 / (2.0 * (p * h - 1.0))),
            FoldedCramer { .. } => return Ok(-w0 / (2.0 * (p - 1.0))),
            FiniteRange { b, .. } => return Ok(w0 / (2.0 * (p * b + 1.0))),
            _ => {}
        }
    }
    let e = gwdcrex_min(dist, w, n, t, settings)?.signed_value;
    Ok(p * dist.hazard(t)? * e + 0.5 * w.eval(t)?)
}

/// Dynamic weighted cumulative past extropy of `X_{n:n}` at time `t`.
pub fn gwdcpex_max(
    dist: &Distribution,
    w: &WeightFunction,
    n: usize,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<MeasureResult> {
    use DistributionSpec::*;
    let p = exponent(n)?;
    check_past_time(dist, t)?;
    let lower = dist.lower();
    let warnings = weight_warnings(dist, w, lower, t);
    let closed = match dist.spec() {
        Power { c, .. } => power_law_past_integral(w, p * c, t),
        Uniform { a, .. } => Distribution::new(Uniform { a: *a, b: t })
            .ok()
            .and_then(|u| past_magnitude(&u, w, p)),
        _ if t == dist.upper() => past_magnitude(dist, w, p),
        _ => None,
    };
    if let Some(m) = closed.filter(|m| m.is_finite()) {
        return Ok(
            MeasureResult::from_magnitude(m, Method::ClosedForm, 8.0 * f64::EPSILON * m.abs()).with_warnings(warnings),
        );
    }
    let r = power_functional_scaled(dist, w, p, Side::Cdf, lower, t, dist.log_cdf(t), settings)?.into_result()?;
    Ok(MeasureResult::from_magnitude(r.value, Method::Quadrature, r.error_estimate).with_warnings(warnings))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InactivityVariant {
    /// `∫₀^t x·w·F / ∫₀^t w·F`.
    Ratio,
    /// `∫₀^t w·F / F(t)`.
    Normalized,
}

impl FromStr for InactivityVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ratio" => Ok(InactivityVariant::Ratio),
            "normalized" => Ok(InactivityVariant::Normalized),
            other => Err(Error::Parse(format!("unknown inactivity variant '{other}'"))),
        }
    }
}

/// Weighted expected inactivity time.
pub fn weighted_inactivity(
    dist: &Distribution,
    w: &WeightFunction,
    t: f64,
    variant: InactivityVariant,
    settings: &QuadratureSettings,
) -> Result<f64> {
    check_past_time(dist, t)?;
    settings.validate()?;
    if let DistributionSpec::Power { c, .. } = dist.spec() {
        match (variant, shape(w)) {
            (InactivityVariant::Normalized, Some(_)) => return Ok(power_law_past_integral(w, *c, t).unwrap()),
            (InactivityVariant::Ratio, Some(Shape::Monomial { scale, m })) if scale > 0.0 => {
                let m = m as f64;
                return Ok(t * (c + m + 1.0) / (c + m + 2.0));
            }
            _ => {}
        }
    }
    let lower = dist.lower();
    let log_norm = dist.log_cdf(t);
    let pts = dist.breakpoints(lower, t, settings.tail_mass_eps);
    let g = |x: f64| {
        let f = (dist.log_cdf(x) - log_norm).exp();
        if f == 0.0 {
            0.0
        } else {
            w.value(x) * f
        }
    };
    let den = integrate_breakpoints(g, &pts, settings).into_result()?.value;
    match variant {
        InactivityVariant::Normalized => Ok(den),
        InactivityVariant::Ratio => {
            if den == 0.0 {
                return Err(Error::DegenerateDenominator(format!(
                    "weighted integral of F vanishes on [{lower}, {t}]"
                )));
            }
            let num = integrate_breakpoints(|x| x * g(x), &pts, settings).into_result()?.value;
            Ok(num / den)
        }
    }
}

fn check_index(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::InvalidIndex { k, n })
    } else {
        Ok(())
    }
}

/// `-½∫_t^∞ w(x)·(F̄_{k:n}(x)/F̄_{k:n}(t))² dx`, the dynamic residual measure of
/// the `k`-th order statistic with exponent two on its own survival ratio.
pub fn gwdcrex_order_stat(
    dist: &Distribution,
    w: &WeightFunction,
    k: usize,
    n: usize,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<MeasureResult> {
    check_index(k, n)?;
    settings.validate()?;
    let (lower, upper) = dist.support();
    if t.is_nan() || t < lower || t > upper {
        return Err(Error::OutOfSupport { x: t, lower, upper });
    }
    let s_t = order_stat_sf_raw(dist.cdf(t), dist.sf(t), k, n);
    if s_t <= 0.0 {
        return Err(Error::DegenerateDenominator(format!(
            "survival function of X_{{{k}:{n}}} vanishes at t = {t}"
        )));
    }
    // F̄_{k:n} ~ C·F̄^{n-k+1} in the right tail
    check_tail(dist, w, 2.0 * (n - k + 1) as f64, Side::Survival)?;
    let f = |x: f64| {
        let r = order_stat_sf_raw(dist.cdf(x), dist.sf(x), k, n) / s_t;
        if r == 0.0 {
            0.0
        } else {
            w.value(x) * r * r
        }
    };
    let pts = dist.breakpoints(t, upper, settings.tail_mass_eps);
    let r = integrate_breakpoints(f, &pts, settings).into_result()?;
    Ok(
        MeasureResult::from_magnitude(r.value, Method::Quadrature, r.error_estimate)
            .with_warnings(weight_warnings(dist, w, t, upper)),
    )
}

/// Past analogue of [`gwdcrex_order_stat`]:
/// `-½∫^t w(x)·(F_{k:n}(x)/F_{k:n}(t))² dx`.
pub fn gwdcpex_order_stat(
    dist: &Distribution,
    w: &WeightFunction,
    k: usize,
    n: usize,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<MeasureResult> {
    check_index(k, n)?;
    settings.validate()?;
    check_past_time(dist, t)?;
    let lower = dist.lower();
    let f_t = order_stat_cdf_raw(dist.cdf(t), dist.sf(t), k, n);
    if f_t <= 0.0 {
        return Err(Error::DegenerateDenominator(format!(
            "distribution function of X_{{{k}:{n}}} vanishes at t = {t}"
        )));
    }
    let f = |x: f64| {
        let r = order_stat_cdf_raw(dist.cdf(x), dist.sf(x), k, n) / f_t;
        if r == 0.0 {
            0.0
        } else {
            w.value(x) * r * r
        }
    };
    let pts = dist.breakpoints(lower, t, settings.tail_mass_eps);
    let r = integrate_breakpoints(f, &pts, settings).into_result()?;
    Ok(
        MeasureResult::from_magnitude(r.value, Method::Quadrature, r.error_estimate)
            .with_warnings(weight_warnings(dist, w, lower, t)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    GwdcrexMin,
    GwdcpexMax,
    GwdcrexKn,
    GwdcpexKn,
}

impl FromStr for CurveKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gwdcrex_min" | "residual-min" => CurveKind::GwdcrexMin,
            "gwdcpex_max" | "past-max" => CurveKind::GwdcpexMax,
            "gwdcrex_kn" | "residual-kn" => CurveKind::GwdcrexKn,
            "gwdcpex_kn" | "past-kn" => CurveKind::GwdcpexKn,
            other => return Err(Error::Parse(format!("unknown curve kind '{other}'"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub t: f64,
    pub result: Result<MeasureResult>,
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("t", &self.t)?;
        match &self.result {
            Ok(r) => {
                map.serialize_entry("signed_value", &r.signed_value)?;
                map.serialize_entry("magnitude", &r.magnitude)?;
                map.serialize_entry("method", &r.method)?;
                map.serialize_entry("error_bound", &r.error_bound)?;
                map.serialize_entry("warnings", &r.warnings)?;
            }
            Err(e) => {
                map.serialize_entry("error", &crate::error::ErrorObject::from(e))?;
            }
        }
        map.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DynamicCurve {
    pub kind: CurveKind,
    pub dist: DistributionSpec,
    pub weight: WeightFunction,
    pub n: usize,
    pub k: Option<usize>,
    pub points: Vec<CurvePoint>,
}

impl DynamicCurve {
    pub fn t_grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.result.is_err()).count()
    }

    /// Signed values, failing on the first point that did not evaluate.
    pub fn signed_values(&self) -> Result<Vec<f64>> {
        self.points
            .iter()
            .map(|p| p.result.as_ref().map(|r| r.signed_value).map_err(Clone::clone))
            .collect()
    }

    /// CSV with columns `t,signed_value,magnitude,method,error_bound`; failed
    /// points carry `NaN` values and `error:<code>` as the method.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,signed_value,magnitude,method,error_bound\n");
        for p in &self.points {
            match &p.result {
                Ok(r) => writeln!(
                    out,
                    "{},{},{},{},{}",
                    p.t, r.signed_value, r.magnitude, r.method, r.error_bound
                ),
                Err(e) => writeln!(out, "{},NaN,NaN,error:{},NaN", p.t, e.code()),
            }
            .expect("writing to a String cannot fail");
        }
        out
    }
}

/// Evaluates a dynamic measure on a grid in parallel. Per-point failures are
/// recorded in the curve rather than aborting it.
pub fn dynamic_curve(
    kind: CurveKind,
    dist: &Distribution,
    w: &WeightFunction,
    n: usize,
    k: Option<usize>,
    t_grid: &[f64],
    settings: &QuadratureSettings,
) -> Result<DynamicCurve> {
    if t_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if t_grid.windows(2).any(|p| !(p[0] < p[1])) {
        return Err(Error::InvalidParameter("t grid must be strictly increasing".into()));
    }
    exponent(n)?;
    let k_needed = matches!(kind, CurveKind::GwdcrexKn | CurveKind::GwdcpexKn);
    let k_val = match (k_needed, k) {
        (true, Some(k)) => {
            check_index(k, n)?;
            Some(k)
        }
        (true, None) => return Err(Error::InvalidParameter("order statistic curves need k".into())),
        (false, _) => None,
    };
    let points = t_grid
        .par_iter()
        .map(|&t| {
            let result = match kind {
                CurveKind::GwdcrexMin => gwdcrex_min(dist, w, n, t, settings),
                CurveKind::GwdcpexMax => gwdcpex_max(dist, w, n, t, settings),
                CurveKind::GwdcrexKn => gwdcrex_order_stat(dist, w, k_val.unwrap(), n, t, settings),
                CurveKind::GwdcpexKn => gwdcpex_order_stat(dist, w, k_val.unwrap(), n, t, settings),
            };
            CurvePoint { t, result }
        })
        .collect();
    Ok(DynamicCurve {
        kind,
        dist: dist.spec().clone(),
        weight: w.clone(),
        n,
        k: k_val,
        points,
    })
}

/// `count` points at evenly spaced probability levels in `[lo_q, hi_q]`,
/// mapped through the quantile function.
pub fn quantile_grid(dist: &Distribution, count: usize, lo_q: f64, hi_q: f64) -> Result<Vec<f64>> {
    if !(0.0 < lo_q && lo_q < hi_q && hi_q < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "quantile bounds must satisfy 0 < lo < hi < 1, got {lo_q}, {hi_q}"
        )));
    }
    if count == 0 {
        return Err(Error::EmptyGrid);
    }
    let mut grid: Vec<f64> = (0..count)
        .map(|i| {
            let u = if count == 1 {
                lo_q
            } else {
                lo_q + (hi_q - lo_q) * i as f64 / (count - 1) as f64
            };
            dist.quantile(u)
        })
        .collect();
    grid.dedup();
    Ok(grid)
}

/// The default dynamic grid: 33 points between the 1% and 99% quantiles.
pub fn default_grid(dist: &Distribution) -> Vec<f64> {
    quantile_grid(dist, 33, 0.01, 0.99).expect("default bounds are valid")
}
