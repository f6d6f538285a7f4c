//! Static weighted cumulative extropies of the extreme order statistics.
//!
//! For `X_{1:n}` the residual measure is `-½∫ w·F̄^{2n}` and for `X_{n:n}` the
//! past measure is `-½∫ w·F^{2n}`, both over the support of `X`. Results carry
//! the bare integral as `magnitude` and `signed_value = -magnitude/2`.

pub(crate) mod closed_form;

use std::fmt;

use serde::Serialize;

use crate::distributions::{Distribution, DistributionSpec};
use crate::error::{Error, Result};
use crate::quadrature::{check_tail, integrate_breakpoints, integrate_power_functional, QuadratureSettings, Side};
use crate::weights::WeightFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Empirical,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::Empirical => "empirical",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "message", rename_all = "snake_case")]
pub enum Warning {
    /// The weight takes negative values on the support, so the magnitude may
    /// be negative and sign-based bounds do not apply.
    SignedWeight(String),
    /// Closed forms for this family are commonly quoted with the opposite sign.
    PrintedSign(String),
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::SignedWeight(m) => write!(f, "signed weight: {m}"),
            Warning::PrintedSign(m) => write!(f, "sign convention: {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureResult {
    pub signed_value: f64,
    pub magnitude: f64,
    pub method: Method,
    /// Bound on the absolute error of `signed_value`.
    pub error_bound: f64,
    pub warnings: Vec<Warning>,
}

impl MeasureResult {
    pub fn from_magnitude(magnitude: f64, method: Method, magnitude_error: f64) -> Self {
        MeasureResult {
            signed_value: -0.5 * magnitude,
            magnitude,
            method,
            error_bound: 0.5 * magnitude_error,
            warnings: Vec::new(),
        }
    }

    fn closed(magnitude: f64) -> Self {
        Self::from_magnitude(magnitude, Method::ClosedForm, 8.0 * f64::EPSILON * magnitude.abs())
    }

    pub(crate) fn with_warnings(mut self, warnings: Vec<Warning>) -> Self {
        self.warnings.extend(warnings);
        self
    }
}

pub(crate) fn exponent(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    Ok(2.0 * n as f64)
}

pub(crate) fn weight_warnings(dist: &Distribution, w: &WeightFunction, lo: f64, hi: f64) -> Vec<Warning> {
    let mut out = Vec::new();
    if !w.is_nonnegative_on(lo, hi) {
        out.push(Warning::SignedWeight(format!(
            "{w} is negative somewhere on [{lo}, {hi}]; the magnitude can be negative and w >= 0 bounds are skipped"
        )));
    }
    if matches!(
        dist.spec(),
        DistributionSpec::Uniform { .. } | DistributionSpec::FiniteRange { .. }
    ) {
        out.push(Warning::PrintedSign(
            "closed forms for this family are often quoted as the positive half-magnitude; signed_value keeps the -1/2 integral convention".into(),
        ));
    }
    out
}

fn require_bounded(dist: &Distribution) -> Result<()> {
    if dist.is_bounded() {
        Ok(())
    } else {
        Err(Error::UnboundedSupport(format!(
            "{}: the past measure needs a finite upper support bound",
            dist.family_name()
        )))
    }
}

/// Closed-form residual measure of `X_{1:n}`, or `None` when the family and
/// weight have no closed form.
pub fn gwcrex_min_closed_form(dist: &Distribution, w: &WeightFunction, n: usize) -> Result<Option<MeasureResult>> {
    let p = exponent(n)?;
    check_tail(dist, w, p, Side::Survival)?;
    let (lo, hi) = dist.support();
    Ok(closed_form::residual_magnitude(dist, w, p)
        .map(|m| MeasureResult::closed(m).with_warnings(weight_warnings(dist, w, lo, hi))))
}

/// Residual measure of `X_{1:n}` by quadrature only.
pub fn gwcrex_min_quadrature(
    dist: &Distribution,
    w: &WeightFunction,
    n: usize,
    settings: &QuadratureSettings,
) -> Result<MeasureResult> {
    let p = exponent(n)?;
    let (lo, hi) = dist.support();
    let r = integrate_power_functional(dist, w, p, Side::Survival, lo, hi, settings)?.into_result()?;
    Ok(
        MeasureResult::from_magnitude(r.value, Method::Quadrature, r.error_estimate)
            .with_warnings(weight_warnings(dist, w, lo, hi)),
    )
}

/// `-½∫ w(x)·F̄(x)^{2n} dx`, the weighted cumulative residual extropy of the
/// series-system lifetime `X_{1:n}`.
pub fn gwcrex_min(
    dist: &Distribution,
    w: &WeightFunction,
    n: usize,
    settings: &QuadratureSettings,
) -> Result<MeasureResult> {
    match gwcrex_min_closed_form(dist, w, n)? {
        Some(r) => Ok(r),
        None => gwcrex_min_quadrature(dist, w, n, settings),
    }
}

pub fn gwcpex_max_closed_form(dist: &Distribution, w: &WeightFunction, n: usize) -> Result<Option<MeasureResult>> {
    let p = exponent(n)?;
    require_bounded(dist)?;
    let (lo, hi) = dist.support();
    Ok(closed_form::past_magnitude(dist, w, p)
        .map(|m| MeasureResult::closed(m).with_warnings(weight_warnings(dist, w, lo, hi))))
}

pub fn gwcpex_max_quadrature(
    dist: &Distribution,
    w: &WeightFunction,
    n: usize,
    settings: &QuadratureSettings,
) -> Result<MeasureResult> {
    let p = exponent(n)?;
    require_bounded(dist)?;
    let (lo, hi) = dist.support();
    let r = integrate_power_functional(dist, w, p, Side::Cdf, lo, hi, settings)?.into_result()?;
    Ok(
        MeasureResult::from_magnitude(r.value, Method::Quadrature, r.error_estimate)
            .with_warnings(weight_warnings(dist, w, lo, hi)),
    )
}

/// `-½∫ w(x)·F(x)^{2n} dx`, the weighted cumulative past extropy of the
/// parallel-system lifetime `X_{n:n}`. Needs a bounded support.
pub fn gwcpex_max(
    dist: &Distribution,
    w: &WeightFunction,
    n: usize,
    settings: &QuadratureSettings,
) -> Result<MeasureResult> {
    match gwcpex_max_closed_form(dist, w, n)? {
        Some(r) => Ok(r),
        None => gwcpex_max_quadrature(dist, w, n, settings),
    }
}

/// `μ_w = ∫ w·F̄`.
pub fn mu_w(dist: &Distribution, w: &WeightFunction, settings: &QuadratureSettings) -> Result<f64> {
    check_tail(dist, w, 1.0, Side::Survival)?;
    if let Some(v) = closed_form::residual_magnitude(dist, w, 1.0) {
        return Ok(v);
    }
    let (lo, hi) = dist.support();
    Ok(
        integrate_power_functional(dist, w, 1.0, Side::Survival, lo, hi, settings)?
            .into_result()?
            .value,
    )
}

/// `∫ w·F` over a bounded support.
pub fn integral_w_cdf(dist: &Distribution, w: &WeightFunction, settings: &QuadratureSettings) -> Result<f64> {
    require_bounded(dist)?;
    if let Some(v) = closed_form::past_magnitude(dist, w, 1.0) {
        return Ok(v);
    }
    let (lo, hi) = dist.support();
    Ok(integrate_power_functional(dist, w, 1.0, Side::Cdf, lo, hi, settings)?
        .into_result()?
        .value)
}

/// Weighted cumulative past entropy `-∫ w·F·ln F`.
pub fn weighted_cpe_entropy(dist: &Distribution, w: &WeightFunction, settings: &QuadratureSettings) -> Result<f64> {
    require_bounded(dist)?;
    settings.validate()?;
    let (lo, hi) = dist.support();
    let f = |x: f64| {
        let lf = dist.log_cdf(x);
        if lf == f64::NEG_INFINITY || lf == 0.0 {
            0.0
        } else {
            -w.value(x) * lf.exp() * lf
        }
    };
    let pts = dist.breakpoints(lo, hi, settings.tail_mass_eps);
    Ok(integrate_breakpoints(f, &pts, settings).into_result()?.value)
}

/// `∫ w·2F(1-F)`; with `w = 1` this is the Gini mean difference `E|X - Y|`.
pub fn gmd_weighted(dist: &Distribution, w: &WeightFunction, settings: &QuadratureSettings) -> Result<f64> {
    check_tail(dist, w, 1.0, Side::Survival)?;
    settings.validate()?;
    let (lo, hi) = dist.support();
    let f = |x: f64| 2.0 * w.value(x) * dist.cdf(x) * dist.sf(x);
    let pts = dist.breakpoints(lo, hi, settings.tail_mass_eps);
    Ok(integrate_breakpoints(f, &pts, settings).into_result()?.value)
}
