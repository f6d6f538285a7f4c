//! Shared fixtures and property checks for the integration tests.
#![allow(dead_code)]

use extropy_kit::measures::{gmd_weighted, gwcpex_max, gwcrex_min, integral_w_cdf, mu_w, weighted_cpe_entropy};
use extropy_kit::{
    gwdcpex_max, gwdcrex_min, integrate_power_functional, transform_weight, weighted_inactivity, Distribution,
    DistributionSpec, Error, InactivityVariant, QuadratureSettings, Side, WeightFunction,
};
use proptest::prelude::*;

use DistributionSpec::*;

pub fn d(spec: DistributionSpec) -> Distribution {
    Distribution::new(spec).unwrap()
}

pub fn settings() -> QuadratureSettings {
    QuadratureSettings::default()
}

pub fn one() -> WeightFunction {
    WeightFunction::Constant { w0: 1.0 }
}

/// The closed-form grid families.
pub fn grid_families() -> Vec<DistributionSpec> {
    vec![
        Uniform { a: 0.0, b: 1.0 },
        FiniteRange { a: 1.0, b: 1.0 },
        Weibull { k: 1.0, h: 1.0 },
        Weibull { k: 1.0, h: 2.0 },
        FoldedCramer { h: 1.0 },
        ParetoII { k: 1.0, h: 2.0 },
    ]
}

pub fn grid_weights() -> Vec<WeightFunction> {
    vec![one(), WeightFunction::Identity, WeightFunction::PowerM { m: 2 }]
}

pub const GRID_NS: [usize; 4] = [1, 2, 5, 10];

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

fn le(a: f64, b: f64) -> bool {
    a <= b + 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// Random catalog distribution.
pub fn any_spec() -> impl Strategy<Value = DistributionSpec> {
    prop_oneof![
        (0.0..2.0f64, 0.5..3.0f64).prop_map(|(a, w)| Uniform { a, b: a + w }),
        (0.3..3.0f64, 0.5..4.0f64).prop_map(|(a, b)| FiniteRange { a, b }),
        (0.3..3.0f64, 0.5..3.0f64).prop_map(|(k, h)| Weibull { k, h }),
        (0.5..3.0f64).prop_map(|h| FoldedCramer { h }),
        (0.5..3.0f64, 1.2..4.0f64).prop_map(|(k, h)| ParetoII { k, h }),
        (0.5..3.0f64, 0.3..4.0f64).prop_map(|(b, c)| Power { b, c }),
        (0.3..3.0f64).prop_map(|lambda| Exponential { lambda }),
    ]
}

pub fn any_weight() -> impl Strategy<Value = WeightFunction> {
    prop_oneof![
        (0.2..3.0f64).prop_map(|w0| WeightFunction::Constant { w0 }),
        Just(WeightFunction::Identity),
    ]
}

/// Treats a divergence error as "not applicable" and anything else as a
/// failure.
fn applicable<T>(r: Result<T, Error>) -> Result<Option<T>, String> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Diverged(_)) | Err(Error::UnboundedSupport(_)) => Ok(None),
        Err(e) => Err(format!("unexpected error: {e}")),
    }
}

fn ctx<T>(tag: &str, r: Result<T, Error>) -> Result<T, String> {
    r.map_err(|e| format!("{tag}: {e}"))
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Residual-side properties: monotonicity in `n`, the `-μ_w/2` floor, and
/// the dynamic versions at the median.
pub fn check_residual(spec: &DistributionSpec, w: &WeightFunction, n: usize) -> Result<(), String> {
    let s = settings();
    let x = d(spec.clone());
    let Some(cur) = applicable(gwcrex_min(&x, w, n, &s))? else {
        return Ok(());
    };
    let next = gwcrex_min(&x, w, n + 1, &s).map_err(|e| e.to_string())?;
    ensure!(
        le(cur.signed_value, next.signed_value),
        "{spec} {w} n={n}: not increasing in n"
    );
    ensure!(
        cur.magnitude > next.magnitude,
        "{spec} {w} n={n}: magnitude not strictly decreasing"
    );
    if let Some(mu) = applicable(mu_w(&x, w, &s))? {
        ensure!(le(-mu / 2.0, cur.signed_value), "{spec} {w} n={n}: below -mu_w/2");
    }
    if let Some(base) = applicable(gwcrex_min(&x, w, 1, &s))? {
        ensure!(
            le(base.signed_value, cur.signed_value),
            "{spec} {w} n={n}: below the n=1 value"
        );
    }

    let t = x.median();
    if let Some(e) = applicable(gwdcrex_min(&x, w, n, t, &s))? {
        let e1 = gwdcrex_min(&x, w, n + 1, t, &s).map_err(|e| e.to_string())?;
        ensure!(
            le(e.signed_value, e1.signed_value),
            "{spec} {w} n={n}: dynamic not increasing in n"
        );
        if let Some(base) = applicable(gwdcrex_min(&x, w, 1, t, &s))? {
            ensure!(
                le(base.signed_value, e.signed_value),
                "{spec} {w} n={n}: dynamic below n=1"
            );
        }
        if let Some(r) = applicable(integrate_power_functional(&x, w, 1.0, Side::Survival, t, x.upper(), &s))? {
            let bound = 0.5 * r.value / x.sf(t);
            ensure!(
                le(-e.signed_value, bound),
                "{spec} {w} n={n}: dynamic magnitude above the mrl bound"
            );
        }
    }
    Ok(())
}

/// Past-side properties for bounded supports: scaling, monotonicity in `n`,
/// entropy and GMD relations, and the dynamic inactivity bound.
pub fn check_past(spec: &DistributionSpec, w: &WeightFunction, n: usize, scale: f64, shift: f64) -> Result<(), String> {
    let s = settings();
    let x = d(spec.clone());
    if !x.is_bounded() {
        return Ok(());
    }
    let tag = format!("{spec} {w} n={n}");
    let cur = ctx(&tag, gwcpex_max(&x, w, n, &s))?;
    let next = ctx(&tag, gwcpex_max(&x, w, n + 1, &s))?;
    let base = ctx(&tag, gwcpex_max(&x, w, 1, &s))?;
    ensure!(
        le(next.magnitude, cur.magnitude),
        "{spec} {w} n={n}: magnitude grows with n"
    );
    ensure!(
        le(cur.magnitude, base.magnitude),
        "{spec} {w} n={n}: magnitude above n=1"
    );
    let wf = ctx(&tag, integral_w_cdf(&x, w, &s))?;
    let (lo, hi) = x.support();
    let wmax = w.eval(hi).unwrap().max(w.eval(lo).unwrap());
    ensure!(le(cur.magnitude, wf), "{spec} {w} n={n}: magnitude above int wF");
    ensure!(le(wf, (hi - lo) * wmax), "{spec} {w}: int wF above the box bound");

    let y = d(DistributionSpec::Affine {
        base: Box::new(spec.clone()),
        scale,
        shift,
    });
    let wy = transform_weight(w, scale, shift).unwrap();
    let scaled = ctx(&tag, gwcpex_max(&y, &wy, n, &s))?;
    ensure!(
        rel_close(scaled.signed_value, scale * cur.signed_value, 1e-9),
        "{spec} {w} n={n}: scaling {} vs {}",
        scaled.signed_value,
        scale * cur.signed_value
    );

    let h = ctx(&tag, weighted_cpe_entropy(&x, w, &s))?;
    ensure!(le(wf + 2.0 * base.signed_value, h), "{spec} {w}: entropy bound fails");
    let g = ctx(&tag, gmd_weighted(&x, w, &s))?;
    ensure!(
        (g - (2.0 * wf + 4.0 * base.signed_value)).abs() <= 1e-9 * (1.0 + g.abs()),
        "{spec} {w}: GMD identity {g} vs {}",
        2.0 * wf + 4.0 * base.signed_value
    );

    let t = x.median();
    let xi = ctx(&tag, gwdcpex_max(&x, w, n, t, &s))?;
    let xi1 = ctx(&tag, gwdcpex_max(&x, w, 1, t, &s))?;
    let m = ctx(&tag, weighted_inactivity(&x, w, t, InactivityVariant::Normalized, &s))?;
    ensure!(le(-0.5 * m, xi.signed_value), "{spec} {w} n={n}: below -m_w/2");
    ensure!(
        le(xi1.signed_value, xi.signed_value),
        "{spec} {w} n={n}: dynamic past below n=1"
    );
    Ok(())
}

/// Mixture form of the conditioning inequality on a common support.
pub fn check_mixture(b: f64, c1: f64, c2: f64, p: f64, w: &WeightFunction) -> Result<(), String> {
    let s = settings();
    let comps = vec![(p, Power { b, c: c1 }), (1.0 - p, Power { b, c: c2 })];
    let mix = d(FiniteMixture {
        components: comps.clone(),
    });
    let lhs = gwcpex_max(&mix, w, 1, &s).map_err(|e| e.to_string())?.magnitude;
    let rhs: f64 = comps
        .iter()
        .map(|(p, c)| p * gwcpex_max(&d(c.clone()), w, 1, &s).unwrap().magnitude)
        .sum();
    ensure!(le(lhs, rhs), "mixture b={b} c=({c1},{c2}) p={p}: {lhs} > {rhs}");
    Ok(())
}
