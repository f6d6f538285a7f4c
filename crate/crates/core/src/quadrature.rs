//! Adaptive Gauss–Kronrod quadrature on finite and semi-infinite ranges.
//!
//! Each piece is integrated with the 21-point Kronrod rule and its embedded
//! 10-point Gauss rule. Pieces live in a global priority queue keyed on the
//! error estimate; the worst one is bisected until the total error meets the
//! tolerance or the subdivision budget runs out. A semi-infinite piece
//! `[a, ∞)` is mapped onto `[0, 1)` through `x = a + s·t/(1-t)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::distributions::{Distribution, Tail};
use crate::error::{Error, Result};
use crate::weights::WeightFunction;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Survival mass left beyond the deepest quantile breakpoint on an
    /// unbounded support.
    pub tail_mass_eps: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            tail_mass_eps: 1e-12,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.rel_tol) || !ok(self.abs_tol) || !ok(self.tail_mass_eps) || self.tail_mass_eps >= 1.0 {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive and tail_mass_eps < 1".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub diverged: bool,
}

impl IntegralResult {
    fn zero() -> Self {
        IntegralResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
            diverged: false,
        }
    }

    /// Turns the status flags into an error.
    pub fn into_result(self) -> Result<Self> {
        if self.diverged {
            Err(Error::Diverged(format!(
                "integral grows without bound (partial value {:e})",
                self.value
            )))
        } else if !self.converged {
            Err(Error::NotConverged {
                value: self.value,
                error_estimate: self.error_estimate,
            })
        } else {
            Ok(self)
        }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_932_228,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for nodes `XGK[1], XGK[3], ..., XGK[9]`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One GK21 application on `[a, b]`; returns `(value, error)`.
fn gk21<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = g(c);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut resabs = kronrod.abs();
    let mut f1 = [0.0; 10];
    let mut f2 = [0.0; 10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let lo = g(c - dx);
        let hi = g(c + dx);
        f1[j] = lo;
        f2[j] = hi;
        kronrod += WGK[j] * (lo + hi);
        resabs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }
    let mean = 0.5 * kronrod;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }
    let value = kronrod * h;
    let resabs = resabs * h.abs();
    let resasc = resasc * h.abs();
    let mut err = ((kronrod - gauss) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    if !value.is_finite() || !err.is_finite() {
        return (value, f64::INFINITY);
    }
    (value, err)
}

#[derive(Clone, Copy)]
enum Map {
    Finite,
    /// `x = origin + scale·t/(1-t)` for `t ∈ [0, 1)`.
    Tail {
        origin: f64,
        scale: f64,
    },
}

struct Piece {
    map: Map,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

struct Key {
    error: f64,
    index: usize,
}

impl PartialEq for Key {
    fn eq(&self, o: &Self) -> bool {
        self.error.total_cmp(&o.error) == Ordering::Equal
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn mapped<F: Fn(f64) -> f64>(f: &F, map: Map) -> impl Fn(f64) -> f64 + '_ {
    move |t: f64| match map {
        Map::Finite => f(t),
        Map::Tail { origin, scale } => {
            let one_minus = 1.0 - t;
            if one_minus <= 0.0 {
                return 0.0;
            }
            let x = origin + scale * t / one_minus;
            let fx = f(x);
            if fx == 0.0 {
                0.0
            } else {
                fx * scale / (one_minus * one_minus)
            }
        }
    }
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Numeric probe for a tail piece: `x·|f(x)|` should vanish as `x → ∞` for an
/// integrable tail. A ratio near one between two far-apart probes signals a
/// `1/x`-type or heavier tail.
fn tail_probe_diverges<F: Fn(f64) -> f64>(f: &F, origin: f64, scale: f64) -> bool {
    let r = |m: f64| {
        let x = origin + scale * m;
        (f(x) * (x - origin)).abs()
    };
    let r1 = r(1e6);
    let r2 = r(1e12);
    r2.is_finite() && r1.is_finite() && r2 > 0.0 && r2 >= 0.9 * r1 || r2.is_infinite()
}

/// Integrates `f` over `[a, b]` where `b` may be `+∞`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, settings: &QuadratureSettings) -> IntegralResult {
    if b.is_infinite() {
        integrate_breakpoints(f, &[a, a + 1.0, b], settings)
    } else {
        integrate_breakpoints(f, &[a, b], settings)
    }
}

/// Integrates `f` over `[points[0], points[last]]`, using the interior points
/// as initial subdivision. The last point may be `+∞`, in which case the last
/// finite point also sets the length scale of the tail map.
pub fn integrate_breakpoints<F: Fn(f64) -> f64>(f: F, points: &[f64], settings: &QuadratureSettings) -> IntegralResult {
    assert!(points.len() >= 2, "need at least two breakpoints");
    let a = points[0];
    let b = *points.last().unwrap();
    if a == b || a.is_nan() || b.is_nan() {
        return IntegralResult::zero();
    }
    if a > b {
        let mut rev: Vec<f64> = points.to_vec();
        rev.reverse();
        let mut r = integrate_breakpoints(f, &rev, settings);
        r.value = -r.value;
        return r;
    }

    let mut pieces: Vec<Piece> = Vec::new();
    let mut evaluations = 0usize;
    let mut diverged = false;
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !(hi > lo) {
            continue;
        }
        let (map, ta, tb) = if hi.is_infinite() {
            let scale = if lo.abs() > 1.0 { lo.abs() } else { 1.0 };
            if tail_probe_diverges(&f, lo, scale) {
                diverged = true;
            }
            (Map::Tail { origin: lo, scale }, 0.0, 1.0)
        } else {
            (Map::Finite, lo, hi)
        };
        let (value, error) = gk21(&mapped(&f, map), ta, tb);
        evaluations += 21;
        pieces.push(Piece {
            map,
            a: ta,
            b: tb,
            value,
            error,
        });
    }
    if pieces.is_empty() {
        return IntegralResult::zero();
    }

    let mut heap: BinaryHeap<Key> = pieces
        .iter()
        .enumerate()
        .map(|(index, p)| Key { error: p.error, index })
        .collect();
    let mut total = compensated_sum(pieces.iter().map(|p| p.value));
    let mut total_err: f64 = pieces.iter().map(|p| p.error).sum();
    let mut frozen_err = 0.0;
    let mut splits = 0usize;

    while total_err > settings.tolerance(total) && splits < settings.max_subdivisions {
        let Some(key) = heap.pop() else { break };
        let (map, lo, hi, old_value, old_err) = {
            let p = &pieces[key.index];
            (p.map, p.a, p.b, p.value, p.error)
        };
        let mid = 0.5 * (lo + hi);
        // Too narrow to split in floating point: the remaining error is
        // roundoff and stays in the total.
        if !(mid > lo && mid < hi) || (hi - lo) <= 1e3 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-300) {
            frozen_err += old_err;
            continue;
        }
        let g = mapped(&f, map);
        let (lv, le) = gk21(&g, lo, mid);
        let (rv, re) = gk21(&g, mid, hi);
        evaluations += 42;
        splits += 1;
        total += lv + rv - old_value;
        total_err += le + re - old_err;
        pieces[key.index] = Piece {
            map,
            a: lo,
            b: mid,
            value: lv,
            error: le,
        };
        heap.push(Key {
            error: le,
            index: key.index,
        });
        pieces.push(Piece {
            map,
            a: mid,
            b: hi,
            value: rv,
            error: re,
        });
        heap.push(Key {
            error: re,
            index: pieces.len() - 1,
        });
        if total.abs() > 1e15 {
            diverged = true;
            break;
        }
    }

    let value = compensated_sum(pieces.iter().map(|p| p.value));
    let error_estimate: f64 = pieces.iter().map(|p| p.error).sum::<f64>().max(0.0);
    let _ = frozen_err;
    if !value.is_finite() || value.abs() > 1e15 {
        diverged = true;
    }
    let converged = !diverged && error_estimate.is_finite() && error_estimate <= settings.tolerance(value);
    IntegralResult {
        value,
        error_estimate,
        evaluations,
        converged,
        diverged,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Integrand `w·F̄^p`.
    Survival,
    /// Integrand `w·F^p`.
    Cdf,
}

/// Analytic integrability of `w·F̄^p` at `+∞`.
pub(crate) fn check_tail(dist: &Distribution, w: &WeightFunction, p: f64, side: Side) -> Result<()> {
    if dist.is_bounded() || w.is_zero() {
        return Ok(());
    }
    if side == Side::Cdf {
        return Err(Error::Diverged(format!(
            "{}: ∫ w·F^p over an unbounded support diverges since F → 1",
            dist.family_name()
        )));
    }
    if let Tail::Algebraic(index) = dist.tail() {
        let m1 = w.growth_degree() + 1.0;
        if p * index <= m1 {
            let msg = match dist.spec() {
                crate::distributions::DistributionSpec::ParetoII { h, .. } => {
                    format!("ParetoII: requires 2nh > m+1 (p·h = {}, m+1 = {m1})", p * h)
                }
                crate::distributions::DistributionSpec::FoldedCramer { .. } => {
                    format!("FoldedCramer: requires 2n > m+1 (p = {p}, m+1 = {m1})")
                }
                _ => format!(
                    "{}: requires p·α > m+1 for tail index α (p·α = {}, m+1 = {m1})",
                    dist.family_name(),
                    p * index
                ),
            };
            return Err(Error::Diverged(msg));
        }
    }
    Ok(())
}

/// `∫_{t_lo}^{t_hi} w(x)·G(x)^p dx` with `G = F̄` or `G = F`, optionally
/// scaled by `exp(-p·log_norm)` (the conditioning used by the dynamic
/// measures).
#[allow(clippy::too_many_arguments)]
pub(crate) fn power_functional_scaled(
    dist: &Distribution,
    w: &WeightFunction,
    p: f64,
    side: Side,
    t_lo: f64,
    t_hi: f64,
    log_norm: f64,
    settings: &QuadratureSettings,
) -> Result<IntegralResult> {
    settings.validate()?;
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidParameter(format!("exponent p must be > 0, got {p}")));
    }
    let (lower, upper) = dist.support();
    if t_lo.is_nan() || t_hi.is_nan() || t_lo > t_hi || t_lo < lower || t_hi > upper {
        return Err(Error::OutOfSupport {
            x: if t_lo < lower || t_lo.is_nan() { t_lo } else { t_hi },
            lower,
            upper,
        });
    }
    if w.is_zero() || t_lo == t_hi {
        return Ok(IntegralResult::zero());
    }
    if t_hi.is_infinite() {
        check_tail(dist, w, p, side)?;
    }
    let integrand = |x: f64| {
        let lg = match side {
            Side::Survival => dist.log_sf(x),
            Side::Cdf => dist.log_cdf(x),
        };
        let g = (p * (lg - log_norm)).exp();
        if g == 0.0 {
            0.0
        } else {
            w.value(x) * g
        }
    };
    let points = dist.breakpoints(t_lo, t_hi, settings.tail_mass_eps);
    Ok(integrate_breakpoints(integrand, &points, settings))
}

/// `∫ w(x)·F̄(x)^p dx` (survival side) or `∫ w(x)·F(x)^p dx` (cdf side) over
/// `[t_lo, t_hi]`. Catalog tails that make the integral infinite are rejected
/// before integrating.
pub fn integrate_power_functional(
    dist: &Distribution,
    w: &WeightFunction,
    p: f64,
    side: Side,
    t_lo: f64,
    t_hi: f64,
    settings: &QuadratureSettings,
) -> Result<IntegralResult> {
    power_functional_scaled(dist, w, p, side, t_lo, t_hi, 0.0, settings)
}
