//! Exact values of `∫ w·F̄^p` and `∫ w·F^p` for the catalog families.
//!
//! Every entry reduces to Beta or Gamma integrals after a substitution that
//! maps the survival (or distribution) function to a power. Log weights come
//! from differentiating the Beta/Gamma forms in the exponent, hence digamma.
//! A `None` return means no closed form is available and the caller falls
//! back to quadrature.

use statrs::function::beta::ln_beta;
use statrs::function::gamma::{digamma, ln_gamma};

use crate::distributions::{Distribution, DistributionSpec};
use crate::weights::WeightFunction;

/// Weight shapes with closed forms: `w0·x^m` or `ln x`.
#[derive(Clone, Copy)]
pub(crate) enum Shape {
    Monomial { scale: f64, m: u32 },
    Log,
}

pub(crate) fn shape(w: &WeightFunction) -> Option<Shape> {
    match w {
        WeightFunction::Constant { w0 } => Some(Shape::Monomial { scale: *w0, m: 0 }),
        WeightFunction::Identity => Some(Shape::Monomial { scale: 1.0, m: 1 }),
        WeightFunction::PowerM { m } => Some(Shape::Monomial { scale: 1.0, m: *m }),
        WeightFunction::Log => Some(Shape::Log),
        WeightFunction::Transformed { .. } => None,
    }
}

pub(crate) fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

pub(crate) fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `ψ(1) - ψ(z)`.
fn digamma_gap(z: f64) -> f64 {
    digamma(1.0) - digamma(z)
}

/// `∫ w(x) F̄(x)^p dx` over the support.
pub(crate) fn residual_magnitude(dist: &Distribution, w: &WeightFunction, p: f64) -> Option<f64> {
    use DistributionSpec::*;
    let shape = shape(w)?;
    if let Shape::Monomial { scale, .. } = shape {
        if scale == 0.0 {
            return Some(0.0);
        }
    }
    let v = match (dist.spec(), shape) {
        (Uniform { a, b }, Shape::Monomial { scale, m }) => {
            // x = a(1-v) + bv, F̄ = 1 - v
            let sum: f64 = (0..=m)
                .map(|k| {
                    binom(m, k)
                        * a.powi(k as i32)
                        * b.powi((m - k) as i32)
                        * beta(p + k as f64 + 1.0, (m - k) as f64 + 1.0)
                })
                .sum();
            scale * (b - a) * sum
        }
        (Uniform { a, b }, Shape::Log) => {
            if *a == 0.0 {
                b * (b.ln() + digamma_gap(p + 2.0)) / (p + 1.0)
            } else {
                (b - a) * (b.ln() / (p + 1.0) + log_one_minus_moment(p, (b - a) / b)?)
            }
        }
        (FiniteRange { a, b }, Shape::Monomial { scale, m }) => {
            let q = p * b;
            scale * beta(m as f64 + 1.0, q + 1.0) / a.powi(m as i32 + 1)
        }
        (FiniteRange { a, b }, Shape::Log) => {
            let q = p * b;
            (digamma_gap(q + 2.0) - a.ln()) / (a * (q + 1.0))
        }
        (Weibull { k, h }, s) => weibull(p * k, *h, s),
        (Exponential { lambda }, s) => weibull(p * lambda, 1.0, s),
        (FoldedCramer { h }, Shape::Monomial { scale, m }) => {
            let m = m as f64;
            if p <= m + 1.0 {
                return None;
            }
            scale * beta(m + 1.0, p - m - 1.0) / h.powf(m + 1.0)
        }
        (FoldedCramer { h }, Shape::Log) => {
            if p <= 1.0 {
                return None;
            }
            (digamma_gap(p - 1.0) - h.ln()) / (h * (p - 1.0))
        }
        (ParetoII { k, h }, Shape::Monomial { scale, m }) => {
            let (q, m) = (p * h, m as f64);
            if q <= m + 1.0 {
                return None;
            }
            scale * k.powf(m + 1.0) * beta(m + 1.0, q - m - 1.0)
        }
        (ParetoII { k, h }, Shape::Log) => {
            let q = p * h;
            if q <= 1.0 {
                return None;
            }
            k * (k.ln() + digamma_gap(q - 1.0)) / (q - 1.0)
        }
        (Power { b, c }, Shape::Monomial { scale, m }) => {
            // x = b v^{1/c}, F̄ = 1 - v
            let a1 = (m as f64 + 1.0) / c;
            scale * b.powf(m as f64 + 1.0) * beta(a1, p + 1.0) / c
        }
        (Power { b, c }, Shape::Log) => {
            let a1 = 1.0 / c;
            let bt = beta(a1, p + 1.0);
            (b / c) * bt * (b.ln() + (digamma(a1) - digamma(a1 + p + 1.0)) / c)
        }
        _ => return None,
    };
    v.is_finite().then_some(v)
}

/// `∫₀^∞ x^m e^{-c x^h} dx` (scaled) or `∫₀^∞ ln x · e^{-c x^h} dx`.
fn weibull(c: f64, h: f64, s: Shape) -> f64 {
    match s {
        Shape::Monomial { scale, m } => {
            let a = (m as f64 + 1.0) / h;
            scale * (ln_gamma(a) - a * c.ln()).exp() / h
        }
        Shape::Log => {
            let a = 1.0 / h;
            (ln_gamma(a) - a * c.ln()).exp() * (digamma(a) - c.ln()) / (h * h)
        }
    }
}

/// `∫₀¹ u^p ln(1 - r u) du` for `0 < r < 1`.
fn log_one_minus_moment(p: f64, r: f64) -> Option<f64> {
    if r <= 0.95 {
        // -Σ r^j / (j (p + j + 1)); terms fall geometrically
        let mut sum = 0.0;
        let mut rj = 1.0;
        for j in 1..5000 {
            rj *= r;
            let term = rj / (j as f64 * (p + j as f64 + 1.0));
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        return Some(-sum);
    }
    // The series stalls as r -> 1. For integer p, integration by parts leaves
    // the tail Σ_{i > p+1} r^i / i of -ln(1 - r) instead.
    if p.fract() != 0.0 || p < 0.0 {
        return None;
    }
    let n = p as u32 + 1;
    let head: f64 = (1..=n).map(|i| r.powi(i as i32) / i as f64).sum();
    let tail = -(-r).ln_1p() - head;
    Some((-r).ln_1p() / (p + 1.0) + tail / ((p + 1.0) * r.powi(n as i32)))
}

/// `∫ w(x) F(x)^p dx` over a bounded support.
pub(crate) fn past_magnitude(dist: &Distribution, w: &WeightFunction, p: f64) -> Option<f64> {
    use DistributionSpec::*;
    let shape = shape(w)?;
    if let Shape::Monomial { scale, .. } = shape {
        if scale == 0.0 {
            return Some(0.0);
        }
    }
    let v = match (dist.spec(), shape) {
        (Power { b, c }, s) => power_past(p * c, *b, s),
        (Uniform { a, b }, Shape::Monomial { scale, m }) => {
            // x = a + (b - a) v, F = v
            let d = b - a;
            let sum: f64 = (0..=m)
                .map(|k| binom(m, k) * a.powi((m - k) as i32) * d.powi(k as i32) / (p + k as f64 + 1.0))
                .sum();
            scale * d * sum
        }
        (Uniform { a, b }, Shape::Log) if *a == 0.0 => power_past(p, *b, Shape::Log),
        _ => return None,
    };
    v.is_finite().then_some(v)
}

/// `∫₀^t w(x) (x/t)^r dx`.
fn power_past(r: f64, t: f64, s: Shape) -> f64 {
    match s {
        Shape::Monomial { scale, m } => scale * t.powi(m as i32 + 1) / (r + m as f64 + 1.0),
        Shape::Log => t * (t.ln() / (r + 1.0) - 1.0 / ((r + 1.0) * (r + 1.0))),
    }
}

/// `∫₀^t w(x) (x/t)^r dx` for the monomial and log shapes.
pub(crate) fn power_law_past_integral(w: &WeightFunction, r: f64, t: f64) -> Option<f64> {
    Some(power_past(r, t, shape(w)?))
}
