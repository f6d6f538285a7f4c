//! Monte Carlo cross-checks for the analytic measures.
//!
//! Every estimate is split into ten sub-batches seeded `seed + batch`; the
//! reported value is the mean of the batch estimates and the standard error
//! comes from their spread.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::Distribution;
use crate::empirical::{estimate, load_sample, EstimatorKind, Sample};
use crate::error::{Error, Result};
use crate::weights::WeightFunction;

const BATCHES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Whether `target` lies within `k` standard errors of the estimate.
    pub fn brackets(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.stderr
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform(r: &mut ChaCha8Rng) -> f64 {
    r.sample(Open01)
}

/// `m` i.i.d. draws by inverse transform.
pub fn sample_iid(dist: &Distribution, m: usize, seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    load_sample((0..m).map(|_| dist.quantile(uniform(&mut r))).collect())
}

/// `m` draws of `X_{k:n}`: the `k`-th smallest of `n` uniforms mapped through
/// the quantile function.
pub fn sample_order_statistic(dist: &Distribution, k: usize, n: usize, m: usize, seed: u64) -> Result<Sample> {
    if k == 0 || k > n {
        return Err(Error::InvalidIndex { k, n });
    }
    if m < 2 {
        return Err(Error::TooFewObservations(m));
    }
    let mut r = rng(seed);
    let mut u = vec![0.0; n];
    let draws = (0..m)
        .map(|_| {
            for v in u.iter_mut() {
                *v = uniform(&mut r);
            }
            let (_, kth, _) = u.select_nth_unstable_by(k - 1, f64::total_cmp);
            dist.quantile(*kth)
        })
        .collect();
    load_sample(draws)
}

/// Signed plug-in estimate over the true support `[lower, upper]` rather than
/// the sample range: the residual sum starts at `lower` instead of 0 and the
/// past sum is extended from the sample maximum to `upper`, where the
/// empirical cdf is already 1.
fn support_estimate(
    s: &Sample,
    kind: EstimatorKind,
    w: &WeightFunction,
    n: usize,
    lower: f64,
    upper: f64,
) -> Result<f64> {
    let mut magnitude = estimate(s, kind, w, n)?.magnitude;
    match kind {
        EstimatorKind::ResidualMin => magnitude -= w.antiderivative(lower)? - w.antiderivative(0.0)?,
        EstimatorKind::PastMax if upper.is_finite() => {
            let last = s.values()[s.len() - 1];
            magnitude += w.antiderivative(upper)? - w.antiderivative(last)?;
        }
        EstimatorKind::PastMax => {}
    }
    Ok(-0.5 * magnitude)
}

fn summarize(estimates: &[f64], replicates: usize, seed: u64) -> McEstimate {
    let b = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / b;
    let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (b - 1.0);
    McEstimate {
        value: mean,
        stderr: (var / b).sqrt(),
        replicates,
        seed,
    }
}

/// Monte Carlo estimate of the signed static measure from `m` draws,
/// integrated over the distribution's support.
pub fn mc_measure(
    dist: &Distribution,
    w: &WeightFunction,
    n: usize,
    kind: EstimatorKind,
    m: usize,
    seed: u64,
) -> Result<McEstimate> {
    if m < 1000 {
        return Err(Error::InvalidParameter(format!("Monte Carlo needs m >= 1000, got {m}")));
    }
    let per = m / BATCHES;
    let estimates = (0..BATCHES)
        .into_par_iter()
        .map(|b| {
            let s = sample_iid(dist, per, seed.wrapping_add(b as u64))?;
            support_estimate(&s, kind, w, n, dist.lower(), dist.upper())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(summarize(&estimates, per * BATCHES, seed))
}

/// Monte Carlo estimate of the past measure (`n = 1`) of `Z = X + Y` for
/// independent `X` and `Y`.
pub fn mc_sum_cpex(x: &Distribution, y: &Distribution, w: &WeightFunction, m: usize, seed: u64) -> Result<McEstimate> {
    for d in [x, y] {
        if !d.is_bounded() {
            return Err(Error::UnboundedSupport(format!(
                "{}: the sum check needs bounded supports",
                d.family_name()
            )));
        }
    }
    if m < 10_000 {
        return Err(Error::InvalidParameter(format!(
            "the sum check needs m >= 10000, got {m}"
        )));
    }
    let per = m / BATCHES;
    let estimates = (0..BATCHES)
        .into_par_iter()
        .map(|b| {
            let mut r = rng(seed.wrapping_add(b as u64));
            let z = (0..per)
                .map(|_| {
                    let a = x.quantile(uniform(&mut r));
                    a + y.quantile(uniform(&mut r))
                })
                .collect();
            let z = load_sample(z)?;
            support_estimate(
                &z,
                EstimatorKind::PastMax,
                w,
                1,
                x.lower() + y.lower(),
                x.upper() + y.upper(),
            )
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(summarize(&estimates, per * BATCHES, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DistributionSpec::*;

    fn d(s: crate::distributions::DistributionSpec) -> Distribution {
        Distribution::new(s).unwrap()
    }

    #[test]
    fn order_statistic_means() {
        let u = d(Uniform { a: 0.0, b: 1.0 });
        let s = sample_order_statistic(&u, 1, 4, 100_000, 3).unwrap();
        let se = (4.0 / (25.0 * 6.0) / 100_000f64).sqrt();
        assert!((s.mean() - 0.2).abs() < 4.0 * se, "{}", s.mean());
        let s = sample_order_statistic(&u, 3, 3, 100_000, 4).unwrap();
        assert!((s.mean() - 0.75).abs() < 0.005);
        assert!(matches!(
            sample_order_statistic(&u, 0, 3, 10, 1),
            Err(Error::InvalidIndex { .. })
        ));
    }

    #[test]
    fn minimum_survival_at_median() {
        let x = d(Weibull { k: 1.0, h: 2.0 });
        let med = x.median();
        let s = sample_order_statistic(&x, 1, 3, 50_000, 9).unwrap();
        let p = 0.125;
        let frac = s.values().iter().filter(|&&v| v > med).count() as f64 / 50_000.0;
        assert!((frac - p).abs() < 3.0 * (p * (1.0 - p) / 50_000.0f64).sqrt() + 1e-12);
    }

    #[test]
    fn deterministic() {
        let u = d(Uniform { a: 0.0, b: 1.0 });
        let w = WeightFunction::Constant { w0: 1.0 };
        let a = mc_sum_cpex(&u, &u, &w, 20_000, 5).unwrap();
        let b = mc_sum_cpex(&u, &u, &w, 20_000, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.value >= -5.0 / 12.0);
    }

    #[test]
    fn brackets_closed_forms() {
        let w = WeightFunction::Constant { w0: 1.0 };
        let e = mc_measure(
            &d(Uniform { a: 0.0, b: 1.0 }),
            &w,
            1,
            EstimatorKind::ResidualMin,
            100_000,
            1,
        )
        .unwrap();
        assert!(e.brackets(-1.0 / 6.0, 4.0), "{e:?}");
        let e = mc_measure(
            &d(ParetoII { k: 1.0, h: 2.0 }),
            &w,
            1,
            EstimatorKind::ResidualMin,
            100_000,
            2,
        )
        .unwrap();
        assert!(e.brackets(-1.0 / 6.0, 4.0), "{e:?}");
        let e = mc_measure(&d(Power { b: 1.0, c: 2.0 }), &w, 1, EstimatorKind::PastMax, 100_000, 3).unwrap();
        assert!(e.brackets(-0.1, 4.0), "{e:?}");
    }
}
