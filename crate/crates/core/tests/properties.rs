mod common;

use common::*;
use extropy_kit::{
    check_order, estimate, gwdcrex_min, gwdcrex_order_stat, load_sample, transform_weight, Distribution,
    DistributionSpec, EstimatorKind, OrderKind, Quantity, WeightFunction,
};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 200,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn residual_properties(spec in any_spec(), w in any_weight(), n in 1usize..6) {
        prop_assert!(check_residual(&spec, &w, n).is_ok(), "{:?}", check_residual(&spec, &w, n));
    }

    #[test]
    fn past_properties(
        spec in any_spec(),
        w in any_weight(),
        n in 1usize..6,
        scale in 0.5..3.0f64,
        shift in 0.0..2.0f64,
    ) {
        let r = check_past(&spec, &w, n, scale, shift);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn mixture_conditioning(b in 0.5..3.0f64, c1 in 0.3..4.0f64, c2 in 0.3..4.0f64, p in 0.05..0.95f64, w in any_weight()) {
        let r = check_mixture(b, c1, c2, p, &w);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn distribution_functions(spec in any_spec(), u in 0.001..0.999f64, v in 0.001..0.999f64) {
        let x = d(spec);
        let (a, b) = (x.quantile(u.min(v)), x.quantile(u.max(v)));
        prop_assert!(x.cdf(a) <= x.cdf(b) + 1e-15);
        for t in [a, b] {
            prop_assert!((x.sf(t) - (1.0 - x.cdf(t))).abs() <= 1e-14);
            prop_assert!(x.pdf(t) >= 0.0);
        }
        prop_assert!((x.cdf(x.quantile(u)) - u).abs() < 1e-9);
        prop_assert_eq!(x.cdf(x.lower()), 0.0);
        if x.is_bounded() {
            prop_assert_eq!(x.cdf(x.upper()), 1.0);
        }
        prop_assert!(x.eval(Quantity::Hazard, a).unwrap() >= 0.0);
    }

    #[test]
    fn order_statistic_survival(spec in any_spec(), u in 0.01..0.99f64, n in 1usize..8) {
        let x = d(spec);
        let t = x.quantile(u);
        let t2 = x.quantile((u + 0.05).min(0.995));
        for k in 1..=n {
            let s = x.order_statistic_sf(k, n, t).unwrap();
            prop_assert!((0.0..=1.0).contains(&s));
            prop_assert!(x.order_statistic_sf(k, n, t2).unwrap() <= s + 1e-12);
            if k < n {
                prop_assert!(x.order_statistic_sf(k + 1, n, t).unwrap() >= s - 1e-12);
            }
        }
    }

    #[test]
    fn first_order_statistic_of_one_is_the_minimum(spec in any_spec(), u in 0.05..0.95f64) {
        let x = d(spec);
        let t = x.quantile(u);
        let s = common::settings();
        let w = one();
        if let (Ok(a), Ok(b)) = (gwdcrex_order_stat(&x, &w, 1, 1, t, &s), gwdcrex_min(&x, &w, 1, t, &s)) {
            prop_assert!(rel_close(a.signed_value, b.signed_value, 1e-8));
        }
    }

    #[test]
    fn empirical_increasing_in_n(values in prop::collection::vec(0.0..100.0f64, 2..60), w in any_weight()) {
        let s = load_sample(values).unwrap();
        for kind in [EstimatorKind::ResidualMin, EstimatorKind::PastMax] {
            let v: Vec<f64> = (1..6).map(|n| estimate(&s, kind, &w, n).unwrap().signed_value).collect();
            prop_assert!(v.iter().all(|x| *x <= 0.0));
            prop_assert!(v.windows(2).all(|p| p[0] <= p[1] + 1e-12));
        }
    }

    #[test]
    fn affine_preserves_wdcrex_order(a in 0.3..3.0f64, b in 0.0..2.0f64, n in 1usize..3) {
        let s = common::settings();
        let x1 = DistributionSpec::ParetoII { k: 1.0, h: 3.0 };
        let x2 = DistributionSpec::ParetoII { k: 1.0, h: 2.0 };
        let w = WeightFunction::Identity;
        let grid = [0.2, 0.5, 1.0, 2.0, 4.0];
        let v = check_order(OrderKind::Wdcrex, &d(x1.clone()), &d(x2.clone()), &w, n, &grid, 1e-9, &s).unwrap();
        prop_assert!(v.holds);
        let y = |x: &DistributionSpec| d(DistributionSpec::Affine { base: Box::new(x.clone()), scale: a, shift: b });
        let wy = transform_weight(&w, a, b).unwrap();
        let ygrid: Vec<f64> = grid.iter().map(|t| a * t + b).collect();
        let v = check_order(OrderKind::Wdcrex, &y(&x1), &y(&x2), &wy, n, &ygrid, 1e-9, &s).unwrap();
        prop_assert!(v.holds, "{:?}", v);
    }

    #[test]
    fn verdict_invariant(t_hi in 0.6..5.0f64, h1 in 0.5..3.0f64, h2 in 0.5..3.0f64) {
        let s = common::settings();
        let grid: Vec<f64> = (1..=8).map(|i| t_hi * i as f64 / 8.0).collect();
        let x: Distribution = d(DistributionSpec::Weibull { k: 1.0, h: h1 });
        let y: Distribution = d(DistributionSpec::Weibull { k: 1.0, h: h2 });
        for kind in [OrderKind::Hazard, OrderKind::Wdcrex] {
            let v = check_order(kind, &x, &y, &one(), 1, &grid, 1e-9, &s).unwrap();
            prop_assert_eq!(v.holds, v.max_violation <= v.tolerance);
            prop_assert!(v.max_violation >= 0.0);
            prop_assert_eq!(v.witness.is_some(), v.max_violation > 0.0);
        }
    }
}

#[test]
fn hazard_order_implies_wdcrex_order() {
    let s = common::settings();
    let pairs = [
        (
            DistributionSpec::Weibull { k: 1.0, h: 2.0 },
            DistributionSpec::Exponential { lambda: 0.5 },
        ),
        (
            DistributionSpec::Exponential { lambda: 2.0 },
            DistributionSpec::Exponential { lambda: 1.0 },
        ),
        (
            DistributionSpec::ParetoII { k: 1.0, h: 3.0 },
            DistributionSpec::ParetoII { k: 1.0, h: 2.0 },
        ),
        (
            DistributionSpec::Exponential { lambda: 1.0 },
            DistributionSpec::ParetoII { k: 2.0, h: 1.5 },
        ),
    ];
    let grid = [0.5, 1.0, 1.5, 2.0, 3.0];
    for (a, b) in pairs {
        let (x, y) = (d(a), d(b));
        let hz = check_order(OrderKind::Hazard, &x, &y, &one(), 1, &grid, 0.0, &s).unwrap();
        assert!(hz.holds, "{x} vs {y}");
        for n in [1, 2, 5] {
            let v = check_order(OrderKind::Wdcrex, &x, &y, &one(), n, &grid, 1e-9, &s).unwrap();
            assert!(v.holds, "{x} vs {y}, n={n}: {v:?}");
        }
    }
}

#[test]
fn reversed_hazard_order_implies_dcpwex_order() {
    let s = common::settings();
    let pairs = [
        (
            DistributionSpec::Power { b: 1.0, c: 3.0 },
            DistributionSpec::Power { b: 1.0, c: 1.0 },
        ),
        (
            DistributionSpec::Power { b: 1.0, c: 2.0 },
            DistributionSpec::Uniform { a: 0.0, b: 1.0 },
        ),
    ];
    let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
    for (a, b) in pairs {
        let (x, y) = (d(a), d(b));
        let rh = check_order(OrderKind::ReversedHazard, &x, &y, &one(), 1, &grid, 0.0, &s).unwrap();
        assert!(rh.holds, "{x} vs {y}");
        for n in [1, 2, 5] {
            let v = check_order(OrderKind::Dcpwex, &x, &y, &one(), n, &grid, 1e-9, &s).unwrap();
            assert!(v.holds, "{x} vs {y}, n={n}: {v:?}");
        }
    }
}

#[test]
fn grid_cells_satisfy_properties() {
    for spec in grid_families() {
        for w in [one(), WeightFunction::Identity] {
            for n in GRID_NS {
                check_residual(&spec, &w, n).unwrap();
                check_past(&spec, &w, n, 2.0, 1.0).unwrap();
            }
        }
    }
}
