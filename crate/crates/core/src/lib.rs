//! Weighted cumulative residual and past extropy of extreme order statistics.
//!
//! Every measure is reported in two forms: the magnitude `∫ w·G^{2n}` over the
//! support (with `G` the survival function for the minimum and the cdf for the
//! maximum) and the signed value `-magnitude / 2`.
//!
//! ```
//! use extropy_kit::{gwcrex_min, Distribution, QuadratureSettings, WeightFunction};
//!
//! let d: Distribution = "pareto2:k=1,h=2".parse().unwrap();
//! let r = gwcrex_min(&d, &WeightFunction::Constant { w0: 1.0 }, 1, &QuadratureSettings::default()).unwrap();
//! assert!((r.signed_value + 1.0 / 6.0).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod cli;
pub mod distributions;
pub mod dynamic;
pub mod empirical;
pub mod error;
pub mod measures;
pub mod oracle;
pub mod quadrature;
pub mod weights;

pub use analysis::report::{inequality_report, ClaimStatus, InequalityReport, ReportConfig};
pub use analysis::{
    check_order, gpd_test, gpd_test_curve, location_family_test, location_scale_ratio_test, power_law_ratio,
    power_test, ConstancyStat, GpdOutcome, GpdShape, MeasureSide, OrderKind, PowerOutcome, Verdict,
};
pub use distributions::{make_distribution, Distribution, DistributionSpec, Quantity};
pub use dynamic::{
    default_grid, dynamic_curve, gwdcpex_max, gwdcpex_order_stat, gwdcrex_min, gwdcrex_min_derivative,
    gwdcrex_order_stat, quantile_grid, weighted_inactivity, CurveKind, DynamicCurve, InactivityVariant,
};
pub use empirical::{
    bootstrap_ci, empirical_gwcpex_max, empirical_gwcrex_min, estimate, load_sample, parse_sample_csv, read_sample_csv,
    EstimatorKind, Sample,
};
pub use error::{Error, ErrorObject, Result};
pub use measures::{
    gmd_weighted, gwcpex_max, gwcrex_min, integral_w_cdf, mu_w, weighted_cpe_entropy, MeasureResult, Method, Warning,
};
pub use oracle::{mc_measure, mc_sum_cpex, sample_iid, sample_order_statistic, McEstimate};
pub use quadrature::{integrate, integrate_power_functional, IntegralResult, QuadratureSettings, Side};
pub use weights::{transform_weight, WeightFunction};
