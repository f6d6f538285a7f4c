//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, unreadable input,
//! unsupported format), 2 on domain errors, which also print a JSON error
//! object on stdout.

mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::report::{inequality_report, ReportConfig};
use crate::analysis::{
    check_order, gpd_test, location_family_test, location_scale_ratio_test, power_test, MeasureSide, OrderKind,
};
use crate::distributions::Distribution;
use crate::dynamic::{default_grid, dynamic_curve, quantile_grid, CurveKind};
use crate::empirical::{bootstrap_ci, estimate, read_sample_csv, EstimatorKind};
use crate::error::{Error, Result};
use crate::measures::{
    gwcpex_max, gwcpex_max_closed_form, gwcpex_max_quadrature, gwcrex_min, gwcrex_min_closed_form,
    gwcrex_min_quadrature, MeasureResult, Warning,
};
use crate::oracle::{mc_measure, mc_sum_cpex};
use crate::quadrature::QuadratureSettings;
use crate::weights::WeightFunction;

use output::{write_output, Rendered};

pub const SCHEMA: &str = "extropy-kit/1";

#[derive(Debug, Parser)]
#[command(
    name = "extropy-kit",
    version,
    about = "Weighted cumulative extropy of extreme order statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the output here (atomically) instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    rel_tol: f64,

    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    abs_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StaticKind {
    ResidualMin,
    PastMax,
}

impl StaticKind {
    fn estimator(self) -> EstimatorKind {
        match self {
            StaticKind::ResidualMin => EstimatorKind::ResidualMin,
            StaticKind::PastMax => EstimatorKind::PastMax,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveArg {
    ResidualMin,
    PastMax,
    ResidualKn,
    PastKn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Hazard,
    ReversedHazard,
    Wdcrex,
    Dcpwex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Residual,
    Past,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum McKind {
    ResidualMin,
    PastMax,
    Sum,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[arg(long, value_enum)]
    kind: StaticKind,
    #[arg(long)]
    dist: String,
    #[arg(long, default_value = "const:1")]
    weight: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
}

#[derive(Debug, Args)]
struct DynamicArgs {
    #[arg(long, value_enum)]
    kind: CurveArg,
    #[arg(long)]
    dist: String,
    #[arg(long, default_value = "const:1")]
    weight: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long)]
    k: Option<usize>,
    /// Quantile grid `count:lo:hi`; defaults to 33:0.01:0.99.
    #[arg(long, conflicts_with = "t")]
    t_grid: Option<String>,
    /// Explicit comma-separated time points.
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = StaticKind::ResidualMin)]
    kind: StaticKind,
    #[arg(long, default_value = "const:1")]
    weight: String,
    /// One or more sample sizes, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    n: Vec<usize>,
    /// Bootstrap replicates for a percentile interval.
    #[arg(long)]
    bootstrap: Option<usize>,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Args)]
struct OrderArgs {
    #[arg(long, value_enum)]
    kind: OrderArg,
    /// Two distributions, X then Y.
    #[arg(long, num_args = 1, required = true)]
    dist: Vec<String>,
    #[arg(long, default_value = "const:1")]
    weight: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long)]
    t_grid: Option<String>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Debug, Args)]
struct ShapeArgs {
    #[arg(long)]
    dist: String,
    #[arg(long, default_value = "const:1")]
    weight: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long)]
    t_grid: Option<String>,
    /// Relative spread allowed for a constant curve.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Debug, Args)]
struct LocationArgs {
    #[arg(long, num_args = 1, required = true)]
    dist: Vec<String>,
    #[arg(long, default_value = "const:1")]
    weight: String,
    #[arg(long, value_enum, default_value_t = SideArg::Residual)]
    side: SideArg,
    /// Compare n = 1..=n-max.
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    /// Matched time points `t_x,t_y` for the dynamic comparison.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    times: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Debug, Args)]
struct LocationScaleArgs {
    #[arg(long, num_args = 1, required = true)]
    dist: Vec<String>,
    /// One weight for both, or one per distribution.
    #[arg(long, default_value = "const:1")]
    weight: Vec<String>,
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Debug, Subcommand)]
enum Characterize {
    /// Generalized Pareto screen on the dynamic residual derivative.
    Gpd(ShapeArgs),
    /// Power-law screen on the dynamic past / inactivity ratio.
    Power(ShapeArgs),
    /// Same-location-family screen over n = 1..n-max.
    Location(LocationArgs),
    /// Same-location-scale-family screen over n = 1..n-max.
    LocationScale(LocationScaleArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Draws for the Monte Carlo sum check.
    #[arg(long, default_value_t = 100_000)]
    replicates: usize,
}

#[derive(Debug, Args)]
struct McArgs {
    #[arg(long, value_enum)]
    kind: McKind,
    /// One distribution, or two for `--kind sum`.
    #[arg(long, num_args = 1, required = true)]
    dist: Vec<String>,
    #[arg(long, default_value = "const:1")]
    weight: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    replicates: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Static residual (minimum) or past (maximum) measure.
    Measure(MeasureArgs),
    /// Dynamic measure on a time grid.
    Dynamic(DynamicArgs),
    /// Plug-in estimate from a one-column CSV sample.
    Estimate(EstimateArgs),
    /// Stochastic order check between two distributions.
    OrderCheck(OrderArgs),
    /// Characterization screens.
    #[command(subcommand)]
    Characterize(Characterize),
    /// Numerical audit of the inequality claims.
    Verify(VerifyArgs),
    /// Monte Carlo cross-check.
    Mc(McArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Measure(_) => "measure",
            Command::Dynamic(_) => "dynamic",
            Command::Estimate(_) => "estimate",
            Command::OrderCheck(_) => "order-check",
            Command::Characterize(Characterize::Gpd(_)) => "characterize gpd",
            Command::Characterize(Characterize::Power(_)) => "characterize power",
            Command::Characterize(Characterize::Location(_)) => "characterize location",
            Command::Characterize(Characterize::LocationScale(_)) => "characterize location-scale",
            Command::Verify(_) => "verify",
            Command::Mc(_) => "mc",
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// to the given streams. Returns the process exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let command = cli.command.name();
    let settings = QuadratureSettings {
        rel_tol: cli.rel_tol,
        abs_tol: cli.abs_tol,
        ..QuadratureSettings::default()
    };
    let mut inputs = json!({});
    let outcome = settings
        .validate()
        .and_then(|_| dispatch(&cli.command, &settings, &mut inputs));
    match outcome.and_then(|r| r.format(cli.format, command, &inputs)) {
        Ok(bytes) => match write_output(cli.output.as_deref(), &bytes, stdout) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                1
            }
        },
        Err(e) if e.is_usage() => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
        Err(e) => {
            let obj = json!({
                "schema": SCHEMA,
                "command": command,
                "inputs": inputs,
                "error": crate::error::ErrorObject::from(&e),
            });
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&obj).unwrap());
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Runs with the process arguments and standard streams.
pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

fn parse_dist(s: &str) -> Result<Distribution> {
    s.parse()
}

fn parse_weight(s: &str) -> Result<WeightFunction> {
    s.parse()
}

fn two_dists(specs: &[String]) -> Result<(Distribution, Distribution)> {
    match specs {
        [a, b] => Ok((parse_dist(a)?, parse_dist(b)?)),
        _ => Err(Error::Parse(format!(
            "expected exactly two --dist values, got {}",
            specs.len()
        ))),
    }
}

/// Parses `count:lo:hi` into a quantile grid, or the default grid.
fn time_grid(d: &Distribution, spec: Option<&str>) -> Result<Vec<f64>> {
    let Some(spec) = spec else {
        return Ok(default_grid(d));
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let [count, lo, hi] = parts.as_slice() else {
        return Err(Error::Parse(format!("--t-grid expects count:lo:hi, got '{spec}'")));
    };
    let bad = || Error::Parse(format!("--t-grid expects count:lo:hi, got '{spec}'"));
    let count: usize = count.parse().map_err(|_| bad())?;
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(Error::Parse(format!(
            "--t-grid bounds must satisfy 0 < lo < hi < 1, got '{spec}'"
        )));
    }
    quantile_grid(d, count, lo, hi)
}

fn settings_json(s: &QuadratureSettings) -> Value {
    json!({ "rel_tol": s.rel_tol, "abs_tol": s.abs_tol })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize to JSON")
}

fn measure_text(r: &MeasureResult) -> String {
    format!(
        "signed_value  {}\nmagnitude     {}\nmethod        {}\nerror_bound   {:e}\n",
        r.signed_value, r.magnitude, r.method, r.error_bound
    )
}

fn dispatch(cmd: &Command, s: &QuadratureSettings, inputs: &mut Value) -> Result<Rendered> {
    match cmd {
        Command::Measure(a) => {
            let (d, w) = (parse_dist(&a.dist)?, parse_weight(&a.weight)?);
            *inputs = json!({
                "kind": a.kind.estimator(), "dist": d.spec(), "weight": w, "n": a.n,
                "method": format!("{:?}", a.method).to_lowercase(), "settings": settings_json(s),
            });
            let none = || Error::InvalidParameter(format!("no closed form for {} with weight {w}", d.spec()));
            let r = match (a.kind, a.method) {
                (StaticKind::ResidualMin, MethodArg::Auto) => gwcrex_min(&d, &w, a.n, s)?,
                (StaticKind::ResidualMin, MethodArg::ClosedForm) => {
                    gwcrex_min_closed_form(&d, &w, a.n)?.ok_or_else(none)?
                }
                (StaticKind::ResidualMin, MethodArg::Quadrature) => gwcrex_min_quadrature(&d, &w, a.n, s)?,
                (StaticKind::PastMax, MethodArg::Auto) => gwcpex_max(&d, &w, a.n, s)?,
                (StaticKind::PastMax, MethodArg::ClosedForm) => {
                    gwcpex_max_closed_form(&d, &w, a.n)?.ok_or_else(none)?
                }
                (StaticKind::PastMax, MethodArg::Quadrature) => gwcpex_max_quadrature(&d, &w, a.n, s)?,
            };
            let csv = format!(
                "signed_value,magnitude,method,error_bound\n{},{},{},{}\n",
                r.signed_value, r.magnitude, r.method, r.error_bound
            );
            Ok(Rendered {
                text: measure_text(&r),
                csv: Some(csv),
                warnings: r.warnings.clone(),
                results: to_value(&r),
            })
        }
        Command::Dynamic(a) => {
            let (d, w) = (parse_dist(&a.dist)?, parse_weight(&a.weight)?);
            let grid = match &a.t {
                Some(t) => t.clone(),
                None => time_grid(&d, a.t_grid.as_deref())?,
            };
            let kind = match a.kind {
                CurveArg::ResidualMin => CurveKind::GwdcrexMin,
                CurveArg::PastMax => CurveKind::GwdcpexMax,
                CurveArg::ResidualKn => CurveKind::GwdcrexKn,
                CurveArg::PastKn => CurveKind::GwdcpexKn,
            };
            *inputs = json!({
                "kind": kind, "dist": d.spec(), "weight": w, "n": a.n, "k": a.k,
                "t_grid": grid, "settings": settings_json(s),
            });
            let curve = dynamic_curve(kind, &d, &w, a.n, a.k, &grid, s)?;
            let mut warnings: Vec<Warning> = Vec::new();
            for p in &curve.points {
                if let Ok(r) = &p.result {
                    for wn in &r.warnings {
                        if !warnings.contains(wn) {
                            warnings.push(wn.clone());
                        }
                    }
                }
            }
            let csv = curve.to_csv();
            Ok(Rendered {
                text: csv.replace(',', "\t"),
                csv: Some(csv),
                warnings,
                results: json!({ "failures": curve.failures(), "points": curve.points }),
            })
        }
        Command::Estimate(a) => {
            let w = parse_weight(&a.weight)?;
            let sample = read_sample_csv(&a.input)?;
            *inputs = json!({
                "input": a.input.display().to_string(), "observations": sample.len(),
                "kind": a.kind.estimator(), "weight": w, "n": a.n,
                "bootstrap": a.bootstrap, "level": a.level, "seed": a.seed,
            });
            let mut rows = Vec::new();
            let mut warnings = Vec::new();
            let mut text = String::new();
            let mut csv = String::from("n,signed_value,magnitude,method,ci_lower,ci_upper\n");
            for &n in &a.n {
                let r = estimate(&sample, a.kind.estimator(), &w, n)?;
                let ci = a
                    .bootstrap
                    .map(|b| bootstrap_ci(&sample, a.kind.estimator(), &w, n, b, a.level, a.seed))
                    .transpose()?;
                let (lo, hi) = ci.map_or((f64::NAN, f64::NAN), |c| c);
                csv.push_str(&format!(
                    "{n},{},{},{},{lo},{hi}\n",
                    r.signed_value, r.magnitude, r.method
                ));
                text.push_str(&format!(
                    "n={n:<4} signed_value {:<24} magnitude {}",
                    r.signed_value, r.magnitude
                ));
                if ci.is_some() {
                    text.push_str(&format!("  ci [{lo}, {hi}]"));
                }
                text.push('\n');
                for wn in &r.warnings {
                    if !warnings.contains(wn) {
                        warnings.push(wn.clone());
                    }
                }
                rows.push(json!({
                    "n": n, "signed_value": r.signed_value, "magnitude": r.magnitude,
                    "method": r.method, "error_bound": r.error_bound,
                    "ci": ci.map(|(l, h)| [l, h]),
                }));
            }
            Ok(Rendered {
                text,
                csv: Some(csv),
                warnings,
                results: Value::Array(rows),
            })
        }
        Command::OrderCheck(a) => {
            let (x, y) = two_dists(&a.dist)?;
            let w = parse_weight(&a.weight)?;
            let grid = time_grid(&x, a.t_grid.as_deref())?;
            let kind = match a.kind {
                OrderArg::Hazard => OrderKind::Hazard,
                OrderArg::ReversedHazard => OrderKind::ReversedHazard,
                OrderArg::Wdcrex => OrderKind::Wdcrex,
                OrderArg::Dcpwex => OrderKind::Dcpwex,
            };
            *inputs = json!({
                "kind": kind, "dist": [x.spec(), y.spec()], "weight": w, "n": a.n,
                "t_grid": grid, "tol": a.tol, "settings": settings_json(s),
            });
            let v = check_order(kind, &x, &y, &w, a.n, &grid, a.tol, s)?;
            Ok(Rendered::verdict(&v, to_value(&v)))
        }
        Command::Characterize(Characterize::Gpd(a)) | Command::Characterize(Characterize::Power(a)) => {
            let (d, w) = (parse_dist(&a.dist)?, parse_weight(&a.weight)?);
            let grid = time_grid(&d, a.t_grid.as_deref())?;
            *inputs = json!({
                "dist": d.spec(), "weight": w, "n": a.n, "t_grid": grid, "tol": a.tol,
                "settings": settings_json(s),
            });
            if let Command::Characterize(Characterize::Gpd(_)) = cmd {
                let o = gpd_test(&d, &w, a.n, &grid, a.tol, s)?;
                let mut r = Rendered::verdict(&o.verdict, to_value(&o));
                r.text.push_str(&format!("fitted_c      {}\n", o.fitted_c));
                if let (Some(c1), Some(shape)) = (o.c1, o.shape) {
                    r.text.push_str(&format!(
                        "c1            {c1}\nshape         {}\n",
                        to_value(&shape).as_str().unwrap()
                    ));
                }
                Ok(r)
            } else {
                let o = power_test(&d, &w, a.n, &grid, a.tol, s)?;
                let mut r = Rendered::verdict(&o.verdict, to_value(&o));
                r.text.push_str(&format!("fitted_k      {}\n", o.fitted_k));
                Ok(r)
            }
        }
        Command::Characterize(Characterize::Location(a)) => {
            let (x, y) = two_dists(&a.dist)?;
            let w = parse_weight(&a.weight)?;
            let ns: Vec<usize> = (1..=a.n_max).collect();
            let side = match a.side {
                SideArg::Residual => MeasureSide::Residual,
                SideArg::Past => MeasureSide::Past,
            };
            let times = a.times.as_ref().map(|t| (t[0], t[1]));
            *inputs = json!({
                "dist": [x.spec(), y.spec()], "weight": w, "side": side, "n": ns,
                "times": a.times, "tol": a.tol, "settings": settings_json(s),
            });
            let v = location_family_test(&x, &y, &w, &ns, side, times, a.tol, s)?;
            Ok(Rendered::verdict(&v, to_value(&v)))
        }
        Command::Characterize(Characterize::LocationScale(a)) => {
            let (x, y) = two_dists(&a.dist)?;
            let (wx, wy) = match a.weight.as_slice() {
                [w] => (parse_weight(w)?, parse_weight(w)?),
                [a, b] => (parse_weight(a)?, parse_weight(b)?),
                other => {
                    return Err(Error::Parse(format!(
                        "expected one or two --weight values, got {}",
                        other.len()
                    )))
                }
            };
            let ns: Vec<usize> = (1..=a.n_max).collect();
            *inputs = json!({
                "dist": [x.spec(), y.spec()], "weight": [&wx, &wy], "n": ns, "tol": a.tol,
                "settings": settings_json(s),
            });
            let v = location_scale_ratio_test(&x, &y, &wx, &wy, &ns, a.tol, s)?;
            Ok(Rendered::verdict(&v, to_value(&v)))
        }
        Command::Verify(a) => {
            *inputs = json!({ "seed": a.seed, "replicates": a.replicates, "settings": settings_json(s) });
            let report = inequality_report(&ReportConfig {
                mc_replicates: a.replicates,
                seed: a.seed,
                settings: *s,
            });
            let mut csv = String::from("claim,status,instances,printed_holds\n");
            for c in &report.claims {
                let ok = c.instances.iter().filter(|i| i.printed_holds).count();
                csv.push_str(&format!("{},{},{},{ok}\n", c.id, c.status.as_str(), c.instances.len()));
            }
            Ok(Rendered {
                text: report.to_text(),
                csv: Some(csv),
                warnings: Vec::new(),
                results: to_value(&report),
            })
        }
        Command::Mc(a) => {
            let w = parse_weight(&a.weight)?;
            let (est, exact) = match a.kind {
                McKind::Sum => {
                    let (x, y) = two_dists(&a.dist)?;
                    *inputs = json!({
                        "kind": "sum", "dist": [x.spec(), y.spec()], "weight": w,
                        "replicates": a.replicates, "seed": a.seed,
                    });
                    (mc_sum_cpex(&x, &y, &w, a.replicates, a.seed)?, None)
                }
                kind => {
                    let [spec] = a.dist.as_slice() else {
                        return Err(Error::Parse(format!("expected one --dist, got {}", a.dist.len())));
                    };
                    let d = parse_dist(spec)?;
                    let est_kind = if kind == McKind::ResidualMin {
                        StaticKind::ResidualMin
                    } else {
                        StaticKind::PastMax
                    };
                    *inputs = json!({
                        "kind": est_kind.estimator(), "dist": d.spec(), "weight": w, "n": a.n,
                        "replicates": a.replicates, "seed": a.seed,
                    });
                    let est = mc_measure(&d, &w, a.n, est_kind.estimator(), a.replicates, a.seed)?;
                    let exact = match est_kind {
                        StaticKind::ResidualMin => gwcrex_min(&d, &w, a.n, s),
                        StaticKind::PastMax => gwcpex_max(&d, &w, a.n, s),
                    }
                    .ok()
                    .map(|r| r.signed_value);
                    (est, exact)
                }
            };
            let mut text = format!("estimate      {}\nstderr        {}\n", est.value, est.stderr);
            if let Some(e) = exact {
                text.push_str(&format!(
                    "analytic      {e}\nz             {}\n",
                    (est.value - e) / est.stderr
                ));
            }
            Ok(Rendered {
                text,
                csv: Some(format!(
                    "value,stderr,replicates,seed,analytic\n{},{},{},{},{}\n",
                    est.value,
                    est.stderr,
                    est.replicates,
                    est.seed,
                    exact.unwrap_or(f64::NAN)
                )),
                warnings: Vec::new(),
                results: json!({ "estimate": est, "analytic": exact }),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["extropy-kit"];
        full.extend_from_slice(args);
        let code = run_with(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn measure_envelope() {
        let (code, out, _) = run(&[
            "measure",
            "--dist",
            "pareto2:k=1,h=2",
            "--weight",
            "const:1",
            "--kind",
            "residual-min",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["command"], "measure");
        assert!((v["results"]["signed_value"].as_f64().unwrap() + 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(v["inputs"]["dist"], "pareto2:k=1,h=2");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["--help"]).0, 0);
        assert_eq!(run(&["--version"]).0, 0);
        assert_eq!(run(&["measure"]).0, 1);
        assert_eq!(run(&["measure", "--kind", "residual-min", "--dist", "nope:a=1"]).0, 1);
        let (code, out, _) = run(&["measure", "--kind", "past-max", "--dist", "exponential:lambda=1"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["code"], "unbounded_support");
        assert_eq!(
            run(&[
                "dynamic",
                "--kind",
                "residual-min",
                "--dist",
                "exp:lambda=1",
                "--t-grid",
                "5:0.9:0.1"
            ])
            .0,
            1
        );
    }

    #[test]
    fn grid_parsing() {
        let d: Distribution = "uniform:a=0,b=1".parse().unwrap();
        assert_eq!(time_grid(&d, Some("3:0.25:0.75")).unwrap(), vec![0.25, 0.5, 0.75]);
        assert!(time_grid(&d, Some("3:0.25")).is_err());
        assert_eq!(time_grid(&d, None).unwrap().len(), 33);
    }
}
