//! Seeded experiment drivers behind the command-line tool.
//!
//! Every command takes a validated [`ExperimentConfig`] and returns its
//! output as a string. Work items run through [`Execution`], and results are
//! sorted before emission, so output is byte-identical for a given config no
//! matter how it was scheduled.

mod config;

pub use config::{ConfigError, ExperimentConfig, HamiltonianConfig, NGrid, NoiseConfig, Overrides};

use std::fmt::Write as _;

use rand::Rng as _;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::channels::{
    complete_noise, faulty_trotter, ideal_map, ideal_unitary, mtc_unitary, trotter_ideal, ChannelError, NoiseModel,
    TrotterPlan,
};
use crate::exec::{rng_stream, stream_id, Execution, Rng};
use crate::linalg::{c64, hermitian_exp, ComplexMatrix, LinalgError, SuperOperator};
use crate::metrics::{
    diamond_distance_unitary, diamond_norm_estimate, distance, noise_benchmarks, Metric, MetricError,
};
use crate::optimizer::{
    constants_ab, decoh_bound, round_trotter_number, t_max, OptimizerError, TradeoffConstants, TrotterNumber,
};
use crate::sdp::SdpStatus;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest Trotter number scanned when measuring an optimum.
const MAX_SCAN: u64 = 10_000;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Optimizer(#[from] OptimizerError),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// A config that passed validation, with everything materialized.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub terms: Vec<ComplexMatrix>,
    pub grid: Vec<u64>,
    pub metrics: Vec<Metric>,
    pub noise: Option<NoiseModel>,
    pub hash: String,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            terms: config.hamiltonian.terms()?,
            grid: config.n_grid.values()?,
            metrics: config.parsed_metrics()?,
            noise: config.noise.model(config.master_seed),
            hash: config.hash(),
            config,
        })
    }

    pub fn from_toml(text: &str, overrides: &Overrides) -> Result<Self> {
        Self::new(ExperimentConfig::from_toml_str(text)?.apply(overrides))
    }

    pub fn dim(&self) -> usize {
        self.terms[0].rows()
    }

    fn plan(&self, n: u64) -> Result<TrotterPlan> {
        let plan = TrotterPlan::new(self.terms.clone(), self.config.t, n)?;
        Ok(crate::channels::rescale_time_energy(&plan, self.config.a)?)
    }

    fn header(&self, command: &str) -> String {
        format!("# trotterlab {VERSION} {command} config-sha256={}\n", self.hash)
    }
}

fn fmt_value(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.10e}")
    }
}

fn status_label(status: SdpStatus) -> &'static str {
    match status {
        SdpStatus::Optimal => "ok",
        SdpStatus::IterationCap => "sdp_iteration_cap",
        SdpStatus::NumericalFailure => "sdp_numerical_failure",
    }
}

/// CSV-safe one-line error text.
fn error_label(e: &dyn std::fmt::Display) -> String {
    let text: String = e.to_string().chars().map(|c| if c == ',' || c == '\n' { ';' } else { c }).collect();
    format!("error: {text}")
}

/// Distance plus a status word. Diamond solves that stop early still report
/// their upper bound, with the status saying so.
fn measure(metric: &Metric, ta: &SuperOperator, tb: &SuperOperator, tol: f64) -> (f64, String) {
    match metric {
        Metric::Diamond => match diamond_norm_estimate(&ta.sub(tb), tol) {
            Ok(est) => (est.value.clamp(0.0, 2.0 + tol), status_label(est.status).into()),
            Err(e) => (f64::NAN, error_label(&e)),
        },
        _ => match distance(metric, ta, tb, tol) {
            Ok(v) => (v, "ok".into()),
            Err(e) => (f64::NAN, error_label(&e)),
        },
    }
}

/// The noisy channel at grid point `index`. MTC draws use stream
/// `(run, index)` of the master seed, so the sweep sees run 0 of the
/// Monte-Carlo command.
fn noisy_channel(exp: &Experiment, plan: &TrotterPlan, run: usize, index: usize) -> Result<SuperOperator> {
    match &exp.noise {
        None => Ok(trotter_ideal(plan)?),
        Some(noise) => {
            let mut rng = rng_stream(exp.config.master_seed, stream_id(run, index));
            Ok(faulty_trotter(plan, noise, Some(&mut rng))?)
        }
    }
}

/// Analytic bound model for one metric; `Failed` where the metric's constants
/// could not be evaluated.
#[derive(Clone, Debug)]
enum BoundModel {
    Tradeoff(TradeoffConstants),
    Decoh { a_const: f64, gamma: f64 },
    Failed(String),
}

impl BoundModel {
    fn value(&self, exp: &Experiment, n: u64) -> f64 {
        match self {
            BoundModel::Tradeoff(k) => k.bound(n as f64),
            &BoundModel::Decoh { a_const, gamma } => {
                decoh_bound(n, exp.config.t, gamma, exp.config.a, a_const, exp.dim())
            }
            BoundModel::Failed(_) => f64::NAN,
        }
    }
}

fn bound_model(exp: &Experiment, metric: &Metric) -> BoundModel {
    let (a_const, b_const) = match constants_ab(&exp.terms, metric, exp.config.sdp_tol) {
        Ok(ab) => ab,
        Err(e) => return BoundModel::Failed(error_label(&e)),
    };
    let (t, d) = (exp.config.t, exp.dim());
    match exp.noise {
        None => BoundModel::Tradeoff(TradeoffConstants::mtc(a_const, b_const, t, 0.0, *metric, d)),
        Some(NoiseModel::Mtc { sigma, .. }) | Some(NoiseModel::AvgMtc { sigma }) => {
            BoundModel::Tradeoff(TradeoffConstants::mtc(a_const, b_const, t, sigma * exp.config.a, *metric, d))
        }
        Some(NoiseModel::Depol { p }) => BoundModel::Tradeoff(TradeoffConstants::depol(a_const, p, t, *metric, d)),
        Some(NoiseModel::Decoh { gamma }) => BoundModel::Decoh { a_const, gamma },
    }
}

/// One row per `(n, metric)`: distance of the noisy Trotter channel from the
/// ideal evolution, the analytic bound, and the complete-noise benchmark.
pub fn cmd_sweep(exp: &Experiment, exec: Execution) -> Result<String> {
    let ideal = ideal_map(&exp.plan(1)?)?;
    let models: Vec<BoundModel> = exp.metrics.iter().map(|m| bound_model(exp, m)).collect();
    let rows = exec.map(&exp.grid, |index, &n| -> Result<Vec<String>> {
        let channel = noisy_channel(exp, &exp.plan(n)?, 0, index)?;
        let mut lines = Vec::with_capacity(exp.metrics.len());
        for (metric, model) in exp.metrics.iter().zip(&models) {
            let (value, mut status) = measure(metric, &channel, &ideal, exp.config.sdp_tol);
            if let BoundModel::Failed(why) = model {
                if status == "ok" {
                    status = format!("bound {why}");
                }
            }
            lines.push(format!(
                "{n},{metric},{},{},{},{status}",
                fmt_value(value),
                fmt_value(model.value(exp, n)),
                fmt_value(metric.benchmark(exp.dim())),
            ));
        }
        Ok(lines)
    });
    let mut out = exp.header("sweep");
    out.push_str("n,metric,exact_distance,bound,benchmark,status\n");
    for row in rows {
        for line in row? {
            out.push_str(&line);
            out.push('\n');
        }
    }
    Ok(out)
}

/// Row labels of the Monte-Carlo CSV, in emission order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RunId {
    Run(usize),
    Mean,
    AveragedMap,
    /// The closed-form Gaussian average, for comparison with `AveragedMap`.
    AvgMtc,
}

impl std::fmt::Display for RunId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunId::Run(r) => write!(f, "{r}"),
            RunId::Mean => f.write_str("mean"),
            RunId::AveragedMap => f.write_str("averaged_map"),
            RunId::AvgMtc => f.write_str("avg_mtc"),
        }
    }
}

/// Per-run distance between two unitary channels.
fn unitary_distance(metric: &Metric, u: &ComplexMatrix, v: &ComplexMatrix, tol: f64) -> Result<f64> {
    Ok(match metric {
        Metric::Diamond => diamond_distance_unitary(u, v)?,
        _ => distance(metric, &SuperOperator::unitary(u)?, &SuperOperator::unitary(v)?, tol)?,
    })
}

/// Per-run MTC distances, their mean, the distance of the empirical average
/// channel, and the analytic averaged channel, for every `n` and metric.
pub fn cmd_montecarlo(exp: &Experiment, exec: Execution) -> Result<String> {
    let sigma = match exp.noise {
        Some(NoiseModel::Mtc { sigma, .. }) => sigma,
        _ => return Err(ExperimentError::Unsupported("montecarlo needs noise model \"mtc\"".into())),
    };
    let runs = exp.config.runs;
    let tol = exp.config.sdp_tol;
    let target = ideal_unitary(&exp.plan(1)?)?;
    let ideal = SuperOperator::unitary(&target)?;

    let blocks = exec.map(&exp.grid, |index, &n| -> Result<Vec<(usize, RunId, String)>> {
        let plan = exp.plan(n)?;
        let unitaries = (0..runs)
            .map(|r| mtc_unitary(&plan, sigma, &mut rng_stream(exp.config.master_seed, stream_id(r, index))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let d2 = exp.dim() * exp.dim();
        let mut sum = ComplexMatrix::zeros(d2, d2);
        for u in &unitaries {
            sum = &sum + SuperOperator::unitary(u)?.matrix();
        }
        let averaged = SuperOperator::from_matrix(sum.scale_real(1.0 / runs as f64))?;
        let analytic = faulty_trotter::<Rng>(&plan, &NoiseModel::AvgMtc { sigma }, None)?;

        let mut rows = Vec::new();
        for (mi, metric) in exp.metrics.iter().enumerate() {
            let mut total = 0.0;
            for (r, u) in unitaries.iter().enumerate() {
                let v = unitary_distance(metric, u, &target, tol)?;
                total += v;
                rows.push((mi, RunId::Run(r), fmt_value(v)));
            }
            rows.push((mi, RunId::Mean, fmt_value(total / runs as f64)));
            rows.push((mi, RunId::AveragedMap, fmt_value(measure(metric, &averaged, &ideal, tol).0)));
            rows.push((mi, RunId::AvgMtc, fmt_value(measure(metric, &analytic, &ideal, tol).0)));
        }
        Ok(rows)
    });

    let mut out = exp.header("montecarlo");
    out.push_str("run_id,n,metric,value\n");
    for (block, &n) in blocks.into_iter().zip(&exp.grid) {
        let mut rows = block?;
        rows.sort_by_key(|r| (r.0, r.1));
        for (mi, id, value) in rows {
            let _ = writeln!(out, "{id},{n},{},{value}", exp.metrics[mi]);
        }
    }
    Ok(out)
}

/// Measured integer optimum of the exact distance curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasuredOptimum {
    pub n: u64,
    pub distance: f64,
}

/// Scans `n = 1..=n_max` and returns the smallest minimizer.
pub fn measured_optimum(exp: &Experiment, metric: &Metric, n_max: u64, exec: Execution) -> Result<MeasuredOptimum> {
    let ideal = ideal_map(&exp.plan(1)?)?;
    let ns: Vec<u64> = (1..=n_max.max(1)).collect();
    let values = exec.map(&ns, |index, &n| -> Result<f64> {
        let channel = noisy_channel(exp, &exp.plan(n)?, 0, index)?;
        Ok(distance(metric, &channel, &ideal, exp.config.sdp_tol)?)
    });
    let mut best = MeasuredOptimum { n: 0, distance: f64::INFINITY };
    for (&n, v) in ns.iter().zip(values) {
        let v = v?;
        if v < best.distance {
            best = MeasuredOptimum { n, distance: v };
        }
    }
    Ok(best)
}

/// Predicted and measured optimum for one metric.
#[derive(Clone, Debug)]
pub struct OptimumReport {
    pub metric: Metric,
    pub constants: TradeoffConstants,
    pub n_star: Option<f64>,
    pub n_integer: TrotterNumber,
    pub d_at_optimum: Option<f64>,
    pub t_max: Option<f64>,
    pub measured: MeasuredOptimum,
}

pub fn optimum_reports(exp: &Experiment, dmax: Option<f64>, exec: Execution) -> Result<Vec<OptimumReport>> {
    let (t, d) = (exp.config.t, exp.dim());
    let mut reports = Vec::new();
    for metric in &exp.metrics {
        let (a_const, b_const) = constants_ab(&exp.terms, metric, exp.config.sdp_tol)?;
        let (constants, sigma) = match exp.noise {
            Some(NoiseModel::AvgMtc { sigma }) | Some(NoiseModel::Mtc { sigma, .. }) => {
                let s = sigma * exp.config.a;
                (TradeoffConstants::mtc(a_const, b_const, t, s, *metric, d), Some(s))
            }
            Some(NoiseModel::Depol { p }) => (TradeoffConstants::depol(a_const, p, t, *metric, d), None),
            _ => return Err(ExperimentError::Unsupported("optimum needs noise model \"avg_mtc\" or \"depol\"".into())),
        };
        let n_integer = if constants.c > 0.0 {
            round_trotter_number(constants.c, constants.d)?
        } else {
            TrotterNumber::NoFiniteOptimum
        };
        let n_star = constants.n_star().ok();
        let scan_to = match n_integer {
            TrotterNumber::Finite(k) => (2 * k + 2).clamp(10, MAX_SCAN),
            TrotterNumber::NoFiniteOptimum => exp.grid.last().copied().unwrap_or(1).min(MAX_SCAN),
        };
        reports.push(OptimumReport {
            metric: *metric,
            constants,
            n_star,
            n_integer,
            d_at_optimum: constants.d_at_optimum().ok(),
            t_max: match (dmax, sigma) {
                (Some(dm), Some(s)) => t_max(dm, a_const, b_const, s).ok(),
                _ => None,
            },
            measured: measured_optimum(exp, metric, scan_to, exec)?,
        });
    }
    Ok(reports)
}

/// Plain-text optimum report, one `[metric]` section per metric.
pub fn cmd_optimum(exp: &Experiment, dmax: Option<f64>, exec: Execution) -> Result<String> {
    let mut out = exp.header("optimum");
    let opt = |x: Option<f64>| x.map(fmt_value).unwrap_or_else(|| "none".into());
    for r in optimum_reports(exp, dmax, exec)? {
        let k = &r.constants;
        let _ = writeln!(out, "[{}]", r.metric);
        let _ = writeln!(out, "A = {}", fmt_value(k.a));
        let _ = writeln!(out, "B = {}", fmt_value(k.b));
        let _ = writeln!(out, "C = {}", fmt_value(k.c));
        let _ = writeln!(out, "D = {}", fmt_value(k.d));
        let _ = writeln!(out, "n_star = {}", opt(r.n_star));
        match r.n_integer {
            TrotterNumber::Finite(n) => {
                let _ = writeln!(out, "n_integer = {n}");
            }
            TrotterNumber::NoFiniteOptimum => {
                let reason = if k.c == 0.0 { "Trotter term vanishes (A = 0)" } else { "noise term vanishes (D = 0)" };
                let _ = writeln!(out, "n_integer = no finite optimum: {reason}");
            }
        }
        let _ = writeln!(out, "d_at_optimum = {}", opt(r.d_at_optimum));
        if dmax.is_some() {
            let _ = writeln!(out, "t_max = {}", opt(r.t_max));
        }
        let _ = writeln!(out, "measured_n = {}", r.measured.n);
        let _ = writeln!(out, "measured_distance = {}", fmt_value(r.measured.distance));
    }
    Ok(out)
}

/// One live benchmark check.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkRow {
    pub d: usize,
    pub metric: &'static str,
    pub formula: f64,
    pub live: f64,
    pub tolerance: f64,
}

impl BenchmarkRow {
    pub fn passed(&self) -> bool {
        (self.live - self.formula).abs() <= self.tolerance
    }
}

fn random_unitary(d: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = rng_stream(seed, 0);
    let g = ComplexMatrix::from_fn(d, d, |_, _| c64(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    Ok(hermitian_exp(&g.hermitian_part(), 1.0)?)
}

/// Distance of a random unitary channel from complete noise under each
/// metric, against `2 − 2/d` (no ancilla) and `2 − 2/d²`.
pub fn benchmark_rows(d: usize, sdp_tol: f64, seed: u64, exec: Execution) -> Result<Vec<BenchmarkRow>> {
    if d < 2 {
        return Err(ExperimentError::Unsupported(format!("benchmarks need d >= 2, got {d}")));
    }
    let (unstabilized, stabilized) = noise_benchmarks(d);
    let unitary = SuperOperator::unitary(&random_unitary(d, seed)?)?;
    let noise = complete_noise(d)?;
    let checks = [
        (Metric::JDist, stabilized, 1e-10),
        (Metric::Diamond, stabilized, sdp_tol.max(1e-9)),
        (Metric::induced(seed), unstabilized, 1e-4),
    ];
    exec.map(&checks, |_, &(metric, formula, tolerance)| -> Result<BenchmarkRow> {
        Ok(BenchmarkRow { d, metric: metric.name(), formula, live: distance(&metric, &unitary, &noise, sdp_tol)?, tolerance })
    })
    .into_iter()
    .collect()
}

/// Benchmark table and whether every live value matched its formula.
pub fn cmd_benchmarks(d: usize, sdp_tol: f64, seed: u64, exec: Execution) -> Result<(String, bool)> {
    let rows = benchmark_rows(d, sdp_tol, seed, exec)?;
    let (unstabilized, stabilized) = noise_benchmarks(d);
    let mut out = format!("# trotterlab {VERSION} benchmarks d={d}\n");
    let _ = writeln!(out, "# 2-2/d = {}  2-2/d^2 = {}", fmt_value(unstabilized), fmt_value(stabilized));
    out.push_str("d,metric,formula,live,abs_error,pass\n");
    let mut all = true;
    for r in &rows {
        all &= r.passed();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.d,
            r.metric,
            fmt_value(r.formula),
            fmt_value(r.live),
            fmt_value((r.live - r.formula).abs()),
            r.passed()
        );
    }
    Ok((out, all))
}
