//! Distances between states and between channels.

mod circle;
mod diamond;

pub use circle::{smallest_enclosing_circle, Circle};
pub use diamond::diamond_problem;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::exec::{rng_stream, Execution};
use crate::linalg::{c64, trace_norm, ComplexMatrix, HermitianEigen, LinalgError, SuperOperator};
use crate::sdp::{SdpError, SdpStatus};

/// Default restart count of the induced trace-norm heuristic.
pub const DEFAULT_RESTARTS: usize = 64;
/// Largest ascent steps taken from one starting state.
const ASCENT_STEPS: usize = 500;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("diamond-norm solve stopped ({status:?}) with bounds [{lower}, {upper}]")]
    NotConverged { status: SdpStatus, lower: f64, upper: f64 },
    #[error("no points given")]
    Empty,
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
}

pub type Result<T> = std::result::Result<T, MetricError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    Diamond,
    JDist,
    /// Lower bound on the unstabilized induced trace norm (no ancilla).
    InducedTraceHeuristic { restarts: usize, seed: u64 },
}

impl Metric {
    pub fn induced(seed: u64) -> Self {
        Metric::InducedTraceHeuristic { restarts: DEFAULT_RESTARTS, seed }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Diamond => "diamond",
            Metric::JDist => "j",
            Metric::InducedTraceHeuristic { .. } => "induced",
        }
    }

    /// Distance of any unitary channel from complete noise under this metric.
    pub fn benchmark(&self, d: usize) -> f64 {
        let (unstabilized, stabilized) = noise_benchmarks(d);
        match self {
            Metric::InducedTraceHeuristic { .. } => unstabilized,
            _ => stabilized,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Metric::InducedTraceHeuristic { restarts: 0, .. } => {
                Err(MetricError::InvalidMetric("induced heuristic needs at least one restart".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = MetricError;

    /// Accepts `diamond`, `j`, `induced` (seed 0, default restarts).
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "diamond" => Ok(Metric::Diamond),
            "j" | "jdist" | "j-distance" => Ok(Metric::JDist),
            "induced" | "induced-trace" => Ok(Metric::induced(0)),
            other => Err(MetricError::InvalidMetric(format!("unknown metric '{other}'"))),
        }
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(MetricError::DimensionMismatch(a, b))
    }
}

/// `‖ρA − ρB‖₁`, in `[0, 2]` for density matrices.
pub fn trace_distance(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<f64> {
    check_dims(rho_a.rows(), rho_b.rows())?;
    check_dims(rho_a.cols(), rho_b.cols())?;
    Ok(trace_norm(&(rho_a - rho_b))?)
}

/// Trace distance of the unit-trace Choi states.
pub fn j_distance(ta: &SuperOperator, tb: &SuperOperator) -> Result<f64> {
    check_dims(ta.dim(), tb.dim())?;
    j_norm(&ta.sub(tb))
}

/// `‖J(Φ)‖₁ / d` for any linear map.
pub fn j_norm(map: &SuperOperator) -> Result<f64> {
    Ok(trace_norm(&map.choi_unnormalized())? / map.dim() as f64)
}

/// Closed form for unitary channels: the diameter of the smallest circle
/// enclosing the spectrum of `U V†`.
pub fn diamond_distance_unitary(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    check_dims(u.rows(), v.rows())?;
    u.ensure_unitary(1e-9)?;
    v.ensure_unitary(1e-9)?;
    let points: Vec<(f64, f64)> = (u * &v.adjoint()).eigenvalues()?.iter().map(|z| (z.re, z.im)).collect();
    let circle = smallest_enclosing_circle(&points).ok_or(MetricError::Empty)?;
    Ok((2.0 * circle.radius).min(2.0))
}

/// Certified diamond-norm bounds from one SDP solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiamondEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub status: SdpStatus,
    pub iterations: usize,
}

/// Diamond norm of a Hermitian-preserving (or general) map.
pub fn diamond_norm_estimate(map: &SuperOperator, tol: f64) -> Result<DiamondEstimate> {
    if map.matrix().max_abs() == 0.0 {
        return Ok(DiamondEstimate { value: 0.0, lower: 0.0, upper: 0.0, status: SdpStatus::Optimal, iterations: 0 });
    }
    let sol = diamond::solve(map, tol)?;
    let lower = sol.dual.max(0.0);
    let upper = sol.primal.max(lower);
    Ok(DiamondEstimate { value: upper, lower, upper, status: sol.status, iterations: sol.iterations })
}

/// Diamond norm, failing unless the duality gap reached `tol`.
pub fn diamond_norm(map: &SuperOperator, tol: f64) -> Result<f64> {
    let est = diamond_norm_estimate(map, tol)?;
    if est.status != SdpStatus::Optimal {
        return Err(MetricError::NotConverged { status: est.status, lower: est.lower, upper: est.upper });
    }
    Ok(est.value)
}

/// `‖TA − TB‖⋄`, clamped to `[0, 2 + tol]`.
pub fn diamond_distance(ta: &SuperOperator, tb: &SuperOperator, tol: f64) -> Result<f64> {
    check_dims(ta.dim(), tb.dim())?;
    Ok(diamond_norm(&ta.sub(tb), tol)?.clamp(0.0, 2.0 + tol))
}

fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let mut v = ComplexMatrix::from_fn(d, 1, |_, _| c64(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let norm = v.frobenius_norm();
    v = v.scale_real(1.0 / norm);
    &v * &v.adjoint()
}

fn sign_matrix(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = HermitianEigen::of_hermitian_part(m)?;
    Ok(eig.map_spectrum(|x| c64(if x >= 0.0 { 1.0 } else { -1.0 }, 0.0)))
}

fn top_eigenvector(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = HermitianEigen::of_hermitian_part(m)?;
    let d = m.rows();
    let v = ComplexMatrix::from_fn(d, 1, |r, _| eig.vectors[(r, d - 1)]);
    Ok(&v * &v.adjoint())
}

/// Alternating ascent from one start: with `G` the sign of `Φ(ψψ†)`, the next
/// state is the top eigenvector of `Φ†(G)`. Never decreases the objective.
fn ascend(map: &SuperOperator, adjoint: &SuperOperator, start: ComplexMatrix) -> Result<f64> {
    let mut diff = map.apply(&start)?;
    let mut best = trace_norm(&diff)?;
    for _ in 0..ASCENT_STEPS {
        let g = sign_matrix(&diff)?;
        let next_diff = map.apply(&top_eigenvector(&adjoint.apply(&g)?)?)?;
        let value = trace_norm(&next_diff)?;
        if value <= best + 1e-14 {
            best = best.max(value);
            break;
        }
        best = value;
        diff = next_diff;
    }
    Ok(best)
}

/// Multistart lower bound on `max_ψ ‖Φ(ψψ†)‖₁` over pure system states.
/// Restart `r` draws its start from stream `r` of `seed`.
pub fn induced_trace_norm_heuristic(map: &SuperOperator, restarts: usize, seed: u64, exec: Execution) -> Result<f64> {
    let adjoint = map.adjoint_map();
    let values = exec.map_range(restarts.max(1), |r| {
        let start = random_pure_state(map.dim(), &mut rng_stream(seed, r as u64));
        ascend(map, &adjoint, start)
    });
    let mut best = 0.0f64;
    for v in values {
        best = best.max(v?);
    }
    Ok(best)
}

/// Heuristic unstabilized induced trace distance; a lower bound, labelled so.
pub fn induced_trace_distance_heuristic(ta: &SuperOperator, tb: &SuperOperator, cfg: &Metric) -> Result<f64> {
    check_dims(ta.dim(), tb.dim())?;
    let (restarts, seed) = match *cfg {
        Metric::InducedTraceHeuristic { restarts, seed } => (restarts, seed),
        _ => (DEFAULT_RESTARTS, 0),
    };
    cfg.validate()?;
    Ok(induced_trace_norm_heuristic(&ta.sub(tb), restarts, seed, Execution::default())?.min(2.0))
}

/// `(2 − 2/d, 2 − 2/d²)`: distance of any unitary channel from complete
/// noise, without and with ancilla assistance.
pub fn noise_benchmarks(d: usize) -> (f64, f64) {
    let d = d as f64;
    (2.0 - 2.0 / d, 2.0 - 2.0 / (d * d))
}

/// Channel distance under `metric`.
pub fn distance(metric: &Metric, ta: &SuperOperator, tb: &SuperOperator, sdp_tol: f64) -> Result<f64> {
    match metric {
        Metric::Diamond => diamond_distance(ta, tb, sdp_tol),
        Metric::JDist => j_distance(ta, tb),
        Metric::InducedTraceHeuristic { .. } => induced_trace_distance_heuristic(ta, tb, metric),
    }
}

/// Norm of a Hermitian-preserving map under `metric`, evaluated the same way
/// as the channel distances but without clamping.
pub fn map_norm(metric: &Metric, map: &SuperOperator, sdp_tol: f64) -> Result<f64> {
    match *metric {
        Metric::Diamond => diamond_norm(map, sdp_tol),
        Metric::JDist => j_norm(map),
        Metric::InducedTraceHeuristic { restarts, seed } => {
            metric.validate()?;
            induced_trace_norm_heuristic(map, restarts, seed, Execution::default())
        }
    }
}

#[cfg(test)]
mod tests;
