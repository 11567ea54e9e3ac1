//! Trotter-error versus gate-noise tradeoff.
//!
//! The total distance after `n` steps is bounded by `C/n^{s-1} + D·n`, with
//! `C` the product-formula error constant and `D` the noise cost per step.
//! For the first-order formula under mistimed control `C = A t²/2` and
//! `D = B σ²`, where `A` and `B` are norms of the two maps
//!
//! ```text
//!   ρ ↦ K ρ + ρ K†,  K = Σ_{j<l} [H_l, H_j]
//!   ρ ↦ ½ Σ_j (H_j² ρ + ρ H_j² - 2 H_j ρ H_j)
//! ```
//!
//! that survive the Gaussian average of one step.

use thiserror::Error;

use crate::channels::{commutator_map, dephasing_map, ChannelError};
use crate::linalg::ComplexMatrix;
use crate::metrics::{map_norm, noise_benchmarks, Metric, MetricError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("order s must lie in 2..=8, got {0}")]
    InvalidOrder(u32),
    #[error("no finite optimum: the noise cost vanishes")]
    NoFiniteOptimum,
    #[error("optimum at zero time: every step fully depolarizes")]
    ZeroTimeOptimum,
    #[error("probability must lie in [0, 1], got {0}")]
    BadProbability(f64),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

pub type Result<T> = std::result::Result<T, OptimizerError>;

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(OptimizerError::NonPositive { name, value })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(OptimizerError::NonPositive { name, value })
    }
}

fn check_order(s: u32) -> Result<()> {
    if (2..=8).contains(&s) {
        Ok(())
    } else {
        Err(OptimizerError::InvalidOrder(s))
    }
}

/// Constants of one bound `C/n^{s-1} + D·n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TradeoffConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub s: u32,
    pub metric: Metric,
    pub dim: usize,
}

impl TradeoffConstants {
    /// Mistimed control with per-insertion spread `sigma`.
    pub fn mtc(a: f64, b: f64, t: f64, sigma: f64, metric: Metric, dim: usize) -> Self {
        let (c, d) = mtc_constants(a, b, t, sigma);
        Self { a, b, c, d, s: 2, metric, dim }
    }

    /// Per-step depolarization with probability `p`; the noise cost per step
    /// is `p` times the complete-noise benchmark of `metric`.
    pub fn depol(a: f64, p: f64, t: f64, metric: Metric, dim: usize) -> Self {
        Self { a, b: 0.0, c: (1.0 - p) * a * t * t / 2.0, d: p * metric.benchmark(dim), s: 2, metric, dim }
    }

    pub fn bound(&self, n: f64) -> f64 {
        self.c / n.powi(self.s as i32 - 1) + self.d * n
    }

    pub fn n_star(&self) -> Result<f64> {
        n_star(self.c, self.d, self.s)
    }

    pub fn d_at_optimum(&self) -> Result<f64> {
        d_at_optimum(self.c, self.d, self.s)
    }
}

/// Bound value at integer `n`.
pub fn bound_curve(n: u64, constants: &TradeoffConstants) -> f64 {
    constants.bound(n as f64)
}

/// `(A, B)` under `metric`.
pub fn constants_ab(terms: &[ComplexMatrix], metric: &Metric, sdp_tol: f64) -> Result<(f64, f64)> {
    let a = map_norm(metric, &commutator_map(terms)?, sdp_tol)?;
    let b = map_norm(metric, &dephasing_map(terms)?, sdp_tol)?;
    Ok((a, b))
}

/// Sum over pairs `j < l` of the norm of `ρ ↦ [H_l,H_j] ρ + ρ [H_j,H_l]`;
/// an upper bound on `A` by the triangle inequality.
pub fn pairwise_commutator_sum(terms: &[ComplexMatrix], metric: &Metric, sdp_tol: f64) -> Result<f64> {
    let mut total = 0.0;
    for j in 0..terms.len() {
        for l in j + 1..terms.len() {
            let pair = [terms[j].clone(), terms[l].clone()];
            total += map_norm(metric, &commutator_map(&pair)?, sdp_tol)?;
        }
    }
    Ok(total)
}

/// Real minimizer of `C/n^{s-1} + D·n`: `(C(s-1)/D)^{1/s}`.
pub fn n_star(c: f64, d: f64, s: u32) -> Result<f64> {
    positive("C", c)?;
    positive("D", d)?;
    check_order(s)?;
    Ok((c * (s - 1) as f64 / d).powf(1.0 / s as f64))
}

/// Bound at the real optimum: `(D s/(s-1)) · n*`.
pub fn d_at_optimum(c: f64, d: f64, s: u32) -> Result<f64> {
    let n = n_star(c, d, s)?;
    Ok(d * s as f64 / (s - 1) as f64 * n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrotterNumber {
    Finite(u64),
    /// `D = 0`: the bound decreases forever.
    NoFiniteOptimum,
}

/// Integer minimizer of `C/n + D·n` for `s = 2`. Only `⌊n*⌋` and `⌈n*⌉` can
/// win; `⌈n*⌉ = ⌊n*⌋ + 1` wins exactly when `C > D·⌊n*⌋·⌈n*⌉`, ties going to
/// the floor.
pub fn round_trotter_number(c: f64, d: f64) -> Result<TrotterNumber> {
    positive("C", c)?;
    non_negative("D", d)?;
    if d == 0.0 {
        return Ok(TrotterNumber::NoFiniteOptimum);
    }
    let floor = ((c / d).sqrt().floor() as u64).max(1);
    let f = floor as f64;
    Ok(TrotterNumber::Finite(if c > d * f * (f + 1.0) { floor + 1 } else { floor }))
}

/// `(A t²/2, B σ²)`.
pub fn mtc_constants(a: f64, b: f64, t: f64, sigma: f64) -> (f64, f64) {
    (a * t * t / 2.0, b * sigma * sigma)
}

/// Longest time reachable within distance `d_max`: `d_max / (σ √(2AB))`.
pub fn t_max(d_max: f64, a: f64, b: f64, sigma: f64) -> Result<f64> {
    positive("D_max", d_max)?;
    positive("A", a)?;
    positive("B", b)?;
    positive("sigma", sigma)?;
    Ok(d_max / (sigma * (2.0 * a * b).sqrt()))
}

fn depol_benchmark(d: usize, large_d: bool) -> f64 {
    if large_d {
        2.0
    } else {
        noise_benchmarks(d).1
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(OptimizerError::BadProbability(p));
    }
    if p == 0.0 {
        return Err(OptimizerError::NoFiniteOptimum);
    }
    if p == 1.0 {
        return Err(OptimizerError::ZeroTimeOptimum);
    }
    Ok(())
}

/// `C = (1-p) A t²/2`, `D = p (2 - 2/d²)`, or `D = 2p` with `large_d`.
pub fn depol_constants(a: f64, p: f64, t: f64, d: usize, large_d: bool) -> Result<(f64, f64)> {
    check_probability(p)?;
    Ok(((1.0 - p) * a * t * t / 2.0, p * depol_benchmark(d, large_d)))
}

pub fn n_star_depol(a: f64, p: f64, t: f64, d: usize, large_d: bool) -> Result<f64> {
    let (c, dd) = depol_constants(a, p, t, d, large_d)?;
    n_star(c, dd, 2)
}

pub fn d_star_depol(a: f64, p: f64, t: f64, d: usize, large_d: bool) -> Result<f64> {
    let (c, dd) = depol_constants(a, p, t, d, large_d)?;
    d_at_optimum(c, dd, 2)
}

/// `(1 - p) A t²/(2n) + p (2 - 2/d²)` with `p = 1 - exp(-γ t/a)`.
pub fn decoh_bound(n: u64, t: f64, gamma: f64, a: f64, big_a: f64, d: usize) -> f64 {
    let p = 1.0 - (-gamma * t / a).exp();
    (1.0 - p) * big_a * t * t / (2.0 * n as f64) + p * noise_benchmarks(d).1
}

/// Best order among caller-supplied `(s, C(s), D(s))`, by the bound at each
/// order's real optimum. Returns `(s, n*, D(n*))`.
pub fn best_order(candidates: &[(u32, f64, f64)]) -> Result<(u32, f64, f64)> {
    let mut best: Option<(u32, f64, f64)> = None;
    for &(s, c, d) in candidates {
        let n = n_star(c, d, s)?;
        let value = d_at_optimum(c, d, s)?;
        if best.is_none_or(|b| value < b.2) {
            best = Some((s, n, value));
        }
    }
    best.ok_or(OptimizerError::InvalidOrder(0))
}
