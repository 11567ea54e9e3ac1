//! Primal-dual path-following with the HKM search direction.
//!
//! With `S(y) = F0 + Σ y_i F_i` the solver treats
//!
//! ```text
//!   min  cᵀy        s.t.  S(y) ⪰ 0
//!   max  -⟨F0, X⟩   s.t.  ⟨F_i, X⟩ = c_i,  X ⪰ 0
//! ```
//!
//! as a pair. The first is the upper bound ("primal" in the reported
//! solution), the second the lower bound. Each iteration targets the
//! central-path point `XS = σμI` with a fixed reduction factor `σ`.

use nalgebra::{Cholesky, DMatrix};

use super::{BlockEntries, SdpError, SdpProblem};
use crate::linalg::{c64, HermitianEigen, ComplexMatrix, C64};

/// Centering (barrier reduction) factor.
const SIGMA: f64 = 0.3;
/// Fraction of the distance to the cone boundary taken per step.
const STEP_FRACTION: f64 = 0.98;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    IterationCap,
    NumericalFailure,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterateRecord {
    pub primal: f64,
    pub dual: f64,
    pub mu: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    /// Objective at the final `y` (upper bound when feasible).
    pub primal: f64,
    /// `-⟨F0, X⟩` at the final multipliers (lower bound when feasible).
    pub dual: f64,
    pub gap: f64,
    pub iterations: usize,
    pub status: SdpStatus,
    /// Final coordinates of the variables; see [`SdpProblem::unpack`].
    pub y: Vec<f64>,
    pub history: Vec<IterateRecord>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.primal + self.dual)
    }
}

struct Data {
    c: Vec<f64>,
    f0: Vec<DMatrix<C64>>,
    coeffs: Vec<Vec<BlockEntries>>,
}

impl Data {
    fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.f0.iter().map(|b| b.nrows())
    }

    /// `F0 + Σ y_i F_i`.
    fn affine(&self, y: &[f64]) -> Vec<DMatrix<C64>> {
        let mut out = self.f0.clone();
        self.add_adjoint(y, &mut out);
        out
    }

    /// `acc += Σ y_i F_i`.
    fn add_adjoint(&self, y: &[f64], acc: &mut [DMatrix<C64>]) {
        for (yi, coeff) in y.iter().zip(&self.coeffs) {
            if *yi == 0.0 {
                continue;
            }
            for be in coeff {
                let block = &mut acc[be.block];
                for &(p, q, f) in &be.entries {
                    block[(p, q)] += f * *yi;
                }
            }
        }
    }

    fn adjoint(&self, y: &[f64]) -> Vec<DMatrix<C64>> {
        let mut out: Vec<DMatrix<C64>> = self.sizes().map(|n| DMatrix::zeros(n, n)).collect();
        self.add_adjoint(y, &mut out);
        out
    }

    /// `A(Z)_i = Re Tr(F_i Z)`.
    fn apply(&self, z: &[DMatrix<C64>]) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|coeff| {
                coeff
                    .iter()
                    .map(|be| be.entries.iter().map(|&(p, q, f)| (f * z[be.block][(q, p)]).re).sum::<f64>())
                    .sum()
            })
            .collect()
    }

    /// HKM Schur complement `M_ij = Re Tr(F_i X F_j S⁻¹)`.
    fn schur(&self, x: &[DMatrix<C64>], s_inv: &[DMatrix<C64>]) -> DMatrix<f64> {
        let m = self.coeffs.len();
        let mut out = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let mut acc = 0.0;
                for bi in &self.coeffs[i] {
                    for bj in self.coeffs[j].iter().filter(|b| b.block == bi.block) {
                        let (xb, sb) = (&x[bi.block], &s_inv[bi.block]);
                        for &(p, q, f) in &bi.entries {
                            for &(r, s, g) in &bj.entries {
                                acc += (f * g * xb[(q, r)] * sb[(s, p)]).re;
                            }
                        }
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc;
            }
        }
        out
    }
}

fn inner(a: &[DMatrix<C64>], b: &[DMatrix<C64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y.iter()).map(|(u, v)| (u.conj() * v).re).sum::<f64>()).sum()
}

fn hermitize(m: &mut DMatrix<C64>) {
    let h = (&*m + m.adjoint()) * c64(0.5, 0.0);
    *m = h;
}

fn frob(blocks: &[DMatrix<C64>]) -> f64 {
    blocks.iter().map(|b| b.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum::<f64>().sqrt()
}

/// Largest `α ≤ 1/STEP_FRACTION` keeping `Z + α dZ ⪰ 0`, given the Cholesky factor of `Z`.
fn max_step(chol: &Cholesky<C64, nalgebra::Dyn>, dz: &DMatrix<C64>) -> Option<f64> {
    let l = chol.l();
    let t = l.solve_lower_triangular(dz)?;
    let scaled = l.solve_lower_triangular(&t.adjoint())?;
    let eig = HermitianEigen::of_hermitian_part(&ComplexMatrix::from_nalgebra(scaled)).ok()?;
    let lmin = eig.min();
    Some(if lmin >= 0.0 { f64::INFINITY } else { -1.0 / lmin })
}

fn cholesky_all(blocks: &[DMatrix<C64>]) -> Option<Vec<Cholesky<C64, nalgebra::Dyn>>> {
    blocks.iter().map(|b| Cholesky::new(b.clone())).collect()
}

/// Solves the problem to an absolute duality gap of `tol`.
pub fn solve(problem: &SdpProblem, tol: f64, max_iter: usize) -> Result<SdpSolution, SdpError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(SdpError::BadTolerance(tol));
    }
    problem.validate()?;
    let data = Data {
        c: problem.objective_vector(),
        f0: problem.constraints().iter().map(|e| e.constant.as_nalgebra().clone()).collect(),
        coeffs: problem.coefficients(),
    };
    let m = data.c.len();
    let total_size: usize = data.sizes().sum();

    let coeff_scale = data
        .coeffs
        .iter()
        .map(|c| c.iter().map(|b| b.entries.iter().map(|e| e.2.norm_sqr()).sum::<f64>()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let c_scale = data.c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let f0_scale = frob(&data.f0);

    let default_x = (10.0f64).max((total_size as f64).sqrt()).max((1.0 + c_scale) / (1.0 + coeff_scale) * total_size as f64);
    let default_s = (10.0f64).max((total_size as f64).sqrt()).max(f0_scale).max(coeff_scale);

    let (mut y, mut s) = match problem.initial_point() {
        Some(y0) => {
            let s0 = data.affine(&y0);
            if cholesky_all(&s0).is_some() {
                (y0, s0)
            } else {
                (y0, data.sizes().map(|n| DMatrix::identity(n, n) * c64(default_s, 0.0)).collect())
            }
        }
        None => (vec![0.0; m], data.sizes().map(|n| DMatrix::identity(n, n) * c64(default_s, 0.0)).collect()),
    };
    let mut x: Vec<DMatrix<C64>> = match problem.initial_dual() {
        Some(x0) if cholesky_all(&x0.iter().map(|b| b.as_nalgebra().clone()).collect::<Vec<_>>()).is_some() => {
            x0.iter().map(|b| b.as_nalgebra().clone()).collect()
        }
        _ => data.sizes().map(|n| DMatrix::identity(n, n) * c64(default_x, 0.0)).collect(),
    };

    let mut history = Vec::new();
    let status;
    let mut iterations = 0;

    let objective = |y: &[f64]| -> f64 { data.c.iter().zip(y).map(|(a, b)| a * b).sum() };
    let dual_objective = |x: &[DMatrix<C64>]| -> f64 { -inner(&data.f0, x) };

    loop {
        let r_p: Vec<f64> = data.c.iter().zip(data.apply(&x)).map(|(c, ax)| c - ax).collect();
        let s_of_y = data.affine(&y);
        let r_d: Vec<DMatrix<C64>> = s_of_y.iter().zip(&s).map(|(a, b)| a - b).collect();
        let pobj = objective(&y);
        let dobj = dual_objective(&x);
        let mu = inner(&x, &s) / total_size as f64;
        let p_inf = r_p.iter().map(|v| v * v).sum::<f64>().sqrt() / (1.0 + c_scale);
        let d_inf = frob(&r_d) / (1.0 + f0_scale);
        history.push(IterateRecord { primal: pobj, dual: dobj, mu, primal_infeasibility: p_inf, dual_infeasibility: d_inf });

        let gap = (pobj - dobj).abs().max(mu * total_size as f64);
        if gap <= tol && p_inf <= tol && d_inf <= tol {
            status = SdpStatus::Optimal;
            break;
        }
        if iterations >= max_iter {
            status = SdpStatus::IterationCap;
            break;
        }
        iterations += 1;

        let Some(s_chol) = cholesky_all(&s) else {
            status = SdpStatus::NumericalFailure;
            break;
        };
        let Some(x_chol) = cholesky_all(&x) else {
            status = SdpStatus::NumericalFailure;
            break;
        };
        let s_inv: Vec<DMatrix<C64>> = s_chol.iter().map(|c| c.inverse()).collect();

        let target = SIGMA * mu;
        // rhs = A(σμ S⁻¹ - X - X R_d S⁻¹) - r_p
        let inner_term: Vec<DMatrix<C64>> = s_inv
            .iter()
            .zip(&x)
            .zip(&r_d)
            .map(|((si, xb), rd)| si * c64(target, 0.0) - xb - xb * rd * si)
            .collect();
        let rhs: Vec<f64> = data.apply(&inner_term).iter().zip(&r_p).map(|(a, b)| a - b).collect();

        let schur = data.schur(&x, &s_inv);
        let chol = Cholesky::new(schur.clone()).or_else(|| {
            let reg = 1e-14 * schur.diagonal().iter().fold(1.0f64, |a, v| a.max(v.abs()));
            Cholesky::new(schur + DMatrix::identity(m, m) * reg)
        });
        let Some(chol) = chol else {
            status = SdpStatus::NumericalFailure;
            break;
        };
        let dy = chol.solve(&nalgebra::DVector::from_vec(rhs));
        let dy: Vec<f64> = dy.iter().copied().collect();

        let mut ds = data.adjoint(&dy);
        for (d, rd) in ds.iter_mut().zip(&r_d) {
            *d += rd;
        }
        let dx: Vec<DMatrix<C64>> = s_inv
            .iter()
            .zip(&x)
            .zip(&ds)
            .map(|((si, xb), dsb)| {
                let mut d = si * c64(target, 0.0) - xb - xb * dsb * si;
                hermitize(&mut d);
                d
            })
            .collect();

        let mut alpha_p = f64::INFINITY;
        let mut alpha_d = f64::INFINITY;
        for (chol, d) in x_chol.iter().zip(&dx) {
            match max_step(chol, d) {
                Some(a) => alpha_p = alpha_p.min(a),
                None => alpha_p = 0.0,
            }
        }
        for (chol, d) in s_chol.iter().zip(&ds) {
            match max_step(chol, d) {
                Some(a) => alpha_d = alpha_d.min(a),
                None => alpha_d = 0.0,
            }
        }
        let alpha_p = (STEP_FRACTION * alpha_p).min(1.0);
        let alpha_d = (STEP_FRACTION * alpha_d).min(1.0);
        if alpha_p <= 0.0 && alpha_d <= 0.0 {
            status = SdpStatus::NumericalFailure;
            break;
        }

        for (xb, d) in x.iter_mut().zip(&dx) {
            *xb += d * c64(alpha_p, 0.0);
            hermitize(xb);
        }
        for (yi, d) in y.iter_mut().zip(&dy) {
            *yi += alpha_d * d;
        }
        for (sb, d) in s.iter_mut().zip(&ds) {
            *sb += d * c64(alpha_d, 0.0);
            hermitize(sb);
        }
    }

    let last = *history.last().expect("at least one iterate");
    Ok(SdpSolution {
        primal: last.primal,
        dual: last.dual,
        gap: (last.primal - last.dual).abs(),
        iterations,
        status,
        y,
        history,
    })
}
