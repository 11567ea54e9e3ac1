//! Diamond norm of a Hermitian-preserving map by semidefinite programming.
//!
//! With `J` the unnormalized Choi matrix (output factor first),
//!
//! ```text
//!   ‖Φ‖⋄ = min ½‖Tr_out Y0‖∞ + ½‖Tr_out Y1‖∞   s.t.  [[Y0, -J], [-J†, Y1]] ⪰ 0.
//! ```
//!
//! When `J` is Hermitian the problem is symmetric under `Y0 ↔ Y1`, so by
//! convexity an optimum has `Y0 = Y1 = Y`, and rotating the block constraint
//! by `[[I, I], [I, -I]]/√2` splits it into `Y - J ⪰ 0`, `Y + J ⪰ 0`. The
//! solver then sees
//!
//! ```text
//!   min s   s.t.  Y - J ⪰ 0,  Y + J ⪰ 0,  s I - Tr_out Y ⪰ 0,
//! ```
//!
//! a quarter of the Schur complement size. Non-Hermitian `J` uses the full
//! block form. Both start from strictly feasible primal and dual points, so
//! every iterate carries a valid upper and lower bound.

use crate::linalg::{ComplexMatrix, Keep, SuperOperator};
use crate::sdp::{self, LinearTerm, MatrixExpr, SdpError, SdpProblem, SdpSolution};

pub(super) fn hermitian_problem(j: &ComplexMatrix, d: usize) -> SdpProblem {
    let n = d * d;
    let beta = 1.0 + 2.0 * j.operator_norm();
    let mut p = SdpProblem::new();
    let y = p.add_var(n);
    let s = p.add_scalar();
    p.add_scalar_objective(s, 1.0);
    let block = LinearTerm::Block { var: y, offset: 0, scale: 1.0 };
    p.add_constraint(MatrixExpr::new(-j.clone()).with(block.clone()));
    p.add_constraint(MatrixExpr::new(j.clone()).with(block));
    p.add_constraint(
        MatrixExpr::zeros(d)
            .with(LinearTerm::ScalarIdentity { var: s, scale: 1.0 })
            .with(LinearTerm::PartialTrace { var: y, dim_a: d, dim_b: d, keep: Keep::B, offset: 0, scale: -1.0 }),
    );
    p.set_initial_point(vec![
        ComplexMatrix::identity(n).scale_real(beta),
        ComplexMatrix::identity(1).scale_real(beta * (d as f64 + 0.5)),
    ]);
    let w = 1.0 / (2.0 * d as f64);
    p.set_initial_dual(vec![
        ComplexMatrix::identity(n).scale_real(w),
        ComplexMatrix::identity(n).scale_real(w),
        ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
    ]);
    p
}

pub(super) fn general_problem(j: &ComplexMatrix, d: usize) -> SdpProblem {
    let n = d * d;
    let beta = 1.0 + 2.0 * j.operator_norm();
    let mut p = SdpProblem::new();
    let y0 = p.add_var(n);
    let y1 = p.add_var(n);
    let s0 = p.add_scalar();
    let s1 = p.add_scalar();
    p.add_scalar_objective(s0, 0.5);
    p.add_scalar_objective(s1, 0.5);
    let mut constant = ComplexMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            constant[(r, n + c)] = -j[(r, c)];
            constant[(n + r, c)] = -j[(c, r)].conj();
        }
    }
    p.add_constraint(
        MatrixExpr::new(constant)
            .with(LinearTerm::Block { var: y0, offset: 0, scale: 1.0 })
            .with(LinearTerm::Block { var: y1, offset: n, scale: 1.0 }),
    );
    for (y, s) in [(y0, s0), (y1, s1)] {
        p.add_constraint(
            MatrixExpr::zeros(d)
                .with(LinearTerm::ScalarIdentity { var: s, scale: 1.0 })
                .with(LinearTerm::PartialTrace { var: y, dim_a: d, dim_b: d, keep: Keep::B, offset: 0, scale: -1.0 }),
        );
    }
    let start_s = ComplexMatrix::identity(1).scale_real(beta * (d as f64 + 0.5));
    p.set_initial_point(vec![
        ComplexMatrix::identity(n).scale_real(beta),
        ComplexMatrix::identity(n).scale_real(beta),
        start_s.clone(),
        start_s,
    ]);
    let w = 1.0 / (2.0 * d as f64);
    p.set_initial_dual(vec![
        ComplexMatrix::identity(2 * n).scale_real(w),
        ComplexMatrix::identity(d).scale_real(w),
        ComplexMatrix::identity(d).scale_real(w),
    ]);
    p
}

/// Formulation used for `map`.
pub fn diamond_problem(map: &SuperOperator) -> SdpProblem {
    let j = map.choi_unnormalized();
    let scale = j.max_abs().max(1.0);
    if j.hermitian_deviation() <= 1e-12 * scale {
        hermitian_problem(&j.hermitian_part(), map.dim())
    } else {
        general_problem(&j, map.dim())
    }
}

pub(super) fn solve(map: &SuperOperator, tol: f64) -> Result<SdpSolution, SdpError> {
    sdp::solve(&diamond_problem(map), tol, sdp::DEFAULT_MAX_ITER)
}
