//! Small dense semidefinite programs in linear-matrix-inequality form.
//!
//! A problem has a list of Hermitian matrix variables `X_v` (a scalar is a
//! 1x1 variable), a real linear objective `Σ_v Re Tr(C_v X_v)` to minimize,
//! and a list of constraints `F_k(X) ⪰ 0` where each `F_k` is a constant
//! Hermitian matrix plus linear terms in the variables.
//!
//! Internally every variable is flattened to `n²` real coordinates: the
//! diagonal entries, then for each `a < b` the real and imaginary parts of
//! `X[a][b]`. Each coordinate contributes a sparse Hermitian coefficient to
//! each constraint, and the solver works natively with complex Hermitian
//! blocks (no real-symmetric embedding).

mod ipm;

pub use ipm::{solve, IterateRecord, SdpSolution, SdpStatus};

use crate::linalg::{c64, ComplexMatrix, Keep, C64};
use thiserror::Error;

pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdpError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarId(usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// One linear term of a constraint expression.
#[derive(Clone, Debug)]
pub enum LinearTerm {
    /// `scale · X` placed as a diagonal block starting at `offset`.
    Block { var: VarId, offset: usize, scale: f64 },
    /// `scale · Tr_{discarded}(X)` for `X` on `A ⊗ B`, placed at `offset`.
    PartialTrace { var: VarId, dim_a: usize, dim_b: usize, keep: Keep, offset: usize, scale: f64 },
    /// `scale · x · I` for a scalar (1x1) variable `x`, over the whole constraint.
    ScalarIdentity { var: VarId, scale: f64 },
}

/// `constant + Σ terms`, required to be positive semidefinite.
#[derive(Clone, Debug)]
pub struct MatrixExpr {
    pub constant: ComplexMatrix,
    pub terms: Vec<LinearTerm>,
}

impl MatrixExpr {
    pub fn new(constant: ComplexMatrix) -> Self {
        Self { constant, terms: Vec::new() }
    }

    pub fn zeros(size: usize) -> Self {
        Self::new(ComplexMatrix::zeros(size, size))
    }

    pub fn size(&self) -> usize {
        self.constant.rows()
    }

    pub fn with(mut self, term: LinearTerm) -> Self {
        self.terms.push(term);
        self
    }
}

/// Sparse Hermitian coefficient restricted to one constraint block.
#[derive(Clone, Debug)]
pub(crate) struct BlockEntries {
    pub block: usize,
    pub entries: Vec<(usize, usize, C64)>,
}

#[derive(Clone, Debug)]
pub struct SdpProblem {
    var_dims: Vec<usize>,
    objective: Vec<Option<ComplexMatrix>>,
    constraints: Vec<MatrixExpr>,
    initial_point: Option<Vec<ComplexMatrix>>,
    initial_dual: Option<Vec<ComplexMatrix>>,
}

impl Default for SdpProblem {
    fn default() -> Self {
        Self::new()
    }
}

impl SdpProblem {
    pub fn new() -> Self {
        Self { var_dims: Vec::new(), objective: Vec::new(), constraints: Vec::new(), initial_point: None, initial_dual: None }
    }

    /// Adds an `n x n` Hermitian variable.
    pub fn add_var(&mut self, n: usize) -> VarId {
        assert!(n >= 1, "variable dimension must be positive");
        self.var_dims.push(n);
        self.objective.push(None);
        VarId(self.var_dims.len() - 1)
    }

    pub fn add_scalar(&mut self) -> VarId {
        self.add_var(1)
    }

    /// Adds `Re Tr(coef · X_var)` to the objective.
    pub fn add_objective(&mut self, var: VarId, coef: ComplexMatrix) {
        let n = self.var_dims[var.0];
        assert_eq!(coef.shape(), (n, n), "objective coefficient shape");
        let slot = &mut self.objective[var.0];
        *slot = Some(match slot.take() {
            Some(prev) => prev + coef,
            None => coef,
        });
    }

    pub fn add_scalar_objective(&mut self, var: VarId, weight: f64) {
        self.add_objective(var, ComplexMatrix::from_real_diagonal(&[weight]));
    }

    pub fn add_constraint(&mut self, expr: MatrixExpr) {
        self.constraints.push(expr);
    }

    /// Starting values for the variables. When the constraints are strictly
    /// satisfied there, the solver keeps every iterate feasible.
    pub fn set_initial_point(&mut self, values: Vec<ComplexMatrix>) {
        self.initial_point = Some(values);
    }

    /// Starting multipliers, one per constraint. When positive definite and
    /// dual feasible, every dual iterate stays feasible.
    pub fn set_initial_dual(&mut self, values: Vec<ComplexMatrix>) {
        self.initial_dual = Some(values);
    }

    pub fn var_dims(&self) -> &[usize] {
        &self.var_dims
    }

    pub fn constraints(&self) -> &[MatrixExpr] {
        &self.constraints
    }

    pub fn num_coordinates(&self) -> usize {
        self.var_dims.iter().map(|n| n * n).sum()
    }

    fn var_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.var_dims.len());
        let mut acc = 0;
        for n in &self.var_dims {
            offsets.push(acc);
            acc += n * n;
        }
        offsets
    }

    pub(crate) fn validate(&self) -> Result<(), SdpError> {
        if self.var_dims.is_empty() {
            return Err(SdpError::InvalidProblem("no variables".into()));
        }
        if self.constraints.is_empty() {
            return Err(SdpError::InvalidProblem("no constraints".into()));
        }
        for (k, expr) in self.constraints.iter().enumerate() {
            let size = expr.size();
            if !expr.constant.is_square() {
                return Err(SdpError::InvalidProblem(format!("constraint {k}: constant is not square")));
            }
            if expr.constant.hermitian_deviation() > 1e-12 * expr.constant.max_abs().max(1.0) {
                return Err(SdpError::InvalidProblem(format!("constraint {k}: constant is not Hermitian")));
            }
            for term in &expr.terms {
                let fits = match *term {
                    LinearTerm::Block { var, offset, .. } => {
                        self.check_var(var)?;
                        offset + self.var_dims[var.0] <= size
                    }
                    LinearTerm::PartialTrace { var, dim_a, dim_b, keep, offset, .. } => {
                        self.check_var(var)?;
                        let kept = if keep == Keep::A { dim_a } else { dim_b };
                        dim_a * dim_b == self.var_dims[var.0] && offset + kept <= size
                    }
                    LinearTerm::ScalarIdentity { var, .. } => {
                        self.check_var(var)?;
                        self.var_dims[var.0] == 1
                    }
                };
                if !fits {
                    return Err(SdpError::InvalidProblem(format!("constraint {k}: term {term:?} does not fit")));
                }
            }
        }
        if let Some(point) = &self.initial_point {
            if point.len() != self.var_dims.len()
                || point.iter().zip(&self.var_dims).any(|(m, &n)| m.shape() != (n, n))
            {
                return Err(SdpError::InvalidProblem("initial point has wrong shape".into()));
            }
        }
        if let Some(dual) = &self.initial_dual {
            if dual.len() != self.constraints.len()
                || dual.iter().zip(&self.constraints).any(|(m, c)| m.shape() != (c.size(), c.size()))
            {
                return Err(SdpError::InvalidProblem("initial dual has wrong shape".into()));
            }
        }
        Ok(())
    }

    fn check_var(&self, var: VarId) -> Result<(), SdpError> {
        if var.0 < self.var_dims.len() {
            Ok(())
        } else {
            Err(SdpError::InvalidProblem(format!("unknown variable {}", var.0)))
        }
    }

    /// Objective vector over real coordinates.
    pub(crate) fn objective_vector(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.num_coordinates()];
        for ((n, offset), coef) in self.var_dims.iter().zip(self.var_offsets()).zip(&self.objective) {
            if let Some(coef) = coef {
                for (i, basis) in coordinate_basis(*n).into_iter().enumerate() {
                    c[offset + i] = basis.iter().map(|&(p, q, f)| (coef[(q, p)] * f).re).sum();
                }
            }
        }
        c
    }

    /// Per coordinate, the sparse coefficient blocks it contributes to.
    pub(crate) fn coefficients(&self) -> Vec<Vec<BlockEntries>> {
        let offsets = self.var_offsets();
        let mut coeffs: Vec<Vec<BlockEntries>> = vec![Vec::new(); self.num_coordinates()];
        for (k, expr) in self.constraints.iter().enumerate() {
            let size = expr.size();
            let mut per_coord: Vec<Vec<(usize, usize, C64)>> = vec![Vec::new(); self.num_coordinates()];
            for term in &expr.terms {
                match *term {
                    LinearTerm::Block { var, offset, scale } => {
                        let base = offsets[var.0];
                        for (i, basis) in coordinate_basis(self.var_dims[var.0]).into_iter().enumerate() {
                            per_coord[base + i].extend(basis.into_iter().map(|(p, q, f)| (p + offset, q + offset, f * scale)));
                        }
                    }
                    LinearTerm::PartialTrace { var, dim_b, keep, offset, scale, .. } => {
                        let base = offsets[var.0];
                        for (i, basis) in coordinate_basis(self.var_dims[var.0]).into_iter().enumerate() {
                            for (p, q, f) in basis {
                                let (pa, pb) = (p / dim_b, p % dim_b);
                                let (qa, qb) = (q / dim_b, q % dim_b);
                                match keep {
                                    Keep::A if pb == qb => per_coord[base + i].push((pa + offset, qa + offset, f * scale)),
                                    Keep::B if pa == qa => per_coord[base + i].push((pb + offset, qb + offset, f * scale)),
                                    _ => {}
                                }
                            }
                        }
                    }
                    LinearTerm::ScalarIdentity { var, scale } => {
                        let idx = offsets[var.0];
                        per_coord[idx].extend((0..size).map(|r| (r, r, c64(scale, 0.0))));
                    }
                }
            }
            for (i, entries) in per_coord.into_iter().enumerate() {
                let merged = merge_entries(entries);
                if !merged.is_empty() {
                    coeffs[i].push(BlockEntries { block: k, entries: merged });
                }
            }
        }
        coeffs
    }

    pub(crate) fn initial_point(&self) -> Option<Vec<f64>> {
        self.initial_point.as_ref().map(|values| {
            let mut y = Vec::with_capacity(self.num_coordinates());
            for (m, &n) in values.iter().zip(&self.var_dims) {
                y.extend(hermitian_to_coords(m, n));
            }
            y
        })
    }

    pub(crate) fn initial_dual(&self) -> Option<&[ComplexMatrix]> {
        self.initial_dual.as_deref()
    }

    /// Rebuilds variable values from a coordinate vector.
    pub fn unpack(&self, y: &[f64]) -> Vec<ComplexMatrix> {
        let mut out = Vec::with_capacity(self.var_dims.len());
        let mut it = y.iter();
        for &n in &self.var_dims {
            let coords: Vec<f64> = it.by_ref().take(n * n).copied().collect();
            out.push(coords_to_hermitian(&coords, n));
        }
        out
    }
}

/// Sparse entries of each Hermitian basis matrix, in coordinate order.
pub(crate) fn coordinate_basis(n: usize) -> Vec<Vec<(usize, usize, C64)>> {
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        out.push(vec![(a, a, c64(1.0, 0.0))]);
        for b in a + 1..n {
            out.push(vec![(a, b, c64(1.0, 0.0)), (b, a, c64(1.0, 0.0))]);
            out.push(vec![(a, b, c64(0.0, 1.0)), (b, a, c64(0.0, -1.0))]);
        }
    }
    out
}

fn hermitian_to_coords(m: &ComplexMatrix, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        out.push(m[(a, a)].re);
        for b in a + 1..n {
            out.push(m[(a, b)].re);
            out.push(m[(a, b)].im);
        }
    }
    out
}

fn coords_to_hermitian(coords: &[f64], n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    let mut it = coords.iter();
    for a in 0..n {
        m[(a, a)] = c64(*it.next().expect("coordinate count"), 0.0);
        for b in a + 1..n {
            let re = *it.next().expect("coordinate count");
            let im = *it.next().expect("coordinate count");
            m[(a, b)] = c64(re, im);
            m[(b, a)] = c64(re, -im);
        }
    }
    m
}

fn merge_entries(mut entries: Vec<(usize, usize, C64)>) -> Vec<(usize, usize, C64)> {
    entries.sort_by_key(|&(p, q, _)| (p, q));
    let mut out: Vec<(usize, usize, C64)> = Vec::with_capacity(entries.len());
    for (p, q, f) in entries {
        match out.last_mut() {
            Some(last) if last.0 == p && last.1 == q => last.2 += f,
            _ => out.push((p, q, f)),
        }
    }
    out.retain(|e| e.2.norm() > 0.0);
    out
}
