//! Dense complex linear algebra for small quantum systems.
//!
//! [`ComplexMatrix`] is a thin newtype over a dynamically sized nalgebra
//! matrix. Everything in the crate that touches states, Hamiltonians,
//! unitaries or supermatrices goes through it.

mod superop;

pub use superop::{ChoiState, SuperOperator};

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

/// Tolerance used when validating Hermitian inputs (relative to the largest entry).
pub const HERMITIAN_INPUT_TOL: f64 = 1e-12;

/// Tolerance on unitarity and Hermiticity of computed outputs.
pub const OUTPUT_TOL: f64 = 1e-10;

pub type C64 = Complex64;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("length {0} is not a perfect square")]
    NotPerfectSquare(usize),
    #[error("Hermitian eigensolver failed to converge")]
    EigenFailure,
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense complex matrix indexed as `(row, col)`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "matrix dimensions must be positive");
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must equal rows*cols");
        Self(DMatrix::from_row_slice(rows, cols, entries))
    }

    /// Real-valued convenience constructor, entries row by row.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must equal rows*cols");
        Self::from_fn(rows, cols, |r, c| c64(entries[r * cols + c], 0.0))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { diag[r] } else { C64::new(0.0, 0.0) })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { c64(diag[r], 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Self {
        assert!(m.nrows() >= 1 && m.ncols() >= 1, "matrix dimensions must be positive");
        Self(m)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(LinalgError::NotSquare { rows: self.rows(), cols: self.cols() })
        }
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn trace(&self) -> C64 {
        self.0.diagonal().iter().sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    /// Elementwise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        Self(self.0.component_mul(&other.0))
    }

    /// Commutator `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.0.iter().zip(other.0.iter()).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    /// Frobenius (Hilbert-Schmidt) norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.singular_values().into_iter().fold(0.0, f64::max)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.0.clone().singular_values().iter().copied().collect()
    }

    /// Largest absolute deviation from Hermiticity, `max |M_ij - conj(M_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Errors unless Hermitian within `tol` scaled by `max(1, max|entry|)`.
    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        self.ensure_square()?;
        let deviation = self.hermitian_deviation();
        if deviation > tol * self.max_abs().max(1.0) {
            return Err(LinalgError::NotHermitian { deviation });
        }
        Ok(())
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * c64(0.5, 0.0))
    }

    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.rows()))
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        self.ensure_square()?;
        let deviation = self.unitarity_deviation();
        if deviation > tol {
            return Err(LinalgError::NotUnitary { deviation });
        }
        Ok(())
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut n: u64) -> Self {
        let d = self.ensure_square().expect("pow needs a square matrix");
        let mut result = Self::identity(d);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Eigenvalues of a general square matrix, from its complex Schur form.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        self.ensure_square()?;
        let values = self.0.eigenvalues().ok_or(LinalgError::EigenFailure)?;
        Ok(values.iter().copied().collect())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for r in 0..self.rows() {
            write!(f, "  ")?;
            for c in 0..self.cols() {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.0[idx]
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op rhs.0)
            }
        }
        impl $tr<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Spectral decomposition `H = W diag(values) W†`, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the same order as `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        h.ensure_hermitian(HERMITIAN_INPUT_TOL)?;
        Self::of_hermitian_part(h)
    }

    /// Decomposes `(M + M†)/2` without validating `M`.
    pub fn of_hermitian_part(m: &ComplexMatrix) -> Result<Self> {
        let n = m.ensure_square()?;
        let sym = m.hermitian_part();
        let eig = SymmetricEigen::try_new(sym.0, f64::EPSILON, 0).ok_or(LinalgError::EigenFailure)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(Self { values, vectors })
    }

    /// `W f(Λ) W†` for a function of the eigenvalues.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let diag: Vec<C64> = self.values.iter().map(|&x| f(x)).collect();
        let w = &self.vectors;
        &(w * &ComplexMatrix::from_diagonal(&diag)) * &w.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }
}

/// `exp(+iθH)` for Hermitian `H`.
pub fn hermitian_exp(h: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    let eig = HermitianEigen::new(h)?;
    Ok(eig.map_spectrum(|e| C64::from_polar(1.0, theta * e)))
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    a.ensure_square()?;
    Ok(a.singular_values().iter().sum())
}

/// Which tensor factor a partial trace keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of an operator on `H_A ⊗ H_B`, basis index `a*dim_b + b`.
pub fn partial_trace(m: &ComplexMatrix, dim_a: usize, dim_b: usize, keep: Keep) -> Result<ComplexMatrix> {
    let n = m.ensure_square()?;
    if dim_a == 0 || dim_b == 0 || n != dim_a * dim_b {
        return Err(LinalgError::DimensionMismatch(format!(
            "partial trace of {n}x{n} matrix over {dim_a}x{dim_b} factors"
        )));
    }
    Ok(match keep {
        Keep::A => ComplexMatrix::from_fn(dim_a, dim_a, |a, a2| {
            (0..dim_b).map(|b| m[(a * dim_b + b, a2 * dim_b + b)]).sum()
        }),
        Keep::B => ComplexMatrix::from_fn(dim_b, dim_b, |b, b2| {
            (0..dim_a).map(|a| m[(a * dim_b + b, a * dim_b + b2)]).sum()
        }),
    })
}

/// Column-stacking vectorization: entry `i + d*j` holds `rho[(i, j)]`.
pub fn vec(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = rho.ensure_square()?;
    Ok(ComplexMatrix::from_fn(d * d, 1, |k, _| rho[(k % d, k / d)]))
}

/// Inverse of [`vec`].
pub fn unvec(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    if v.cols() != 1 {
        return Err(LinalgError::DimensionMismatch(format!("unvec expects a column, got {}x{}", v.rows(), v.cols())));
    }
    let d = exact_sqrt(v.rows()).ok_or(LinalgError::NotPerfectSquare(v.rows()))?;
    Ok(ComplexMatrix::from_fn(d, d, |i, j| v[(i + d * j, 0)]))
}

pub(crate) fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        random_matrix(rng, n).hermitian_part()
    }

    fn sz() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    fn sx() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    #[test]
    fn kron_of_pauli_z() {
        let k = kron(&sz(), &sz());
        assert_eq!(k, ComplexMatrix::from_real_diagonal(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn kron_identity_is_block_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 2);
        let k = kron(&ComplexMatrix::identity(2), &a);
        for r in 0..4 {
            for c in 0..4 {
                let expected = if r / 2 == c / 2 { a[(r % 2, c % 2)] } else { c64(0.0, 0.0) };
                assert_eq!(k[(r, c)], expected);
            }
        }
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let (a, b, c, d) = (
                random_matrix(&mut rng, 2),
                random_matrix(&mut rng, 2),
                random_matrix(&mut rng, 2),
                random_matrix(&mut rng, 2),
            );
            let lhs = &kron(&a, &b) * &kron(&c, &d);
            let rhs = kron(&(&a * &c), &(&b * &d));
            assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }
    }

    #[test]
    fn exp_of_diagonal() {
        let theta = 0.37;
        let u = hermitian_exp(&sz(), theta).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[C64::from_polar(1.0, theta), C64::from_polar(1.0, -theta)]);
        assert!(u.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn exp_at_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(&mut rng, 4);
        assert!(hermitian_exp(&h, 0.0).unwrap().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-13);
    }

    /// Truncated power series, independent of the eigensolver.
    fn exp_series(a: &ComplexMatrix, terms: usize) -> ComplexMatrix {
        let n = a.rows();
        let mut sum = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..terms {
            term = (&term * a).scale_real(1.0 / k as f64);
            sum = sum + &term;
        }
        sum
    }

    #[test]
    fn exp_of_sigma_x_matches_series() {
        let theta = std::f64::consts::FRAC_PI_2;
        let u = hermitian_exp(&sx(), theta).unwrap();
        let series = exp_series(&sx().scale(c64(0.0, theta)), 30);
        assert!(u.max_abs_diff(&series) <= 1e-10);
        assert!(u.max_abs_diff(&sx().scale(c64(0.0, 1.0))) <= 1e-10);
    }

    #[test]
    fn exp_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(hermitian_exp(&m, 1.0), Err(LinalgError::NotHermitian { .. })));
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::from_real_diagonal(&[3.0, -4.0])).unwrap() - 7.0).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = hermitian_exp(&random_hermitian(&mut rng, 5), 1.3).unwrap();
        assert!((trace_norm(&u).unwrap() - 5.0).abs() < 1e-12);
        assert!(matches!(
            trace_norm(&ComplexMatrix::zeros(2, 3)),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn trace_norm_matches_gram_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 4);
            let gram = &a.adjoint() * &a;
            let oracle: f64 = HermitianEigen::new(&gram).unwrap().values.iter().map(|&v| v.max(0.0).sqrt()).sum();
            assert!((trace_norm(&a).unwrap() - oracle).abs() <= 1e-9);
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rho = random_hermitian(&mut rng, 2);
        let tau = random_hermitian(&mut rng, 3);
        let pt = partial_trace(&kron(&rho, &tau), 2, 3, Keep::A).unwrap();
        assert!(pt.max_abs_diff(&rho.scale(tau.trace())) < 1e-14);
        let pt_b = partial_trace(&kron(&rho, &tau), 2, 3, Keep::B).unwrap();
        assert!(pt_b.max_abs_diff(&tau.scale(rho.trace())) < 1e-14);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let s = 0.5f64.sqrt();
        let psi = ComplexMatrix::from_real_rows(4, 1, &[s, 0.0, 0.0, s]);
        let proj = &psi * &psi.adjoint();
        let pt = partial_trace(&proj, 2, 2, Keep::A).unwrap();
        assert!(pt.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        assert!(partial_trace(&ComplexMatrix::identity(6), 2, 2, Keep::A).is_err());
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (da, db) in [(2, 2), (2, 3), (4, 2)] {
            let m = random_hermitian(&mut rng, da * db);
            // direct summation oracle
            let total: C64 = (0..da * db).map(|i| m[(i, i)]).sum();
            for keep in [Keep::A, Keep::B] {
                let t = partial_trace(&m, da, db, keep).unwrap().trace();
                assert!((t - total).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn vec_is_column_stacking() {
        let (a, b, c, d) = (c64(1.0, 0.0), c64(2.0, 0.0), c64(3.0, 0.0), c64(4.0, 0.0));
        let m = ComplexMatrix::from_row_slice(2, 2, &[a, b, c, d]);
        let v = vec(&m).unwrap();
        assert_eq!((v[(0, 0)], v[(1, 0)], v[(2, 0)], v[(3, 0)]), (a, c, b, d));
        assert_eq!(unvec(&v).unwrap(), m);
        assert_eq!(unvec(&ComplexMatrix::zeros(3, 1)), Err(LinalgError::NotPerfectSquare(3)));
    }

    #[test]
    fn vec_sandwich_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let (a, x, b) = (random_matrix(&mut rng, 2), random_matrix(&mut rng, 2), random_matrix(&mut rng, 2));
            let lhs = vec(&(&(&a * &x) * &b)).unwrap();
            let rhs = &kron(&b.transpose(), &a) * &vec(&x).unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }
    }

    #[test]
    fn pow_matches_repeated_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_matrix(&mut rng, 3).scale_real(0.5);
        let mut direct = ComplexMatrix::identity(3);
        for _ in 0..13 {
            direct = &direct * &a;
        }
        assert!(a.pow(13).max_abs_diff(&direct) < 1e-12);
        assert_eq!(a.pow(0), ComplexMatrix::identity(3));
    }

    proptest! {
        #[test]
        fn exp_forward_backward_is_identity(seed in any::<u64>(), theta in -5.0f64..5.0, n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(&mut rng, n);
            let prod = &hermitian_exp(&h, theta).unwrap() * &hermitian_exp(&h, -theta).unwrap();
            prop_assert!(prod.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-10);
        }

        #[test]
        fn trace_norm_is_a_norm(seed in any::<u64>(), n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b, c) = (random_matrix(&mut rng, n), random_matrix(&mut rng, n), random_matrix(&mut rng, n));
            let tn = |m: &ComplexMatrix| trace_norm(m).unwrap();
            prop_assert!(tn(&a) >= 0.0);
            prop_assert!(tn(&ComplexMatrix::zeros(n, n)) <= 1e-12);
            prop_assert!(tn(&(&a - &c)) <= tn(&(&a - &b)) + tn(&(&b - &c)) + 1e-12);
            prop_assert!((tn(&a.scale_real(-2.5)) - 2.5 * tn(&a)).abs() <= 1e-10);
        }
    }
}
