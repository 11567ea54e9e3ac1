use super::{c64, kron, partial_trace, unvec, vec, ComplexMatrix, HermitianEigen, Keep, LinalgError, Result, C64};

/// Linear map on `d x d` operators, stored as its `d² x d²` supermatrix acting
/// on column-stacked vectors. Composition is matrix multiplication.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl SuperOperator {
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if dim == 0 || matrix.shape() != (dim * dim, dim * dim) {
            return Err(LinalgError::DimensionMismatch(format!(
                "supermatrix for d={dim} must be {0}x{0}, got {1}x{2}",
                dim * dim,
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { dim, matrix })
    }

    /// Infers `d` from a `d² x d²` matrix.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.ensure_square()?;
        let d = super::exact_sqrt(n).ok_or(LinalgError::NotPerfectSquare(n))?;
        Self::new(d, matrix)
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, matrix: ComplexMatrix::identity(dim * dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, matrix: ComplexMatrix::zeros(dim * dim, dim * dim) }
    }

    /// `ρ ↦ U ρ U†`, i.e. `conj(U) ⊗ U` under column stacking.
    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        let dim = u.ensure_square()?;
        Ok(Self { dim, matrix: kron(&u.conj(), u) })
    }

    /// `ρ ↦ L ρ R`, i.e. `Rᵀ ⊗ L`.
    pub fn sandwich(left: &ComplexMatrix, right: &ComplexMatrix) -> Result<Self> {
        let dim = left.ensure_square()?;
        if right.shape() != (dim, dim) {
            return Err(LinalgError::DimensionMismatch("sandwich factors differ in size".into()));
        }
        Ok(Self { dim, matrix: kron(&right.transpose(), left) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.dim, self.dim) {
            return Err(LinalgError::DimensionMismatch(format!(
                "channel on d={} applied to {}x{} operator",
                self.dim,
                rho.rows(),
                rho.cols()
            )));
        }
        unvec(&(&self.matrix * &vec(rho)?))
    }

    /// The map that applies `self` first and then `next`.
    pub fn then(&self, next: &SuperOperator) -> SuperOperator {
        assert_eq!(self.dim, next.dim, "composing channels of different dimension");
        Self { dim: self.dim, matrix: &next.matrix * &self.matrix }
    }

    pub fn pow(&self, n: u64) -> SuperOperator {
        Self { dim: self.dim, matrix: self.matrix.pow(n) }
    }

    pub fn scale(&self, s: f64) -> SuperOperator {
        Self { dim: self.dim, matrix: self.matrix.scale_real(s) }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &SuperOperator, b: f64) -> SuperOperator {
        assert_eq!(self.dim, other.dim, "combining channels of different dimension");
        Self { dim: self.dim, matrix: self.matrix.scale_real(a) + other.matrix.scale_real(b) }
    }

    pub fn sub(&self, other: &SuperOperator) -> SuperOperator {
        self.combine(1.0, other, -1.0)
    }

    pub fn add(&self, other: &SuperOperator) -> SuperOperator {
        self.combine(1.0, other, 1.0)
    }

    /// Hilbert-Schmidt adjoint map; its supermatrix is the conjugate transpose.
    pub fn adjoint_map(&self) -> SuperOperator {
        Self { dim: self.dim, matrix: self.matrix.adjoint() }
    }

    pub fn max_abs_diff(&self, other: &SuperOperator) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// `J_u = Σ_ij E(|i⟩⟨j|) ⊗ |i⟩⟨j|`, output factor first. Trace `d` for
    /// trace-preserving maps.
    pub fn choi_unnormalized(&self) -> ComplexMatrix {
        let d = self.dim;
        ComplexMatrix::from_fn(d * d, d * d, |row, col| {
            let (a, i) = (row / d, row % d);
            let (b, j) = (col / d, col % d);
            self.matrix[(a + d * b, i + d * j)]
        })
    }

    /// Choi state normalized by `1/d`.
    pub fn to_choi(&self) -> ChoiState {
        ChoiState { dim: self.dim, matrix: self.choi_unnormalized().scale_real(1.0 / self.dim as f64) }
    }

    pub fn from_choi(choi: &ChoiState) -> SuperOperator {
        let d = choi.dim;
        let j = &choi.matrix;
        let matrix = ComplexMatrix::from_fn(d * d, d * d, |row, col| {
            let (a, b) = (row % d, row / d);
            let (i, jj) = (col % d, col / d);
            j[(a * d + i, b * d + jj)] * c64(d as f64, 0.0)
        });
        Self { dim: d, matrix }
    }

    /// Trace preservation: `Tr_out J_u = I`.
    pub fn trace_preservation_error(&self) -> f64 {
        let j = self.choi_unnormalized();
        let reduced = partial_trace(&j, self.dim, self.dim, Keep::B).expect("choi is d²xd²");
        reduced.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.trace_preservation_error() <= tol
    }

    /// Smallest eigenvalue of the normalized Choi state.
    pub fn min_choi_eigenvalue(&self) -> Result<f64> {
        Ok(HermitianEigen::of_hermitian_part(&self.to_choi().matrix)?.min())
    }

    pub fn is_completely_positive(&self, tol: f64) -> bool {
        self.to_choi().matrix.hermitian_deviation() <= 1e-10
            && self.min_choi_eigenvalue().is_ok_and(|m| m >= -tol)
    }

    /// True when Hermitian inputs map to Hermitian outputs, i.e. the Choi matrix is Hermitian.
    pub fn is_hermitian_preserving(&self, tol: f64) -> bool {
        self.choi_unnormalized().hermitian_deviation() <= tol
    }
}

/// Unit-trace Choi-Jamiolkowski state of a channel.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiState {
    dim: usize,
    matrix: ComplexMatrix,
}

impl ChoiState {
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.shape() != (dim * dim, dim * dim) {
            return Err(LinalgError::DimensionMismatch(format!("Choi state for d={dim} has wrong shape")));
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_exp;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
        let h = ComplexMatrix::from_fn(d, d, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .hermitian_part();
        hermitian_exp(&h, 2.0).unwrap()
    }

    fn random_density(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
        let a = ComplexMatrix::from_fn(d, d, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let p = &a * &a.adjoint();
        let t = p.trace().re;
        p.scale_real(1.0 / t)
    }

    /// Random channel from `k` Kraus operators `A_i (Σ A†A)^{-1/2}`.
    fn random_channel(rng: &mut impl Rng, d: usize, k: usize) -> SuperOperator {
        let kraus: Vec<ComplexMatrix> = (0..k)
            .map(|_| ComplexMatrix::from_fn(d, d, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
            .collect();
        let s = kraus.iter().fold(ComplexMatrix::zeros(d, d), |acc, a| acc + &a.adjoint() * a);
        let inv_sqrt = HermitianEigen::new(&s.hermitian_part()).unwrap().map_spectrum(|x| c64(1.0 / x.sqrt(), 0.0));
        kraus.iter().fold(SuperOperator::zero(d), |acc, a| {
            let b = a * &inv_sqrt;
            acc.add(&SuperOperator::sandwich(&b, &b.adjoint()).unwrap())
        })
    }

    #[test]
    fn identity_channel_choi_is_maximally_entangled() {
        let choi = SuperOperator::identity(2).to_choi();
        let h = 0.5f64.sqrt();
        let omega = ComplexMatrix::from_real_rows(4, 1, &[h, 0.0, 0.0, h]);
        assert!(choi.matrix().max_abs_diff(&(&omega * &omega.adjoint())) < 1e-15);
        assert!((choi.trace() - c64(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn complete_noise_choi_by_hand() {
        // E(|i><j|) = δ_ij I/d, so Σ_ij E(|i><j|)⊗|i><j| = I/d ⊗ I and J = I/d².
        for d in [2, 3, 4] {
            let t = ComplexMatrix::from_fn(d * d, d * d, |r, c| {
                if r % (d + 1) == 0 && c % (d + 1) == 0 {
                    c64(1.0 / d as f64, 0.0)
                } else {
                    c64(0.0, 0.0)
                }
            });
            let choi = SuperOperator::new(d, t).unwrap().to_choi();
            let expected = ComplexMatrix::identity(d * d).scale_real(1.0 / (d * d) as f64);
            assert!(choi.matrix().max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn unitary_channel_acts_by_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for d in [2, 4, 8] {
            let u = random_unitary(&mut rng, d);
            let rho = random_density(&mut rng, d);
            let out = SuperOperator::unitary(&u).unwrap().apply(&rho).unwrap();
            let direct = &(&u * &rho) * &u.adjoint();
            assert!(out.max_abs_diff(&direct) <= 1e-10, "d={d}");
        }
    }

    #[test]
    fn sandwich_matches_direct_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let l = random_unitary(&mut rng, 3);
        let r = random_density(&mut rng, 3);
        let x = random_density(&mut rng, 3);
        let out = SuperOperator::sandwich(&l, &r).unwrap().apply(&x).unwrap();
        assert!(out.max_abs_diff(&(&(&l * &x) * &r)) < 1e-13);
    }

    #[test]
    fn random_channels_are_cptp() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for d in [2, 3] {
            let ch = random_channel(&mut rng, d, 3);
            assert!(ch.is_trace_preserving(1e-10));
            assert!(ch.is_completely_positive(1e-9));
            assert!((ch.to_choi().trace() - c64(1.0, 0.0)).norm() <= 1e-10);
        }
    }

    #[test]
    fn shape_validation() {
        assert!(SuperOperator::new(2, ComplexMatrix::identity(3)).is_err());
        assert!(SuperOperator::from_matrix(ComplexMatrix::identity(5)).is_err());
        assert_eq!(SuperOperator::from_matrix(ComplexMatrix::identity(9)).unwrap().dim(), 3);
        assert!(SuperOperator::identity(2).apply(&ComplexMatrix::identity(3)).is_err());
    }

    proptest! {
        #[test]
        fn choi_roundtrip(seed in any::<u64>(), d in 2usize..4, k in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ch = random_channel(&mut rng, d, k);
            let back = SuperOperator::from_choi(&ch.to_choi());
            prop_assert!(back.max_abs_diff(&ch) <= 1e-12);
            let choi = ch.to_choi();
            let again = SuperOperator::from_choi(&choi).to_choi();
            prop_assert!(again.matrix().max_abs_diff(choi.matrix()) <= 1e-12);
        }
    }
}
