//! Ideal, Trotterized and faulty channels as supermatrices.

mod expansion;

pub use expansion::{avg_step_diff_expansion, commutator_map, dephasing_map, step_diff_expansion};

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::{
    c64, hermitian_exp, ComplexMatrix, HermitianEigen, LinalgError, SuperOperator, C64, HERMITIAN_INPUT_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid Trotter plan: {0}")]
    InvalidPlan(String),
    #[error("invalid noise parameter: {0}")]
    InvalidNoise(String),
    #[error("mistimed-control noise needs a random generator")]
    MissingRng,
}

pub type Result<T> = std::result::Result<T, ChannelError>;

/// Terms `H_j`, total time `t`, Trotter number `n` and time-energy scale `a`.
///
/// The simulator runs `a·H_j` for time `t/a`. The unitaries are identical for
/// every `a`; only the noise models see the scale.
#[derive(Clone, Debug, PartialEq)]
pub struct TrotterPlan {
    terms: Vec<ComplexMatrix>,
    t: f64,
    n: u64,
    a: f64,
}

impl TrotterPlan {
    pub fn new(terms: Vec<ComplexMatrix>, t: f64, n: u64) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(ChannelError::InvalidPlan("no Hamiltonian terms".into()));
        };
        let d = first.ensure_square()?;
        for (j, h) in terms.iter().enumerate() {
            if h.shape() != (d, d) {
                return Err(ChannelError::InvalidPlan(format!(
                    "term {j} is {}x{}, expected {d}x{d}",
                    h.rows(),
                    h.cols()
                )));
            }
            h.ensure_hermitian(HERMITIAN_INPUT_TOL)?;
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(ChannelError::InvalidPlan(format!("time must be finite and non-negative, got {t}")));
        }
        if n == 0 {
            return Err(ChannelError::InvalidPlan("Trotter number must be at least 1".into()));
        }
        Ok(Self { terms, t, n, a: 1.0 })
    }

    pub fn terms(&self) -> &[ComplexMatrix] {
        &self.terms
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn dim(&self) -> usize {
        self.terms[0].rows()
    }

    /// Duration of one term exponential, `t/n`.
    pub fn step(&self) -> f64 {
        self.t / self.n as f64
    }

    pub fn with_n(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(ChannelError::InvalidPlan("Trotter number must be at least 1".into()));
        }
        Ok(Self { n, ..self.clone() })
    }

    pub fn with_t(&self, t: f64) -> Result<Self> {
        let mut p = Self::new(self.terms.clone(), t, self.n)?;
        p.a = self.a;
        Ok(p)
    }

    /// `H = Σ_j H_j`.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(self.dim(), self.dim());
        for term in &self.terms {
            h = h + term;
        }
        h
    }
}

/// Sets the time-energy scale factor `a`.
pub fn rescale_time_energy(plan: &TrotterPlan, a: f64) -> Result<TrotterPlan> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(ChannelError::InvalidPlan(format!("scale factor must be positive, got {a}")));
    }
    Ok(TrotterPlan { a, ..plan.clone() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseModel {
    /// Mistimed control: each term exponential runs for a Gaussian offset of
    /// standard deviation `sigma` too long.
    Mtc { sigma: f64, seed: u64 },
    /// The Gaussian average of [`NoiseModel::Mtc`].
    AvgMtc { sigma: f64 },
    /// Depolarizing with probability `p` after every Trotter step.
    Depol { p: f64 },
    /// Depolarizing with probability `1 - exp(-gamma·t/a)`, once.
    Decoh { gamma: f64 },
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::Mtc { sigma, .. } | NoiseModel::AvgMtc { sigma } => {
                if !(sigma >= 0.0 && sigma.is_finite()) {
                    return Err(ChannelError::InvalidNoise(format!("sigma must be finite and >= 0, got {sigma}")));
                }
            }
            NoiseModel::Depol { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(ChannelError::InvalidNoise(format!("p must lie in [0, 1], got {p}")));
                }
            }
            NoiseModel::Decoh { gamma } => {
                if !(gamma >= 0.0 && gamma.is_finite()) {
                    return Err(ChannelError::InvalidNoise(format!("gamma must be finite and >= 0, got {gamma}")));
                }
            }
        }
        Ok(())
    }

    /// Generator for the seed carried by [`NoiseModel::Mtc`].
    pub fn rng(&self) -> Option<crate::exec::Rng> {
        match *self {
            NoiseModel::Mtc { seed, .. } => Some(crate::exec::rng_stream(seed, 0)),
            _ => None,
        }
    }

    /// Per-insertion timing spread seen by the simuland at scale `a`.
    pub fn effective_sigma(&self, a: f64) -> Option<f64> {
        match *self {
            NoiseModel::Mtc { sigma, .. } | NoiseModel::AvgMtc { sigma } => Some(sigma * a),
            _ => None,
        }
    }
}

/// `ρ ↦ e^{iHτ} ρ e^{-iHτ}`.
pub fn evolution_superop(h: &ComplexMatrix, tau: f64) -> Result<SuperOperator> {
    Ok(SuperOperator::unitary(&hermitian_exp(h, tau)?)?)
}

/// `ρ ↦ Tr(ρ) I/d`.
pub fn complete_noise(d: usize) -> Result<SuperOperator> {
    if d < 2 {
        return Err(ChannelError::InvalidNoise(format!("complete noise needs d >= 2, got {d}")));
    }
    let m = ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        if r % (d + 1) == 0 && c % (d + 1) == 0 {
            c64(1.0 / d as f64, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    Ok(SuperOperator::new(d, m)?)
}

/// `ρ ↦ (1-p)ρ + p Tr(ρ) I/d`.
pub fn depolarizing(p: f64, d: usize) -> Result<SuperOperator> {
    NoiseModel::Depol { p }.validate()?;
    Ok(SuperOperator::identity(d).combine(1.0 - p, &complete_noise(d)?, p))
}

/// Gaussian average over `Δ ~ N(0, σ²)` of `ρ ↦ e^{iHΔ} ρ e^{-iHΔ}`: in the
/// eigenbasis of `H`, entry `(m, n)` is damped by `exp(-(E_m - E_n)²σ²/2)`.
pub fn avg_mtc_step(h: &ComplexMatrix, sigma: f64) -> Result<SuperOperator> {
    NoiseModel::AvgMtc { sigma }.validate()?;
    let eig = HermitianEigen::new(h)?;
    avg_mtc_from_eigen(&eig, sigma)
}

fn avg_mtc_from_eigen(eig: &HermitianEigen, sigma: f64) -> Result<SuperOperator> {
    let d = eig.values.len();
    let e = &eig.values;
    let lambda: Vec<_> = (0..d * d)
        .map(|k| {
            let (m, n) = (k % d, k / d);
            c64((-0.5 * (e[m] - e[n]).powi(2) * sigma * sigma).exp(), 0.0)
        })
        .collect();
    let into = SuperOperator::unitary(&eig.vectors.adjoint())?;
    let back = SuperOperator::unitary(&eig.vectors)?;
    let damp = SuperOperator::new(d, ComplexMatrix::from_diagonal(&lambda))?;
    Ok(into.then(&damp).then(&back))
}

/// Draws one timing offset `Δ ~ N(0, σ²)`.
pub fn sample_offset<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    sigma * z
}

/// `ρ ↦ e^{iHΔ} ρ e^{-iHΔ}` for one sampled offset.
pub fn sample_mtc_step<R: Rng + ?Sized>(h: &ComplexMatrix, sigma: f64, rng: &mut R) -> Result<SuperOperator> {
    NoiseModel::AvgMtc { sigma }.validate()?;
    evolution_superop(h, sample_offset(sigma, rng))
}

/// `exp(iHt)` as a unitary channel.
pub fn ideal_unitary(plan: &TrotterPlan) -> Result<ComplexMatrix> {
    Ok(hermitian_exp(&plan.hamiltonian(), plan.t)?)
}

pub fn ideal_map(plan: &TrotterPlan) -> Result<SuperOperator> {
    Ok(SuperOperator::unitary(&ideal_unitary(plan)?)?)
}

/// One step `V_k ∘ ⋯ ∘ V_1`, each `V_j` of duration `t/n`.
pub fn trotter_step(plan: &TrotterPlan) -> Result<SuperOperator> {
    let tau = plan.step();
    let mut step = SuperOperator::identity(plan.dim());
    for h in &plan.terms {
        step = step.then(&evolution_superop(h, tau)?);
    }
    Ok(step)
}

pub fn trotter_ideal(plan: &TrotterPlan) -> Result<SuperOperator> {
    Ok(trotter_step(plan)?.pow(plan.n))
}

/// The unitary of one mistimed-control realization: every term exponential
/// runs for `t/n + a·Δ_ij`, offsets drawn step by step, term by term.
pub fn mtc_unitary<R: Rng + ?Sized>(plan: &TrotterPlan, sigma: f64, rng: &mut R) -> Result<ComplexMatrix> {
    NoiseModel::AvgMtc { sigma }.validate()?;
    let eigs = plan.terms.iter().map(HermitianEigen::new).collect::<std::result::Result<Vec<_>, _>>()?;
    let tau = plan.step();
    let spread = sigma * plan.a;
    let mut w = ComplexMatrix::identity(plan.dim());
    for _ in 0..plan.n {
        for eig in &eigs {
            let x = tau + sample_offset(spread, rng);
            w = &eig.map_spectrum(|e| C64::from_polar(1.0, x * e)) * &w;
        }
    }
    Ok(w)
}

/// The full faulty Trotter channel under `noise`.
///
/// `rng` is only consulted for [`NoiseModel::Mtc`]; the seed stored in the
/// model is ignored here so callers can pass derived streams.
pub fn faulty_trotter<R: Rng + ?Sized>(
    plan: &TrotterPlan,
    noise: &NoiseModel,
    rng: Option<&mut R>,
) -> Result<SuperOperator> {
    noise.validate()?;
    let d = plan.dim();
    match *noise {
        NoiseModel::Mtc { sigma, .. } => {
            let rng = rng.ok_or(ChannelError::MissingRng)?;
            if sigma == 0.0 {
                return trotter_ideal(plan);
            }
            Ok(SuperOperator::unitary(&mtc_unitary(plan, sigma, rng)?)?)
        }
        NoiseModel::AvgMtc { sigma } => {
            if sigma == 0.0 {
                return trotter_ideal(plan);
            }
            let tau = plan.step();
            let spread = sigma * plan.a;
            let mut step = SuperOperator::identity(d);
            for h in &plan.terms {
                let eig = HermitianEigen::new(h)?;
                let v = SuperOperator::unitary(&eig.map_spectrum(|e| C64::from_polar(1.0, tau * e)))?;
                step = step.then(&v).then(&avg_mtc_from_eigen(&eig, spread)?);
            }
            Ok(step.pow(plan.n))
        }
        NoiseModel::Depol { p } => {
            if p == 0.0 {
                return trotter_ideal(plan);
            }
            Ok(trotter_step(plan)?.then(&depolarizing(p, d)?).pow(plan.n))
        }
        NoiseModel::Decoh { gamma } => {
            let ideal = trotter_ideal(plan)?;
            if gamma == 0.0 {
                return Ok(ideal);
            }
            let p = 1.0 - (-gamma * plan.t / plan.a).exp();
            Ok(ideal.then(&depolarizing(p, d)?))
        }
    }
}

/// One faulty step against `exp(iHt/n)`, for chaining checks.
pub fn faulty_single_step<R: Rng + ?Sized>(
    plan: &TrotterPlan,
    noise: &NoiseModel,
    rng: Option<&mut R>,
) -> Result<SuperOperator> {
    faulty_trotter(&plan.with_t(plan.step())?.with_n(1)?, noise, rng)
}
