//! Second-order expansion of the single-step difference between the ideal
//! step `exp(iHτ)` and one mistimed Trotter step in which term `j` runs for
//! `τ + Δ_j`, with `τ = t/n` and terms applied in list order.
//!
//! Writing `W = U_k ⋯ U_1` and expanding both sides to second order in
//! `(τ, Δ)` gives, for `𝒰 - 𝒯` acting on `ρ`:
//!
//! ```text
//!   τ²/2 Σ_{j<l} ([H_l,H_j] ρ + ρ [H_j,H_l])
//! + i Σ_j Δ_j (ρ H_j - H_j ρ)
//! + Σ_{j<l} (τΔ_j + τΔ_l + Δ_jΔ_l) (H_l H_j ρ + ρ H_j H_l)
//! + ½ Σ_j (2τΔ_j + Δ_j²) (H_j² ρ + ρ H_j²)
//! - Σ_{j,l} (τΔ_j + τΔ_l + Δ_jΔ_l) H_j ρ H_l
//! ```
//!
//! Averaging over independent `Δ_j ~ N(0, σ²)` leaves the commutator term and
//! `σ²` times the dephasing map `½ Σ_j (H_j² ρ + ρ H_j² - 2 H_j ρ H_j)`.

use super::{Result, TrotterPlan};
use crate::linalg::{ComplexMatrix, SuperOperator};

fn lr(left: &ComplexMatrix, right: &ComplexMatrix) -> Result<SuperOperator> {
    Ok(SuperOperator::sandwich(left, right)?)
}

/// `ρ ↦ K ρ + ρ K†` with `K = Σ_{j<l} [H_l, H_j]`.
pub fn commutator_map(terms: &[ComplexMatrix]) -> Result<SuperOperator> {
    let d = terms.first().map(|h| h.rows()).unwrap_or(1);
    let id = ComplexMatrix::identity(d);
    let mut k = ComplexMatrix::zeros(d, d);
    for j in 0..terms.len() {
        for l in j + 1..terms.len() {
            k = k + terms[l].commutator(&terms[j]);
        }
    }
    Ok(lr(&k, &id)?.add(&lr(&id, &k.adjoint())?))
}

/// `ρ ↦ ½ Σ_j (H_j² ρ + ρ H_j² - 2 H_j ρ H_j)`.
pub fn dephasing_map(terms: &[ComplexMatrix]) -> Result<SuperOperator> {
    let d = terms.first().map(|h| h.rows()).unwrap_or(1);
    let id = ComplexMatrix::identity(d);
    let mut out = SuperOperator::zero(d);
    for h in terms {
        let h2 = h * h;
        out = out.add(&lr(&h2, &id)?.add(&lr(&id, &h2)?).combine(0.5, &lr(h, h)?, -1.0));
    }
    Ok(out)
}

/// The expansion above for explicit offsets `Δ_j`, one per term.
///
/// # Panics
/// If `deltas` does not have one entry per term.
pub fn step_diff_expansion(plan: &TrotterPlan, deltas: &[f64]) -> Result<SuperOperator> {
    let terms = plan.terms();
    assert_eq!(terms.len(), deltas.len(), "one offset per term");
    let d = plan.dim();
    let tau = plan.step();
    let id = ComplexMatrix::identity(d);
    let mut out = commutator_map(terms)?.scale(0.5 * tau * tau);
    let cross = |j: usize, l: usize| tau * deltas[j] + tau * deltas[l] + deltas[j] * deltas[l];
    for (j, h) in terms.iter().enumerate() {
        let dj = deltas[j];
        // i Δ_j (ρ H_j - H_j ρ)
        let lin = lr(&id, h)?.sub(&lr(h, &id)?).into_matrix().scale(crate::linalg::c64(0.0, dj));
        out = out.add(&SuperOperator::new(d, lin)?);
        let h2 = h * h;
        out = out.add(&lr(&h2, &id)?.add(&lr(&id, &h2)?).scale(0.5 * (2.0 * tau * dj + dj * dj)));
        for (l, g) in terms.iter().enumerate() {
            out = out.sub(&lr(h, g)?.scale(cross(j, l)));
            if l > j {
                out = out.add(&lr(&(g * h), &id)?.add(&lr(&id, &(h * g))?).scale(cross(j, l)));
            }
        }
    }
    Ok(out)
}

/// Gaussian average of [`step_diff_expansion`] over `Δ_j ~ N(0, σ²)`.
pub fn avg_step_diff_expansion(plan: &TrotterPlan, sigma: f64) -> Result<SuperOperator> {
    let tau = plan.step();
    Ok(commutator_map(plan.terms())?.combine(0.5 * tau * tau, &dephasing_map(plan.terms())?, sigma * sigma))
}
