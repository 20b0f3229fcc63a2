//! Depolarize-then-restrict as a binomial mixture of smaller marginals.
//!
//! Restricting `𝓔_η^{⊗n}(ρ)` to a subset `B` gives
//! `Σ_{A⊆B} η^{|B|−|A|} (1−η)^{|A|} · ρ|_A ⊗ (I/2)^{⊗(B∖A)}`.

use crate::channels::depolarize_all;
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, permute_qubits, ComplexMatrix, DensityMatrix, QubitSubset, C64};

/// Largest `|B|` accepted; the mixture has `2^{|B|}` terms.
pub const NOISE_ACTION_CAP: usize = 10;

/// Right-hand mixture restricted to `b`, with qubits in `b`'s order.
pub fn noise_action_mixture(rho: &DensityMatrix, b: &QubitSubset, eta: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidRate(eta));
    }
    let size = b.len();
    if size > NOISE_ACTION_CAP {
        return Err(Error::CapExceeded(format!("|B| = {size} exceeds the cap of {NOISE_ACTION_CAP}")));
    }
    let dim = 1usize << size;
    let mut total = ComplexMatrix::zeros(dim, dim);
    for mask in 0..dim {
        // positions within B that are kept
        let kept_pos: Vec<usize> = (0..size).filter(|&p| mask >> p & 1 == 1).collect();
        let dropped_pos: Vec<usize> = (0..size).filter(|&p| mask >> p & 1 == 0).collect();
        let weight = eta.powi(dropped_pos.len() as i32) * (1.0 - eta).powi(kept_pos.len() as i32);
        if weight == 0.0 {
            continue;
        }
        let kept = QubitSubset::new(kept_pos.iter().map(|&p| b.indices()[p]).collect(), rho.qubits())?;
        let marginal = partial_trace(rho, &kept)?;
        let joined = marginal.tensor(&DensityMatrix::maximally_mixed(dropped_pos.len())?)?;
        // joined lists kept positions then dropped ones; restore B's order
        let listed: Vec<usize> = kept_pos.iter().chain(&dropped_pos).copied().collect();
        let mut order = vec![0; size];
        for (slot, &p) in listed.iter().enumerate() {
            order[p] = slot;
        }
        total.add_scaled(C64::new(weight, 0.0), &permute_qubits(joined.matrix(), &order)?)?;
    }
    Ok(total)
}

/// Largest entrywise gap between `𝓔_η^{⊗n}(ρ)|_B` and the mixture.
pub fn check_noise_action(rho: &DensityMatrix, b: &QubitSubset, eta: f64) -> Result<f64> {
    let rhs = noise_action_mixture(rho, b, eta)?;
    let lhs = partial_trace(&depolarize_all(rho, eta)?, b)?;
    lhs.matrix().max_abs_diff(&rhs)
}
