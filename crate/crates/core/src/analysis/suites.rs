//! Seeded self-checks: the noise-action identity, contractivity and joint
//! convexity of the trace distance, and Kraus completeness of the library.

use std::fmt;

use rand::Rng;

use super::noise_action::check_noise_action;
use crate::channels::{channel_apply, channel_validate, GateLibrary};
use crate::error::{Error, Result};
use crate::linalg::{trace_distance, DensityMatrix, QubitSubset};
use crate::random::{random_channel, random_density, random_pure, random_weights, seeded, SimRng};

/// Rates exercised by [`noise_action_suite`].
pub const NOISE_ACTION_RATES: [f64; 4] = [0.0, 0.3, 0.7, 1.0];

/// Summary of one suite run.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// Largest residual, or for inequalities the largest excess of the
    /// left side over the right (never below zero).
    pub max_residual: f64,
    pub tolerance: f64,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} cases {} max_residual {} tolerance {} {}",
            self.name,
            self.cases,
            crate::report::fmt_real(self.max_residual),
            crate::report::fmt_real(self.tolerance),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Mixed or pure with equal odds, so rank-deficient states are covered.
fn random_state(qubits: usize, rng: &mut SimRng) -> DensityMatrix {
    if rng.random_bool(0.5) {
        random_density(qubits, rng)
    } else {
        random_pure(qubits, rng)
    }
}

/// Every subset `B` of a random register, for every rate in `rates`.
pub fn noise_action_suite(qubits: usize, trials: usize, seed: u64, rates: &[f64]) -> Result<SuiteOutcome> {
    if qubits > super::NOISE_ACTION_CAP {
        return Err(Error::CapExceeded(format!("noise-action checks on {qubits} qubits")));
    }
    let mut rng = seeded(seed);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for _ in 0..trials {
        let rho = random_density(qubits, &mut rng);
        for &eta in rates {
            for mask in 0..1usize << qubits {
                worst = worst.max(check_noise_action(&rho, &QubitSubset::from_mask(mask, qubits), eta)?);
                cases += 1;
            }
        }
    }
    Ok(SuiteOutcome { name: "noise-action", cases, max_residual: worst, tolerance: 1e-10 })
}

/// `D(T ρ, T σ) ≤ D(ρ, σ)` for random channels between one and two qubits.
pub fn contractivity_suite(trials: usize, seed: u64) -> Result<SuiteOutcome> {
    let mut rng = seeded(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let n_in = rng.random_range(1..=2);
        let n_out = rng.random_range(1..=2);
        let min_kraus = (1usize << n_in).div_ceil(1 << n_out);
        let kraus = rng.random_range(min_kraus..=4.max(min_kraus));
        let t = random_channel(n_in, n_out, kraus, &mut rng);
        let rho = random_state(n_in, &mut rng);
        let sigma = random_state(n_in, &mut rng);
        let after = trace_distance(&channel_apply(&t, &rho)?, &channel_apply(&t, &sigma)?)?;
        worst = worst.max(after - trace_distance(&rho, &sigma)?);
    }
    Ok(SuiteOutcome { name: "contractivity", cases: trials, max_residual: worst, tolerance: 1e-9 })
}

/// `D(Σ p_i ρ_i, Σ p_i σ_i) ≤ Σ p_i D(ρ_i, σ_i)` on one and two qubits.
pub fn convexity_suite(trials: usize, seed: u64) -> Result<SuiteOutcome> {
    let mut rng = seeded(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let qubits = rng.random_range(1..=2);
        let parts = rng.random_range(1..=4);
        let weights = random_weights(parts, &mut rng);
        let rhos: Vec<DensityMatrix> = (0..parts).map(|_| random_state(qubits, &mut rng)).collect();
        let sigmas: Vec<DensityMatrix> = (0..parts).map(|_| random_state(qubits, &mut rng)).collect();
        let mix = |states: &[DensityMatrix]| {
            let terms: Vec<(f64, &DensityMatrix)> = weights.iter().copied().zip(states).collect();
            DensityMatrix::mixture(&terms)
        };
        let lhs = trace_distance(&mix(&rhos)?, &mix(&sigmas)?)?;
        let mut rhs = 0.0;
        for ((p, r), s) in weights.iter().zip(&rhos).zip(&sigmas) {
            rhs += p * trace_distance(r, s)?;
        }
        worst = worst.max(lhs - rhs);
    }
    Ok(SuiteOutcome { name: "convexity", cases: trials, max_residual: worst, tolerance: 1e-9 })
}

/// Completeness residual of every gate in the standard library.
pub fn kraus_suite() -> SuiteOutcome {
    let library = GateLibrary::standard();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for (_, t) in library.iter() {
        worst = worst.max(channel_validate(t).completeness_residual);
        cases += 1;
    }
    SuiteOutcome { name: "kraus", cases, max_residual: worst, tolerance: 1e-9 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_count_cases() {
        let s = noise_action_suite(2, 3, 1, &NOISE_ACTION_RATES).unwrap();
        assert_eq!(s.cases, 3 * 4 * 4);
        assert!(s.passed(), "{s}");
        assert!(contractivity_suite(40, 2).unwrap().passed());
        assert!(convexity_suite(40, 3).unwrap().passed());
        let k = kraus_suite();
        assert_eq!(k.cases, 16);
        assert!(k.passed());
    }

    #[test]
    fn deterministic() {
        assert_eq!(contractivity_suite(10, 5).unwrap(), contractivity_suite(10, 5).unwrap());
    }

    #[test]
    fn display_line() {
        let s = SuiteOutcome { name: "kraus", cases: 2, max_residual: 0.0, tolerance: 1e-9 };
        assert_eq!(s.to_string(), "kraus cases 2 max_residual 0 tolerance 1e-9 PASS");
    }
}
