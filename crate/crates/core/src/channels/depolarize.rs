use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, C64};

fn check_rate(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidRate(eta));
    }
    Ok(())
}

/// In-place `(1−η)ρ + η (Tr_q ρ) ⊗ I/2` on qubit `q` of a `2^n` operator.
pub(crate) fn depolarize_in_place(m: &mut ComplexMatrix, n: usize, q: usize, eta: f64) {
    let bit = 1usize << (n - 1 - q);
    let dim = m.dim();
    let keep = 1.0 - eta;
    for r in (0..dim).filter(|r| r & bit == 0) {
        for c in (0..dim).filter(|c| c & bit == 0) {
            let a00 = m[(r, c)];
            let a11 = m[(r | bit, c | bit)];
            let mixed = (a00 + a11) * (0.5 * eta);
            m[(r, c)] = a00 * keep + mixed;
            m[(r | bit, c | bit)] = a11 * keep + mixed;
            m[(r, c | bit)] *= keep;
            m[(r | bit, c)] *= keep;
        }
    }
}

/// Depolarizes a single qubit at rate `eta`.
pub fn depolarize_qubit(rho: &DensityMatrix, q: usize, eta: f64) -> Result<DensityMatrix> {
    check_rate(eta)?;
    if q >= rho.qubits() {
        return Err(Error::QubitOutOfRange { index: q, qubits: rho.qubits() });
    }
    let mut m = rho.matrix().clone();
    depolarize_in_place(&mut m, rho.qubits(), q, eta);
    DensityMatrix::settle(m)
}

/// Independent depolarization of every qubit at rate `eta`.
pub fn depolarize_all(rho: &DensityMatrix, eta: f64) -> Result<DensityMatrix> {
    check_rate(eta)?;
    if eta == 0.0 {
        return Ok(rho.clone());
    }
    let n = rho.qubits();
    let mut m = rho.matrix().clone();
    for q in 0..n {
        depolarize_in_place(&mut m, n, q, eta);
    }
    DensityMatrix::settle(m)
}

/// Single-qubit depolarizing channel in Pauli-Kraus form,
/// `{√(1−3η/4) I, √(η/4) X, √(η/4) Y, √(η/4) Z}`.
pub fn pauli_depolarizing_channel(eta: f64) -> Result<QuantumChannel> {
    check_rate(eta)?;
    let a = C64::new((1.0 - 0.75 * eta).sqrt(), 0.0);
    let b = (0.25 * eta).sqrt();
    let i = C64::new(0.0, 1.0);
    let o = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    let kraus = vec![
        ComplexMatrix::new(2, 2, vec![a, o, o, a])?,
        ComplexMatrix::new(2, 2, vec![o, r(b), r(b), o])?,
        ComplexMatrix::new(2, 2, vec![o, -i * b, i * b, o])?,
        ComplexMatrix::new(2, 2, vec![r(b), o, o, r(-b)])?,
    ];
    QuantumChannel::new(1, 1, kraus, "DEPOLARIZE")
}
