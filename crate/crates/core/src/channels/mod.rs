//! Quantum operations in Kraus form and the depolarizing noise channel.

mod depolarize;
mod library;

pub use depolarize::{depolarize_all, depolarize_qubit, pauli_depolarizing_channel};
pub use library::{channel_from_unitary, prep_channel, GateLibrary, GATE_NAMES};

use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix, DensityMatrix, C64, MAX_DIM, MAX_QUBITS, ZERO};

/// Completeness tolerance for `Σ K†K = I`.
pub const KRAUS_TOL: f64 = 1e-9;
/// Largest Kraus set [`channel_tensor`] will materialize.
pub const MAX_KRAUS: usize = 256;

/// Completely positive map `ρ ↦ Σ K ρ K†` from `in_qubits` to `out_qubits`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    in_qubits: usize,
    out_qubits: usize,
    kraus: Vec<ComplexMatrix>,
    label: String,
}

impl QuantumChannel {
    /// Builds a channel and requires it to be trace preserving.
    pub fn new(in_qubits: usize, out_qubits: usize, kraus: Vec<ComplexMatrix>, label: &str) -> Result<Self> {
        let channel = Self::from_kraus(in_qubits, out_qubits, kraus, label)?;
        let report = channel_validate(&channel);
        if !report.is_valid() {
            return Err(Error::InvalidChannel(format!(
                "{label}: Kraus completeness residual {:e}",
                report.completeness_residual
            )));
        }
        Ok(channel)
    }

    /// Builds a channel checking only the Kraus shapes; completeness is left
    /// to [`channel_validate`].
    pub fn from_kraus(in_qubits: usize, out_qubits: usize, kraus: Vec<ComplexMatrix>, label: &str) -> Result<Self> {
        if in_qubits > MAX_QUBITS || out_qubits > MAX_QUBITS {
            return Err(Error::CapExceeded(format!("{label}: channel on more than {MAX_QUBITS} qubits")));
        }
        if kraus.is_empty() {
            return Err(Error::InvalidChannel(format!("{label}: empty Kraus set")));
        }
        let (rows, cols) = (1usize << out_qubits, 1usize << in_qubits);
        if let Some(k) = kraus.iter().find(|k| k.rows() != rows || k.cols() != cols) {
            return Err(Error::InvalidChannel(format!(
                "{label}: Kraus operator of shape {}x{}, expected {rows}x{cols}",
                k.rows(),
                k.cols()
            )));
        }
        Ok(Self { in_qubits, out_qubits, kraus, label: label.to_string() })
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn in_qubits(&self) -> usize {
        self.in_qubits
    }

    pub fn out_qubits(&self) -> usize {
        self.out_qubits
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// True when the channel is a single identity Kraus operator.
    pub fn is_identity(&self) -> bool {
        self.in_qubits == self.out_qubits
            && self.kraus.len() == 1
            && self.kraus[0] == ComplexMatrix::identity(1 << self.in_qubits)
    }
}

/// Result of checking Kraus completeness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelReport {
    /// `max |(Σ K†K − I)[i][j]|`.
    pub completeness_residual: f64,
}

impl ChannelReport {
    pub fn is_valid(&self) -> bool {
        self.completeness_residual <= KRAUS_TOL
    }
}

/// Checks `Σ K†K = I`. Complete positivity holds by construction of the
/// Kraus form.
pub fn channel_validate(t: &QuantumChannel) -> ChannelReport {
    let din = 1usize << t.in_qubits;
    let mut sum = ComplexMatrix::zeros(din, din);
    for k in &t.kraus {
        let kk = k.adjoint().matmul(k).expect("Kraus shapes checked at construction");
        sum.add_scaled(C64::new(1.0, 0.0), &kk).expect("same shape");
    }
    let completeness_residual = sum.max_abs_diff(&ComplexMatrix::identity(din)).expect("same shape");
    ChannelReport { completeness_residual }
}

/// `Σ K ρ K†`, cleaned up with [`DensityMatrix::settle`].
pub fn channel_apply(t: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.qubits() != t.in_qubits {
        return Err(Error::DimensionMismatch { expected: t.in_qubits, found: rho.qubits() });
    }
    let out = apply_on_block(rho.matrix(), rho.qubits(), 0, t)?;
    DensityMatrix::settle(out)
}

/// Applies `t` to the contiguous qubits `offset .. offset + t.in_qubits` of
/// a `2^n` operator, leaving the others untouched. The output block sits at
/// the same offset.
pub(crate) fn apply_on_block(m: &ComplexMatrix, n: usize, offset: usize, t: &QuantumChannel) -> Result<ComplexMatrix> {
    let kin = t.in_qubits;
    let kout = t.out_qubits;
    if offset + kin > n || m.dim() != 1 << n {
        return Err(Error::DimensionMismatch { expected: n, found: offset + kin });
    }
    let n_out = n - kin + kout;
    if n_out > MAX_QUBITS {
        return Err(Error::CapExceeded(format!("{n_out} qubits exceeds the cap of {MAX_QUBITS}")));
    }
    if t.is_identity() {
        return Ok(m.clone());
    }
    let dpre = 1usize << offset;
    let dpost = 1usize << (n - offset - kin);
    let din = 1usize << kin;
    let dout = 1usize << kout;
    let dim = m.dim();
    let dim_out = dpre * dout * dpost;
    let src = m.data();

    let mut acc = vec![ZERO; dim_out * dim_out];
    let mut left = vec![ZERO; dim_out * dim];
    for k in &t.kraus {
        // left = (I ⊗ K ⊗ I) ρ
        left.iter_mut().for_each(|z| *z = ZERO);
        for p in 0..dpre {
            for q in 0..dpost {
                for c in 0..dout {
                    let out_row = ((p * dout + c) * dpost + q) * dim;
                    for b in 0..din {
                        let kcb = k[(c, b)];
                        if kcb == ZERO {
                            continue;
                        }
                        let in_row = ((p * din + b) * dpost + q) * dim;
                        for (o, s) in left[out_row..out_row + dim].iter_mut().zip(&src[in_row..in_row + dim]) {
                            *o += kcb * s;
                        }
                    }
                }
            }
        }
        // acc += left (I ⊗ K† ⊗ I)
        for row in 0..dim_out {
            let l = &left[row * dim..(row + 1) * dim];
            let a = &mut acc[row * dim_out..(row + 1) * dim_out];
            for p in 0..dpre {
                for q in 0..dpost {
                    for c in 0..dout {
                        let mut s = ZERO;
                        for b in 0..din {
                            let kcb = k[(c, b)];
                            if kcb != ZERO {
                                s += l[(p * din + b) * dpost + q] * kcb.conj();
                            }
                        }
                        a[(p * dout + c) * dpost + q] += s;
                    }
                }
            }
        }
    }
    ComplexMatrix::new(dim_out, dim_out, acc)
}

/// Tensor product of channels acting on consecutive qubit blocks.
pub fn channel_tensor(parts: &[QuantumChannel]) -> Result<QuantumChannel> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("channel_tensor needs at least one part".into()))?;
    let in_qubits: usize = parts.iter().map(|p| p.in_qubits).sum();
    let out_qubits: usize = parts.iter().map(|p| p.out_qubits).sum();
    if (1usize << in_qubits.min(63)) > MAX_DIM || (1usize << out_qubits.min(63)) > MAX_DIM {
        return Err(Error::CapExceeded(format!(
            "tensor channel on {in_qubits} -> {out_qubits} qubits exceeds the cap of {MAX_QUBITS}"
        )));
    }
    let count = parts.iter().try_fold(1usize, |acc, p| acc.checked_mul(p.kraus.len()));
    if count.map_or(true, |c| c > MAX_KRAUS) {
        return Err(Error::CapExceeded(format!("tensor channel needs more than {MAX_KRAUS} Kraus operators")));
    }
    let mut kraus = first.kraus.clone();
    for part in rest {
        let mut next = Vec::with_capacity(kraus.len() * part.kraus.len());
        for a in &kraus {
            for b in &part.kraus {
                next.push(tensor(a, b)?);
            }
        }
        kraus = next;
    }
    let label = parts.iter().map(|p| p.label.as_str()).collect::<Vec<_>>().join("⊗");
    QuantumChannel::from_kraus(in_qubits, out_qubits, kraus, &label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{trace_distance, Tolerances};
    use crate::random::{random_channel, random_density, seeded};

    fn lib() -> GateLibrary {
        GateLibrary::standard()
    }

    #[test]
    fn identity_channel_is_identity() {
        let id = lib().get("I").unwrap().clone();
        assert!(channel_validate(&id).is_valid());
        let rho = random_density(1, &mut seeded(1));
        assert_eq!(channel_apply(&id, &rho).unwrap(), rho);
    }

    #[test]
    fn incomplete_kraus_set_is_reported() {
        let half = ComplexMatrix::identity(2).scale(C64::new(0.5, 0.0));
        let t = QuantumChannel::from_kraus(1, 1, vec![half.clone()], "half").unwrap();
        let report = channel_validate(&t);
        assert!(!report.is_valid());
        assert!((report.completeness_residual - 0.75).abs() < 1e-15);
        assert!(QuantumChannel::new(1, 1, vec![half], "half").is_err());
    }

    #[test]
    fn shape_mismatch_rejected() {
        let err = QuantumChannel::from_kraus(1, 1, vec![ComplexMatrix::identity(4)], "bad").unwrap_err();
        assert!(matches!(err, Error::InvalidChannel(_)));
        assert!(QuantumChannel::from_kraus(1, 1, vec![], "empty").is_err());
    }

    #[test]
    fn traceout_gives_scalar_one() {
        let t = lib().get("TRACEOUT").unwrap().clone();
        let out = channel_apply(&t, &random_density(1, &mut seeded(4))).unwrap();
        assert_eq!(out.qubits(), 0);
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn apply_rejects_wrong_width() {
        let cnot = lib().get("CNOT").unwrap().clone();
        let rho = DensityMatrix::basis(1, 0).unwrap();
        assert!(matches!(channel_apply(&cnot, &rho), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn tensor_of_identities() {
        let id = lib().get("I").unwrap().clone();
        let t = channel_tensor(&[id.clone(), id]).unwrap();
        assert_eq!(t.in_qubits(), 2);
        assert_eq!(t.kraus(), &[ComplexMatrix::identity(4)]);
    }

    #[test]
    fn tensor_h_x_on_zero_zero() {
        let l = lib();
        let t = channel_tensor(&[l.get("H").unwrap().clone(), l.get("X").unwrap().clone()]).unwrap();
        let out = channel_apply(&t, &DensityMatrix::basis(2, 0).unwrap()).unwrap();
        let plus = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let expected = plus.tensor(&DensityMatrix::basis(1, 1).unwrap()).unwrap();
        assert!(out.matrix().max_abs_diff(expected.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn tensor_prep_extends_state() {
        let l = lib();
        let t = channel_tensor(&[l.get("PREP0").unwrap().clone(), l.get("I").unwrap().clone()]).unwrap();
        assert_eq!((t.in_qubits(), t.out_qubits()), (1, 2));
        let rho = random_density(1, &mut seeded(8));
        let out = channel_apply(&t, &rho).unwrap();
        let expected = DensityMatrix::basis(1, 0).unwrap().tensor(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(expected.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn tensor_kraus_cap() {
        let mut rng = seeded(2);
        let big = random_channel(1, 1, 4, &mut rng);
        let parts = vec![big; 5]; // 4^5 = 1024 operators
        assert!(channel_tensor(&parts).unwrap_err().is_resource_cap());
        assert!(channel_tensor(&[]).is_err());
    }

    #[test]
    fn tensor_matches_blockwise_application() {
        let mut rng = seeded(6);
        let a = random_channel(1, 2, 2, &mut rng);
        let b = random_channel(2, 1, 3, &mut rng);
        let rho = random_density(3, &mut rng);
        let whole = channel_apply(&channel_tensor(&[a.clone(), b.clone()]).unwrap(), &rho).unwrap();
        // apply b on qubits 1..3 first, then a on qubit 0
        let step = apply_on_block(rho.matrix(), 3, 1, &b).unwrap();
        let step = apply_on_block(&step, 2, 0, &a).unwrap();
        assert!(whole.matrix().max_abs_diff(&step).unwrap() < 1e-12);
    }

    #[test]
    fn random_channels_preserve_validity() {
        let mut rng = seeded(12);
        for (kin, kout, r) in [(1, 1, 1), (1, 1, 4), (2, 1, 2), (1, 2, 1), (2, 2, 3)] {
            let t = random_channel(kin, kout, r, &mut rng);
            assert!(channel_validate(&t).is_valid());
            let rho = random_density(kin, &mut rng);
            let out = channel_apply(&t, &rho).unwrap();
            assert!(out.validate(&Tolerances::default()).is_valid());
        }
    }

    #[test]
    fn library_channels_contract() {
        let mut rng = seeded(13);
        for name in GATE_NAMES {
            let t = lib().get(name).unwrap().clone();
            for _ in 0..20 {
                let rho = random_density(t.in_qubits(), &mut rng);
                let sigma = random_density(t.in_qubits(), &mut rng);
                let before = trace_distance(&rho, &sigma).unwrap();
                let after = trace_distance(&channel_apply(&t, &rho).unwrap(), &channel_apply(&t, &sigma).unwrap()).unwrap();
                assert!(after <= before + 1e-9, "{name}: {after} > {before}");
            }
        }
    }
}
