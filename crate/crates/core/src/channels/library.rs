use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use super::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{qubits_for_dim, ComplexMatrix, C64, ONE, ZERO};

/// Names of the built-in gates, as they appear in circuit files.
pub const GATE_NAMES: [&str; 16] = [
    "I", "X", "Y", "Z", "H", "S", "T", "CNOT", "CZ", "SWAP", "TOFFOLI", "PREP0", "PREP1", "PREP_PLUS",
    "TRACEOUT", "DEPHASE",
];

const UNITARY_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn matrix(dim: usize, entries: &[C64]) -> ComplexMatrix {
    ComplexMatrix::new(dim, dim, entries.to_vec()).expect("literal gate shape")
}

/// Permutation matrix sending basis state `i` to `image(i)`.
fn basis_permutation(dim: usize, image: impl Fn(usize) -> usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(image(i), i)] = ONE;
    }
    m
}

fn unitary_matrix(name: &str) -> Option<ComplexMatrix> {
    let h = FRAC_1_SQRT_2;
    let m = match name {
        "I" => ComplexMatrix::identity(2),
        "X" => matrix(2, &[ZERO, ONE, ONE, ZERO]),
        "Y" => matrix(2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]),
        "Z" => matrix(2, &[ONE, ZERO, ZERO, -ONE]),
        "H" => matrix(2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]),
        "S" => matrix(2, &[ONE, ZERO, ZERO, c(0.0, 1.0)]),
        "T" => matrix(2, &[ONE, ZERO, ZERO, C64::from_polar(1.0, FRAC_PI_4)]),
        // first listed input is the control
        "CNOT" => basis_permutation(4, |i| if i & 0b10 != 0 { i ^ 0b01 } else { i }),
        "CZ" => ComplexMatrix::from_real_diag(&[1.0, 1.0, 1.0, -1.0]),
        "SWAP" => basis_permutation(4, |i| (i & 1) << 1 | i >> 1),
        "TOFFOLI" => basis_permutation(8, |i| if i & 0b110 == 0b110 { i ^ 1 } else { i }),
        _ => return None,
    };
    Some(m)
}

/// Single-Kraus channel `ρ ↦ U ρ U†`.
pub fn channel_from_unitary(u: &ComplexMatrix) -> Result<QuantumChannel> {
    if !u.is_square() {
        return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
    }
    let qubits = qubits_for_dim(u.dim())?;
    let residual = u.unitary_residual();
    if residual > UNITARY_TOL {
        return Err(Error::NotUnitary(residual));
    }
    QuantumChannel::new(qubits, qubits, vec![u.clone()], "unitary")
}

/// Fan-in-0 channel adjoining a fresh qubit in a fixed pure state.
pub fn prep_channel(label: &str) -> Result<QuantumChannel> {
    let h = FRAC_1_SQRT_2;
    let ket = match label {
        "PREP0" => [ONE, ZERO],
        "PREP1" => [ZERO, ONE],
        "PREP_PLUS" => [c(h, 0.0), c(h, 0.0)],
        _ => return Err(Error::UnknownGate(label.to_string())),
    };
    QuantumChannel::new(0, 1, vec![ComplexMatrix::column(&ket)], label)
}

fn standard_channel(name: &str) -> Result<QuantumChannel> {
    if let Some(u) = unitary_matrix(name) {
        let mut t = channel_from_unitary(&u)?;
        t.label = name.to_string();
        return Ok(t);
    }
    match name {
        "PREP0" | "PREP1" | "PREP_PLUS" => prep_channel(name),
        "TRACEOUT" => {
            let bra0 = ComplexMatrix::new(1, 2, vec![ONE, ZERO])?;
            let bra1 = ComplexMatrix::new(1, 2, vec![ZERO, ONE])?;
            QuantumChannel::new(1, 0, vec![bra0, bra1], name)
        }
        "DEPHASE" => QuantumChannel::new(
            1,
            1,
            vec![ComplexMatrix::from_real_diag(&[1.0, 0.0]), ComplexMatrix::from_real_diag(&[0.0, 1.0])],
            name,
        ),
        _ => Err(Error::UnknownGate(name.to_string())),
    }
}

/// Named gate templates with a declared maximum fan-in.
#[derive(Clone, Debug)]
pub struct GateLibrary {
    max_fan_in: usize,
    gates: BTreeMap<String, QuantumChannel>,
}

impl GateLibrary {
    /// Every built-in gate; the declared fan-in is 3 (for TOFFOLI).
    pub fn standard() -> Self {
        let gates = GATE_NAMES
            .iter()
            .map(|&name| (name.to_string(), standard_channel(name).expect("built-in gates are valid")))
            .collect();
        Self { max_fan_in: 3, gates }
    }

    /// Built-in gates with fan-in at most `k`.
    pub fn with_fan_in(k: usize) -> Self {
        let mut lib = Self::standard();
        lib.gates.retain(|_, g| g.in_qubits() <= k);
        lib.max_fan_in = k;
        lib
    }

    pub fn max_fan_in(&self) -> usize {
        self.max_fan_in
    }

    pub fn get(&self, name: &str) -> Option<&QuantumChannel> {
        self.gates.get(name)
    }

    /// Registers a user-supplied unitary under `name`.
    pub fn insert_unitary(&mut self, name: &str, u: &ComplexMatrix) -> Result<()> {
        let mut t = channel_from_unitary(u)?;
        if t.in_qubits() > self.max_fan_in {
            return Err(Error::InvalidParameter(format!(
                "{name} has fan-in {} above the library limit {}",
                t.in_qubits(),
                self.max_fan_in
            )));
        }
        t.label = name.to_string();
        self.gates.insert(name.to_string(), t);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &QuantumChannel)> {
        self.gates.iter().map(|(k, v)| (k.as_str(), v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{channel_apply, channel_validate};
    use crate::linalg::DensityMatrix;

    #[test]
    fn every_library_entry_is_valid() {
        let lib = GateLibrary::standard();
        for name in GATE_NAMES {
            let g = lib.get(name).unwrap();
            assert!(channel_validate(g).is_valid(), "{name}");
            assert!(g.in_qubits() <= lib.max_fan_in());
            assert_eq!(g.label(), name);
        }
        assert_eq!(lib.iter().count(), GATE_NAMES.len());
    }

    #[test]
    fn fan_in_restriction_drops_toffoli() {
        let lib = GateLibrary::with_fan_in(2);
        assert!(lib.get("TOFFOLI").is_none());
        assert!(lib.get("CNOT").is_some());
        assert!(lib.iter().all(|(_, g)| g.in_qubits() <= 2));
    }

    #[test]
    fn hadamard_on_zero() {
        let h = channel_from_unitary(&unitary_matrix("H").unwrap()).unwrap();
        let out = channel_apply(&h, &DensityMatrix::basis(1, 0).unwrap()).unwrap();
        for z in out.matrix().data() {
            assert!((z - c(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn cnot_control_is_first_input() {
        let cnot = GateLibrary::standard().get("CNOT").unwrap().clone();
        let out = channel_apply(&cnot, &DensityMatrix::basis(2, 0b10).unwrap()).unwrap();
        assert_eq!(out, DensityMatrix::basis(2, 0b11).unwrap());
        let out = channel_apply(&cnot, &DensityMatrix::basis(2, 0b01).unwrap()).unwrap();
        assert_eq!(out, DensityMatrix::basis(2, 0b01).unwrap());
    }

    #[test]
    fn toffoli_and_swap_permute_basis() {
        let lib = GateLibrary::standard();
        let out = channel_apply(lib.get("TOFFOLI").unwrap(), &DensityMatrix::basis(3, 0b110).unwrap()).unwrap();
        assert_eq!(out, DensityMatrix::basis(3, 0b111).unwrap());
        let out = channel_apply(lib.get("SWAP").unwrap(), &DensityMatrix::basis(2, 0b10).unwrap()).unwrap();
        assert_eq!(out, DensityMatrix::basis(2, 0b01).unwrap());
    }

    #[test]
    fn identity_unitary_channel() {
        let t = channel_from_unitary(&ComplexMatrix::identity(2)).unwrap();
        assert!(t.is_identity());
        assert_eq!((t.in_qubits(), t.out_qubits()), (1, 1));
    }

    #[test]
    fn non_unitary_rejected() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(channel_from_unitary(&m), Err(Error::NotUnitary(_))));
        let odd = ComplexMatrix::identity(3);
        assert!(matches!(channel_from_unitary(&odd), Err(Error::NotPowerOfTwo(3))));
    }

    #[test]
    fn preparations() {
        let p0 = prep_channel("PREP0").unwrap();
        assert_eq!((p0.in_qubits(), p0.out_qubits()), (0, 1));
        assert_eq!(channel_apply(&p0, &DensityMatrix::scalar()).unwrap(), DensityMatrix::basis(1, 0).unwrap());
        let plus = prep_channel("PREP_PLUS").unwrap();
        assert!(channel_validate(&plus).completeness_residual < 1e-15);
        assert!(matches!(prep_channel("PREP2"), Err(Error::UnknownGate(_))));
    }

    #[test]
    fn user_unitary_registration() {
        let mut lib = GateLibrary::with_fan_in(1);
        lib.insert_unitary("MYX", &unitary_matrix("X").unwrap()).unwrap();
        assert_eq!(lib.get("MYX").unwrap().label(), "MYX");
        assert!(lib.insert_unitary("BIG", &unitary_matrix("CNOT").unwrap()).is_err());
    }
}
