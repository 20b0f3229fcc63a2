use std::fmt;

use super::{hermitian_eigenvalues, qubits_for_dim, tensor, ComplexMatrix, QubitSubset, C64, MAX_QUBITS, ONE, ZERO};
use crate::error::{Error, Result};

/// Numerical tolerances for density-matrix validity checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub herm: f64,
    pub trace: f64,
    pub psd: f64,
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { herm: 1e-9, trace: 1e-9, psd: 1e-8, eig: 1e-9 }
    }
}

/// Window within which a drifting trace is silently renormalized.
const RENORMALIZE_WINDOW: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NotSquare { rows: usize, cols: usize },
    Hermiticity { residual: f64 },
    Trace { residual: f64 },
    Psd { min_eigenvalue: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSquare { rows, cols } => write!(f, "not square ({rows}x{cols})"),
            Violation::Hermiticity { residual } => write!(f, "not Hermitian (residual {residual:e})"),
            Violation::Trace { residual } => write!(f, "trace off by {residual:e}"),
            Violation::Psd { min_eigenvalue } => {
                write!(f, "not positive semi-definite (min eigenvalue {min_eigenvalue:e})")
            }
        }
    }
}

/// Every violated density-matrix invariant with its measured residual.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks Hermiticity, unit trace and positivity. Violations are data.
pub fn validate_density(m: &ComplexMatrix, tol: &Tolerances) -> ValidationReport {
    let mut violations = Vec::new();
    if !m.is_square() {
        violations.push(Violation::NotSquare { rows: m.rows(), cols: m.cols() });
        return ValidationReport { violations };
    }
    let residual = m.hermitian_residual();
    if residual > tol.herm {
        violations.push(Violation::Hermiticity { residual });
    }
    let trace_residual = (m.trace() - ONE).norm();
    if trace_residual > tol.trace {
        violations.push(Violation::Trace { residual: trace_residual });
    }
    let mut hermitian_part = m.clone();
    hermitian_part.symmetrize();
    match hermitian_eigenvalues(&hermitian_part) {
        Ok(eig) => {
            let min = eig.first().copied().unwrap_or(0.0);
            if min < -tol.psd {
                violations.push(Violation::Psd { min_eigenvalue: min });
            }
        }
        Err(_) => violations.push(Violation::Psd { min_eigenvalue: f64::NAN }),
    }
    ValidationReport { violations }
}

/// Hermitian, positive semi-definite, unit-trace matrix on `qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `matrix` with the default tolerances.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        let qubits = qubits_for_dim(matrix.dim())?;
        check_cap(qubits)?;
        let report = validate_density(&matrix, &Tolerances::default());
        if !report.is_valid() {
            return Err(Error::InvalidDensity(report.to_string()));
        }
        Ok(Self { qubits, matrix })
    }

    /// Wraps a matrix known to be a density matrix of the given size.
    pub(crate) fn from_raw(qubits: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << qubits);
        Self { qubits, matrix }
    }

    /// Cleans up the output of a channel: restores exact Hermiticity and
    /// renormalizes a trace that drifted by at most `1e-6`; larger drift is
    /// an error.
    pub fn settle(mut matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        let qubits = qubits_for_dim(matrix.dim())?;
        matrix.symmetrize();
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > RENORMALIZE_WINDOW {
            return Err(Error::TraceDrift(trace));
        }
        if trace != 1.0 {
            matrix = matrix.scale(C64::new(1.0 / trace, 0.0));
        }
        Ok(Self { qubits, matrix })
    }

    /// The zero-qubit state `[1]`.
    pub fn scalar() -> Self {
        Self { qubits: 0, matrix: ComplexMatrix::identity(1) }
    }

    /// Computational basis state `|index⟩⟨index|`.
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        check_cap(qubits)?;
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!("basis index {index} out of range for {qubits} qubits")));
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(index, index)] = ONE;
        Ok(Self { qubits, matrix: m })
    }

    /// `|ψ⟩⟨ψ|` for the normalized version of `amplitudes`.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        let qubits = qubits_for_dim(amplitudes.len())?;
        check_cap(qubits)?;
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let v: Vec<C64> = amplitudes.iter().map(|z| z / norm).collect();
        Ok(Self { qubits, matrix: ComplexMatrix::outer(&v) })
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(qubits: usize) -> Result<Self> {
        check_cap(qubits)?;
        let dim = 1usize << qubits;
        Ok(Self { qubits, matrix: ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)) })
    }

    /// Convex combination `Σ p_i ρ_i`; weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let qubits = first.1.qubits;
        let mut total = 0.0;
        let mut m = ComplexMatrix::zeros(first.1.dim(), first.1.dim());
        for &(p, rho) in parts {
            if rho.qubits != qubits {
                return Err(Error::DimensionMismatch { expected: qubits, found: rho.qubits });
            }
            if p < 0.0 {
                return Err(Error::InvalidParameter(format!("negative mixture weight {p}")));
            }
            total += p;
            m.add_scaled(C64::new(p, 0.0), &rho.matrix)?;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("mixture weights sum to {total}")));
        }
        Self::settle(m)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let qubits = self.qubits + other.qubits;
        check_cap(qubits)?;
        Ok(Self { qubits, matrix: tensor(&self.matrix, &other.matrix)? })
    }

    pub fn validate(&self, tol: &Tolerances) -> ValidationReport {
        validate_density(&self.matrix, tol)
    }
}

fn check_cap(qubits: usize) -> Result<()> {
    if qubits > MAX_QUBITS {
        return Err(Error::CapExceeded(format!("{qubits} qubits exceeds the cap of {MAX_QUBITS}")));
    }
    Ok(())
}

/// Offsets of every assignment to `qubits` inside an `n`-qubit index, in
/// the order those qubits are listed.
pub(crate) fn index_offsets(qubits: &[usize], n: usize) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|a| {
            qubits
                .iter()
                .enumerate()
                .filter(|&(j, _)| a >> (k - 1 - j) & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | 1 << (n - 1 - q))
        })
        .collect()
}

/// Partial trace on a raw `2^n`-dimensional matrix, keeping `keep` in the
/// given order.
pub(crate) fn partial_trace_matrix(m: &ComplexMatrix, n: usize, keep: &[usize]) -> ComplexMatrix {
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let kept = index_offsets(keep, n);
    let rest = index_offsets(&traced, n);
    let dk = kept.len();
    let dim = m.dim();
    let data = m.data();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for (a, &ra) in kept.iter().enumerate() {
        for (b, &rb) in kept.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &rest {
                acc += data[(ra | t) * dim + (rb | t)];
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// Reduced state on `keep`; result qubit `j` is `keep[j]`.
pub fn partial_trace(rho: &DensityMatrix, keep: &QubitSubset) -> Result<DensityMatrix> {
    if let Some(&bad) = keep.indices().iter().find(|&&q| q >= rho.qubits) {
        return Err(Error::QubitOutOfRange { index: bad, qubits: rho.qubits });
    }
    if keep.len() == rho.qubits {
        return Ok(rho.clone());
    }
    Ok(DensityMatrix::from_raw(keep.len(), partial_trace_matrix(&rho.matrix, rho.qubits, keep.indices())))
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: order.len() });
    }
    for &q in order {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, qubits: n });
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(Error::InvalidParameter(format!("qubit {q} repeated in permutation")));
        }
    }
    Ok(())
}

fn permuted_index_map(order: &[usize], n: usize) -> Vec<usize> {
    (0..1usize << n)
        .map(|i| {
            order
                .iter()
                .enumerate()
                .filter(|&(_, &q)| i >> (n - 1 - q) & 1 == 1)
                .fold(0, |acc, (p, _)| acc | 1 << (n - 1 - p))
        })
        .collect()
}

/// Reorders the qubits of a square `2^n` operator so that new qubit `p` is
/// old qubit `order[p]`.
pub fn permute_qubits(m: &ComplexMatrix, order: &[usize]) -> Result<ComplexMatrix> {
    let n = qubits_for_dim(m.dim())?;
    check_permutation(order, n)?;
    if order.iter().enumerate().all(|(p, &q)| p == q) {
        return Ok(m.clone());
    }
    let map = permuted_index_map(order, n);
    let dim = m.dim();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            out[(map[r], map[c])] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Explicit permutation unitary `P` with `P M P†` equal to
/// [`permute_qubits`]`(M, order)`.
pub fn permutation_unitary(order: &[usize]) -> Result<ComplexMatrix> {
    let n = order.len();
    check_permutation(order, n)?;
    let map = permuted_index_map(order, n);
    let dim = 1usize << n;
    let mut p = ComplexMatrix::zeros(dim, dim);
    for (i, &j) in map.iter().enumerate() {
        p[(j, i)] = ONE;
    }
    Ok(p)
}

/// `D(ρ, σ) = ½ ‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.qubits != sigma.qubits {
        return Err(Error::DimensionMismatch { expected: rho.qubits, found: sigma.qubits });
    }
    matrix_trace_distance(&rho.matrix, &sigma.matrix)
}

pub(crate) fn matrix_trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let mut diff = a.sub(b)?;
    diff.symmetrize();
    let eig = hermitian_eigenvalues(&diff)?;
    Ok((0.5 * eig.iter().map(|x| x.abs()).sum::<f64>()).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, seeded};

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)]).unwrap()
    }

    #[test]
    fn trace_out_nothing() {
        let rho = random_density(3, &mut seeded(1));
        assert_eq!(partial_trace(&rho, &QubitSubset::all(3)).unwrap(), rho);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let keep = QubitSubset::new(vec![0], 2).unwrap();
        let red = partial_trace(&bell(), &keep).unwrap();
        let diff = red.matrix().max_abs_diff(DensityMatrix::maximally_mixed(1).unwrap().matrix()).unwrap();
        assert!(diff < 1e-15);
    }

    #[test]
    fn product_marginals_recover_factors() {
        let mut rng = seeded(2);
        for _ in 0..20 {
            let a = random_density(1, &mut rng);
            let b = random_density(1, &mut rng);
            let ab = a.tensor(&b).unwrap();
            let ra = partial_trace(&ab, &QubitSubset::new(vec![0], 2).unwrap()).unwrap();
            let rb = partial_trace(&ab, &QubitSubset::new(vec![1], 2).unwrap()).unwrap();
            assert!(ra.matrix().max_abs_diff(a.matrix()).unwrap() < 1e-10);
            assert!(rb.matrix().max_abs_diff(b.matrix()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn partial_trace_keeps_qubit_zero_most_significant() {
        // |01⟩: qubit 0 in |0⟩, qubit 1 in |1⟩.
        let rho = DensityMatrix::basis(2, 0b01).unwrap();
        let q1 = partial_trace(&rho, &QubitSubset::new(vec![1], 2).unwrap()).unwrap();
        assert_eq!(q1, DensityMatrix::basis(1, 1).unwrap());
        let q0 = partial_trace(&rho, &QubitSubset::new(vec![0], 2).unwrap()).unwrap();
        assert_eq!(q0, DensityMatrix::basis(1, 0).unwrap());
    }

    #[test]
    fn partial_trace_out_of_range() {
        let rho = DensityMatrix::basis(2, 0).unwrap();
        let keep = QubitSubset::new(vec![2], 3).unwrap();
        assert!(matches!(partial_trace(&rho, &keep), Err(Error::QubitOutOfRange { index: 2, .. })));
    }

    #[test]
    fn trace_distance_examples() {
        let zero = DensityMatrix::basis(1, 0).unwrap();
        let one = DensityMatrix::basis(1, 1).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert_eq!(trace_distance(&zero, &zero).unwrap(), 0.0);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&zero, &mixed).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(trace_distance(&zero, &bell()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn validation_examples() {
        let tol = Tolerances::default();
        assert!(validate_density(DensityMatrix::maximally_mixed(1).unwrap().matrix(), &tol).is_valid());

        let heavy = ComplexMatrix::from_real_diag(&[0.6, 0.6]);
        let report = validate_density(&heavy, &tol);
        assert_eq!(report.violations.len(), 1);
        match report.violations[0] {
            Violation::Trace { residual } => assert!((residual - 0.2).abs() < 1e-12),
            ref v => panic!("unexpected {v:?}"),
        }

        let indefinite = ComplexMatrix::from_real_rows(&[&[0.5, 0.6], &[0.6, 0.5]]).unwrap();
        let report = validate_density(&indefinite, &tol);
        assert_eq!(report.violations.len(), 1);
        match report.violations[0] {
            Violation::Psd { min_eigenvalue } => assert!((min_eigenvalue + 0.1).abs() < 1e-12),
            ref v => panic!("unexpected {v:?}"),
        }

        let skew = ComplexMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]).unwrap();
        assert!(matches!(validate_density(&skew, &tol).violations[0], Violation::Hermiticity { .. }));
        let rect = ComplexMatrix::zeros(2, 1);
        assert!(matches!(validate_density(&rect, &tol).violations[0], Violation::NotSquare { .. }));
    }

    #[test]
    fn settle_renormalizes_small_drift_only() {
        let m = ComplexMatrix::from_real_diag(&[0.5 + 5e-7, 0.5]);
        let rho = DensityMatrix::settle(m).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
        let drifted = ComplexMatrix::from_real_diag(&[0.6, 0.5]);
        assert!(matches!(DensityMatrix::settle(drifted), Err(Error::TraceDrift(_))));
    }

    #[test]
    fn permutation_matches_explicit_unitary() {
        let mut rng = seeded(9);
        let rho = random_density(3, &mut rng);
        for order in [[0, 1, 2], [2, 0, 1], [1, 2, 0], [2, 1, 0]] {
            let fast = permute_qubits(rho.matrix(), &order).unwrap();
            let p = permutation_unitary(&order).unwrap();
            let slow = rho.matrix().conjugate_by(&p).unwrap();
            assert!(fast.max_abs_diff(&slow).unwrap() < 1e-15);
        }
        // new qubit 0 is old qubit 2
        let b = DensityMatrix::basis(3, 0b001).unwrap();
        let moved = permute_qubits(b.matrix(), &[2, 0, 1]).unwrap();
        assert_eq!(moved, DensityMatrix::basis(3, 0b100).unwrap().into_matrix());
        assert!(permute_qubits(b.matrix(), &[0, 0, 1]).is_err());
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.6, 0.6])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.5, 0.25, 0.25])).is_err());
        assert!(DensityMatrix::basis(2, 4).is_err());
        assert!(DensityMatrix::maximally_mixed(MAX_QUBITS + 1).unwrap_err().is_resource_cap());
        assert!(DensityMatrix::pure(&[ZERO, ZERO]).is_err());
    }
}
