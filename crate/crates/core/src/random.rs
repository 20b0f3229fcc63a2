//! Seeded random instances: states, unitaries and channels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::QuantumChannel;
use crate::linalg::{ComplexMatrix, DensityMatrix, C64};

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Orthonormalizes the columns in place (modified Gram-Schmidt, two passes).
fn orthonormalize_columns(m: &mut ComplexMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    for j in 0..cols {
        for _ in 0..2 {
            for i in 0..j {
                let proj: C64 = (0..rows).map(|r| m[(r, i)].conj() * m[(r, j)]).sum();
                for r in 0..rows {
                    let v = m[(r, i)];
                    m[(r, j)] -= proj * v;
                }
            }
        }
        let norm = (0..rows).map(|r| m[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..rows {
            m[(r, j)] /= norm;
        }
    }
}

/// Unitary from orthonormalizing a complex Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut m = gaussian_matrix(dim, dim, rng);
    orthonormalize_columns(&mut m);
    m
}

pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let mut h = g.add(&g.adjoint()).expect("square").scale(C64::new(0.5, 0.0));
    h.symmetrize();
    h
}

/// Full-rank mixed state `G G† / tr(G G†)` from a Ginibre matrix.
pub fn random_density(qubits: usize, rng: &mut impl Rng) -> DensityMatrix {
    let dim = 1usize << qubits;
    let g = gaussian_matrix(dim, dim, rng);
    let w = g.matmul(&g.adjoint()).expect("square");
    let tr = w.trace().re;
    DensityMatrix::settle(w.scale(C64::new(1.0 / tr, 0.0))).expect("normalized")
}

/// Pure state with Gaussian amplitudes.
pub fn random_pure(qubits: usize, rng: &mut impl Rng) -> DensityMatrix {
    let amps: Vec<C64> = (0..1usize << qubits).map(|_| gaussian(rng)).collect();
    DensityMatrix::pure(&amps).expect("non-zero vector")
}

/// Probability vector drawn uniformly from the simplex.
pub fn random_weights(count: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..count).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Channel whose Kraus operators are the blocks of a random isometry.
/// `kraus_count * 2^out_qubits` must be at least `2^in_qubits`.
pub fn random_channel(in_qubits: usize, out_qubits: usize, kraus_count: usize, rng: &mut impl Rng) -> QuantumChannel {
    let din = 1usize << in_qubits;
    let dout = 1usize << out_qubits;
    assert!(kraus_count * dout >= din, "isometry needs at least as many rows as columns");
    let mut v = gaussian_matrix(kraus_count * dout, din, rng);
    orthonormalize_columns(&mut v);
    let kraus = (0..kraus_count)
        .map(|j| ComplexMatrix::from_fn(dout, din, |r, c| v[(j * dout + r, c)]))
        .collect();
    QuantumChannel::new(in_qubits, out_qubits, kraus, "random").expect("isometry blocks are complete")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Tolerances;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = seeded(0);
        for dim in [1, 2, 4, 8] {
            assert!(random_unitary(dim, &mut rng).unitary_residual() < 1e-12);
        }
    }

    #[test]
    fn states_are_valid() {
        let mut rng = seeded(1);
        for n in 0..4 {
            assert!(random_density(n, &mut rng).validate(&Tolerances::default()).is_valid());
            assert!(random_pure(n, &mut rng).validate(&Tolerances::default()).is_valid());
        }
    }

    #[test]
    fn seeding_is_deterministic() {
        let a = random_density(2, &mut seeded(42));
        let b = random_density(2, &mut seeded(42));
        assert_eq!(a, b);
    }

    #[test]
    fn weights_sum_to_one() {
        let w = random_weights(7, &mut seeded(3));
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&x| x >= 0.0));
    }
}
