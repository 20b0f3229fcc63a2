use rand::seq::index::sample;
use rand::Rng;

use super::{Circuit, CircuitLayer, Gate};
use crate::error::{Error, Result};
use crate::linalg::MAX_QUBITS;
use crate::random::{random_unitary, seeded};

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `counts[m]` = number of partitions of an `m`-set into blocks of size at
/// most `k`.
fn partition_counts(n: usize, k: usize) -> Vec<u128> {
    let mut counts = vec![0u128; n + 1];
    counts[0] = 1;
    for m in 1..=n {
        counts[m] = (1..=k.min(m)).map(|s| binomial(m - 1, s - 1) * counts[m - s]).sum();
    }
    counts
}

/// Uniformly random partition of `[0, n)` into blocks of size `<= k`. The
/// block holding the smallest remaining element is drawn with probability
/// proportional to the number of partitions that complete it.
fn random_partition(n: usize, k: usize, counts: &[u128], rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();
    while let Some(&first) = remaining.first() {
        let m = remaining.len();
        let weights: Vec<u128> = (1..=k.min(m)).map(|s| binomial(m - 1, s - 1) * counts[m - s]).collect();
        let total: u128 = weights.iter().sum();
        let mut pick = rng.random_range(0..total);
        let mut size = 1;
        for (i, w) in weights.iter().enumerate() {
            if pick < *w {
                size = i + 1;
                break;
            }
            pick -= w;
        }
        let rest = &remaining[1..];
        let mut block = vec![first];
        block.extend(sample(rng, rest.len(), size - 1).into_iter().map(|i| rest[i]));
        block.sort_unstable();
        remaining.retain(|q| !block.contains(q));
        blocks.push(block);
    }
    blocks
}

/// Seeded random circuit of constant width: each layer partitions the
/// register uniformly into blocks of at most `k` qubits and puts a random
/// unitary on each block.
pub fn random_circuit(k: usize, width: usize, depth: usize, seed: u64) -> Result<Circuit> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidParameter(format!("random circuits support k in 1..=3, got {k}")));
    }
    if width > MAX_QUBITS {
        return Err(Error::CapExceeded(format!("width {width} exceeds the cap of {MAX_QUBITS}")));
    }
    let mut rng = seeded(seed);
    let counts = partition_counts(width, k);
    let mut layers = Vec::with_capacity(depth);
    for i in 0..depth {
        let gates = random_partition(width, k, &counts, &mut rng)
            .into_iter()
            .map(|block| {
                let u = random_unitary(1 << block.len(), &mut rng);
                Gate::unitary(u, block.clone(), block)
            })
            .collect::<Result<Vec<_>>>()?;
        layers.push(CircuitLayer::new(i, width, width, gates)?);
    }
    Circuit::new(k, width, layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::channel_validate;
    use std::collections::HashMap;

    #[test]
    fn partition_counts_match_known_values() {
        // Bell numbers for unrestricted blocks, involution counts for k = 2
        assert_eq!(partition_counts(5, 5), vec![1, 1, 2, 5, 15, 52]);
        assert_eq!(partition_counts(6, 2), vec![1, 1, 2, 4, 10, 26, 76]);
        assert_eq!(partition_counts(4, 1), vec![1; 5]);
    }

    #[test]
    fn deterministic_for_seed() {
        assert_eq!(random_circuit(2, 4, 5, 7).unwrap(), random_circuit(2, 4, 5, 7).unwrap());
        assert_ne!(random_circuit(2, 4, 5, 7).unwrap(), random_circuit(2, 4, 5, 8).unwrap());
    }

    #[test]
    fn gates_are_valid_unitaries_within_fan_in() {
        for k in 1..=3 {
            let q = random_circuit(k, 5, 6, k as u64).unwrap();
            assert_eq!(q.widths(), &[5; 7]);
            for layer in q.layers() {
                assert!(layer.max_fan_in() <= k);
                for g in layer.gates() {
                    assert!(channel_validate(g.channel()).completeness_residual <= 1e-9);
                    assert!(g.channel().kraus()[0].unitary_residual() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn partitions_are_roughly_uniform() {
        // 4 qubits, k = 2: 10 partitions, each should appear ~1/10 of the time
        let mut rng = seeded(1);
        let counts = partition_counts(4, 2);
        let mut seen: HashMap<Vec<Vec<usize>>, usize> = HashMap::new();
        let trials = 20_000;
        for _ in 0..trials {
            *seen.entry(random_partition(4, 2, &counts, &mut rng)).or_default() += 1;
        }
        assert_eq!(seen.len(), 10);
        for &c in seen.values() {
            let freq = c as f64 / trials as f64;
            assert!((freq - 0.1).abs() < 0.015, "{freq}");
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(random_circuit(4, 3, 1, 0).is_err());
        assert!(random_circuit(0, 3, 1, 0).is_err());
        assert!(random_circuit(2, MAX_QUBITS + 1, 1, 0).unwrap_err().is_resource_cap());
    }
}
