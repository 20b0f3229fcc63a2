use crate::error::{Error, Result};

/// Strictly increasing set of qubit indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitSubset(Vec<usize>);

impl QubitSubset {
    /// Validates ordering and range against a register of `qubits` qubits.
    pub fn new(indices: Vec<usize>, qubits: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedSubset(indices));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= qubits) {
            return Err(Error::QubitOutOfRange { index: bad, qubits });
        }
        Ok(Self(indices))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn all(qubits: usize) -> Self {
        Self((0..qubits).collect())
    }

    /// Subset whose members are the set bits of `mask`, qubit `q` at bit `q`.
    pub fn from_mask(mask: usize, qubits: usize) -> Self {
        Self((0..qubits).filter(|q| mask >> q & 1 == 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0.binary_search(&q).is_ok()
    }

    pub fn complement(&self, qubits: usize) -> Self {
        Self((0..qubits).filter(|q| !self.contains(*q)).collect())
    }

    pub fn mask(&self) -> usize {
        self.0.iter().fold(0, |m, q| m | 1 << q)
    }
}

/// All subsets of `[0, qubits)` of size at most `max_size`, sizes ascending
/// and lexicographic within each size.
pub fn subsets_up_to(qubits: usize, max_size: usize) -> Vec<QubitSubset> {
    let mut out = Vec::new();
    for size in 0..=max_size.min(qubits) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            out.push(QubitSubset(combo.clone()));
            // advance to the next combination in lexicographic order
            let mut i = size;
            while i > 0 && combo[i - 1] == qubits - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}
