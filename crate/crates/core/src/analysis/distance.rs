//! Empirical `d_in`: the largest trace distance between reduced states over
//! all qubit subsets of bounded size.

use crate::error::{Error, Result};
use crate::linalg::{
    matrix_trace_distance, partial_trace_matrix, subsets_up_to, ComplexMatrix, DensityMatrix, QubitSubset,
};
use crate::par::{map_range, Execution};

/// Largest register on which subsets are enumerated exhaustively.
pub const ENUMERATION_CAP: usize = 10;

fn check_enumerable(qubits: usize) -> Result<()> {
    if qubits > ENUMERATION_CAP {
        return Err(Error::CapExceeded(format!(
            "subset enumeration over {qubits} qubits exceeds the cap of {ENUMERATION_CAP}"
        )));
    }
    Ok(())
}

/// Reduced states of one register on every subset, in enumeration order.
#[derive(Clone, Debug)]
pub struct SubsetMarginals {
    qubits: usize,
    subsets: Vec<QubitSubset>,
    matrices: Vec<ComplexMatrix>,
}

impl SubsetMarginals {
    /// Marginals on all subsets of size at most `max_size`.
    pub fn new(rho: &DensityMatrix, max_size: usize) -> Result<Self> {
        let qubits = rho.qubits();
        check_enumerable(qubits)?;
        let subsets = subsets_up_to(qubits, max_size.min(qubits));
        let matrices = subsets
            .iter()
            .map(|a| {
                if a.len() == qubits {
                    rho.matrix().clone()
                } else {
                    partial_trace_matrix(rho.matrix(), qubits, a.indices())
                }
            })
            .collect();
        Ok(Self { qubits, subsets, matrices })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn subsets(&self) -> &[QubitSubset] {
        &self.subsets
    }

    /// Largest subset size covered.
    pub fn max_size(&self) -> usize {
        self.subsets.last().map_or(0, QubitSubset::len)
    }
}

/// `profile[n]` is the maximum trace distance over subsets of size `<= n`,
/// for `n = 0 ..= max_size`.
pub fn profile_from_marginals(a: &SubsetMarginals, b: &SubsetMarginals) -> Result<Vec<f64>> {
    if a.qubits != b.qubits || a.subsets.len() != b.subsets.len() {
        return Err(Error::DimensionMismatch { expected: a.qubits, found: b.qubits });
    }
    let mut profile = vec![0.0f64; a.max_size().min(b.max_size()) + 1];
    for ((subset, ma), mb) in a.subsets.iter().zip(&a.matrices).zip(&b.matrices) {
        if subset.is_empty() {
            continue;
        }
        let d = matrix_trace_distance(ma, mb)?;
        let slot = &mut profile[subset.len()];
        *slot = slot.max(d);
    }
    for n in 1..profile.len() {
        profile[n] = profile[n].max(profile[n - 1]);
    }
    Ok(profile)
}

/// Distances `d_0 ..= d_{qubits}` between two states of equal width.
pub fn distance_profile(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Vec<f64>> {
    if rho.qubits() != sigma.qubits() {
        return Err(Error::DimensionMismatch { expected: rho.qubits(), found: sigma.qubits() });
    }
    let n = rho.qubits();
    profile_from_marginals(&SubsetMarginals::new(rho, n)?, &SubsetMarginals::new(sigma, n)?)
}

/// Maximum of `D(ρ|_A, σ|_A)` over subsets with `|A| <= n`. The empty subset
/// contributes zero.
pub fn empirical_d(rho: &DensityMatrix, sigma: &DensityMatrix, n: usize) -> Result<f64> {
    if rho.qubits() != sigma.qubits() {
        return Err(Error::DimensionMismatch { expected: rho.qubits(), found: sigma.qubits() });
    }
    let size = n.min(rho.qubits());
    let profile = profile_from_marginals(&SubsetMarginals::new(rho, size)?, &SubsetMarginals::new(sigma, size)?)?;
    Ok(profile[size])
}

/// All unordered pairs `(a, b)` with `a < b`, in lexicographic order.
pub fn index_pairs(count: usize) -> Vec<(usize, usize)> {
    (0..count).flat_map(|a| (a + 1..count).map(move |b| (a, b))).collect()
}

/// Distance profiles at every level for every pair of trajectories.
///
/// `result[p][i][n]` is `d_{i,n}` for pair `index_pairs(len)[p]`. Marginals
/// are computed once per state and level; pairs are spread over the pool.
pub fn pairwise_level_profiles(levels: &[Vec<DensityMatrix>], mode: Execution) -> Result<Vec<Vec<Vec<f64>>>> {
    let pairs = index_pairs(levels.len());
    let depth = levels.first().map_or(0, Vec::len);
    if levels.iter().any(|l| l.len() != depth) {
        return Err(Error::InvalidParameter("trajectories differ in depth".into()));
    }
    let mut out = vec![Vec::with_capacity(depth); pairs.len()];
    for i in 0..depth {
        let marginals = map_range(mode, levels.len(), |s| SubsetMarginals::new(&levels[s][i], levels[s][i].qubits()))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let profiles = map_range(mode, pairs.len(), |p| {
            let (a, b) = pairs[p];
            profile_from_marginals(&marginals[a], &marginals[b])
        });
        for (slot, profile) in out.iter_mut().zip(profiles) {
            slot.push(profile?);
        }
    }
    Ok(out)
}
