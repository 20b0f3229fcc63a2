use super::{Circuit, CircuitLayer};
use crate::channels::{apply_on_block, depolarize_all};
use crate::error::{Error, Result};
use crate::linalg::{permute_qubits, DensityMatrix};

/// Where depolarizing rounds are inserted around the layers.
///
/// The default places one round between every pair of consecutive layers
/// and none before the first or after the last layer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NoiseSchedule {
    /// Also depolarize the input before the first layer.
    pub before_first: bool,
    /// Also depolarize the final level.
    pub after_last: bool,
}

impl NoiseSchedule {
    /// Noise before every layer, including the first. This is the model in
    /// which every level-to-level step contracts distances.
    pub fn every_layer() -> Self {
        Self { before_first: true, after_last: false }
    }

    /// Whether a noise round precedes layer `i`.
    pub fn noisy_before_layer(&self, i: usize) -> bool {
        i > 0 || self.before_first
    }

    /// Number of noise rounds applied before level `i` is reached.
    pub fn rounds_before_level(&self, i: usize) -> usize {
        if self.before_first {
            i
        } else {
            i.saturating_sub(1)
        }
    }
}

/// States `ρ_0 .. ρ_t`, each recorded before its noise round, plus the final
/// output.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub levels: Vec<DensityMatrix>,
    /// Equal to the last level unless the schedule appends a final round.
    pub output: DensityMatrix,
    pub eta: f64,
    pub schedule: NoiseSchedule,
}

impl Trajectory {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }
}

/// Applies one layer: permute inputs into gate-block order, apply each gate
/// on its block, then permute the outputs back into index order.
pub fn apply_layer(layer: &CircuitLayer, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.qubits() != layer.in_width() {
        return Err(Error::DimensionMismatch { expected: layer.in_width(), found: rho.qubits() });
    }
    if layer.gates().iter().all(|g| g.channel().is_identity() && g.inputs() == g.outputs()) {
        return Ok(rho.clone());
    }
    let in_order: Vec<usize> = layer.gates().iter().flat_map(|g| g.inputs().iter().copied()).collect();
    let mut m = permute_qubits(rho.matrix(), &in_order)?;
    let mut width = layer.in_width();
    let mut offset = 0;
    for gate in layer.gates() {
        let t = gate.channel();
        m = apply_on_block(&m, width, offset, t)?;
        width = width - t.in_qubits() + t.out_qubits();
        offset += t.out_qubits();
    }
    let out_order: Vec<usize> = layer.gates().iter().flat_map(|g| g.outputs().iter().copied()).collect();
    let mut back = vec![0; out_order.len()];
    for (pos, &q) in out_order.iter().enumerate() {
        back[q] = pos;
    }
    DensityMatrix::settle(permute_qubits(&m, &back)?)
}

fn check_input(q: &Circuit, rho0: &DensityMatrix) -> Result<()> {
    if rho0.qubits() != q.input_width() {
        return Err(Error::DimensionMismatch { expected: q.input_width(), found: rho0.qubits() });
    }
    Ok(())
}

/// Noise-free run: `ρ_{i+1} = T_i(ρ_i)`.
pub fn run_ideal(q: &Circuit, rho0: &DensityMatrix) -> Result<Trajectory> {
    check_input(q, rho0)?;
    let mut levels = Vec::with_capacity(q.depth() + 1);
    levels.push(rho0.clone());
    for layer in q.layers() {
        let next = apply_layer(layer, levels.last().expect("non-empty"))?;
        levels.push(next);
    }
    let output = levels.last().expect("non-empty").clone();
    Ok(Trajectory { levels, output, eta: 0.0, schedule: NoiseSchedule::default() })
}

/// Noisy run with the default schedule: no noise before the first layer,
/// one round of `E_η` on every qubit before each later layer.
pub fn run_noisy(q: &Circuit, eta: f64, rho0: &DensityMatrix) -> Result<Trajectory> {
    run_noisy_with(q, eta, rho0, NoiseSchedule::default())
}

pub fn run_noisy_with(q: &Circuit, eta: f64, rho0: &DensityMatrix, schedule: NoiseSchedule) -> Result<Trajectory> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidRate(eta));
    }
    check_input(q, rho0)?;
    let mut levels = Vec::with_capacity(q.depth() + 1);
    levels.push(rho0.clone());
    for (i, layer) in q.layers().iter().enumerate() {
        let current = levels.last().expect("non-empty");
        let next = if schedule.noisy_before_layer(i) && eta > 0.0 {
            apply_layer(layer, &depolarize_all(current, eta)?)?
        } else {
            apply_layer(layer, current)?
        };
        levels.push(next);
    }
    let last = levels.last().expect("non-empty");
    let output = if schedule.after_last { depolarize_all(last, eta)? } else { last.clone() };
    Ok(Trajectory { levels, output, eta, schedule })
}
