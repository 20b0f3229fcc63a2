//! Layered circuits: each layer is a tensor product of gates acting on a
//! partition of the current register, possibly changing its width.

mod exec;
mod model;
mod parse;
mod random;

pub use exec::{apply_layer, run_ideal, run_noisy, run_noisy_with, NoiseSchedule, Trajectory};
pub use model::{Circuit, CircuitLayer, Gate, GateSpec};
pub use parse::{parse_circuit, serialize_circuit};
pub use random::random_circuit;
