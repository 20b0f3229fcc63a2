//! Density-matrix simulation of layered quantum circuits under independent
//! per-qubit depolarizing noise, together with the indistinguishability
//! bounds that describe how fast such circuits forget their input.
//!
//! * [`linalg`]: dense complex matrices, partial traces, eigenvalues and
//!   trace distance.
//! * [`channels`]: Kraus-form quantum operations and depolarization.
//! * [`circuit`]: the layered circuit model, its text format and ideal or
//!   noisy execution.
//! * [`analysis`]: subset distances, the bound recursion and worthlessness
//!   detectors.
//! * [`report`]: CSV and JSON tables.

pub mod analysis;
pub mod channels;
pub mod circuit;
pub mod error;
pub mod linalg;
pub mod par;
pub mod random;
pub mod report;

pub use error::{Error, Result};
pub use par::Execution;
