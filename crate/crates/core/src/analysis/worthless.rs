//! Probe-based detectors for circuits whose outputs forget their inputs.

use std::fmt;
use std::str::FromStr;

use super::distance::index_pairs;
use crate::circuit::{run_noisy_with, Circuit, NoiseSchedule};
use crate::error::{Error, Result};
use crate::linalg::{trace_distance, DensityMatrix};
use crate::par::{map_range, map_slice, Execution};
use crate::random::{random_pure, seeded};

/// Largest input width for which `basis` probes are allowed.
pub const BASIS_PROBE_CAP: usize = 6;
/// Random probes used when the input is too wide for `basis`.
pub const DEFAULT_RANDOM_PROBES: usize = 32;

/// Which input states to run through a circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeSpec {
    /// Every computational basis state.
    Basis,
    /// Two basis states, given by index.
    Pair(usize, usize),
    /// Seeded random pure states.
    Random(usize),
}

impl ProbeSpec {
    /// `basis` up to [`BASIS_PROBE_CAP`] qubits, otherwise 32 random states.
    pub fn default_for(qubits: usize) -> Self {
        if qubits <= BASIS_PROBE_CAP {
            ProbeSpec::Basis
        } else {
            ProbeSpec::Random(DEFAULT_RANDOM_PROBES)
        }
    }

    /// Builds labelled probe states on `qubits` qubits.
    pub fn states(&self, qubits: usize, seed: u64) -> Result<Vec<Probe>> {
        match *self {
            ProbeSpec::Basis => {
                if qubits > BASIS_PROBE_CAP {
                    return Err(Error::CapExceeded(format!(
                        "basis probes on {qubits} qubits exceed the cap of {BASIS_PROBE_CAP}"
                    )));
                }
                (0..1usize << qubits).map(|i| Probe::basis(qubits, i)).collect()
            }
            ProbeSpec::Pair(a, b) => Ok(vec![Probe::basis(qubits, a)?, Probe::basis(qubits, b)?]),
            ProbeSpec::Random(count) => {
                let mut rng = seeded(seed);
                Ok((0..count)
                    .map(|i| Probe { label: format!("random{i}"), state: random_pure(qubits, &mut rng) })
                    .collect())
            }
        }
    }
}

impl FromStr for ProbeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("invalid probe spec `{s}`; expected basis, pair:i,j or random:N"));
        if s == "basis" {
            return Ok(ProbeSpec::Basis);
        }
        if let Some(rest) = s.strip_prefix("pair:") {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            return Ok(ProbeSpec::Pair(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?));
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let count: usize = rest.trim().parse().map_err(|_| bad())?;
            if count == 0 {
                return Err(bad());
            }
            return Ok(ProbeSpec::Random(count));
        }
        Err(bad())
    }
}

impl fmt::Display for ProbeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbeSpec::Basis => write!(f, "basis"),
            ProbeSpec::Pair(a, b) => write!(f, "pair:{a},{b}"),
            ProbeSpec::Random(n) => write!(f, "random:{n}"),
        }
    }
}

/// An input state with a printable name.
#[derive(Clone, Debug, PartialEq)]
pub struct Probe {
    pub label: String,
    pub state: DensityMatrix,
}

impl Probe {
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        let width = qubits.max(1);
        let label = if qubits == 0 { "|>".to_string() } else { format!("|{index:0width$b}>") };
        Ok(Self { label, state: DensityMatrix::basis(qubits, index)? })
    }
}

/// How far a verdict can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certainty {
    /// A concrete pair of probes proves the property fails.
    Witness,
    /// Holds on the probes only; other inputs were not examined.
    Heuristic,
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::Witness => "witness",
            Certainty::Heuristic => "heuristic",
        })
    }
}

/// Outcome of a probe-based worthlessness test.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub flag: bool,
    pub max_distance: f64,
    pub certainty: Certainty,
    /// Probe indices attaining the maximum (the second equals the first when
    /// distances are measured to the maximally mixed state).
    pub argmax: Option<(usize, usize)>,
}

impl Verdict {
    fn new(flag: bool, max_distance: f64, argmax: Option<(usize, usize)>) -> Self {
        let certainty = if flag { Certainty::Heuristic } else { Certainty::Witness };
        Self { flag, max_distance, certainty, argmax }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1], got {eps}")));
    }
    Ok(())
}

/// Noisy outputs for every probe.
pub fn probe_outputs(
    q: &Circuit,
    eta: f64,
    probes: &[Probe],
    schedule: NoiseSchedule,
    mode: Execution,
) -> Result<Vec<DensityMatrix>> {
    map_slice(mode, probes, |p| run_noisy_with(q, eta, &p.state, schedule).map(|t| t.output)).into_iter().collect()
}

fn first_max(values: impl Iterator<Item = (f64, (usize, usize))>) -> (f64, Option<(usize, usize)>) {
    values.fold((0.0, None), |(best, at), (d, ix)| if at.is_none() || d > best { (d, Some(ix)) } else { (best, at) })
}

/// Largest pairwise output distance, flagged when it is at most `eps`.
pub fn practically_worthless(q: &Circuit, eta: f64, eps: f64, probes: &[Probe]) -> Result<Verdict> {
    practically_worthless_with(q, eta, eps, probes, NoiseSchedule::default(), Execution::default())
}

pub fn practically_worthless_with(
    q: &Circuit,
    eta: f64,
    eps: f64,
    probes: &[Probe],
    schedule: NoiseSchedule,
    mode: Execution,
) -> Result<Verdict> {
    check_eps(eps)?;
    let outputs = probe_outputs(q, eta, probes, schedule, mode)?;
    let pairs = index_pairs(outputs.len());
    let distances = map_range(mode, pairs.len(), |p| trace_distance(&outputs[pairs[p].0], &outputs[pairs[p].1]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (max, argmax) = first_max(distances.into_iter().zip(pairs));
    Ok(Verdict::new(max <= eps, max, argmax))
}

/// Largest output distance to the maximally mixed state, flagged when it is
/// at most `eps`.
pub fn worthless(q: &Circuit, eta: f64, eps: f64, probes: &[Probe]) -> Result<Verdict> {
    worthless_with(q, eta, eps, probes, NoiseSchedule::default(), Execution::default())
}

pub fn worthless_with(
    q: &Circuit,
    eta: f64,
    eps: f64,
    probes: &[Probe],
    schedule: NoiseSchedule,
    mode: Execution,
) -> Result<Verdict> {
    check_eps(eps)?;
    let outputs = probe_outputs(q, eta, probes, schedule, mode)?;
    let mixed = DensityMatrix::maximally_mixed(q.output_width())?;
    let distances = map_slice(mode, &outputs, |o| trace_distance(o, &mixed)).into_iter().collect::<Result<Vec<_>>>()?;
    let (max, argmax) = first_max(distances.into_iter().enumerate().map(|(i, d)| (d, (i, i))));
    Ok(Verdict::new(max <= eps, max, argmax))
}
