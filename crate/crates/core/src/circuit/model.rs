use crate::channels::{channel_from_unitary, GateLibrary, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, MAX_QUBITS};

/// Where a gate's channel comes from; kept so circuits serialize exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum GateSpec {
    Named(String),
    Unitary(ComplexMatrix),
}

/// One gate of a layer with its input wires (in the current level) and
/// output wires (in the next level). Wire order is the gate's qubit order.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    spec: GateSpec,
    channel: QuantumChannel,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

fn check_distinct(wires: &[usize], what: &str, name: &str) -> Result<()> {
    for (i, w) in wires.iter().enumerate() {
        if wires[..i].contains(w) {
            return Err(Error::InvalidParameter(format!("{name}: {what} wire {w} listed twice")));
        }
    }
    Ok(())
}

impl Gate {
    pub fn named(library: &GateLibrary, name: &str, inputs: Vec<usize>, outputs: Vec<usize>) -> Result<Self> {
        let channel = library.get(name).ok_or_else(|| Error::UnknownGate(name.to_string()))?.clone();
        Self::build(GateSpec::Named(name.to_string()), channel, inputs, outputs)
    }

    pub fn unitary(u: ComplexMatrix, inputs: Vec<usize>, outputs: Vec<usize>) -> Result<Self> {
        let channel = channel_from_unitary(&u)?;
        Self::build(GateSpec::Unitary(u), channel, inputs, outputs)
    }

    /// Identity wire `[q] -> [q]`.
    pub fn wire(q: usize) -> Self {
        let channel = channel_from_unitary(&ComplexMatrix::identity(2)).expect("identity is unitary").with_label("I");
        Self { spec: GateSpec::Named("I".into()), channel, inputs: vec![q], outputs: vec![q] }
    }

    fn build(spec: GateSpec, channel: QuantumChannel, inputs: Vec<usize>, outputs: Vec<usize>) -> Result<Self> {
        let name = channel.label().to_string();
        if inputs.len() != channel.in_qubits() || outputs.len() != channel.out_qubits() {
            return Err(Error::InvalidParameter(format!(
                "{name} maps {} -> {} qubits but was given {} inputs and {} outputs",
                channel.in_qubits(),
                channel.out_qubits(),
                inputs.len(),
                outputs.len()
            )));
        }
        check_distinct(&inputs, "input", &name)?;
        check_distinct(&outputs, "output", &name)?;
        Ok(Self { spec, channel, inputs, outputs })
    }

    pub fn spec(&self) -> &GateSpec {
        &self.spec
    }

    pub fn channel(&self) -> &QuantumChannel {
        &self.channel
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn fan_in(&self) -> usize {
        self.inputs.len()
    }

    pub fn name(&self) -> &str {
        match &self.spec {
            GateSpec::Named(n) => n,
            GateSpec::Unitary(_) => "unitary",
        }
    }
}

/// Gates whose inputs partition `[in_width]` and outputs partition
/// `[out_width]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitLayer {
    in_width: usize,
    out_width: usize,
    gates: Vec<Gate>,
}

/// Reports the first overlap, out-of-range index or gap in a partition.
fn check_partition(width: usize, sets: impl Iterator<Item = usize>, side: &str) -> std::result::Result<Vec<usize>, String> {
    let mut owner = vec![false; width];
    for q in sets {
        if q >= width {
            return Err(format!("{side} qubit {q} outside width {width}"));
        }
        if std::mem::replace(&mut owner[q], true) {
            return Err(format!("{side} qubit {q} used by more than one gate"));
        }
    }
    Ok((0..width).filter(|&q| !owner[q]).collect())
}

impl CircuitLayer {
    /// Requires the gates to cover both partitions exactly. `index` is only
    /// used in error messages.
    pub fn new(index: usize, in_width: usize, out_width: usize, gates: Vec<Gate>) -> Result<Self> {
        let layer = Self::with_wires(index, in_width, out_width, gates)?;
        Ok(layer)
    }

    /// Like [`CircuitLayer::new`], but qubits not mentioned by any gate get
    /// identity wires when `in_width == out_width` and the unmentioned input
    /// and output sets coincide.
    pub fn with_wires(index: usize, in_width: usize, out_width: usize, mut gates: Vec<Gate>) -> Result<Self> {
        let partition = |detail: String| Error::Partition { layer: index, detail };
        for (w, side) in [(in_width, "input"), (out_width, "output")] {
            if w > MAX_QUBITS {
                return Err(Error::CapExceeded(format!("layer {index}: {side} width {w} exceeds the cap of {MAX_QUBITS}")));
            }
        }
        let out_of_range = gates.iter().flat_map(|g| g.outputs.iter()).find(|&&q| q >= out_width);
        if let Some(&q) = out_of_range {
            return Err(Error::WidthMismatch {
                layer: index,
                detail: format!("output qubit {q} outside declared width {out_width}"),
            });
        }
        let free_in = check_partition(in_width, gates.iter().flat_map(|g| g.inputs.iter().copied()), "input")
            .map_err(partition)?;
        let free_out = check_partition(out_width, gates.iter().flat_map(|g| g.outputs.iter().copied()), "output")
            .map_err(partition)?;
        if !free_in.is_empty() || !free_out.is_empty() {
            if in_width == out_width && free_in == free_out {
                gates.extend(free_in.into_iter().map(Gate::wire));
                gates.sort_by_key(|g| g.inputs.first().or(g.outputs.first()).copied().unwrap_or(usize::MAX));
            } else if !free_in.is_empty() {
                return Err(partition(format!("input qubits {free_in:?} not covered by any gate")));
            } else {
                return Err(partition(format!("output qubits {free_out:?} not produced by any gate")));
            }
        }
        Ok(Self { in_width, out_width, gates })
    }

    pub fn in_width(&self) -> usize {
        self.in_width
    }

    pub fn out_width(&self) -> usize {
        self.out_width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn max_fan_in(&self) -> usize {
        self.gates.iter().map(Gate::fan_in).max().unwrap_or(0)
    }
}

/// Sequence of layers with chained widths `n_0 .. n_t` and declared maximum
/// fan-in `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    k: usize,
    widths: Vec<usize>,
    layers: Vec<CircuitLayer>,
}

impl Circuit {
    pub fn new(k: usize, input_width: usize, layers: Vec<CircuitLayer>) -> Result<Self> {
        if input_width > MAX_QUBITS {
            return Err(Error::CapExceeded(format!("width {input_width} exceeds the cap of {MAX_QUBITS}")));
        }
        let mut widths = vec![input_width];
        for (i, layer) in layers.iter().enumerate() {
            let current = *widths.last().expect("non-empty");
            if layer.in_width != current {
                return Err(Error::WidthMismatch {
                    layer: i,
                    detail: format!("layer expects {} input qubits but level {i} has {current}", layer.in_width),
                });
            }
            if let Some(g) = layer.gates.iter().find(|g| g.fan_in() > k) {
                return Err(Error::FanIn { layer: i, gate: g.name().to_string(), fan_in: g.fan_in(), k });
            }
            widths.push(layer.out_width);
        }
        Ok(Self { k, widths, layers })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn layers(&self) -> &[CircuitLayer] {
        &self.layers
    }

    /// `n_0 .. n_t`.
    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn width(&self) -> usize {
        self.widths.iter().copied().max().unwrap_or(0)
    }

    pub fn input_width(&self) -> usize {
        self.widths[0]
    }

    pub fn output_width(&self) -> usize {
        *self.widths.last().expect("non-empty")
    }

    /// True when every gate is a unitary (named or explicit).
    pub fn is_unitary(&self) -> bool {
        self.layers.iter().flat_map(|l| l.gates.iter()).all(|g| {
            let t = g.channel();
            t.kraus().len() == 1 && t.in_qubits() == t.out_qubits() && t.kraus()[0].unitary_residual() <= 1e-9
        })
    }
}
