//! Line-oriented circuit text format.
//!
//! ```text
//! # comment
//! k 2
//! width 3
//! layer
//! gate H [0] -> [0]
//! gate CNOT [1,2] -> [1,2]
//! layer width 4
//! gate PREP0 [] -> [3]
//! unitary 0+0i 1+0i 1+0i 0+0i [0] -> [0]
//! ```
//!
//! A `layer` line opens a layer; its output width defaults to the previous
//! width. `unitary` lists the `4^m` row-major entries of an `m`-qubit
//! unitary as `a+bi` literals.

use super::{Circuit, CircuitLayer, Gate, GateSpec};
use crate::channels::GateLibrary;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::report::fmt_complex;

struct PendingLayer {
    line: usize,
    out_width: usize,
    gates: Vec<Gate>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

fn parse_index_list(text: &str, line: usize) -> Result<Vec<usize>> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, format!("expected `[...]`, found `{}`", text.trim())))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| parse_err(line, format!("invalid qubit index `{}`", t.trim()))))
        .collect()
}

/// Splits `[in] -> [out]` off the end of a gate line.
fn parse_wires(text: &str, line: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let (lhs, rhs) = text.split_once("->").ok_or_else(|| parse_err(line, "missing `->`"))?;
    Ok((parse_index_list(lhs, line)?, parse_index_list(rhs, line)?))
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (and `i`, `-i`).
pub(crate) fn parse_complex(tok: &str) -> Option<C64> {
    let Some(body) = tok.strip_suffix('i') else {
        return tok.parse().ok().map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(j) => (body[..j].parse().ok()?, &body[j..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse().ok()?,
    };
    Some(C64::new(re, im))
}

fn finish_layer(index: usize, in_width: usize, pending: PendingLayer) -> Result<CircuitLayer> {
    CircuitLayer::with_wires(index, in_width, pending.out_width, pending.gates).map_err(|e| match e {
        Error::Partition { detail, .. } => {
            Error::Partition { layer: index, detail: format!("{detail} (layer starting at line {})", pending.line) }
        }
        other => other,
    })
}

/// Parses a circuit document and checks every model invariant.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let library = GateLibrary::standard();
    let mut k = None;
    let mut width = None;
    let mut layers = Vec::new();
    let mut current_width = 0;
    let mut pending: Option<PendingLayer> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match keyword {
            "k" => {
                if k.is_some() || pending.is_some() || !layers.is_empty() {
                    return Err(parse_err(line, "`k` must appear once, before any layer"));
                }
                k = Some(parse_usize(Some(rest), line, "fan-in")?);
            }
            "width" => {
                if k.is_none() {
                    return Err(parse_err(line, "`width` must follow `k`"));
                }
                if width.is_some() {
                    return Err(parse_err(line, "`width` given twice"));
                }
                let w = parse_usize(Some(rest), line, "width")?;
                width = Some(w);
                current_width = w;
            }
            "layer" => {
                if width.is_none() {
                    return Err(parse_err(line, "`layer` before the `k`/`width` header"));
                }
                if let Some(p) = pending.take() {
                    let out = p.out_width;
                    layers.push(finish_layer(layers.len(), current_width, p)?);
                    current_width = out;
                }
                let out_width = if rest.is_empty() {
                    current_width
                } else {
                    let mut toks = rest.split_whitespace();
                    if toks.next() != Some("width") {
                        return Err(parse_err(line, format!("unexpected `{rest}` after `layer`")));
                    }
                    let w = parse_usize(toks.next(), line, "layer width")?;
                    if let Some(extra) = toks.next() {
                        return Err(parse_err(line, format!("unexpected `{extra}`")));
                    }
                    w
                };
                pending = Some(PendingLayer { line, out_width, gates: Vec::new() });
            }
            "gate" => {
                let layer = pending.as_mut().ok_or_else(|| parse_err(line, "gate outside a layer"))?;
                let (name, wires) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                if name.is_empty() {
                    return Err(parse_err(line, "missing gate name"));
                }
                let (inputs, outputs) = parse_wires(wires, line)?;
                let gate = Gate::named(&library, name, inputs, outputs).map_err(|e| match e {
                    Error::UnknownGate(_) | Error::InvalidParameter(_) => parse_err(line, e.to_string()),
                    other => other,
                })?;
                layer.gates.push(gate);
            }
            "unitary" => {
                let layer = pending.as_mut().ok_or_else(|| parse_err(line, "unitary outside a layer"))?;
                let bracket = rest.find('[').ok_or_else(|| parse_err(line, "missing wire lists"))?;
                let (inputs, outputs) = parse_wires(&rest[bracket..], line)?;
                let entries = rest[..bracket]
                    .split_whitespace()
                    .map(|t| parse_complex(t).ok_or_else(|| parse_err(line, format!("invalid complex entry `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                let dim = 1usize << inputs.len().min(30);
                if entries.len() != dim * dim {
                    return Err(parse_err(
                        line,
                        format!("unitary on {} qubits needs {} entries, found {}", inputs.len(), dim * dim, entries.len()),
                    ));
                }
                let u = ComplexMatrix::new(dim, dim, entries)?;
                let gate = Gate::unitary(u, inputs, outputs).map_err(|e| parse_err(line, e.to_string()))?;
                layer.gates.push(gate);
            }
            other => return Err(parse_err(line, format!("unknown keyword `{other}`"))),
        }
    }

    let k = k.ok_or_else(|| parse_err(text.lines().count().max(1), "missing `k` header"))?;
    let width = width.ok_or_else(|| parse_err(text.lines().count().max(1), "missing `width` header"))?;
    if let Some(p) = pending.take() {
        layers.push(finish_layer(layers.len(), current_width, p)?);
    }
    Circuit::new(k, width, layers)
}

fn format_wires(wires: &[usize]) -> String {
    let parts: Vec<String> = wires.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Text form accepted by [`parse_circuit`]; implicit wires are written out.
pub fn serialize_circuit(q: &Circuit) -> String {
    let mut out = format!("k {}\nwidth {}\n", q.k(), q.input_width());
    for layer in q.layers() {
        if layer.out_width() == layer.in_width() {
            out.push_str("layer\n");
        } else {
            out.push_str(&format!("layer width {}\n", layer.out_width()));
        }
        for g in layer.gates() {
            let wires = format!("{} -> {}", format_wires(g.inputs()), format_wires(g.outputs()));
            match g.spec() {
                GateSpec::Named(name) => out.push_str(&format!("gate {name} {wires}\n")),
                GateSpec::Unitary(u) => {
                    let entries: Vec<String> = u.data().iter().map(|&z| fmt_complex(z)).collect();
                    out.push_str(&format!("unitary {} {wires}\n", entries.join(" ")));
                }
            }
        }
    }
    out
}
