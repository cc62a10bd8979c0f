//! Layered gate-level circuits over qubits and classical bits.

mod builder;
mod gate;
pub mod json;
mod normalize;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builder::{CircuitBuilder, Embedding};
pub use gate::{Gate, GateKind, QubitList};
pub use normalize::normalize_to_gadget_form;

/// A circuit: explicit layers of mutually disjoint gates.
///
/// Every non-input qubit starts in `|0>`. Ancillas are the qubits that are
/// neither inputs nor outputs.
///
/// `schedule` optionally lists every gate position `(layer, index)` in the
/// order the gates were emitted. It is a topological order of the dependency
/// DAG, so it yields the same state as layer order, but it finishes one
/// sub-circuit before starting the next, which keeps sparse states small.
/// It is not part of equality or of the file format.
#[derive(Debug, Clone, Default)]
pub struct Circuit {
    pub qubit_count: usize,
    pub classical_bit_count: usize,
    pub layers: Vec<Vec<Gate>>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub schedule: Vec<(usize, usize)>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.qubit_count == other.qubit_count
            && self.classical_bit_count == other.classical_bit_count
            && self.layers == other.layers
            && self.inputs == other.inputs
            && self.outputs == other.outputs
    }
}

impl Circuit {
    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }

    /// Gates in execution order: the schedule when present and complete,
    /// layer order otherwise.
    pub fn scheduled_gates(&self) -> Vec<&Gate> {
        if !self.schedule.is_empty() && self.schedule.len() == self.gate_count() {
            self.schedule
                .iter()
                .map(|&(l, i)| &self.layers[l][i])
                .collect()
        } else {
            self.gates().collect()
        }
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn ancillas(&self) -> Vec<usize> {
        let mut used = vec![false; self.qubit_count];
        for &q in self.inputs.iter().chain(&self.outputs) {
            if q < self.qubit_count {
                used[q] = true;
            }
        }
        (0..self.qubit_count).filter(|&q| !used[q]).collect()
    }

    pub fn has_measurements(&self) -> bool {
        self.gates()
            .any(|g| matches!(g.kind, GateKind::MeasureA { .. }))
    }

    /// The adjoint circuit. Fails on measurements.
    pub fn inverse(&self) -> Result<Circuit> {
        let layers = self
            .layers
            .iter()
            .rev()
            .map(|layer| layer.iter().map(Gate::inverse).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let last = self.layers.len().saturating_sub(1);
        let schedule = self
            .schedule
            .iter()
            .rev()
            .map(|&(l, i)| (last - l, i))
            .collect();
        Ok(Circuit {
            layers,
            schedule,
            ..self.clone()
        })
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    pub fn metrics(&self) -> Result<CircuitMetrics> {
        compute_metrics(self)
    }
}

/// A single broken invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    QubitOutOfRange { layer: usize, qubit: usize },
    DuplicateQubit { layer: usize, qubit: usize },
    Arity { layer: usize, message: String },
    LayerConflictQubit { layer: usize, qubit: usize },
    LayerConflictCbit { layer: usize, cbit: usize },
    CbitOutOfRange { layer: usize, cbit: usize },
    CbitRedefined { layer: usize, cbit: usize },
    UndefinedClassicalBit { layer: usize, cbit: usize },
    RegisterOverlap { qubit: usize },
    RegisterOutOfRange { qubit: usize },
    Schedule(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::QubitOutOfRange { layer, qubit } => {
                write!(f, "qubit {qubit} out of range (layer {layer})")
            }
            Violation::DuplicateQubit { layer, qubit } => {
                write!(f, "duplicate qubit {qubit} in gate (layer {layer})")
            }
            Violation::Arity { layer, message } => write!(f, "{message} (layer {layer})"),
            Violation::LayerConflictQubit { layer, qubit } => {
                write!(f, "layer conflict qubit {qubit} (layer {layer})")
            }
            Violation::LayerConflictCbit { layer, cbit } => {
                write!(f, "layer conflict cbit {cbit} (layer {layer})")
            }
            Violation::CbitOutOfRange { layer, cbit } => {
                write!(f, "classical bit {cbit} out of range (layer {layer})")
            }
            Violation::CbitRedefined { layer, cbit } => {
                write!(f, "classical bit {cbit} measured twice (layer {layer})")
            }
            Violation::UndefinedClassicalBit { layer, cbit } => {
                write!(f, "undefined classical bit {cbit} (layer {layer})")
            }
            Violation::RegisterOverlap { qubit } => {
                write!(f, "qubit {qubit} is both input and output")
            }
            Violation::RegisterOutOfRange { qubit } => {
                write!(f, "register qubit {qubit} out of range")
            }
            Violation::Schedule(message) => write!(f, "schedule {message}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn messages(&self) -> Vec<String> {
        self.violations.iter().map(ToString::to_string).collect()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidCircuit(self.messages().join("; ")))
        }
    }
}

pub fn validate(circuit: &Circuit) -> ValidationReport {
    let mut out = Vec::new();
    let nq = circuit.qubit_count;
    let nc = circuit.classical_bit_count;

    let mut role = vec![0u8; nq];
    for (bit, list) in [(1u8, &circuit.inputs), (2u8, &circuit.outputs)] {
        for &q in list {
            if q >= nq {
                out.push(Violation::RegisterOutOfRange { qubit: q });
            } else if role[q] != 0 {
                out.push(Violation::RegisterOverlap { qubit: q });
            } else {
                role[q] = bit;
            }
        }
    }

    let mut defined = vec![false; nc];
    // stamp = layer + 1 of the last use
    let mut qubit_stamp = vec![0usize; nq];
    let mut cbit_stamp = vec![0usize; nc];
    for (li, layer) in circuit.layers.iter().enumerate() {
        let stamp = li + 1;
        let mut written_here = Vec::new();
        for gate in layer {
            if let Some(message) = gate.arity_violation() {
                out.push(Violation::Arity { layer: li, message });
            }
            for (i, &q) in gate.qubits.iter().enumerate() {
                if q >= nq {
                    out.push(Violation::QubitOutOfRange {
                        layer: li,
                        qubit: q,
                    });
                    continue;
                }
                if gate.qubits[..i].contains(&q) {
                    out.push(Violation::DuplicateQubit {
                        layer: li,
                        qubit: q,
                    });
                    continue;
                }
                if qubit_stamp[q] == stamp {
                    out.push(Violation::LayerConflictQubit {
                        layer: li,
                        qubit: q,
                    });
                }
                qubit_stamp[q] = stamp;
            }
            for c in gate.cbits() {
                if c >= nc {
                    out.push(Violation::CbitOutOfRange { layer: li, cbit: c });
                    continue;
                }
                if cbit_stamp[c] == stamp {
                    out.push(Violation::LayerConflictCbit { layer: li, cbit: c });
                }
                cbit_stamp[c] = stamp;
            }
            if let Some(c) = gate.condition {
                if c < nc && !defined[c] {
                    out.push(Violation::UndefinedClassicalBit { layer: li, cbit: c });
                }
            }
            if let Some(c) = gate.written_cbit() {
                if c < nc {
                    if defined[c] || written_here.contains(&c) {
                        out.push(Violation::CbitRedefined { layer: li, cbit: c });
                    }
                    written_here.push(c);
                }
            }
        }
        for c in written_here {
            defined[c] = true;
        }
    }
    if !circuit.schedule.is_empty() {
        if let Some(v) = schedule_violation(circuit) {
            out.push(v);
        }
    }
    ValidationReport { violations: out }
}

/// The schedule must visit every gate once and keep the layer order of
/// gates that share a qubit or classical bit.
fn schedule_violation(circuit: &Circuit) -> Option<Violation> {
    if circuit.schedule.len() != circuit.gate_count() {
        return Some(Violation::Schedule("does not cover every gate".into()));
    }
    let mut seen: Vec<Vec<bool>> = circuit
        .layers
        .iter()
        .map(|l| vec![false; l.len()])
        .collect();
    let mut qubit_layer = vec![None::<usize>; circuit.qubit_count];
    let mut cbit_layer = vec![None::<usize>; circuit.classical_bit_count];
    for &(l, i) in &circuit.schedule {
        let Some(slot) = seen.get_mut(l).and_then(|row| row.get_mut(i)) else {
            return Some(Violation::Schedule(format!(
                "position ({l}, {i}) does not exist"
            )));
        };
        if std::mem::replace(slot, true) {
            return Some(Violation::Schedule(format!("visits ({l}, {i}) twice")));
        }
        let gate = &circuit.layers[l][i];
        let qubit_slots = gate
            .qubits
            .iter()
            .filter(|&&q| q < qubit_layer.len())
            .copied()
            .collect::<Vec<_>>();
        let cbit_slots = gate
            .cbits()
            .filter(|&c| c < cbit_layer.len())
            .collect::<Vec<_>>();
        for last in qubit_slots
            .iter()
            .map(|&q| qubit_layer[q])
            .chain(cbit_slots.iter().map(|&c| cbit_layer[c]))
        {
            if last.is_some_and(|prev| prev >= l) {
                return Some(Violation::Schedule(format!(
                    "runs ({l}, {i}) out of dependency order"
                )));
            }
        }
        for q in qubit_slots {
            qubit_layer[q] = Some(l);
        }
        for c in cbit_slots {
            cbit_layer[c] = Some(l);
        }
    }
    None
}

/// Resource counts of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMetrics {
    /// Sum of qubit arities of all non-oracle gates.
    pub elementary_size: usize,
    /// Longest dependency chain; an oracle gate counts as one level.
    pub depth: usize,
    pub qubit_count: usize,
    pub oracle_count: usize,
    pub oracle_qubit_total: usize,
}

/// Size and dependency depth. Gate B depends on an earlier gate A when they
/// share a qubit or a classical bit.
pub fn compute_metrics(circuit: &Circuit) -> Result<CircuitMetrics> {
    validate(circuit).into_result()?;
    let mut qubit_depth = vec![0usize; circuit.qubit_count];
    let mut cbit_depth = vec![0usize; circuit.classical_bit_count];
    let mut depth = 0;
    let mut elementary_size = 0;
    let mut oracle_count = 0;
    let mut oracle_qubit_total = 0;
    for gate in circuit.gates() {
        let before = gate
            .qubits
            .iter()
            .map(|&q| qubit_depth[q])
            .chain(gate.cbits().map(|c| cbit_depth[c]))
            .max()
            .unwrap_or(0);
        let d = before + 1;
        for &q in &gate.qubits {
            qubit_depth[q] = d;
        }
        for c in gate.cbits() {
            cbit_depth[c] = d;
        }
        depth = depth.max(d);
        if gate.is_oracle() {
            oracle_count += 1;
            oracle_qubit_total += gate.arity();
        } else {
            elementary_size += gate.arity();
        }
    }
    Ok(CircuitMetrics {
        elementary_size,
        depth,
        qubit_count: circuit.qubit_count,
        oracle_count,
        oracle_qubit_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::PhaseAngle;

    fn circuit(qubits: usize, cbits: usize, layers: Vec<Vec<Gate>>) -> Circuit {
        Circuit {
            qubit_count: qubits,
            classical_bit_count: cbits,
            layers,
            inputs: vec![],
            outputs: vec![],
            schedule: vec![],
        }
    }

    #[test]
    fn empty_circuit_is_valid() {
        assert!(circuit(0, 0, vec![]).validate().is_valid());
        let m = compute_metrics(&circuit(3, 0, vec![])).unwrap();
        assert_eq!((m.elementary_size, m.depth), (0, 0));
    }

    #[test]
    fn layer_conflict_is_reported() {
        let c = circuit(4, 0, vec![vec![Gate::h(3), Gate::fanout(0, [3])]]);
        let report = c.validate();
        assert!(!report.is_valid());
        assert!(report
            .messages()
            .iter()
            .any(|m| m.starts_with("layer conflict qubit 3")));
    }

    #[test]
    fn undefined_classical_bit_is_reported() {
        let c = circuit(2, 1, vec![vec![Gate::not([0]).when(0)]]);
        let report = c.validate();
        assert!(report
            .messages()
            .iter()
            .any(|m| m.starts_with("undefined classical bit")));
        assert!(compute_metrics(&c).is_err());
    }

    #[test]
    fn measure_then_condition_is_valid() {
        let c = circuit(
            2,
            1,
            vec![
                vec![Gate::measure_a(0, PhaseAngle::ZERO, 0)],
                vec![Gate::not([1]).when(0)],
            ],
        );
        assert!(c.validate().is_valid());
        let m = compute_metrics(&c).unwrap();
        assert_eq!(m.depth, 2);
    }

    #[test]
    fn fanout_metrics() {
        let c = circuit(4, 0, vec![vec![Gate::fanout(0, [1, 2, 3])]]);
        let m = compute_metrics(&c).unwrap();
        assert_eq!((m.elementary_size, m.depth), (4, 1));
    }

    #[test]
    fn depth_comes_from_dependencies_not_layers() {
        // two independent gates placed in successive layers still have depth 1
        let c = circuit(2, 0, vec![vec![Gate::h(0)], vec![Gate::h(1)]]);
        assert_eq!(compute_metrics(&c).unwrap().depth, 1);
    }

    #[test]
    fn fanout_with_repeated_qubit_is_invalid() {
        let c = circuit(2, 0, vec![vec![Gate::fanout(1, [1])]]);
        assert!(!c.validate().is_valid());
    }

    #[test]
    fn overlapping_registers_are_invalid() {
        let mut c = circuit(2, 0, vec![]);
        c.inputs = vec![0];
        c.outputs = vec![0];
        assert!(!c.validate().is_valid());
    }
}
