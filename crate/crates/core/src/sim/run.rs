use std::collections::BTreeMap;

use crate::angle::PhaseAngle;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

use super::sparse::SparseState;
use super::state::{QuantumState, PRUNE, TOL};

/// One surviving path through the mid-circuit measurements.
#[derive(Debug, Clone)]
pub struct BranchOutcome {
    /// Classical bit id to measured value.
    pub outcomes: BTreeMap<usize, bool>,
    pub probability: f64,
    pub final_state: SparseState,
}

/// Pruning bookkeeping of a branch enumeration.
#[derive(Debug, Clone, Default)]
pub struct BranchRun {
    pub branches: Vec<BranchOutcome>,
    /// Total probability of the branches cut below the pruning threshold.
    pub pruned_probability: f64,
}

impl BranchRun {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum::<f64>() + self.pruned_probability
    }
}

fn initial<S: QuantumState>(circuit: &Circuit, input: &[bool]) -> Result<S> {
    if input.len() != circuit.inputs.len() {
        return Err(Error::InputLength {
            expected: circuit.inputs.len(),
            got: input.len(),
        });
    }
    let ones: Vec<usize> = circuit
        .inputs
        .iter()
        .zip(input)
        .filter(|(_, &b)| b)
        .map(|(&q, _)| q)
        .collect();
    S::basis(circuit.qubit_count, &ones)
}

fn mixes(gate: &Gate) -> bool {
    matches!(gate.kind, GateKind::Hadamard | GateKind::Oracle(_))
}

fn check_norm<S: QuantumState>(state: &S, gate: &Gate) -> Result<()> {
    let n = state.norm_sqr();
    if (n - 1.0).abs() > TOL {
        return Err(Error::Invariant(format!(
            "norm {n} after gate {}",
            gate.kind.name()
        )));
    }
    Ok(())
}

fn apply_checked<S: QuantumState>(
    state: &mut S,
    gate: &Gate,
    control: Option<usize>,
) -> Result<()> {
    state.apply(gate, control)?;
    if mixes(gate) {
        check_norm(state, gate)?;
    }
    Ok(())
}

/// Rotates the `A(angle)` basis of qubit `q` onto the computational basis.
fn rotate_for_measurement<S: QuantumState>(
    state: &mut S,
    q: usize,
    angle: PhaseAngle,
) -> Result<()> {
    if !angle.is_zero() {
        state.apply(&Gate::phase(q, -angle), None)?;
    }
    apply_checked(state, &Gate::h(q), None)
}

/// Runs a measurement-free circuit on a basis input; ancillas start at 0.
pub fn run_unitary_with<S: QuantumState>(circuit: &Circuit, input: &[bool]) -> Result<S> {
    if circuit.has_measurements() {
        return Err(Error::MeasurementPresent);
    }
    let mut state: S = initial(circuit, input)?;
    for gate in circuit.scheduled_gates() {
        if let Some(c) = gate.condition {
            return Err(Error::UndefinedClassicalBit(c));
        }
        apply_checked(&mut state, gate, None)?;
    }
    Ok(state)
}

struct Frame<S> {
    pos: usize,
    state: S,
    bits: Vec<Option<bool>>,
    probability: f64,
}

/// Depth-first enumeration of measurement outcomes, outcome 0 first.
///
/// `A(theta)` projects onto `(|0> +- e^{i theta}|1>)/sqrt 2`; the measured
/// qubit is left in `|b>` for outcome `b`. Branches below the pruning
/// threshold are dropped and their probability is recorded.
pub fn run_branches_with<S: QuantumState>(circuit: &Circuit, input: &[bool]) -> Result<BranchRun> {
    let gates = circuit.scheduled_gates();
    let mut run = BranchRun::default();
    let mut stack = vec![Frame {
        pos: 0,
        state: initial::<S>(circuit, input)?,
        bits: vec![None; circuit.classical_bit_count],
        probability: 1.0,
    }];
    'frames: while let Some(mut frame) = stack.pop() {
        while frame.pos < gates.len() {
            let gate = gates[frame.pos];
            frame.pos += 1;
            if let Some(c) = gate.condition {
                match frame.bits.get(c).copied().flatten() {
                    None => return Err(Error::UndefinedClassicalBit(c)),
                    Some(false) => continue,
                    Some(true) => {}
                }
            }
            let GateKind::MeasureA { angle, cbit } = gate.kind else {
                apply_checked(&mut frame.state, gate, None)?;
                continue;
            };
            let q = gate.qubits[0];
            rotate_for_measurement(&mut frame.state, q, angle)?;
            let [zero, one] = frame.state.project(q);
            for (b, (p, state)) in [(true, one), (false, zero)] {
                let probability = frame.probability * p;
                match state {
                    Some(state) if probability >= PRUNE => {
                        let mut bits = frame.bits.clone();
                        bits[cbit] = Some(b);
                        stack.push(Frame {
                            pos: frame.pos,
                            state,
                            bits,
                            probability,
                        });
                    }
                    _ => run.pruned_probability += probability,
                }
            }
            continue 'frames;
        }
        run.branches.push(BranchOutcome {
            outcomes: frame
                .bits
                .iter()
                .enumerate()
                .filter_map(|(c, b)| b.map(|b| (c, b)))
                .collect(),
            probability: frame.probability,
            final_state: frame.state.to_sparse(),
        });
    }
    Ok(run)
}

/// Deferred-measurement run: each `A(theta)` measurement becomes `Z(-theta)`
/// then `H`, and a gate conditioned on its classical bit becomes controlled
/// on the measured qubit. A measured qubit may not be acted on again.
pub fn coherent_run_with<S: QuantumState>(circuit: &Circuit, input: &[bool]) -> Result<S> {
    let mut state: S = initial(circuit, input)?;
    let mut source = vec![None::<usize>; circuit.classical_bit_count];
    let mut measured = vec![false; circuit.qubit_count];
    for gate in circuit.scheduled_gates() {
        if let Some(&q) = gate
            .qubits
            .iter()
            .find(|&&q| measured.get(q).copied().unwrap_or(false))
        {
            return Err(Error::Unsupported(format!(
                "qubit {q} is used after its measurement; coherent mode cannot defer it"
            )));
        }
        let control = match gate.condition {
            Some(c) => Some(
                source
                    .get(c)
                    .copied()
                    .flatten()
                    .ok_or(Error::UndefinedClassicalBit(c))?,
            ),
            None => None,
        };
        if let GateKind::MeasureA { angle, cbit } = gate.kind {
            if control.is_some() {
                return Err(Error::Unsupported(
                    "conditioned measurement in coherent mode".into(),
                ));
            }
            let q = gate.qubits[0];
            rotate_for_measurement(&mut state, q, angle)?;
            source[cbit] = Some(q);
            measured[q] = true;
        } else {
            apply_checked(&mut state, gate, control)?;
        }
    }
    Ok(state)
}

pub fn run_unitary(circuit: &Circuit, input: &[bool]) -> Result<SparseState> {
    run_unitary_with(circuit, input)
}

pub fn run_branches(circuit: &Circuit, input: &[bool]) -> Result<Vec<BranchOutcome>> {
    Ok(run_branches_with::<SparseState>(circuit, input)?.branches)
}

pub fn coherent_run(circuit: &Circuit, input: &[bool]) -> Result<SparseState> {
    coherent_run_with(circuit, input)
}
