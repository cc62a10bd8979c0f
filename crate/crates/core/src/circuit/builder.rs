use crate::angle::PhaseAngle;
use crate::error::Result;
use crate::oracle::OracleSpec;

use super::{Circuit, Gate};

/// Incremental circuit construction with as-soon-as-possible layering.
///
/// Each added gate lands in the earliest layer after every earlier gate it
/// shares a qubit or classical bit with, so independent sub-circuits that are
/// appended one after another end up running in parallel.
#[derive(Debug, Clone, Default)]
pub struct CircuitBuilder {
    qubit_count: usize,
    cbit_count: usize,
    layers: Vec<Vec<Gate>>,
    qubit_free: Vec<usize>,
    cbit_free: Vec<usize>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    order: Vec<(usize, usize)>,
}

/// Where the qubits and classical bits of an appended sub-circuit landed.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub qubit_map: Vec<usize>,
    pub cbit_map: Vec<usize>,
}

impl Embedding {
    pub fn qubit(&self, q: usize) -> usize {
        self.qubit_map[q]
    }

    pub fn map(&self, qs: &[usize]) -> Vec<usize> {
        qs.iter().map(|&q| self.qubit_map[q]).collect()
    }
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn qubit(&mut self) -> usize {
        self.qubit_count += 1;
        self.qubit_free.push(0);
        self.qubit_count - 1
    }

    pub fn qubits(&mut self, n: usize) -> Vec<usize> {
        (0..n).map(|_| self.qubit()).collect()
    }

    pub fn cbit(&mut self) -> usize {
        self.cbit_count += 1;
        self.cbit_free.push(0);
        self.cbit_count - 1
    }

    /// Declares input qubits (appended to the input list in order).
    pub fn inputs(&mut self, n: usize) -> Vec<usize> {
        let qs = self.qubits(n);
        self.inputs.extend(&qs);
        qs
    }

    pub fn set_outputs(&mut self, outputs: Vec<usize>) {
        self.outputs = outputs;
    }

    pub fn add(&mut self, gate: Gate) {
        let layer = gate
            .qubits
            .iter()
            .map(|&q| self.qubit_free[q])
            .chain(gate.cbits().map(|c| self.cbit_free[c]))
            .max()
            .unwrap_or(0);
        for &q in &gate.qubits {
            self.qubit_free[q] = layer + 1;
        }
        for c in gate.cbits() {
            self.cbit_free[c] = layer + 1;
        }
        if self.layers.len() <= layer {
            self.layers.resize_with(layer + 1, Vec::new);
        }
        self.order.push((layer, self.layers[layer].len()));
        self.layers[layer].push(gate);
    }

    /// Position in the insertion order, for [`Self::uncompute_since`].
    pub fn mark(&self) -> usize {
        self.order.len()
    }

    /// Gates added since `mark`, in insertion order.
    pub fn gates_since(&self, mark: usize) -> Vec<Gate> {
        self.order[mark..]
            .iter()
            .map(|&(l, i)| self.layers[l][i].clone())
            .collect()
    }

    /// Appends the inverses of `gates` in reverse order.
    pub fn uncompute(&mut self, gates: &[Gate]) -> Result<()> {
        for g in gates.iter().rev() {
            self.add(g.inverse()?);
        }
        Ok(())
    }

    pub fn h(&mut self, q: usize) {
        self.add(Gate::h(q));
    }

    pub fn hs(&mut self, qs: &[usize]) {
        for &q in qs {
            self.h(q);
        }
    }

    /// X on every listed qubit as one gate; no-op on an empty list.
    pub fn not(&mut self, qs: &[usize]) {
        if !qs.is_empty() {
            self.add(Gate::not(qs.iter().copied()));
        }
    }

    pub fn phase(&mut self, q: usize, angle: PhaseAngle) {
        self.add(Gate::phase(q, angle));
    }

    pub fn cphase(&mut self, a: usize, b: usize, angle: PhaseAngle) {
        self.add(Gate::cphase(a, b, angle));
    }

    /// Fan-out from `control`; no-op when `targets` is empty.
    pub fn fanout(&mut self, control: usize, targets: &[usize]) {
        if !targets.is_empty() {
            self.add(Gate::fanout(control, targets.iter().copied()));
        }
    }

    /// Gate-level parity: Hadamards on every wire, a fan-out controlled by
    /// `target`, Hadamards again. Leaves `target ^= xor(sources)`.
    pub fn parity_sandwich(&mut self, sources: &[usize], target: usize) {
        self.hs(sources);
        self.h(target);
        self.fanout(target, sources);
        self.hs(sources);
        self.h(target);
    }

    pub fn measure_a(&mut self, q: usize, angle: PhaseAngle) -> usize {
        let c = self.cbit();
        self.add(Gate::measure_a(q, angle, c));
        c
    }

    pub fn oracle(&mut self, spec: OracleSpec, qubits: &[usize]) {
        self.add(Gate::oracle(spec, qubits.iter().copied()));
    }

    /// Appends `sub`, mapping its qubits through `bindings` (sub qubit, host
    /// qubit); unbound sub qubits get fresh host qubits.
    pub fn append(&mut self, sub: &Circuit, bindings: &[(usize, usize)]) -> Embedding {
        let mut qubit_map = vec![usize::MAX; sub.qubit_count];
        for &(s, h) in bindings {
            qubit_map[s] = h;
        }
        for slot in qubit_map.iter_mut() {
            if *slot == usize::MAX {
                *slot = self.qubit();
            }
        }
        let cbit_map: Vec<usize> = (0..sub.classical_bit_count).map(|_| self.cbit()).collect();
        for gate in sub.scheduled_gates() {
            let mut g = gate.clone();
            for q in g.qubits.iter_mut() {
                *q = qubit_map[*q];
            }
            if let crate::circuit::GateKind::MeasureA { cbit, .. } = &mut g.kind {
                *cbit = cbit_map[*cbit];
            }
            if let Some(c) = g.condition.as_mut() {
                *c = cbit_map[*c];
            }
            self.add(g);
        }
        Embedding {
            qubit_map,
            cbit_map,
        }
    }

    /// Appends `sub` with its input qubits bound to `inputs` in order.
    pub fn append_on(&mut self, sub: &Circuit, inputs: &[usize]) -> Embedding {
        assert_eq!(
            sub.inputs.len(),
            inputs.len(),
            "input binding length mismatch"
        );
        let bindings: Vec<(usize, usize)> = sub
            .inputs
            .iter()
            .copied()
            .zip(inputs.iter().copied())
            .collect();
        self.append(sub, &bindings)
    }

    pub fn finish(self) -> Circuit {
        let mut shift = Vec::with_capacity(self.layers.len());
        let mut kept = 0;
        for l in &self.layers {
            shift.push(kept);
            kept += usize::from(!l.is_empty());
        }
        Circuit {
            qubit_count: self.qubit_count,
            classical_bit_count: self.cbit_count,
            schedule: self.order.iter().map(|&(l, i)| (shift[l], i)).collect(),
            layers: self.layers.into_iter().filter(|l| !l.is_empty()).collect(),
            inputs: self.inputs,
            outputs: self.outputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_gates_share_a_layer() {
        let mut b = CircuitBuilder::new();
        let q = b.qubits(3);
        b.h(q[0]);
        b.h(q[1]);
        b.fanout(q[0], &[q[2]]);
        let c = b.finish();
        assert_eq!(c.layers.len(), 2);
        assert_eq!(c.layers[0].len(), 2);
        assert!(c.validate().is_valid());
    }

    #[test]
    fn append_maps_inputs_and_allocates_the_rest() {
        let mut sub = CircuitBuilder::new();
        let x = sub.inputs(1);
        let out = sub.qubit();
        sub.fanout(x[0], &[out]);
        sub.set_outputs(vec![out]);
        let sub = sub.finish();

        let mut host = CircuitBuilder::new();
        let a = host.inputs(2);
        let e1 = host.append_on(&sub, &[a[0]]);
        let e2 = host.append_on(&sub, &[a[1]]);
        let c = host.finish();
        assert_eq!(c.qubit_count, 4);
        assert_eq!(e1.qubit(0), a[0]);
        assert_ne!(e1.qubit(1), e2.qubit(1));
        assert_eq!(c.layers.len(), 1);
    }
}
