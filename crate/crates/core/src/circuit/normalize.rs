use super::{Circuit, Gate, GateKind};

/// Rewrites every Hadamard / fan-out / Hadamard sandwich as a parity gadget.
///
/// A fan-out matches when each of its wires carries an unconditioned
/// Hadamard directly before and directly after it. Conjugating a fan-out by
/// Hadamards on all of its wires reverses every CNOT, so the sandwich XORs
/// the parity of the former targets into the former control; the gadget
/// keeps the targets as sources and the control as its target. Unmatched
/// gates are left alone and emptied layers are dropped.
pub fn normalize_to_gadget_form(circuit: &Circuit) -> Circuit {
    let flat: Vec<&Gate> = circuit.gates().collect();
    let mut wire_seq: Vec<Vec<usize>> = vec![Vec::new(); circuit.qubit_count];
    // position of gate g inside wire_seq[q], for each qubit of g in order
    let mut wire_pos: Vec<Vec<usize>> = Vec::with_capacity(flat.len());
    for (gi, gate) in flat.iter().enumerate() {
        let mut pos = Vec::with_capacity(gate.qubits.len());
        for &q in &gate.qubits {
            pos.push(wire_seq[q].len());
            wire_seq[q].push(gi);
        }
        wire_pos.push(pos);
    }

    let is_plain_h =
        |gi: usize| matches!(flat[gi].kind, GateKind::Hadamard) && flat[gi].condition.is_none();

    let mut removed = vec![false; flat.len()];
    let mut replaced = vec![false; flat.len()];
    for (gi, gate) in flat.iter().enumerate() {
        if !matches!(gate.kind, GateKind::FanOut) || gate.condition.is_some() {
            continue;
        }
        let mut claim = Vec::with_capacity(2 * gate.qubits.len());
        let mut ok = true;
        for (k, &q) in gate.qubits.iter().enumerate() {
            let p = wire_pos[gi][k];
            let seq = &wire_seq[q];
            let before = if p > 0 { Some(seq[p - 1]) } else { None };
            let after = seq.get(p + 1).copied();
            match (before, after) {
                (Some(b), Some(a))
                    if is_plain_h(b) && is_plain_h(a) && !removed[b] && !removed[a] =>
                {
                    claim.push(b);
                    claim.push(a);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            for h in claim {
                removed[h] = true;
            }
            replaced[gi] = true;
        }
    }

    let mut gi = 0;
    let mut layers = Vec::with_capacity(circuit.layers.len());
    // new position of every surviving gate, keyed by old position
    let mut moved: Vec<Vec<Option<(usize, usize)>>> = Vec::with_capacity(circuit.layers.len());
    for layer in &circuit.layers {
        let mut out = Vec::with_capacity(layer.len());
        let mut row = Vec::with_capacity(layer.len());
        for gate in layer {
            row.push((!removed[gi]).then_some((layers.len(), out.len())));
            if replaced[gi] {
                let control = gate.qubits[0];
                out.push(Gate::parity(gate.qubits[1..].iter().copied(), control));
            } else if !removed[gi] {
                out.push(gate.clone());
            }
            gi += 1;
        }
        moved.push(row);
        if !out.is_empty() {
            layers.push(out);
        }
    }
    let schedule = circuit
        .schedule
        .iter()
        .filter_map(|&(l, i)| moved[l][i])
        .collect();
    Circuit {
        layers,
        schedule,
        ..circuit.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    #[test]
    fn sandwich_becomes_gadget() {
        let mut b = CircuitBuilder::new();
        let x = b.inputs(3);
        let z = b.qubit();
        b.parity_sandwich(&x, z);
        let c = b.finish();
        let n = normalize_to_gadget_form(&c);
        assert_eq!(n.gate_count(), 1);
        let g = n.gates().next().unwrap();
        assert_eq!(g.kind, GateKind::ParityGadget);
        assert_eq!(g.qubits.as_slice(), &[x[0], x[1], x[2], z]);
    }

    #[test]
    fn bare_fanout_is_unchanged() {
        let mut b = CircuitBuilder::new();
        let q = b.inputs(3);
        b.fanout(q[0], &q[1..]);
        let c = b.finish();
        assert_eq!(normalize_to_gadget_form(&c), c);
    }

    #[test]
    fn partial_hadamards_do_not_match() {
        let mut b = CircuitBuilder::new();
        let q = b.inputs(3);
        b.hs(&q[1..]);
        b.fanout(q[0], &q[1..]);
        b.hs(&q[1..]);
        let c = b.finish();
        assert_eq!(normalize_to_gadget_form(&c), c);
    }

    #[test]
    fn shared_hadamard_is_claimed_once() {
        let mut b = CircuitBuilder::new();
        let q = b.inputs(2);
        b.hs(&q);
        b.fanout(q[0], &[q[1]]);
        b.hs(&q);
        b.fanout(q[0], &[q[1]]);
        b.hs(&q);
        let c = b.finish();
        let n = normalize_to_gadget_form(&c);
        let kinds: Vec<_> = n.gates().map(|g| g.kind.name()).collect();
        assert_eq!(kinds, vec!["parity", "fanout", "h", "h"]);
    }
}
