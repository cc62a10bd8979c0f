//! Circuit families: parity, the OR reduction, OR, exact, threshold and
//! counting circuits. Every builder returns a gate-level circuit whose
//! inputs are the `n` data qubits; all other qubits start at 0.

mod counting;
mod or;
mod parity;
mod reduction;
mod threshold;

pub use counting::build_counting;
pub(crate) use or::emit_or;
pub use or::{
    build_and, build_exact, build_or, build_or_blocked, build_or_exp, build_or_with, OrOptions,
};
pub use parity::build_parity;
pub use reduction::{build_or_reduction, OrReductionSpec, ReductionVariant};
pub use threshold::{
    build_threshold_combined, build_threshold_exactsum, candidate_set, choose_level, Side,
    ThresholdSpec,
};

use crate::circuit::CircuitBuilder;

/// Number of bits of `n`, i.e. `ceil(log2(n + 1))`.
pub fn bit_length(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// Input qubits padded with zero ancillas to at least two, so one-bit
/// instances share the layout, and hence the depth, of two-bit ones.
pub(crate) fn padded(b: &mut CircuitBuilder, x: &[usize]) -> Vec<usize> {
    let mut v = x.to_vec();
    while v.len() < 2 {
        v.push(b.qubit());
    }
    v
}

/// Fans each qubit out to `uses - 1` fresh copies; returns, per qubit, the
/// original followed by its copies.
pub(crate) fn copies(b: &mut CircuitBuilder, qs: &[usize], uses: usize) -> Vec<Vec<usize>> {
    qs.iter()
        .map(|&q| {
            let fresh = b.qubits(uses.saturating_sub(1));
            b.fanout(q, &fresh);
            std::iter::once(q).chain(fresh).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_lengths() {
        assert_eq!(bit_length(0), 0);
        assert_eq!(bit_length(1), 1);
        assert_eq!(bit_length(4), 3);
        assert_eq!(bit_length(7), 3);
        assert_eq!(bit_length(8), 4);
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use crate::circuit::Circuit;
    use crate::sim::{bits_of, point_mass, run_branches};

    /// Output bit strings over every branch for input value `x`; panics if
    /// any branch leaves the outputs in superposition.
    pub fn outputs(c: &Circuit, x: u64) -> Vec<String> {
        let input = bits_of(x, c.inputs.len());
        run_branches(c, &input)
            .unwrap()
            .into_iter()
            .map(|br| {
                point_mass(&br.final_state, &c.outputs).expect("outputs not in a basis state")
            })
            .collect()
    }

    /// The single output bit for input `x`, identical on every branch.
    pub fn bit(c: &Circuit, x: u64) -> bool {
        let outs = outputs(c, x);
        assert!(
            outs.iter().all(|o| o == &outs[0]),
            "branches disagree: {outs:?}"
        );
        outs[0] == "1"
    }
}
