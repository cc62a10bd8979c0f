use crate::angle::PhaseAngle;
use crate::circuit::{Circuit, CircuitBuilder};
use crate::error::{Error, Result};

use super::{bit_length, copies};

/// Finishing step of the OR reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionVariant {
    /// Outputs `H|phi_k>` for `k < m`.
    Plain,
    /// Outputs `H Z(-t pi / 2^k)|phi_k>`; all zero iff `|x| = t`.
    ExactShift(usize),
    /// Outputs `2^k` copies of `|phi_k>` for each `k < m`, no Hadamards.
    CountingCopies,
}

/// `|phi_k> = (|0> + e^{i pi |x| / 2^k}|1>)/sqrt 2` for `k < m`,
/// `m = ceil(log2(n + 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrReductionSpec {
    pub n: usize,
    pub variant: ReductionVariant,
}

impl OrReductionSpec {
    pub fn m(&self) -> usize {
        bit_length(self.n)
    }

    pub fn copies(&self, k: usize) -> usize {
        match self.variant {
            ReductionVariant::CountingCopies => 1 << k,
            _ => 1,
        }
    }
}

/// One phase state prepared through its own GHZ group.
#[derive(Debug, Clone)]
pub(crate) struct PhaseGroup {
    /// Every input contributes phase `pi / 2^level`.
    pub level: usize,
    /// Applied to the output once the GHZ group is disentangled.
    pub shift: Option<PhaseAngle>,
    /// Extra controlled phases `(control qubit, angle)`, each landing on its
    /// own GHZ qubit.
    pub data: Vec<(usize, PhaseAngle)>,
    pub final_h: bool,
}

/// Prepares one phase state per group, in parallel over copies of `x`.
/// Returns the output qubit of each group. Input copies are uncomputed.
pub(crate) fn emit_phase_groups(
    b: &mut CircuitBuilder,
    x: &[usize],
    groups: &[PhaseGroup],
) -> Vec<usize> {
    let n = x.len();
    let xs = copies(b, x, groups.len());
    let mut outputs = Vec::with_capacity(groups.len());
    for (g, group) in groups.iter().enumerate() {
        let a = b.qubit();
        let rest = b.qubits(n - 1 + group.data.len());
        b.h(a);
        b.fanout(a, &rest);
        let ghz: Vec<usize> = std::iter::once(a).chain(rest.iter().copied()).collect();
        let unit = PhaseAngle::dyadic(1, group.level as u32);
        for j in 0..n {
            b.cphase(xs[j][g], ghz[j], unit);
        }
        for (i, &(control, angle)) in group.data.iter().enumerate() {
            b.cphase(control, ghz[n + i], angle);
        }
        b.fanout(a, &rest);
        if let Some(shift) = group.shift {
            b.phase(a, shift);
        }
        if group.final_h {
            b.h(a);
        }
        outputs.push(a);
    }
    for (j, c) in xs.iter().enumerate() {
        b.fanout(x[j], &c[1..]);
    }
    outputs
}

pub(crate) fn shift_angle(k: i64, level: usize) -> PhaseAngle {
    PhaseAngle::new(-k, 1u64 << level)
}

/// Phase-state OR reduction on `n` inputs.
pub fn build_or_reduction(spec: OrReductionSpec) -> Result<Circuit> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidParameter(
            "reduction needs at least one input".into(),
        ));
    }
    if let ReductionVariant::ExactShift(t) = spec.variant {
        if t > n {
            return Err(Error::InvalidParameter(format!(
                "shift {t} exceeds n = {n}"
            )));
        }
    }
    let m = spec.m();
    let mut groups = Vec::new();
    for k in 0..m {
        for _ in 0..spec.copies(k) {
            groups.push(match spec.variant {
                ReductionVariant::Plain => PhaseGroup {
                    level: k,
                    shift: None,
                    data: vec![],
                    final_h: true,
                },
                ReductionVariant::ExactShift(t) => PhaseGroup {
                    level: k,
                    shift: Some(shift_angle(t as i64, k)),
                    data: vec![],
                    final_h: true,
                },
                ReductionVariant::CountingCopies => PhaseGroup {
                    level: k,
                    shift: None,
                    data: vec![],
                    final_h: false,
                },
            });
        }
    }
    let mut b = CircuitBuilder::new();
    let x = b.inputs(n);
    let outputs = emit_phase_groups(&mut b, &x, &groups);
    b.set_outputs(outputs);
    Ok(b.finish())
}
