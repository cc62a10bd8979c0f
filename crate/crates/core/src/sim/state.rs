use num_complex::Complex64;

use crate::circuit::{Gate, GateKind};
use crate::error::{Error, Result};

use super::SparseState;

/// Amplitudes with magnitude below this are dropped.
pub const SNAP: f64 = 1e-12;
/// Branches whose probability falls below this are pruned.
pub const PRUNE: f64 = 1e-12;
/// Tolerance for norms, probabilities and state comparison.
pub const TOL: f64 = 1e-9;

pub(crate) const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A pure state a circuit can run on.
pub trait QuantumState: Clone + Sized {
    /// Basis state with exactly the listed qubits set.
    fn basis(width: usize, ones: &[usize]) -> Result<Self>;

    fn width(&self) -> usize;

    /// Applies the unitary of `gate`, ignoring its classical condition. With
    /// `control`, the gate acts only on terms where that qubit is 1.
    fn apply(&mut self, gate: &Gate, control: Option<usize>) -> Result<()>;

    /// Projects qubit `q` onto `|0>` and `|1>`; each part comes with its
    /// probability and, when nonzero, the renormalized state.
    fn project(self, q: usize) -> [(f64, Option<Self>); 2];

    fn norm_sqr(&self) -> f64;

    fn to_sparse(&self) -> SparseState;
}

pub(crate) fn check_qubits(gate: &Gate, control: Option<usize>, width: usize) -> Result<()> {
    for &q in gate.qubits.iter().chain(control.as_ref()) {
        if q >= width {
            return Err(Error::QubitOutOfRange { qubit: q, width });
        }
    }
    if let Some(c) = control {
        if gate.qubits.contains(&c) {
            return Err(Error::InvalidCircuit(format!(
                "gate {} acts on its own control qubit {c}",
                gate.kind.name()
            )));
        }
    }
    if let GateKind::MeasureA { .. } = gate.kind {
        return Err(Error::Unsupported(
            "measurement is not a unitary gate".into(),
        ));
    }
    Ok(())
}

/// How a gate acts on basis states.
pub(crate) enum Action<'a> {
    Permute,
    Diagonal,
    Hadamard,
    Unitary { dim: usize, matrix: &'a [Complex64] },
}

pub(crate) fn classify(gate: &Gate) -> Result<Action<'_>> {
    Ok(match &gate.kind {
        GateKind::Not | GateKind::FanOut | GateKind::ParityGadget => Action::Permute,
        GateKind::Phase(_) | GateKind::ControlledPhase(_) => Action::Diagonal,
        GateKind::Hadamard => Action::Hadamard,
        GateKind::Oracle(spec) => match spec.action()? {
            crate::oracle::OracleAction::Permutation(_) => Action::Permute,
            crate::oracle::OracleAction::Diagonal(_) => Action::Diagonal,
            crate::oracle::OracleAction::Unitary { dim, matrix } => {
                Action::Unitary { dim: *dim, matrix }
            }
        },
        GateKind::MeasureA { .. } => unreachable!("rejected by check_qubits"),
    })
}

/// Qubits a permuting gate flips on one basis state.
pub(crate) enum Flips<'a> {
    Nothing,
    All(&'a [usize]),
    /// Qubits `qs[i]` with bit `i` of the mask set.
    Masked(&'a [usize], u64),
}

impl Flips<'_> {
    #[inline]
    pub(crate) fn apply(&self, mut flip: impl FnMut(usize)) {
        match self {
            Flips::Nothing => {}
            Flips::All(qs) => qs.iter().for_each(|&q| flip(q)),
            Flips::Masked(qs, mask) => {
                for (i, &q) in qs.iter().enumerate() {
                    if (mask >> i) & 1 == 1 {
                        flip(q);
                    }
                }
            }
        }
    }
}

/// Which qubits a permuting gate flips on the basis state read by `get`.
#[inline]
pub(crate) fn permute_bits(gate: &Gate, get: impl Fn(usize) -> bool) -> Flips<'_> {
    let qs = gate.qubits.as_slice();
    match &gate.kind {
        GateKind::Not => Flips::All(qs),
        GateKind::FanOut => {
            if get(qs[0]) {
                Flips::All(&qs[1..])
            } else {
                Flips::Nothing
            }
        }
        GateKind::ParityGadget => {
            let (target, sources) = qs.split_last().expect("parity gadget has a target");
            if sources.iter().fold(false, |acc, &q| acc ^ get(q)) {
                Flips::All(std::slice::from_ref(target))
            } else {
                Flips::Nothing
            }
        }
        GateKind::Oracle(spec) => {
            let Ok(crate::oracle::OracleAction::Permutation(p)) = spec.action() else {
                unreachable!("classified as permutation")
            };
            let v = qs
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &q)| acc | (u64::from(get(q)) << i));
            Flips::Masked(qs, v ^ p[v as usize])
        }
        _ => unreachable!("not a permuting gate"),
    }
}

/// Phase factor of a diagonal gate on a basis value.
#[inline]
pub(crate) fn diagonal_factor(gate: &Gate, get: impl Fn(usize) -> bool) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let qs = &gate.qubits;
    match &gate.kind {
        GateKind::Phase(a) => {
            if get(qs[0]) {
                a.phase()
            } else {
                one
            }
        }
        GateKind::ControlledPhase(a) => {
            if get(qs[0]) && get(qs[1]) {
                a.phase()
            } else {
                one
            }
        }
        GateKind::Oracle(spec) => {
            let Ok(crate::oracle::OracleAction::Diagonal(d)) = spec.action() else {
                unreachable!("classified as diagonal")
            };
            let v = qs
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &q)| acc | (usize::from(get(q)) << i));
            d[v]
        }
        _ => unreachable!("not a diagonal gate"),
    }
}
