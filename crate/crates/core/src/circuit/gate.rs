use smallvec::SmallVec;

use crate::angle::PhaseAngle;
use crate::error::{Error, Result};
use crate::oracle::OracleSpec;

pub type QubitList = SmallVec<[usize; 4]>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GateKind {
    Hadamard,
    /// X on every listed qubit.
    Not,
    /// `Z(theta)`.
    Phase(PhaseAngle),
    /// Phase `theta` on `|11>`.
    ControlledPhase(PhaseAngle),
    /// First qubit is the control; its bit is XORed into every other qubit.
    FanOut,
    /// Parity of all but the last qubit is XORed into the last qubit.
    ParityGadget,
    /// Projective measurement in the basis `(|0> +- e^{i theta}|1>)/sqrt 2`,
    /// outcome written to `cbit`.
    MeasureA {
        angle: PhaseAngle,
        cbit: usize,
    },
    Oracle(OracleSpec),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Hadamard => "h",
            GateKind::Not => "x",
            GateKind::Phase(_) => "phase",
            GateKind::ControlledPhase(_) => "cphase",
            GateKind::FanOut => "fanout",
            GateKind::ParityGadget => "parity",
            GateKind::MeasureA { .. } => "measure_a",
            GateKind::Oracle(_) => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: QubitList,
    /// The gate acts only when this classical bit is 1.
    pub condition: Option<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: impl IntoIterator<Item = usize>) -> Self {
        Gate {
            kind,
            qubits: qubits.into_iter().collect(),
            condition: None,
        }
    }

    pub fn h(q: usize) -> Self {
        Gate::new(GateKind::Hadamard, [q])
    }

    pub fn not(qs: impl IntoIterator<Item = usize>) -> Self {
        Gate::new(GateKind::Not, qs)
    }

    pub fn phase(q: usize, angle: PhaseAngle) -> Self {
        Gate::new(GateKind::Phase(angle), [q])
    }

    pub fn cphase(a: usize, b: usize, angle: PhaseAngle) -> Self {
        Gate::new(GateKind::ControlledPhase(angle), [a, b])
    }

    pub fn fanout(control: usize, targets: impl IntoIterator<Item = usize>) -> Self {
        let mut qubits: QubitList = SmallVec::new();
        qubits.push(control);
        qubits.extend(targets);
        Gate {
            kind: GateKind::FanOut,
            qubits,
            condition: None,
        }
    }

    pub fn parity(sources: impl IntoIterator<Item = usize>, target: usize) -> Self {
        let mut qubits: QubitList = sources.into_iter().collect();
        qubits.push(target);
        Gate {
            kind: GateKind::ParityGadget,
            qubits,
            condition: None,
        }
    }

    pub fn measure_a(q: usize, angle: PhaseAngle, cbit: usize) -> Self {
        Gate::new(GateKind::MeasureA { angle, cbit }, [q])
    }

    pub fn oracle(spec: OracleSpec, qubits: impl IntoIterator<Item = usize>) -> Self {
        Gate::new(GateKind::Oracle(spec), qubits)
    }

    pub fn when(mut self, cbit: usize) -> Self {
        self.condition = Some(cbit);
        self
    }

    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_oracle(&self) -> bool {
        matches!(self.kind, GateKind::Oracle(_))
    }

    /// Classical bit written by this gate, if any.
    pub fn written_cbit(&self) -> Option<usize> {
        match self.kind {
            GateKind::MeasureA { cbit, .. } => Some(cbit),
            _ => None,
        }
    }

    /// Classical bits this gate touches (written or read).
    pub fn cbits(&self) -> impl Iterator<Item = usize> + '_ {
        self.written_cbit().into_iter().chain(self.condition)
    }

    /// Checks the arity rules of the gate kind; returns a message on failure.
    pub(crate) fn arity_violation(&self) -> Option<String> {
        let n = self.qubits.len();
        let ok = match &self.kind {
            GateKind::Hadamard | GateKind::Phase(_) | GateKind::MeasureA { .. } => n == 1,
            GateKind::Not => n >= 1,
            GateKind::ControlledPhase(_) => n == 2,
            GateKind::FanOut | GateKind::ParityGadget => n >= 2,
            GateKind::Oracle(spec) => {
                n >= 1
                    && match spec.action() {
                        Ok(a) => a.arity() == Some(n),
                        Err(_) => true,
                    }
            }
        };
        if ok {
            None
        } else {
            Some(format!("gate {} has invalid arity {}", self.kind.name(), n))
        }
    }

    pub fn inverse(&self) -> Result<Gate> {
        let kind = match &self.kind {
            GateKind::Phase(a) => GateKind::Phase(-*a),
            GateKind::ControlledPhase(a) => GateKind::ControlledPhase(-*a),
            GateKind::Oracle(spec) => GateKind::Oracle(spec.inverse()),
            GateKind::MeasureA { .. } => {
                return Err(Error::NotInvertible("measurement".into()));
            }
            k
            @ (GateKind::Hadamard | GateKind::Not | GateKind::FanOut | GateKind::ParityGadget) => {
                k.clone()
            }
        };
        Ok(Gate {
            kind,
            qubits: self.qubits.clone(),
            condition: self.condition,
        })
    }
}
