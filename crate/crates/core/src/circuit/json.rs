//! Circuit file format.
//!
//! `{qubits, cbits, inputs, outputs, layers: [[gate, ...], ...]}` with
//! `gate = {kind, qubits, angle?: {num, den}, cbit?, cond?, oracle?: {name, params, adjoint?}}`.
//! Qubit 0 is the first wire. Oracle actions are not stored; they are rebuilt
//! from `(name, params)` by an [`OracleResolver`] when the file is read.

use serde::{Deserialize, Serialize};

use crate::angle::PhaseAngle;
use crate::error::{Error, Result};
use crate::oracle::{OracleResolver, OracleSpec};

use super::{Circuit, Gate, GateKind};

#[derive(Debug, Serialize, Deserialize)]
struct CircuitFile {
    qubits: usize,
    cbits: usize,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    layers: Vec<Vec<GateFile>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AngleFile {
    num: i64,
    den: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct OracleFile {
    name: String,
    params: Vec<i64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    adjoint: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct GateFile {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<AngleFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cbit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cond: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleFile>,
}

fn angle_file(a: &PhaseAngle) -> Option<AngleFile> {
    Some(AngleFile {
        num: a.num(),
        den: a.den(),
    })
}

fn gate_file(g: &Gate) -> GateFile {
    let mut f = GateFile {
        kind: g.kind.name().to_string(),
        qubits: g.qubits.to_vec(),
        angle: None,
        cbit: None,
        cond: g.condition,
        oracle: None,
    };
    match &g.kind {
        GateKind::Phase(a) | GateKind::ControlledPhase(a) => f.angle = angle_file(a),
        GateKind::MeasureA { angle, cbit } => {
            f.angle = angle_file(angle);
            f.cbit = Some(*cbit);
        }
        GateKind::Oracle(spec) => {
            f.oracle = Some(OracleFile {
                name: spec.name.clone(),
                params: spec.params.clone(),
                adjoint: spec.adjoint,
            })
        }
        _ => {}
    }
    f
}

fn parse_gate(f: GateFile, resolver: Option<&dyn OracleResolver>) -> Result<Gate> {
    let angle = || -> Result<PhaseAngle> {
        let a = f
            .angle
            .as_ref()
            .ok_or_else(|| Error::Serialization(format!("gate {} needs an angle", f.kind)))?;
        if a.den == 0 {
            return Err(Error::Serialization("angle denominator is zero".into()));
        }
        Ok(PhaseAngle::new(a.num, a.den))
    };
    let kind = match f.kind.as_str() {
        "h" => GateKind::Hadamard,
        "x" => GateKind::Not,
        "phase" => GateKind::Phase(angle()?),
        "cphase" => GateKind::ControlledPhase(angle()?),
        "fanout" => GateKind::FanOut,
        "parity" => GateKind::ParityGadget,
        "measure_a" => GateKind::MeasureA {
            angle: angle()?,
            cbit: f
                .cbit
                .ok_or_else(|| Error::Serialization("measure_a needs a cbit".into()))?,
        },
        "oracle" => {
            let o = f
                .oracle
                .as_ref()
                .ok_or_else(|| Error::Serialization("oracle gate needs an oracle field".into()))?;
            let mut spec = OracleSpec::unresolved(o.name.clone(), o.params.clone(), false);
            if let Some(action) = resolver.and_then(|r| r.resolve(&o.name, &o.params)) {
                spec = spec.with_action(action);
            }
            if o.adjoint {
                spec = spec.inverse();
            }
            GateKind::Oracle(spec)
        }
        other => return Err(Error::Serialization(format!("unknown gate kind `{other}`"))),
    };
    let mut g = Gate::new(kind, f.qubits);
    g.condition = f.cond;
    Ok(g)
}

pub fn to_json(circuit: &Circuit) -> String {
    let file = CircuitFile {
        qubits: circuit.qubit_count,
        cbits: circuit.classical_bit_count,
        inputs: circuit.inputs.clone(),
        outputs: circuit.outputs.clone(),
        layers: circuit
            .layers
            .iter()
            .map(|l| l.iter().map(gate_file).collect())
            .collect(),
    };
    serde_json::to_string(&file).expect("circuit serialization cannot fail")
}

/// Parses a circuit file. Oracle gates stay unresolved unless `resolver`
/// knows them; simulating an unresolved oracle is an error.
pub fn from_json(text: &str, resolver: Option<&dyn OracleResolver>) -> Result<Circuit> {
    let file: CircuitFile =
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
    let layers = file
        .layers
        .into_iter()
        .map(|l| {
            l.into_iter()
                .map(|g| parse_gate(g, resolver))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Circuit {
        qubit_count: file.qubits,
        classical_bit_count: file.cbits,
        layers,
        inputs: file.inputs,
        outputs: file.outputs,
        schedule: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::oracle::OracleAction;

    #[test]
    fn round_trip_is_byte_identical() {
        let mut b = CircuitBuilder::new();
        let q = b.inputs(3);
        b.h(q[0]);
        b.cphase(q[0], q[1], PhaseAngle::dyadic(-3, 3));
        let c = b.measure_a(q[2], PhaseAngle::dyadic(1, 2));
        b.add(Gate::not([q[1]]).when(c));
        b.oracle(
            OracleSpec::new("swap", vec![7], OracleAction::Permutation(vec![0, 2, 1, 3])).inverse(),
            &[q[0], q[1]],
        );
        b.set_outputs(vec![]);
        let circuit = b.finish();
        let text = to_json(&circuit);
        let resolve = |name: &str, _: &[i64]| {
            (name == "swap").then(|| OracleAction::Permutation(vec![0, 2, 1, 3]))
        };
        let back = from_json(&text, Some(&resolve)).unwrap();
        assert_eq!(back, circuit);
        assert_eq!(to_json(&back), text);
        assert!(text.contains("\"adjoint\":true"));
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let text = r#"{"qubits":1,"cbits":0,"inputs":[],"outputs":[],"layers":[[{"kind":"t","qubits":[0]}]]}"#;
        assert!(from_json(text, None).is_err());
    }
}
