use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oracle::ClassicalFunction;
use crate::builders::{
    bit_length, build_and, build_counting, build_exact, build_or, build_or_blocked, build_or_exp,
    build_parity, build_threshold_combined, build_threshold_exactsum, choose_level, ThresholdSpec,
};
use crate::circuit::{normalize_to_gadget_form, Circuit};
use crate::error::{Error, Result};
use crate::sim::{bits_of, coherent_run, point_mass, run_branches, TOL};

/// Largest `n` verified exhaustively.
pub const MAX_EXHAUSTIVE_N: usize = 12;

/// Circuit families with their non-size parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Parity {
        mask: Option<u64>,
    },
    Or,
    And,
    OrExp,
    OrBlocked {
        c: usize,
    },
    Exact {
        t: usize,
    },
    ThresholdExactsum {
        t: usize,
    },
    /// `l = None` uses [`choose_level`].
    ThresholdCombined {
        t: usize,
        l: Option<usize>,
    },
    /// `l = None` counts every bit.
    Counting {
        l: Option<usize>,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Parity { .. } => "parity",
            Family::Or => "or",
            Family::And => "and",
            Family::OrExp => "or_exp",
            Family::OrBlocked { .. } => "or_blocked",
            Family::Exact { .. } => "exact",
            Family::ThresholdExactsum { .. } => "threshold_exactsum",
            Family::ThresholdCombined { .. } => "threshold_combined",
            Family::Counting { .. } => "counting",
        }
    }

    fn mask(mask: Option<u64>, n: usize) -> u64 {
        mask.unwrap_or(if n >= 64 { u64::MAX } else { (1 << n) - 1 })
    }

    /// Parameters resolved for width `n`, as `(name, value)` pairs.
    pub fn params(&self, n: usize) -> Vec<(String, u64)> {
        let p = |k: &str, v: usize| (k.to_string(), v as u64);
        match *self {
            Family::Parity { mask } => vec![("mask".into(), Self::mask(mask, n))],
            Family::Or | Family::And | Family::OrExp => vec![],
            Family::OrBlocked { c } => vec![p("c", c)],
            Family::Exact { t } | Family::ThresholdExactsum { t } => vec![p("t", t)],
            Family::ThresholdCombined { t, l } => {
                vec![p("t", t), p("l", l.unwrap_or_else(|| choose_level(n, t)))]
            }
            Family::Counting { l } => vec![p("l", l.unwrap_or_else(|| bit_length(n)))],
        }
    }

    pub fn build(&self, n: usize) -> Result<Circuit> {
        match *self {
            Family::Parity { mask } => build_parity(n, Self::mask(mask, n)),
            Family::Or => build_or(n),
            Family::And => build_and(n),
            Family::OrExp => build_or_exp(n),
            Family::OrBlocked { c } => build_or_blocked(n, c),
            Family::Exact { t } => build_exact(n, t),
            Family::ThresholdExactsum { t } => build_threshold_exactsum(n, t),
            Family::ThresholdCombined { t, l } => build_threshold_combined(ThresholdSpec::new(
                n,
                t,
                l.unwrap_or_else(|| choose_level(n, t)),
            )?),
            Family::Counting { l } => build_counting(n, l.unwrap_or_else(|| bit_length(n))),
        }
    }

    /// The classical function the outputs encode, and how many output bits
    /// carry it (least significant first).
    pub fn reference(&self, n: usize) -> (ClassicalFunction, usize) {
        match *self {
            Family::Parity { mask } => (
                ClassicalFunction::Parity {
                    n,
                    mask: Self::mask(mask, n),
                },
                1,
            ),
            Family::Or | Family::OrExp | Family::OrBlocked { .. } => {
                (ClassicalFunction::Or { n }, 1)
            }
            Family::And => (ClassicalFunction::And { n }, 1),
            Family::Exact { t } => (ClassicalFunction::Exact { n, t }, 1),
            Family::ThresholdExactsum { t } | Family::ThresholdCombined { t, .. } => {
                (ClassicalFunction::Threshold { n, t }, 1)
            }
            Family::Counting { l } => (
                ClassicalFunction::Count { n },
                l.unwrap_or_else(|| bit_length(n)),
            ),
        }
    }
}

/// Circuit form handed to the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    #[default]
    Gate,
    Gadget,
}

/// How measurements are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    /// Enumerate every surviving measurement branch.
    #[default]
    Branches,
    /// Defer measurements and read output marginals.
    Coherent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// Input bits, qubit 0 first.
    pub input: String,
    /// Branch index in enumeration order; `None` in coherent mode.
    pub branch: Option<usize>,
    pub expected: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: String,
    pub params: Vec<(String, u64)>,
    pub n: usize,
    pub form: Form,
    pub mode: SimMode,
    pub inputs_tested: usize,
    pub branches_tested: usize,
    pub failures: Vec<Failure>,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One summary row, with a header, then one row per failure.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let err = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record([
            "family",
            "params",
            "n",
            "inputs",
            "branches",
            "failures",
            "pass",
            "elapsed_ms",
        ])
        .map_err(err)?;
        w.write_record([
            self.family.clone(),
            params.join(";"),
            self.n.to_string(),
            self.inputs_tested.to_string(),
            self.branches_tested.to_string(),
            self.failures.len().to_string(),
            self.passed().to_string(),
            format!("{:.3}", self.elapsed_ms),
        ])
        .map_err(err)?;
        for f in &self.failures {
            let branch = f.branch.map(|b| b.to_string()).unwrap_or_default();
            w.write_record([
                "failure",
                &f.input,
                &branch,
                &f.expected,
                &f.observed,
                "",
                "",
                "",
            ])
            .map_err(err)?;
        }
        String::from_utf8(
            w.into_inner()
                .map_err(|e| Error::Serialization(e.to_string()))?,
        )
        .map_err(|e| Error::Serialization(e.to_string()))
    }
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Per-input result: branches seen and failures.
fn check_input(
    c: &Circuit,
    f: &ClassicalFunction,
    width: usize,
    x: u64,
    n: usize,
    mode: SimMode,
) -> Result<(usize, Vec<Failure>)> {
    let input = bits_of(x, n);
    let value = f.eval_bits(&input)?;
    let expected = bit_string(&bits_of(value, width));
    let fail = |branch, observed: String| Failure {
        input: bit_string(&input),
        branch,
        expected: expected.clone(),
        observed,
    };
    match mode {
        SimMode::Coherent => {
            let s = coherent_run(c, &input)?;
            let observed = point_mass(&s, &c.outputs).unwrap_or_else(|| "superposition".into());
            Ok((
                1,
                if observed == expected {
                    vec![]
                } else {
                    vec![fail(None, observed)]
                },
            ))
        }
        SimMode::Branches => {
            let branches = run_branches(c, &input)?;
            let mut failures = Vec::new();
            let mut total = 0.0;
            for (i, br) in branches.iter().enumerate() {
                total += br.probability;
                let observed = point_mass(&br.final_state, &c.outputs)
                    .unwrap_or_else(|| "superposition".into());
                if observed != expected {
                    failures.push(fail(Some(i), observed));
                }
            }
            if (total - 1.0).abs() > TOL {
                failures.push(fail(None, format!("branch probabilities sum to {total}")));
            }
            Ok((branches.len(), failures))
        }
    }
}

pub(super) fn check_all(
    c: &Circuit,
    f: &ClassicalFunction,
    width: usize,
    n: usize,
    mode: SimMode,
) -> Result<Vec<(usize, Vec<Failure>)>> {
    (0u64..1 << n)
        .into_par_iter()
        .map(|x| check_input(c, f, width, x, n, mode))
        .collect()
}

/// Runs the family at width `n` on all `2^n` inputs and compares with the
/// classical reference.
pub fn exhaustive_verify(
    family: &Family,
    n: usize,
    form: Form,
    mode: SimMode,
) -> Result<VerificationReport> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::BoundExceeded(format!(
            "n = {n} above {MAX_EXHAUSTIVE_N}"
        )));
    }
    let start = Instant::now();
    let gate = family.build(n)?;
    let circuit = match form {
        Form::Gate => gate,
        Form::Gadget => normalize_to_gadget_form(&gate),
    };
    let (f, width) = family.reference(n);
    let results = check_all(&circuit, &f, width, n, mode)?;
    Ok(VerificationReport {
        family: family.name().into(),
        params: family.params(n),
        n,
        form,
        mode,
        inputs_tested: results.len(),
        branches_tested: results.iter().map(|r| r.0).sum(),
        failures: results.into_iter().flat_map(|r| r.1).collect(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
