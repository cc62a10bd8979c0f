use serde::{Deserialize, Serialize};

use crate::dlp::arith::brute_force_dlog;
use crate::error::{Error, Result};

/// Boolean and arithmetic functions evaluated by brute force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ClassicalFunction {
    Or {
        n: usize,
    },
    And {
        n: usize,
    },
    Exact {
        n: usize,
        t: usize,
    },
    Threshold {
        n: usize,
        t: usize,
    },
    Parity {
        n: usize,
        mask: u64,
    },
    /// Hamming weight.
    Count {
        n: usize,
    },
    /// Discrete logarithm base `g_q` modulo `q`.
    Dlog {
        q: u64,
        g_q: u64,
    },
}

/// Argument of a classical function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassicalInput {
    Bits(Vec<bool>),
    Element(u64),
}

impl ClassicalFunction {
    /// Number of input bits; `None` for group-element inputs.
    pub fn arity(&self) -> Option<usize> {
        match *self {
            ClassicalFunction::Or { n }
            | ClassicalFunction::And { n }
            | ClassicalFunction::Exact { n, .. }
            | ClassicalFunction::Threshold { n, .. }
            | ClassicalFunction::Parity { n, .. }
            | ClassicalFunction::Count { n } => Some(n),
            ClassicalFunction::Dlog { .. } => None,
        }
    }

    pub fn eval_bits(&self, x: &[bool]) -> Result<u64> {
        self.eval(&ClassicalInput::Bits(x.to_vec()))
    }

    pub fn eval(&self, input: &ClassicalInput) -> Result<u64> {
        match (self, input) {
            (ClassicalFunction::Dlog { q, g_q }, ClassicalInput::Element(x)) => {
                brute_force_dlog(*g_q, *x, *q).ok_or_else(|| {
                    Error::InvalidParameter(format!("{x} is not a power of {g_q} mod {q}"))
                })
            }
            (f, ClassicalInput::Bits(x)) if f.arity() == Some(x.len()) => {
                let w = x.iter().filter(|&&b| b).count();
                let n = x.len();
                Ok(match *f {
                    ClassicalFunction::Or { .. } => u64::from(w > 0),
                    ClassicalFunction::And { .. } => u64::from(w == n),
                    ClassicalFunction::Exact { t, .. } => u64::from(w == t),
                    ClassicalFunction::Threshold { t, .. } => u64::from(w >= t),
                    ClassicalFunction::Parity { mask, .. } => {
                        x.iter()
                            .enumerate()
                            .filter(|(j, &b)| b && (mask >> j) & 1 == 1)
                            .count() as u64
                            % 2
                    }
                    ClassicalFunction::Count { .. } => w as u64,
                    ClassicalFunction::Dlog { .. } => unreachable!(),
                })
            }
            (f, ClassicalInput::Bits(x)) => Err(Error::InputLength {
                expected: f.arity().unwrap_or(0),
                got: x.len(),
            }),
            (_, ClassicalInput::Element(_)) => Err(Error::InvalidParameter(
                "bit-string function given an element".into(),
            )),
        }
    }
}

/// Free-function form of [`ClassicalFunction::eval`].
pub fn oracle_eval(f: &ClassicalFunction, input: &ClassicalInput) -> Result<u64> {
    f.eval(input)
}

/// Checks `sum_{a != 0} PA^a(x) = 2^{n-1} OR(x)` for every `x` of `n` bits
/// in integer arithmetic.
pub fn parity_average_identity_holds(n: usize) -> bool {
    (0u64..1 << n).all(|x| {
        let lhs: u64 = (1u64..1 << n)
            .map(|a| u64::from((a & x).count_ones() % 2 == 1))
            .sum();
        lhs == (1u64 << (n - 1)) * u64::from(x != 0)
    })
}
