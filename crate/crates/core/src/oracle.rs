//! Oracle gates: named permutation or unitary blocks acting on a qubit list.
//!
//! The register value seen by an oracle is little-endian in the gate's qubit
//! order: the first listed qubit is bit 0.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// What an oracle does on its `2^k`-dimensional register.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleAction {
    /// `|v> -> |perm[v]>`.
    Permutation(Vec<u64>),
    /// `|v> -> phases[v] |v>`.
    Diagonal(Vec<Complex64>),
    /// Dense row-major `dim x dim` matrix, `|v> -> sum_u m[u][v] |u>`.
    Unitary { dim: usize, matrix: Vec<Complex64> },
}

impl OracleAction {
    pub fn dim(&self) -> usize {
        match self {
            OracleAction::Permutation(p) => p.len(),
            OracleAction::Diagonal(d) => d.len(),
            OracleAction::Unitary { dim, .. } => *dim,
        }
    }

    /// Number of qubits, if the dimension is a power of two.
    pub fn arity(&self) -> Option<usize> {
        let d = self.dim();
        if d.is_power_of_two() {
            Some(d.trailing_zeros() as usize)
        } else {
            None
        }
    }

    pub fn inverse(&self) -> OracleAction {
        match self {
            OracleAction::Permutation(p) => {
                let mut inv = vec![0u64; p.len()];
                for (v, &w) in p.iter().enumerate() {
                    inv[w as usize] = v as u64;
                }
                OracleAction::Permutation(inv)
            }
            OracleAction::Diagonal(d) => {
                OracleAction::Diagonal(d.iter().map(|z| z.conj()).collect())
            }
            OracleAction::Unitary { dim, matrix } => {
                let mut adj = vec![Complex64::new(0.0, 0.0); dim * dim];
                for u in 0..*dim {
                    for v in 0..*dim {
                        adj[v * dim + u] = matrix[u * dim + v].conj();
                    }
                }
                OracleAction::Unitary {
                    dim: *dim,
                    matrix: adj,
                }
            }
        }
    }

    /// True when a permutation action is a bijection of `0..dim`.
    pub fn is_bijection(&self) -> bool {
        match self {
            OracleAction::Permutation(p) => {
                let mut seen = vec![false; p.len()];
                for &w in p {
                    let w = w as usize;
                    if w >= p.len() || seen[w] {
                        return false;
                    }
                    seen[w] = true;
                }
                true
            }
            _ => false,
        }
    }

    /// Largest entry of `|U^dagger U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        match self {
            OracleAction::Permutation(_) => {
                if self.is_bijection() {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            OracleAction::Diagonal(d) => {
                d.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
            }
            OracleAction::Unitary { dim, matrix } => {
                let mut worst: f64 = 0.0;
                for a in 0..*dim {
                    for b in 0..*dim {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for u in 0..*dim {
                            acc += matrix[u * dim + a].conj() * matrix[u * dim + b];
                        }
                        let expect = if a == b { 1.0 } else { 0.0 };
                        worst = worst.max((acc - expect).norm());
                    }
                }
                worst
            }
        }
    }
}

/// A named oracle reference with its parameters and (once resolved) its action.
///
/// Identity is the `(name, params, adjoint)` triple; the action is derived data.
#[derive(Clone)]
pub struct OracleSpec {
    pub name: String,
    pub params: Vec<i64>,
    pub adjoint: bool,
    action: Option<Arc<OracleAction>>,
}

impl OracleSpec {
    pub fn new(name: impl Into<String>, params: Vec<i64>, action: OracleAction) -> Self {
        OracleSpec {
            name: name.into(),
            params,
            adjoint: false,
            action: Some(Arc::new(action)),
        }
    }

    /// A reference without an action, as produced by parsing a circuit file.
    pub fn unresolved(name: impl Into<String>, params: Vec<i64>, adjoint: bool) -> Self {
        OracleSpec {
            name: name.into(),
            params,
            adjoint,
            action: None,
        }
    }

    pub fn action(&self) -> Result<&OracleAction> {
        self.action
            .as_deref()
            .ok_or_else(|| Error::OracleNotRegistered(self.to_string()))
    }

    pub fn is_resolved(&self) -> bool {
        self.action.is_some()
    }

    pub fn with_action(mut self, action: OracleAction) -> Self {
        self.action = Some(Arc::new(action));
        self
    }

    pub fn inverse(&self) -> OracleSpec {
        OracleSpec {
            name: self.name.clone(),
            params: self.params.clone(),
            adjoint: !self.adjoint,
            action: self.action.as_ref().map(|a| Arc::new(a.inverse())),
        }
    }
}

impl PartialEq for OracleSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.params == other.params && self.adjoint == other.adjoint
    }
}

impl Eq for OracleSpec {}

impl Hash for OracleSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state);
        self.params.hash(state);
        self.adjoint.hash(state);
    }
}

impl fmt::Debug for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleSpec")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("adjoint", &self.adjoint)
            .field("resolved", &self.action.is_some())
            .finish()
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name, self.params)?;
        if self.adjoint {
            write!(f, "^dagger")?;
        }
        Ok(())
    }
}

/// Rebuilds the action of an oracle reference from its name and parameters.
pub trait OracleResolver {
    fn resolve(&self, name: &str, params: &[i64]) -> Option<OracleAction>;
}

impl<F> OracleResolver for F
where
    F: Fn(&str, &[i64]) -> Option<OracleAction>,
{
    fn resolve(&self, name: &str, params: &[i64]) -> Option<OracleAction> {
        self(name, params)
    }
}
