use num_complex::Complex64;

use crate::circuit::Gate;
use crate::error::{Error, Result};

use super::label::BasisLabel;
use super::sparse::SparseState;
use super::state::{
    check_qubits, classify, diagonal_factor, permute_bits, Action, QuantumState, FRAC_1_SQRT_2,
    SNAP,
};

/// Largest width the dense backend accepts.
pub const MAX_DENSE_QUBITS: usize = 20;

/// Full state vector; bit `q` of the index is qubit `q`.
#[derive(Clone, Debug)]
pub struct DenseState {
    width: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

#[inline]
fn bit(i: usize, q: usize) -> bool {
    (i >> q) & 1 == 1
}

impl QuantumState for DenseState {
    fn basis(width: usize, ones: &[usize]) -> Result<Self> {
        if width > MAX_DENSE_QUBITS {
            return Err(Error::BoundExceeded(format!(
                "dense simulation supports at most {MAX_DENSE_QUBITS} qubits, got {width}"
            )));
        }
        let mut amps = vec![Complex64::default(); 1 << width];
        let mut index = 0;
        for &q in ones {
            if q >= width {
                return Err(Error::QubitOutOfRange { qubit: q, width });
            }
            index ^= 1 << q;
        }
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(DenseState { width, amps })
    }

    fn width(&self) -> usize {
        self.width
    }

    fn apply(&mut self, gate: &Gate, control: Option<usize>) -> Result<()> {
        check_qubits(gate, control, self.width)?;
        let active = |i: usize| control.is_none_or(|c| bit(i, c));
        match classify(gate)? {
            Action::Permute => {
                let mut out = vec![Complex64::default(); self.amps.len()];
                for (i, &a) in self.amps.iter().enumerate() {
                    let mut j = i;
                    if active(i) {
                        permute_bits(gate, |q| bit(i, q)).apply(|q| j ^= 1 << q);
                    }
                    out[j] += a;
                }
                self.amps = out;
            }
            Action::Diagonal => {
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if active(i) {
                        *a *= diagonal_factor(gate, |q| bit(i, q));
                    }
                }
            }
            Action::Hadamard => {
                let m = 1 << gate.qubits[0];
                for i in 0..self.amps.len() {
                    if i & m == 0 && active(i) {
                        let (a, b) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                        self.amps[i | m] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            Action::Unitary { dim, matrix } => {
                let qs = gate.qubits.as_slice();
                let mask: usize = qs.iter().map(|&q| 1 << q).sum();
                let scatter = |v: usize| -> usize {
                    qs.iter()
                        .enumerate()
                        .filter(|(k, _)| (v >> k) & 1 == 1)
                        .map(|(_, &q)| 1 << q)
                        .sum()
                };
                let offsets: Vec<usize> = (0..dim).map(scatter).collect();
                let mut block = vec![Complex64::default(); dim];
                for base in 0..self.amps.len() {
                    if base & mask != 0 || !active(base) {
                        continue;
                    }
                    for (v, slot) in block.iter_mut().enumerate() {
                        *slot = self.amps[base | offsets[v]];
                    }
                    for u in 0..dim {
                        self.amps[base | offsets[u]] =
                            (0..dim).map(|v| matrix[u * dim + v] * block[v]).sum();
                    }
                }
            }
        }
        Ok(())
    }

    fn project(self, q: usize) -> [(f64, Option<Self>); 2] {
        let width = self.width;
        let mut parts = [(0.0, None), (0.0, None)];
        for (b, part) in parts.iter_mut().enumerate() {
            let mut amps = self.amps.clone();
            let mut p = 0.0;
            for (i, a) in amps.iter_mut().enumerate() {
                if bit(i, q) == (b == 1) {
                    p += a.norm_sqr();
                } else {
                    *a = Complex64::default();
                }
            }
            let state = (p > 0.0).then(|| {
                let s = 1.0 / p.sqrt();
                amps.iter_mut().for_each(|a| *a *= s);
                DenseState { width, amps }
            });
            *part = (p, state);
        }
        parts
    }

    fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    fn to_sparse(&self) -> SparseState {
        SparseState::from_terms(
            self.width,
            self.amps
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm() >= SNAP)
                .map(|(i, &a)| {
                    let mut l = BasisLabel::zeros(self.width);
                    for q in 0..self.width {
                        if bit(i, q) {
                            l.flip(q);
                        }
                    }
                    (l, a)
                }),
        )
    }
}
