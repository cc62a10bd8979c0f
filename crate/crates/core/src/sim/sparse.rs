use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::circuit::Gate;
use crate::error::{Error, Result};

use super::label::BasisLabel;
use super::state::{
    check_qubits, classify, diagonal_factor, permute_bits, Action, QuantumState, FRAC_1_SQRT_2,
    SNAP,
};

/// Map from basis label to amplitude. Amplitudes below the snap threshold
/// are never stored.
#[derive(Clone, Debug, Default)]
pub struct SparseState {
    width: usize,
    terms: FxHashMap<BasisLabel, Complex64>,
}

impl SparseState {
    pub fn from_terms(
        width: usize,
        terms: impl IntoIterator<Item = (BasisLabel, Complex64)>,
    ) -> Self {
        let mut s = SparseState {
            width,
            terms: FxHashMap::default(),
        };
        for (l, a) in terms {
            *s.terms.entry(l).or_default() += a;
        }
        s.snap();
        s
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Complex64 {
        self.terms.get(label).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisLabel, &Complex64)> {
        self.terms.iter()
    }

    /// Terms sorted by label, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(&BasisLabel, Complex64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(l, a)| (l, *a)).collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn scale(&mut self, c: Complex64) {
        for a in self.terms.values_mut() {
            *a *= c;
        }
    }

    fn snap(&mut self) {
        self.terms.retain(|_, a| a.norm() >= SNAP);
    }

    fn relabel(&mut self, mut f: impl FnMut(&mut BasisLabel)) {
        let mut v: Vec<(BasisLabel, Complex64)> = self.terms.drain().collect();
        for (l, _) in v.iter_mut() {
            f(l);
        }
        self.terms.extend(v);
    }
}

impl QuantumState for SparseState {
    fn basis(width: usize, ones: &[usize]) -> Result<Self> {
        let mut l = BasisLabel::zeros(width);
        for &q in ones {
            if q >= width {
                return Err(Error::QubitOutOfRange { qubit: q, width });
            }
            l.flip(q);
        }
        Ok(SparseState::from_terms(
            width,
            [(l, Complex64::new(1.0, 0.0))],
        ))
    }

    fn width(&self) -> usize {
        self.width
    }

    fn apply(&mut self, gate: &Gate, control: Option<usize>) -> Result<()> {
        check_qubits(gate, control, self.width)?;
        let active = |l: &BasisLabel| control.is_none_or(|c| l.get(c));
        match classify(gate)? {
            Action::Permute => self.relabel(|l| {
                if active(l) {
                    let flips = permute_bits(gate, |q| l.get(q));
                    flips.apply(|q| l.flip(q));
                }
            }),
            Action::Diagonal => {
                for (l, a) in self.terms.iter_mut() {
                    if active(l) {
                        *a *= diagonal_factor(gate, |q| l.get(q));
                    }
                }
            }
            Action::Hadamard => {
                let q = gate.qubits[0];
                let mut out: FxHashMap<BasisLabel, Complex64> = FxHashMap::default();
                out.reserve(self.terms.len() * 2);
                for (l, a) in self.terms.drain() {
                    if !active(&l) {
                        *out.entry(l).or_default() += a;
                        continue;
                    }
                    let h = a * FRAC_1_SQRT_2;
                    let one = l.get(q);
                    let mut l1 = l.clone();
                    l1.set(q, true);
                    let mut l0 = l;
                    l0.set(q, false);
                    *out.entry(l0).or_default() += h;
                    *out.entry(l1).or_default() += if one { -h } else { h };
                }
                self.terms = out;
                self.snap();
            }
            Action::Unitary { dim, matrix } => {
                let qs = gate.qubits.as_slice();
                let mut out: FxHashMap<BasisLabel, Complex64> = FxHashMap::default();
                for (l, a) in self.terms.drain() {
                    if !active(&l) {
                        *out.entry(l).or_default() += a;
                        continue;
                    }
                    let v = l.read(qs) as usize;
                    for u in 0..dim {
                        let m = matrix[u * dim + v];
                        if m.norm() < SNAP {
                            continue;
                        }
                        let mut lu = l.clone();
                        lu.write(qs, u as u64);
                        *out.entry(lu).or_default() += m * a;
                    }
                }
                self.terms = out;
                self.snap();
            }
        }
        Ok(())
    }

    fn project(self, q: usize) -> [(f64, Option<Self>); 2] {
        let width = self.width;
        let (mut zero, mut one) = (FxHashMap::default(), FxHashMap::default());
        let (mut p0, mut p1) = (0.0, 0.0);
        for (l, a) in self.terms {
            if l.get(q) {
                p1 += a.norm_sqr();
                one.insert(l, a);
            } else {
                p0 += a.norm_sqr();
                zero.insert(l, a);
            }
        }
        let part = |p: f64, terms: FxHashMap<BasisLabel, Complex64>| {
            if terms.is_empty() || p == 0.0 {
                return (p, None);
            }
            let mut s = SparseState { width, terms };
            s.scale(Complex64::new(1.0 / p.sqrt(), 0.0));
            s.snap();
            (p, Some(s))
        };
        [part(p0, zero), part(p1, one)]
    }

    fn norm_sqr(&self) -> f64 {
        self.terms.values().map(Complex64::norm_sqr).sum()
    }

    fn to_sparse(&self) -> SparseState {
        self.clone()
    }
}
