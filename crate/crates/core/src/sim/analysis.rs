use std::collections::BTreeMap;

use num_complex::Complex64;

use super::label::BasisLabel;
use super::sparse::SparseState;
use super::state::{QuantumState, TOL};

/// Distribution of the listed qubits, keyed by bit string in list order.
pub fn marginal_distribution(state: &SparseState, qubits: &[usize]) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for (l, a) in state.terms() {
        *out.entry(l.bit_string(qubits)).or_insert(0.0) += a.norm_sqr();
    }
    out
}

/// The value the listed qubits take with probability at least `1 - TOL`.
pub fn point_mass(state: &SparseState, qubits: &[usize]) -> Option<String> {
    marginal_distribution(state, qubits)
        .into_iter()
        .find(|(_, p)| *p >= 1.0 - TOL)
        .map(|(k, _)| k)
}

/// Whether `a = c * b` for some unit `c`, within `tol` in the 2-norm. The
/// phase `c` is read off the largest amplitude of `a`.
pub fn states_equal_up_to_global_phase(a: &SparseState, b: &SparseState, tol: f64) -> bool {
    if a.width() != b.width() {
        return false;
    }
    let Some((pivot, pa)) = a.terms().max_by(|x, y| {
        x.1.norm_sqr()
            .total_cmp(&y.1.norm_sqr())
            .then_with(|| y.0.cmp(x.0))
    }) else {
        return b.is_empty();
    };
    let pb = b.amplitude(pivot);
    if pb.norm() < TOL {
        return false;
    }
    let ratio = pa / pb;
    let c = ratio / ratio.norm();
    let mut dist = 0.0;
    for (l, x) in a.terms() {
        dist += (x - c * b.amplitude(l)).norm_sqr();
    }
    for (l, y) in b.terms() {
        if a.amplitude(l) == Complex64::default() {
            dist += y.norm_sqr();
        }
    }
    dist.sqrt() <= tol
}

/// Overlap `<a|b>`.
pub fn inner_product(a: &SparseState, b: &SparseState) -> Complex64 {
    a.terms().map(|(l, x)| x.conj() * b.amplitude(l)).sum()
}

/// Parses `"0101"` into bits, first character first.
pub fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

/// Bits of `value` over `n` positions, least significant first.
pub fn bits_of(value: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| (value >> i) & 1 == 1).collect()
}

pub fn label_of(bits: &[bool]) -> BasisLabel {
    BasisLabel::from_bits(bits)
}
