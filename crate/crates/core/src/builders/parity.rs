use crate::circuit::{Circuit, CircuitBuilder};
use crate::error::{Error, Result};

/// Parity of the inputs selected by `mask` (bit `j` selects input `j`)
/// into a fresh target: Hadamards on every wire, a fan-out controlled by
/// the target, Hadamards again. Size `3|a| + 3`, depth 3.
pub fn build_parity(n: usize, mask: u64) -> Result<Circuit> {
    if n == 0 || n > 64 {
        return Err(Error::InvalidParameter(format!(
            "parity width {n} must be in 1..=64"
        )));
    }
    if mask == 0 || (n < 64 && mask >> n != 0) {
        return Err(Error::InvalidParameter(format!(
            "mask {mask:#b} must be a nonzero {n}-bit value"
        )));
    }
    let mut b = CircuitBuilder::new();
    let x = b.inputs(n);
    let target = b.qubit();
    let sources: Vec<usize> = (0..n)
        .filter(|j| (mask >> j) & 1 == 1)
        .map(|j| x[j])
        .collect();
    b.parity_sandwich(&sources, target);
    b.set_outputs(vec![target]);
    Ok(b.finish())
}
