use crate::angle::PhaseAngle;
use crate::circuit::{Circuit, CircuitBuilder};
use crate::error::{Error, Result};

use super::or::{emit_or, OrOptions};
use super::reduction::{emit_phase_groups, PhaseGroup};
use super::{bit_length, padded};

/// Low `l` bits of `|x|` into fresh qubits, least significant first.
///
/// Level `k` prepares `2^k` copies of `|phi_k>`; copy `y` is measured in the
/// basis `A(pi y / 2^k)`, which yields `s_k` exactly when `y` equals the low
/// `k` bits of `|x|`. Bit `k` is the parity over `y` of
/// `AND_j [measured bit j of the chain selected by y]`, so only the correct
/// chain contributes. Every bit, including bit 0, goes through the same AND
/// and parity stages so the depth does not depend on `l`.
pub(crate) fn emit_counting(b: &mut CircuitBuilder, x: &[usize], l: usize) -> Result<Vec<usize>> {
    let xs = padded(b, x);
    let mut groups = Vec::new();
    for k in 0..l {
        for _ in 0..1usize << k {
            groups.push(PhaseGroup {
                level: k,
                shift: None,
                data: vec![],
                final_h: false,
            });
        }
    }
    let phis = emit_phase_groups(b, &xs, &groups);

    // regs[k][y]: copies of the bit measured on copy y of level k; the bit
    // of level j is read by every (k, y) with k >= j extending its prefix.
    let regs: Vec<Vec<Vec<usize>>> = (0..l)
        .map(|k| {
            (0..1usize << k)
                .map(|_| b.qubits((1usize << (l - k)) - 1))
                .collect()
        })
        .collect();

    // Literals of the AND for (k, y). A literal negated because y_j = 0 is
    // taken from a copy preset to 1, so the negation costs no depth.
    let mut pools = regs.clone();
    let mut literals: Vec<Vec<Vec<usize>>> = Vec::with_capacity(l);
    let mut preset = Vec::new();
    for k in 0..l {
        let mut level = Vec::with_capacity(1 << k);
        for y in 0..1usize << k {
            let lits: Vec<usize> = (0..=k)
                .map(|j| {
                    let q = pools[j][y & ((1 << j) - 1)]
                        .pop()
                        .expect("S register exhausted");
                    if j < k && (y >> j) & 1 == 0 {
                        preset.push(q);
                    }
                    q
                })
                .collect();
            level.push(lits);
        }
        literals.push(level);
    }
    b.not(&preset);

    let mut idx = 0;
    for (k, level) in regs.iter().enumerate() {
        for (y, reg) in level.iter().enumerate() {
            let cbit = b.measure_a(phis[idx], PhaseAngle::new(y as i64, 1u64 << k));
            idx += 1;
            b.add(crate::circuit::Gate::not(reg.iter().copied()).when(cbit));
        }
    }

    let mut outputs = Vec::with_capacity(l);
    for level in &literals {
        let mut t = Vec::with_capacity(level.len());
        for lits in level {
            t.push(emit_or(
                b,
                lits,
                OrOptions {
                    and: true,
                    clean: true,
                },
            )?);
        }
        let out = b.qubit();
        b.parity_sandwich(&t, out);
        outputs.push(out);
    }
    Ok(outputs)
}

/// Counting circuit: the low `l` bits of `|x|`, for `1 <= l <= ceil(log2(n+1))`.
/// Outputs are least significant first.
pub fn build_counting(n: usize, l: usize) -> Result<Circuit> {
    if n == 0 || l == 0 || l > bit_length(n) {
        return Err(Error::InvalidParameter(format!(
            "counting needs n >= 1 and 1 <= l <= {}, got n={n}, l={l}",
            bit_length(n)
        )));
    }
    let mut b = CircuitBuilder::new();
    let x = b.inputs(n);
    let out = emit_counting(&mut b, &x, l)?;
    b.set_outputs(out);
    Ok(b.finish())
}
