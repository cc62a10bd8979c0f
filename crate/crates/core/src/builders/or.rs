use crate::circuit::{Circuit, CircuitBuilder};
use crate::error::{Error, Result};

use super::reduction::{emit_phase_groups, shift_angle, PhaseGroup};
use super::{bit_length, padded};

/// Largest width accepted by [`build_or_exp`]; its size grows as `2^n`.
pub const MAX_OR_EXP_WIDTH: usize = 20;

/// Exponential-size, constant-depth OR of `y` into a fresh qubit, which is
/// returned. Requires `y.len() >= 1`.
pub(crate) fn emit_or_exp(b: &mut CircuitBuilder, y: &[usize]) -> usize {
    let n = y.len();
    let half = (1usize << (n - 1)) - 1;
    let r: Vec<Vec<usize>> = (0..n).map(|_| b.qubits(half)).collect();
    // One S qubit per subset of weight at least two, in increasing order.
    let subsets: Vec<usize> = (0..1usize << n).filter(|a| a.count_ones() >= 2).collect();
    let s = b.qubits(subsets.len());
    let t = b.qubits((1 << n) - 1);

    // S_a ends up holding the parity of the inputs selected by a.
    for j in 0..n {
        b.fanout(y[j], &r[j]);
    }
    // Each R qubit serves exactly one subset, so every subset is its own
    // parity sandwich; emitting them one at a time keeps simulation sparse.
    let mut next = vec![0usize; n];
    for (i, &a) in subsets.iter().enumerate() {
        let targets: Vec<usize> = (0..n)
            .filter(|j| (a >> j) & 1 == 1)
            .map(|j| {
                next[j] += 1;
                r[j][next[j] - 1]
            })
            .collect();
        b.parity_sandwich(&targets, s[i]);
    }

    // Exactly 2^{n-1} nonempty subsets have odd parity when y != 0 and none
    // when y = 0, so the GHZ group collects phase pi or 0.
    b.h(t[0]);
    b.fanout(t[0], &t[1..]);
    let angle = crate::angle::PhaseAngle::dyadic(1, (n - 1) as u32);
    for j in 0..n {
        b.cphase(y[j], t[j], angle);
    }
    for (i, &q) in s.iter().enumerate() {
        b.cphase(q, t[n + i], angle);
    }
    b.fanout(t[0], &t[1..]);
    b.h(t[0]);
    t[0]
}

/// Exponential-size OR circuit; output is the last register's first qubit.
pub fn build_or_exp(n: usize) -> Result<Circuit> {
    if n == 0 || n > MAX_OR_EXP_WIDTH {
        return Err(Error::InvalidParameter(format!(
            "or_exp width {n} must be in 1..={MAX_OR_EXP_WIDTH}"
        )));
    }
    let mut b = CircuitBuilder::new();
    let y = b.inputs(n);
    let out = emit_or_exp(&mut b, &y);
    b.set_outputs(vec![out]);
    Ok(b.finish())
}

/// Options for [`build_or_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OrOptions {
    /// Compute AND through De Morgan: negate inputs and output.
    pub and: bool,
    /// Copy the result out and uncompute every ancilla.
    pub clean: bool,
}

fn emit_or_core(b: &mut CircuitBuilder, x: &[usize], negate: bool) -> usize {
    if negate {
        b.not(x);
    }
    let xs = padded(b, x);
    let groups: Vec<PhaseGroup> = (0..bit_length(xs.len()))
        .map(|k| PhaseGroup {
            level: k,
            shift: None,
            data: vec![],
            final_h: true,
        })
        .collect();
    let ys = emit_phase_groups(b, &xs, &groups);
    emit_or_exp(b, &ys)
}

/// OR (or AND) of `x` into a qubit that is returned.
pub(crate) fn emit_or(b: &mut CircuitBuilder, x: &[usize], opts: OrOptions) -> Result<usize> {
    if opts.clean {
        let mark = b.mark();
        let core = emit_or_core(b, x, opts.and);
        let computed = b.gates_since(mark);
        let out = b.qubit();
        b.fanout(core, &[out]);
        b.uncompute(&computed)?;
        if opts.and {
            b.not(&[out]);
        }
        Ok(out)
    } else {
        let out = emit_or_core(b, x, opts.and);
        if opts.and {
            b.not(&[out]);
            b.not(x);
        }
        Ok(out)
    }
}

/// Polynomial-size constant-depth OR: the reduction to `m = ceil(log2(n+1))`
/// bits followed by the exponential OR on those bits.
pub fn build_or(n: usize) -> Result<Circuit> {
    build_or_with(n, OrOptions::default())
}

pub fn build_and(n: usize) -> Result<Circuit> {
    build_or_with(
        n,
        OrOptions {
            and: true,
            clean: false,
        },
    )
}

pub fn build_or_with(n: usize, opts: OrOptions) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "OR needs at least one input".into(),
        ));
    }
    let mut b = CircuitBuilder::new();
    let x = b.inputs(n);
    let out = emit_or(&mut b, &x, opts)?;
    b.set_outputs(vec![out]);
    Ok(b.finish())
}

fn emit_or_blocked(b: &mut CircuitBuilder, x: &[usize], c: usize) -> Result<usize> {
    if c == 1 {
        return emit_or(b, x, OrOptions::default());
    }
    let block = bit_length(x.len() - 1).max(1);
    if block < 2 {
        return Err(Error::InvalidParameter(format!(
            "blocked OR of {} inputs with depth parameter {c} has blocks of size {block}",
            x.len()
        )));
    }
    let mut outs = Vec::new();
    for chunk in x.chunks(block) {
        let mut inputs = chunk.to_vec();
        inputs.extend(b.qubits(block - chunk.len()));
        outs.push(emit_or_blocked(b, &inputs, c - 1)?);
    }
    emit_or_blocked(b, &outs, c - 1)
}

/// OR over blocks of `ceil(log2 n)` inputs, recursively `c` levels deep;
/// the last block is padded with zero ancillas. `c = 1` is [`build_or`].
pub fn build_or_blocked(n: usize, c: usize) -> Result<Circuit> {
    if n == 0 || c == 0 {
        return Err(Error::InvalidParameter(format!(
            "blocked OR needs n >= 1 and c >= 1, got n={n}, c={c}"
        )));
    }
    let mut b = CircuitBuilder::new();
    let x = b.inputs(n);
    let out = emit_or_blocked(&mut b, &x, c)?;
    b.set_outputs(vec![out]);
    Ok(b.finish())
}

/// `[|x| = k]` into a fresh qubit, with `k = constant + sum_b 2^b s_b` where
/// `data[b]` holds copies of `s_b` (consumed, one per level `>= b`). Uses
/// `m_red` reduction levels; requires `|x|, k < 2^m_red`.
pub(crate) fn emit_exact(
    b: &mut CircuitBuilder,
    x: &[usize],
    constant: usize,
    data: &mut [Vec<usize>],
    m_red: usize,
) -> Result<usize> {
    let xs = padded(b, x);
    let groups: Vec<PhaseGroup> = (0..m_red)
        .map(|j| PhaseGroup {
            level: j,
            shift: Some(shift_angle(constant as i64, j)),
            data: data
                .iter_mut()
                .enumerate()
                .take(j + 1)
                .map(|(bit, copies)| {
                    let q = copies.pop().expect("data copies exhausted");
                    (q, crate::angle::PhaseAngle::new(-(1i64 << bit), 1u64 << j))
                })
                .collect(),
            final_h: true,
        })
        .collect();
    let ys = emit_phase_groups(b, &xs, &groups);
    let out = emit_or_exp(b, &ys);
    b.not(&[out]);
    Ok(out)
}

/// Exact function `[|x| = t]`.
pub fn build_exact(n: usize, t: usize) -> Result<Circuit> {
    if n == 0 || t > n {
        return Err(Error::InvalidParameter(format!(
            "exact needs 1 <= n and t <= n, got n={n}, t={t}"
        )));
    }
    let mut b = CircuitBuilder::new();
    let x = b.inputs(n);
    let out = emit_exact(&mut b, &x, t, &mut [], bit_length(n.max(2)))?;
    b.set_outputs(vec![out]);
    Ok(b.finish())
}
