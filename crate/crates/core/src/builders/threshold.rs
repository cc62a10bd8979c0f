use crate::circuit::{Circuit, CircuitBuilder};
use crate::error::{Error, Result};

use super::counting::emit_counting;
use super::or::{emit_exact, emit_or, OrOptions};
use super::{bit_length, copies};

/// Which exact functions a threshold circuit sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `TH = NOT xor_{k < t} EX^k`, used when `t <= ceil(n/2)`.
    Low,
    /// `TH = xor_{k >= t} EX^k`, used otherwise.
    High,
}

/// Threshold `[|x| >= t]` on `n` inputs using the low `l` bits of `|x|` to
/// prune candidate weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdSpec {
    pub n: usize,
    pub t: usize,
    pub l: usize,
}

impl ThresholdSpec {
    pub fn new(n: usize, t: usize, l: usize) -> Result<Self> {
        let spec = ThresholdSpec { n, t, l };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.t == 0 || self.t > self.n {
            return Err(Error::InvalidParameter(format!(
                "threshold needs 1 <= t <= n, got n={}, t={}",
                self.n, self.t
            )));
        }
        if self.l >= bit_length(self.t) {
            return Err(Error::InvalidParameter(format!(
                "level l={} must be below ceil(log2(t+1)) = {}",
                self.l,
                bit_length(self.t)
            )));
        }
        Ok(())
    }

    pub fn side(&self) -> Side {
        if self.t <= self.n.div_ceil(2) {
            Side::Low
        } else {
            Side::High
        }
    }

    /// Candidate multipliers `M` (weights `M 2^l + s`) and the one whose
    /// inclusion depends on `s`.
    fn multipliers(&self) -> (Vec<usize>, Option<usize>) {
        let top = self.t >> self.l;
        let masked = (self.l > 0).then_some(top);
        match self.side() {
            Side::Low => ((0..top).collect(), masked),
            Side::High => {
                let first = if self.l > 0 { top + 1 } else { top };
                ((first..=self.n >> self.l).collect(), masked)
            }
        }
    }

    /// Reduction width large enough for every candidate weight and `n`.
    fn reduction_width(&self) -> usize {
        let (plain, masked) = self.multipliers();
        let k_max = plain
            .iter()
            .chain(masked.iter())
            .map(|m| (m << self.l) + (1 << self.l) - 1)
            .max()
            .unwrap_or(0);
        bit_length(self.n.max(k_max).max(2))
    }
}

/// Weights at most `n` whose exact functions are summed when
/// `|x| mod 2^l = s_low`.
pub fn candidate_set(spec: &ThresholdSpec, s_low: usize) -> Vec<usize> {
    let (plain, masked) = spec.multipliers();
    let t_low = spec.t & ((1 << spec.l) - 1);
    let keep_masked = match spec.side() {
        Side::Low => s_low < t_low,
        Side::High => s_low >= t_low,
    };
    let mut ks: Vec<usize> = plain
        .into_iter()
        .chain(masked.filter(|_| keep_masked))
        .map(|m| (m << spec.l) + s_low)
        .filter(|&k| k <= spec.n)
        .collect();
    ks.sort_unstable();
    ks
}

/// Level `l` from the size tradeoff: `~log2 sqrt(min(t, n-t+1) log2 n)`
/// in the middle range, `~log2(t)` or `~log2(n-t)` near the ends, clamped
/// to `0 <= l < ceil(log2(t+1))`.
pub fn choose_level(n: usize, t: usize) -> usize {
    let log_n = (n.max(1) as f64).log2();
    let tf = t as f64;
    let raw = if tf <= log_n {
        bit_length(t) as f64 - 1.0
    } else if t <= n.div_ceil(2) {
        ((tf * log_n).log2() / 2.0).ceil() - 1.0
    } else if tf <= n as f64 - log_n {
        (((n + 1).saturating_sub(t) as f64 * log_n).log2() / 2.0).ceil() - 1.0
    } else {
        ((n + 2).saturating_sub(t) as f64).log2().ceil() - 1.0
    };
    let cap = bit_length(t).saturating_sub(1);
    if raw.is_finite() && raw > 0.0 {
        (raw as usize).min(cap)
    } else {
        0
    }
}

fn emit_threshold(b: &mut CircuitBuilder, x: &[usize], spec: &ThresholdSpec) -> Result<usize> {
    let l = spec.l;
    let (plain, masked) = spec.multipliers();
    let m_red = spec.reduction_width();
    let t_low = spec.t & ((1 << l) - 1);
    let detectors: Vec<usize> = if l > 0 {
        (t_low..1 << l).collect()
    } else {
        vec![]
    };

    let s = if l > 0 {
        emit_counting(b, x, l)?
    } else {
        vec![]
    };
    let candidates: Vec<usize> = masked.iter().chain(plain.iter()).copied().collect();
    let xs = copies(b, x, candidates.len());
    // Detector copies of s_b are preset to 1 where the detected value has a
    // 0 bit, so the fan-out lands the negated literal directly.
    let mut sc = Vec::with_capacity(l);
    let mut det = Vec::with_capacity(l);
    for (bit, &q) in s.iter().enumerate() {
        let ex = b.qubits(candidates.len() * (m_red - bit) - 1);
        let dc = b.qubits(detectors.len());
        let preset: Vec<usize> = dc
            .iter()
            .zip(&detectors)
            .filter(|(_, &v)| (v >> bit) & 1 == 0)
            .map(|(&c, _)| c)
            .collect();
        b.not(&preset);
        let targets: Vec<usize> = ex.iter().chain(dc.iter()).copied().collect();
        b.fanout(q, &targets);
        sc.push(std::iter::once(q).chain(ex).collect::<Vec<usize>>());
        det.push(dc);
    }

    let mut outs = Vec::with_capacity(candidates.len());
    for (c, &m) in candidates.iter().enumerate() {
        let xc: Vec<usize> = xs.iter().map(|v| v[c]).collect();
        outs.push(emit_exact(b, &xc, m << l, &mut sc, m_red)?);
    }

    if masked.is_some() {
        // [s = v] for each v in t_low..2^l; their parity is [s >= t_low].
        let mut hits = Vec::with_capacity(detectors.len());
        for d in 0..detectors.len() {
            let lits: Vec<usize> = det.iter().map(|c| c[d]).collect();
            hits.push(emit_or(
                b,
                &lits,
                OrOptions {
                    and: true,
                    clean: true,
                },
            )?);
        }
        // A target preset to 1 receives the negated parity at no depth.
        let flag = b.qubit();
        if spec.side() == Side::Low {
            b.not(&[flag]);
        }
        b.parity_sandwich(&hits, flag);
        outs[0] = emit_or(
            b,
            &[outs[0], flag],
            OrOptions {
                and: true,
                clean: true,
            },
        )?;
    }

    let out = b.qubit();
    if spec.side() == Side::Low {
        b.not(&[out]);
    }
    b.parity_sandwich(&outs, out);
    Ok(out)
}

/// Threshold as a parity of exact functions over every relevant weight.
pub fn build_threshold_exactsum(n: usize, t: usize) -> Result<Circuit> {
    build_threshold_combined(ThresholdSpec::new(n, t, 0)?)
}

/// Threshold with the candidate weights pruned by the low `l` bits of `|x|`.
/// With `l = 0` this is [`build_threshold_exactsum`].
pub fn build_threshold_combined(spec: ThresholdSpec) -> Result<Circuit> {
    spec.validate()?;
    let mut b = CircuitBuilder::new();
    let x = b.inputs(spec.n);
    let out = emit_threshold(&mut b, &x, &spec)?;
    b.set_outputs(vec![out]);
    Ok(b.finish())
}
