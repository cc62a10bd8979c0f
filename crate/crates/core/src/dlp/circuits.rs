//! Circuits of the exact discrete-log algorithm.
//!
//! All circuits share one qubit numbering: the exponent register `r`
//! (`m` qubits), the group register `z` (`n` qubits, seeded at 1), the
//! amplification ancilla, the second exponent register `alpha` (`m` qubits)
//! and, in the table variants, `m` power-table registers of `n` qubits.

use crate::angle::PhaseAngle;
use crate::builders::{emit_or, OrOptions};
use crate::circuit::{Circuit, CircuitBuilder};
use crate::error::Result;

use super::instance::{ReducedInstance, SafePrimeInstance};
use super::oracles::{
    build_amplitude_split, build_arithmetic_oracle, build_fourier_oracle,
    build_modexp_table_oracle, ArithmeticKind,
};

/// Where the precomputed powers `g^{2^j}` live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableMode {
    /// Folded into the modexp oracle; no table qubits.
    #[default]
    Folded,
    /// Loaded into table registers and left there after `Q1`.
    Kept,
    /// Loaded into table registers and cleared at the end of `Q1`.
    Uncomputed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlpLayout {
    pub r: Vec<usize>,
    pub z: Vec<usize>,
    pub anc: usize,
    pub alpha: Vec<usize>,
    pub tables: Vec<Vec<usize>>,
}

impl DlpLayout {
    pub fn new(inst: &SafePrimeInstance, mode: TableMode) -> Self {
        let (m, n) = (inst.m, inst.n);
        let tables = match mode {
            TableMode::Folded => vec![],
            _ => (0..m)
                .map(|j| (0..n).map(|i| 2 * m + n + 1 + j * n + i).collect())
                .collect(),
        };
        DlpLayout {
            r: (0..m).collect(),
            z: (m..m + n).collect(),
            anc: m + n,
            alpha: (m + n + 1..2 * m + n + 1).collect(),
            tables,
        }
    }

    pub fn width(&self) -> usize {
        2 * self.r.len() + self.z.len() + 1 + self.tables.iter().map(Vec::len).sum::<usize>()
    }

    /// `r`, `z` and the ancilla: the register the amplification acts on.
    pub fn amplified(&self) -> Vec<usize> {
        self.r
            .iter()
            .chain(&self.z)
            .copied()
            .chain([self.anc])
            .collect()
    }

    fn builder(&self) -> CircuitBuilder {
        let mut b = CircuitBuilder::new();
        b.qubits(self.width());
        b
    }
}

fn set_bits(b: &mut CircuitBuilder, qubits: &[usize], value: u64) {
    let ones: Vec<usize> = qubits
        .iter()
        .enumerate()
        .filter(|(i, _)| (value >> i) & 1 == 1)
        .map(|(_, &q)| q)
        .collect();
    b.not(&ones);
}

/// Steps 1-3: `F_p`, modexp on `z = 1`, `F_p`.
fn emit_a_prime(b: &mut CircuitBuilder, red: &ReducedInstance, lay: &DlpLayout) -> Result<()> {
    let f = build_fourier_oracle(red.inst.p, false)?;
    b.oracle(f.clone(), &lay.r);
    set_bits(b, &lay.z, 1);
    if lay.tables.is_empty() {
        let me = build_arithmetic_oracle(ArithmeticKind::ModexpG, red)?;
        let qs: Vec<usize> = lay.r.iter().chain(&lay.z).copied().collect();
        b.oracle(me, &qs);
    } else {
        let me = build_modexp_table_oracle(&red.inst)?;
        let qs: Vec<usize> = lay
            .r
            .iter()
            .chain(&lay.z)
            .chain(lay.tables.iter().flatten())
            .copied()
            .collect();
        b.oracle(me, &qs);
    }
    b.oracle(f, &lay.r);
    Ok(())
}

/// Steps 1-4: the success amplitude is split to exactly 1/2.
fn emit_a(b: &mut CircuitBuilder, red: &ReducedInstance, lay: &DlpLayout) -> Result<()> {
    emit_a_prime(b, red, lay)?;
    b.oracle(build_amplitude_split(red.inst.p), &[lay.anc]);
    Ok(())
}

/// Which basis states a phase flag multiplies by `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagKind {
    /// The all-zero state of the register.
    Zero,
    /// First `m` qubits not all zero and the last qubit 1.
    A,
}

/// Multiplies the flagged basis states of `reg` by `i`: computes an OR
/// into an ancilla, applies `Z(pi/2)` there, and uncomputes.
fn emit_flag(b: &mut CircuitBuilder, kind: FlagKind, reg: &[usize], m: usize) -> Result<()> {
    let quarter = PhaseAngle::new(1, 2);
    let mark = b.mark();
    match kind {
        FlagKind::Zero => {
            let f = emit_or(b, reg, OrOptions::default())?;
            let computed = b.gates_since(mark);
            b.not(&[f]);
            b.phase(f, quarter);
            b.not(&[f]);
            b.uncompute(&computed)
        }
        FlagKind::A => {
            let f = emit_or(b, &reg[..m], OrOptions::default())?;
            let computed = b.gates_since(mark);
            b.cphase(f, reg[reg.len() - 1], quarter);
            b.uncompute(&computed)
        }
    }
}

/// Phase flag on an `m + n + 1` qubit register given as the circuit inputs.
pub fn build_phase_flag(kind: FlagKind, m: usize, n: usize) -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    let reg = b.inputs(m + n + 1);
    emit_flag(&mut b, kind, &reg, m)?;
    Ok(b.finish())
}

fn emit_q1(
    b: &mut CircuitBuilder,
    red: &ReducedInstance,
    lay: &DlpLayout,
    mode: TableMode,
) -> Result<()> {
    for (t, &v) in lay.tables.iter().zip(&red.powers_g) {
        set_bits(b, t, v);
    }
    let reg = lay.amplified();
    let mark = b.mark();
    emit_a(b, red, lay)?;
    let a = b.gates_since(mark);
    emit_flag(b, FlagKind::A, &reg, red.inst.m)?;
    b.uncompute(&a)?;
    emit_flag(b, FlagKind::Zero, &reg, red.inst.m)?;
    for g in a {
        b.add(g);
    }
    if mode == TableMode::Uncomputed {
        for (t, &v) in lay.tables.iter().zip(&red.powers_g) {
            set_bits(b, t, v);
        }
    }
    Ok(())
}

/// `A'`: steps 1-3 only.
pub fn build_a_prime(red: &ReducedInstance) -> Result<Circuit> {
    let lay = DlpLayout::new(&red.inst, TableMode::Folded);
    let mut b = lay.builder();
    emit_a_prime(&mut b, red, &lay)?;
    Ok(b.finish())
}

/// `A`: steps 1-4.
pub fn build_algorithm_a(red: &ReducedInstance) -> Result<Circuit> {
    let lay = DlpLayout::new(&red.inst, TableMode::Folded);
    let mut b = lay.builder();
    emit_a(&mut b, red, &lay)?;
    Ok(b.finish())
}

/// `Q1 = A S_0 A^{-1} S_A A`, taking `|0...0>` to
/// `sum_{s >= 1} |s>|chi^s>|1> / sqrt(p-1)`.
pub fn build_q1(red: &ReducedInstance, mode: TableMode) -> Result<Circuit> {
    let lay = DlpLayout::new(&red.inst, mode);
    let mut b = lay.builder();
    emit_q1(&mut b, red, &lay, mode)?;
    Ok(b.finish())
}

fn emit_q2(b: &mut CircuitBuilder, red: &ReducedInstance, lay: &DlpLayout) -> Result<()> {
    let p = red.inst.p;
    b.oracle(build_fourier_oracle(p, false)?, &lay.alpha);
    let qs: Vec<usize> = lay.z.iter().chain(&lay.alpha).copied().collect();
    b.oracle(build_arithmetic_oracle(ArithmeticKind::Dx, red)?, &qs);
    b.oracle(build_fourier_oracle(p, true)?, &lay.alpha);
    Ok(())
}

/// `Q2`: `F_p`, `D_x`, `F_p^{-1}`; writes `s l mod p` into `alpha`.
pub fn build_q2(red: &ReducedInstance) -> Result<Circuit> {
    let lay = DlpLayout::new(&red.inst, TableMode::Folded);
    let mut b = lay.builder();
    emit_q2(&mut b, red, &lay)?;
    Ok(b.finish())
}

/// `Q1`, `Q2`, then computational-basis measurements of `r` and `alpha`
/// (a Hadamard followed by `A(0)`). Returns the circuit and the classical
/// bits holding `s` and `s l mod p`, least significant first.
pub fn build_pipeline(
    red: &ReducedInstance,
    mode: TableMode,
) -> Result<(Circuit, Vec<usize>, Vec<usize>)> {
    let lay = DlpLayout::new(&red.inst, mode);
    let mut b = lay.builder();
    emit_q1(&mut b, red, &lay, mode)?;
    emit_q2(&mut b, red, &lay)?;
    let mut measure = |qs: &[usize]| -> Vec<usize> {
        qs.iter()
            .map(|&q| {
                b.h(q);
                b.measure_a(q, PhaseAngle::ZERO)
            })
            .collect()
    };
    let s_bits = measure(&lay.r);
    let v_bits = measure(&lay.alpha);
    Ok((b.finish(), s_bits, v_bits))
}
