use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arith::{inv_mod, mul_mod, pow_mod};
use super::circuits::{
    build_a_prime, build_algorithm_a, build_pipeline, build_q1, DlpLayout, TableMode,
};
use super::instance::{crt_combine, reduce_input, ReducedInstance, SafePrimeInstance};
use crate::circuit::normalize_to_gadget_form;
use crate::error::{Error, Result};
use crate::sim::{inner_product, run_branches_with, run_unitary, BasisLabel, SparseState};

/// How [`solve_dlp`] turns branches into an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// Draw one branch with a seeded generator.
    Sample,
    /// Require every surviving branch to give the same answer.
    AllBranches,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DlpBranch {
    pub s: u64,
    /// Measured `s l mod p`.
    pub v: u64,
    pub probability: f64,
    pub l_q: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DlpOutcome {
    pub l_q: u64,
    pub branches: Vec<DlpBranch>,
    pub pruned_probability: f64,
}

fn read(bits: &[usize], outcomes: &std::collections::BTreeMap<usize, bool>) -> u64 {
    bits.iter()
        .enumerate()
        .map(|(i, c)| u64::from(outcomes[c]) << i)
        .sum()
}

/// Simulates the pipeline and decodes every surviving branch.
pub fn run_pipeline(red: &ReducedInstance, mode: TableMode) -> Result<(Vec<DlpBranch>, f64)> {
    let p = red.inst.p;
    let (circuit, s_bits, v_bits) = build_pipeline(red, mode)?;
    let run = run_branches_with::<SparseState>(&normalize_to_gadget_form(&circuit), &[])?;
    let mut out = Vec::with_capacity(run.branches.len());
    for br in &run.branches {
        let (s, v) = (read(&s_bits, &br.outcomes), read(&v_bits, &br.outcomes));
        if s == 0 || s >= p || v >= p {
            return Err(Error::Invariant(format!(
                "branch with s={s}, v={v} survived with probability {}",
                br.probability
            )));
        }
        let s_inv = inv_mod(s, p).ok_or(Error::Invariant(format!("gcd({s}, {p}) != 1")))?;
        let l = mul_mod(v, s_inv, p);
        out.push(DlpBranch {
            s,
            v,
            probability: br.probability,
            l_q: crt_combine(l, red.parity_bit, p),
        });
    }
    Ok((out, run.pruned_probability))
}

/// Discrete logarithm of `x_q` to base `g_q`, in `0..q-1`.
pub fn solve_dlp(
    inst: &SafePrimeInstance,
    x_q: u64,
    seed: u64,
    mode: SolveMode,
) -> Result<DlpOutcome> {
    let red = reduce_input(inst, x_q)?;
    let (branches, pruned) = run_pipeline(&red, TableMode::Folded)?;
    let first = branches
        .first()
        .ok_or(Error::Invariant("no branch survived".into()))?;
    let l_q = match mode {
        SolveMode::AllBranches => {
            if let Some(bad) = branches.iter().find(|b| b.l_q != first.l_q) {
                return Err(Error::Invariant(format!(
                    "branches disagree: s={} gives {}, s={} gives {}",
                    first.s, first.l_q, bad.s, bad.l_q
                )));
            }
            first.l_q
        }
        SolveMode::Sample => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let total: f64 = branches.iter().map(|b| b.probability).sum();
            let mut u = rng.random::<f64>() * total;
            let mut pick = branches.last().expect("nonempty");
            for b in &branches {
                if u < b.probability {
                    pick = b;
                    break;
                }
                u -= b.probability;
            }
            pick.l_q
        }
    };
    if pow_mod(inst.g_q, l_q, inst.q) != x_q {
        return Err(Error::Invariant(format!(
            "g_q^{l_q} != {x_q} mod {}",
            inst.q
        )));
    }
    Ok(DlpOutcome {
        l_q,
        branches,
        pruned_probability: pruned,
    })
}

/// `|chi^s> = sum_r omega_p^{s r} |g^r mod q> / sqrt p` as `(z, amplitude)`.
pub fn chi_state(red: &ReducedInstance, s: u64) -> Vec<(u64, Complex64)> {
    let (p, q) = (red.inst.p, red.inst.q);
    (0..p)
        .map(|r| {
            let angle = 2.0 * PI * ((s * r) % p) as f64 / p as f64;
            (
                pow_mod(red.g, r, q),
                Complex64::from_polar(1.0 / (p as f64).sqrt(), angle),
            )
        })
        .collect()
}

/// `sum_{s >= 1} |s>|chi^s>|1> / sqrt(p-1)` on the pipeline layout.
pub fn q1_target(red: &ReducedInstance, width: usize) -> SparseState {
    let lay = DlpLayout::new(&red.inst, TableMode::Folded);
    let norm = 1.0 / ((red.inst.p - 1) as f64).sqrt();
    let mut terms = Vec::new();
    for s in 1..red.inst.p {
        for (z, a) in chi_state(red, s) {
            let mut label = BasisLabel::zeros(width);
            label.write(&lay.r, s);
            label.write(&lay.z, z);
            label.set(lay.anc, true);
            terms.push((label, a * norm));
        }
    }
    SparseState::from_terms(width, terms)
}

/// `|<target|Q1 0>|^2`.
pub fn q1_fidelity(red: &ReducedInstance) -> Result<f64> {
    let c = build_q1(red, TableMode::Folded)?;
    let out = run_unitary(&normalize_to_gadget_form(&c), &[])?;
    Ok(inner_product(&q1_target(red, c.qubit_count), &out).norm_sqr())
}

fn mass_where(state: &SparseState, pred: impl Fn(&BasisLabel) -> bool) -> f64 {
    state
        .terms()
        .filter(|(l, _)| pred(l))
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Squared norm of the `s >= 1` component after `A'`; equals `1 - 1/p`.
pub fn a_prime_good_norm(red: &ReducedInstance) -> Result<f64> {
    let lay = DlpLayout::new(&red.inst, TableMode::Folded);
    let state = run_unitary(&build_a_prime(red)?, &[])?;
    Ok(mass_where(&state, |l| l.read(&lay.r) != 0))
}

/// Squared norm of the good component `s >= 1`, ancilla 1, after `A`; equals 1/2.
pub fn a_good_norm(red: &ReducedInstance) -> Result<f64> {
    let lay = DlpLayout::new(&red.inst, TableMode::Folded);
    let state = run_unitary(&build_algorithm_a(red)?, &[])?;
    Ok(mass_where(&state, |l| {
        l.read(&lay.r) != 0 && l.get(lay.anc)
    }))
}
