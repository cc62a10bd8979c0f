//! Seeded random circuits over the whole gate set.

#![allow(dead_code)]

use std::f64::consts::PI;

use constdepth::sim::{
    coherent_run, coherent_run_with, run_branches_with, run_unitary, run_unitary_with,
    states_equal_up_to_global_phase, DenseState, QuantumState, SparseState,
};
use constdepth::{Circuit, CircuitBuilder, Gate, OracleAction, OracleSpec, PhaseAngle};
use num_complex::Complex64;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

pub const TOL: f64 = 1e-9;

fn angle<R: Rng>(rng: &mut R) -> PhaseAngle {
    let k = rng.random_range(0..5u32);
    PhaseAngle::dyadic(rng.random_range(-(1i64 << k)..(1i64 << k)), k)
}

fn pick<R: Rng>(rng: &mut R, live: &[usize], count: usize) -> Vec<usize> {
    live.choose_multiple(rng, count).copied().collect()
}

fn random_oracle<R: Rng>(rng: &mut R, arity: usize, id: usize) -> OracleSpec {
    let dim = 1usize << arity;
    let action = match rng.random_range(0..3) {
        0 => {
            let mut perm: Vec<u64> = (0..dim as u64).collect();
            perm.shuffle(rng);
            OracleAction::Permutation(perm)
        }
        1 => OracleAction::Diagonal(
            (0..dim)
                .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI)))
                .collect(),
        ),
        _ => {
            // U(theta, phi, lambda) on the lowest qubit of the register.
            let (t, p, l) = (
                rng.random_range(0.0..PI),
                rng.random_range(0.0..2.0 * PI),
                rng.random_range(0.0..2.0 * PI),
            );
            let u = [
                Complex64::new(t.cos(), 0.0),
                -Complex64::from_polar(t.sin(), l),
                Complex64::from_polar(t.sin(), p),
                Complex64::from_polar(t.cos(), p + l),
            ];
            let mut matrix = vec![Complex64::default(); dim * dim];
            for rest in 0..dim / 2 {
                for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    matrix[(2 * rest + r) * dim + 2 * rest + c] = u[2 * r + c];
                }
            }
            OracleAction::Unitary { dim, matrix }
        }
    };
    OracleSpec::new(format!("rand{id}"), vec![], action)
}

/// A circuit on `width` input qubits with `gates` gates. At most
/// `max_measurements` qubits are measured; a measured qubit is never touched
/// again, and later gates may be conditioned on its bit.
pub fn random_circuit<R: Rng>(
    rng: &mut R,
    width: usize,
    gates: usize,
    max_measurements: usize,
) -> Circuit {
    let mut b = CircuitBuilder::new();
    let mut live = b.inputs(width);
    let mut cbits = Vec::new();
    for id in 0..gates {
        if live.is_empty() {
            break;
        }
        let choice = rng.random_range(0..9);
        let gate = match choice {
            0 => Gate::h(pick(rng, &live, 1)[0]),
            1 => Gate::not({
                let k = rng.random_range(1..=3.min(live.len()));
                pick(rng, &live, k)
            }),
            2 => Gate::phase(pick(rng, &live, 1)[0], angle(rng)),
            3 if live.len() >= 2 => {
                let q = pick(rng, &live, 2);
                Gate::cphase(q[0], q[1], angle(rng))
            }
            4 if live.len() >= 2 => {
                let q = {
                    let k = rng.random_range(2..=4.min(live.len()));
                    pick(rng, &live, k)
                };
                Gate::fanout(q[0], q[1..].to_vec())
            }
            5 if live.len() >= 2 => {
                let q = {
                    let k = rng.random_range(2..=4.min(live.len()));
                    pick(rng, &live, k)
                };
                Gate::parity(q[1..].to_vec(), q[0])
            }
            6 => {
                let q = {
                    let k = rng.random_range(1..=3.min(live.len()));
                    pick(rng, &live, k)
                };
                Gate::oracle(random_oracle(rng, q.len(), id), q)
            }
            7 if cbits.len() < max_measurements && live.len() >= 2 => {
                let q = pick(rng, &live, 1)[0];
                live.retain(|&x| x != q);
                cbits.push(b.measure_a(q, angle(rng)));
                continue;
            }
            _ => Gate::h(pick(rng, &live, 1)[0]),
        };
        match cbits.as_slice() {
            [] => b.add(gate),
            cs if rng.random_bool(0.3) => b.add(gate.when(cs[rng.random_range(0..cs.len())])),
            _ => b.add(gate),
        }
    }
    b.finish()
}

pub fn random_input<R: Rng>(rng: &mut R, width: usize) -> Vec<bool> {
    (0..width).map(|_| rng.random_bool(0.5)).collect()
}

/// Dense and sparse simulation agree: unitary runs up to global phase, and
/// for measured circuits every branch (outcomes, probability, state) plus the
/// coherent run.
pub fn dense_matches_sparse(c: &Circuit, input: &[bool]) -> Result<(), String> {
    let err = |e: constdepth::Error| e.to_string();
    if !c.has_measurements() {
        let sparse = run_unitary(c, input).map_err(err)?;
        let dense = run_unitary_with::<DenseState>(c, input)
            .map_err(err)?
            .to_sparse();
        return if states_equal_up_to_global_phase(&sparse, &dense, TOL) {
            Ok(())
        } else {
            Err("unitary run differs".into())
        };
    }
    let s = run_branches_with::<SparseState>(c, input).map_err(err)?;
    let d = run_branches_with::<DenseState>(c, input).map_err(err)?;
    if s.branches.len() != d.branches.len() {
        return Err(format!(
            "{} sparse branches vs {} dense",
            s.branches.len(),
            d.branches.len()
        ));
    }
    for (x, y) in s.branches.iter().zip(&d.branches) {
        if x.outcomes != y.outcomes || (x.probability - y.probability).abs() > TOL {
            return Err(format!("branch {:?} differs", x.outcomes));
        }
        if !states_equal_up_to_global_phase(&x.final_state, &y.final_state, TOL) {
            return Err(format!("branch {:?} state differs", x.outcomes));
        }
    }
    let sparse = coherent_run(c, input).map_err(err)?;
    let dense = coherent_run_with::<DenseState>(c, input)
        .map_err(err)?
        .to_sparse();
    if !states_equal_up_to_global_phase(&sparse, &dense, TOL) {
        return Err("coherent run differs".into());
    }
    Ok(())
}
