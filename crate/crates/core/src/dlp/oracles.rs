//! Oracle-level arithmetic and transforms for the discrete-log pipeline.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::arith::{ceil_log2, mul_mod, pow_mod};
use super::instance::{ReducedInstance, SafePrimeInstance};
use crate::error::{Error, Result};
use crate::oracle::{OracleAction, OracleSpec};

/// Arithmetic oracle kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithmeticKind {
    /// `|r>|z> -> |r>|z g^r mod q>` on `m + n` qubits.
    ModexpG,
    /// `|y>|a> -> |y x^{-a} mod q>|a>` on `n + m` qubits.
    Dx,
}

/// Largest table size for the precomputed-register variant.
const MAX_TABLE_ORACLE_QUBITS: usize = 20;

/// `F_p` (or its inverse) on `ceil(log2 p)` qubits, identity on `|v>` with `v >= p`.
pub fn build_fourier_oracle(p: u64, inverse: bool) -> Result<OracleSpec> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "F_p needs an odd prime, got {p}"
        )));
    }
    let m = ceil_log2(p);
    let dim = 1usize << m;
    let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
    let sign = if inverse { -1.0 } else { 1.0 };
    let norm = 1.0 / (p as f64).sqrt();
    for u in 0..dim {
        for v in 0..dim {
            matrix[u * dim + v] = if (u as u64) < p && (v as u64) < p {
                let k = (u as u64 * v as u64) % p;
                Complex64::from_polar(norm, sign * 2.0 * PI * k as f64 / p as f64)
            } else if u == v {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
    }
    let name = if inverse {
        "fourier_p_inv"
    } else {
        "fourier_p"
    };
    Ok(OracleSpec::new(
        name,
        vec![p as i64],
        OracleAction::Unitary { dim, matrix },
    ))
}

/// Rotation taking `|0>` to `(sqrt(p-2)|0> + sqrt p |1>)/sqrt(2(p-1))`.
pub fn build_amplitude_split(p: u64) -> OracleSpec {
    let norm = (2.0 * (p as f64 - 1.0)).sqrt();
    let a = (p as f64 - 2.0).sqrt() / norm;
    let b = (p as f64).sqrt() / norm;
    let c = |v: f64| Complex64::new(v, 0.0);
    OracleSpec::new(
        "amplitude_split",
        vec![p as i64],
        OracleAction::Unitary {
            dim: 2,
            matrix: vec![c(a), c(-b), c(b), c(a)],
        },
    )
}

fn is_unit(z: u64, q: u64) -> bool {
    z != 0 && z < q
}

pub fn build_arithmetic_oracle(kind: ArithmeticKind, red: &ReducedInstance) -> Result<OracleSpec> {
    let SafePrimeInstance { q, p, n, m, .. } = red.inst;
    let mut perm = vec![0u64; 1 << (m + n)];
    let spec = match kind {
        ArithmeticKind::ModexpG => {
            for (v, slot) in perm.iter_mut().enumerate() {
                let (r, z) = (v as u64 & ((1 << m) - 1), v as u64 >> m);
                let z2 = if is_unit(z, q) {
                    mul_mod(z, pow_mod(red.g, r, q), q)
                } else {
                    z
                };
                *slot = r | (z2 << m);
            }
            ("modexp_g", vec![q as i64, red.g as i64])
        }
        ArithmeticKind::Dx => {
            let xinv = super::arith::inv_mod(red.x, q).ok_or(Error::NotUnit { x: red.x, q })?;
            for (v, slot) in perm.iter_mut().enumerate() {
                let (y, a) = (v as u64 & ((1 << n) - 1), v as u64 >> n);
                let y2 = if is_unit(y, q) && a < p {
                    mul_mod(y, pow_mod(xinv, a, q), q)
                } else {
                    y
                };
                *slot = y2 | (a << n);
            }
            ("d_x", vec![q as i64, red.x as i64])
        }
    };
    let action = OracleAction::Permutation(perm);
    if !action.is_bijection() {
        return Err(Error::Invariant(format!("{} is not a bijection", spec.0)));
    }
    Ok(OracleSpec::new(spec.0, spec.1, action))
}

/// Modexp reading its multipliers from `m` table registers of `n` qubits:
/// `|r>|z>|T> -> |r>|z prod_{r_j = 1} T_j mod q>|T>`, identity when any
/// selected entry or `z` is not a unit. Only small instances fit.
pub fn build_modexp_table_oracle(inst: &SafePrimeInstance) -> Result<OracleSpec> {
    let SafePrimeInstance { q, n, m, .. } = *inst;
    let width = m + n + m * n;
    if width > MAX_TABLE_ORACLE_QUBITS {
        return Err(Error::BoundExceeded(format!(
            "table modexp on {width} qubits exceeds {MAX_TABLE_ORACLE_QUBITS}"
        )));
    }
    let mask_n = (1u64 << n) - 1;
    let mut perm = vec![0u64; 1 << width];
    for (v, slot) in perm.iter_mut().enumerate() {
        let v = v as u64;
        let r = v & ((1 << m) - 1);
        let z = (v >> m) & mask_n;
        let table = v >> (m + n);
        let mut factor = Some(1u64);
        for j in 0..m {
            if (r >> j) & 1 == 1 {
                let t = (table >> (j * n)) & mask_n;
                factor = factor.filter(|_| is_unit(t, q)).map(|f| mul_mod(f, t, q));
            }
        }
        let z2 = match factor {
            Some(f) if is_unit(z, q) => mul_mod(z, f, q),
            _ => z,
        };
        *slot = (v & !(mask_n << m)) | (z2 << m);
    }
    let action = OracleAction::Permutation(perm);
    if !action.is_bijection() {
        return Err(Error::Invariant("table modexp is not a bijection".into()));
    }
    Ok(OracleSpec::new("modexp_table", vec![q as i64], action))
}

/// Iterated product of the table entries selected by the bits of `e`.
fn iterated(table: &[u64], e: u64, q: u64) -> u64 {
    table
        .iter()
        .enumerate()
        .filter(|(j, _)| (e >> j) & 1 == 1)
        .fold(1, |acc, (_, &t)| mul_mod(acc, t, q))
}

/// The six-step ancilla chain realizing `D_x` from the power tables, as a
/// classical map on `(y, a)`. Returns the final `(y', a)` after checking
/// that both ancilla registers and the erased input return to 0.
pub fn dx_chain(red: &ReducedInstance, y: u64, a: u64) -> Result<(u64, u64)> {
    let q = red.inst.q;
    let (mut y_reg, mut anc1, mut anc2) = (y, 0u64, 0u64);
    anc1 ^= iterated(&red.powers_xinv, a, q); // |x^{-a}>
    anc2 ^= mul_mod(y_reg, anc1, q); // |y x^{-a}>
    anc1 ^= iterated(&red.powers_xinv, a, q); // erase x^{-a}
    anc1 ^= iterated(&red.powers_x, a, q); // |x^a>
    y_reg ^= mul_mod(anc2, anc1, q); // erase y = (y x^{-a}) x^a
    anc1 ^= iterated(&red.powers_x, a, q); // erase x^a
    if y_reg != 0 || anc1 != 0 {
        return Err(Error::Invariant(format!(
            "ancilla chain left garbage for y={y}, a={a}"
        )));
    }
    Ok((anc2, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dlp::{make_instance, reduce_input};

    fn apply(action: &OracleAction, v: usize) -> Vec<Complex64> {
        match action {
            OracleAction::Unitary { dim, matrix } => {
                (0..*dim).map(|u| matrix[u * dim + v]).collect()
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn fourier_columns_and_inverse() {
        let f3 = build_fourier_oracle(3, false).unwrap();
        let col = apply(f3.action().unwrap(), 0);
        for amp in &col[..3] {
            assert!((amp - Complex64::new(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-12);
        }
        assert!(col[3].norm() < 1e-12);
        let f5 = build_fourier_oracle(5, false).unwrap();
        let act = f5.action().unwrap();
        assert!(act.unitarity_defect() < 1e-12);
        let omega = Complex64::from_polar(1.0, 2.0 * PI / 5.0);
        for x in 0..5 {
            let col = apply(act, x);
            for (y, amp) in col.iter().enumerate().take(5) {
                assert!((amp - omega.powu((x * y) as u32) / 5f64.sqrt()).norm() < 1e-12);
            }
        }
        let inv = build_fourier_oracle(5, true).unwrap();
        if let (OracleAction::Unitary { matrix: a, .. }, OracleAction::Unitary { matrix: b, .. }) =
            (inv.action().unwrap(), act.inverse())
        {
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-12));
        }
        assert!(build_fourier_oracle(4, false).is_err());
    }

    #[test]
    fn arithmetic_oracles() {
        let red = reduce_input(&make_instance(11, Some(2)).unwrap(), 7).unwrap();
        let me = build_arithmetic_oracle(ArithmeticKind::ModexpG, &red).unwrap();
        let OracleAction::Permutation(p) = me.action().unwrap() else {
            panic!()
        };
        let m = red.inst.m;
        assert_eq!(p[2 | (1 << m)], 2 | (5 << m));
        assert_eq!(p[3], 3, "z = 0 is fixed");
        assert!(
            build_amplitude_split(5)
                .action()
                .unwrap()
                .unitarity_defect()
                < 1e-12
        );
    }

    #[test]
    fn dx_chain_matches_oracle() {
        for q in [7u64, 11, 23] {
            let inst = make_instance(q, None).unwrap();
            for x_q in 1..q {
                let red = reduce_input(&inst, x_q).unwrap();
                let dx = build_arithmetic_oracle(ArithmeticKind::Dx, &red).unwrap();
                let OracleAction::Permutation(perm) = dx.action().unwrap() else {
                    panic!()
                };
                for y in 0..q {
                    for a in 0..inst.p {
                        let (y2, a2) = dx_chain(&red, y, a).unwrap();
                        assert_eq!(perm[(y | (a << inst.n)) as usize], y2 | (a2 << inst.n));
                    }
                }
            }
        }
    }

    #[test]
    fn table_oracle_bound() {
        assert!(build_modexp_table_oracle(&make_instance(7, None).unwrap()).is_ok());
        assert!(build_modexp_table_oracle(&make_instance(23, None).unwrap()).is_err());
    }
}
