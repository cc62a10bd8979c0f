use serde::{Deserialize, Serialize};

use super::arith::{ceil_log2, inv_mod, is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// A safe prime `q = 2p + 1` with a generator of `(Z/qZ)*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SafePrimeInstance {
    pub q: u64,
    pub p: u64,
    pub g_q: u64,
    /// `ceil(log2 q)`, width of group-element registers.
    pub n: usize,
    /// `ceil(log2 p)`, width of exponent registers.
    pub m: usize,
}

fn is_generator(g: u64, q: u64, p: u64) -> bool {
    !g.is_multiple_of(q)
        && [2, p, 2 * p]
            .iter()
            .all(|&d| d == q - 1 || pow_mod(g, d, q) != 1)
}

/// Validates `q` as a safe prime above 5 and picks the smallest generator
/// when `g_q` is absent.
pub fn make_instance(q: u64, g_q: Option<u64>) -> Result<SafePrimeInstance> {
    if q <= 5 || !is_prime(q) || !is_prime((q - 1) / 2) {
        return Err(Error::NotSafePrime(q));
    }
    let p = (q - 1) / 2;
    let g_q = match g_q {
        Some(g) if is_generator(g, q, p) => g,
        Some(g) => return Err(Error::NotGenerator { g, q }),
        None => (2..q)
            .find(|&g| is_generator(g, q, p))
            .expect("a cyclic group has a generator"),
    };
    Ok(SafePrimeInstance {
        q,
        p,
        g_q,
        n: ceil_log2(q),
        m: ceil_log2(p),
    })
}

/// The order-`p` subproblem plus the classically solved order-2 part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedInstance {
    pub inst: SafePrimeInstance,
    pub x_q: u64,
    /// `g_q^2`, of order `p`.
    pub g: u64,
    /// `x_q^2 = g^l`.
    pub x: u64,
    /// `l_q mod 2`.
    pub parity_bit: u8,
    /// `g^{2^j}`, `x^{2^j}`, `(x^{-1})^{2^j}` for `j < m`.
    pub powers_g: Vec<u64>,
    pub powers_x: Vec<u64>,
    pub powers_xinv: Vec<u64>,
}

fn squarings(base: u64, count: usize, q: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(count);
    let mut acc = base % q;
    for _ in 0..count {
        v.push(acc);
        acc = mul_mod(acc, acc, q);
    }
    v
}

pub fn reduce_input(inst: &SafePrimeInstance, x_q: u64) -> Result<ReducedInstance> {
    let q = inst.q;
    if x_q == 0 || x_q >= q {
        return Err(Error::NotUnit { x: x_q, q });
    }
    let g = mul_mod(inst.g_q, inst.g_q, q);
    let x = mul_mod(x_q, x_q, q);
    let xinv = inv_mod(x, q).ok_or(Error::NotUnit { x, q })?;
    let red = ReducedInstance {
        inst: *inst,
        x_q,
        g,
        x,
        parity_bit: u8::from(pow_mod(x_q, inst.p, q) != 1),
        powers_g: squarings(g, inst.m, q),
        powers_x: squarings(x, inst.m, q),
        powers_xinv: squarings(xinv, inst.m, q),
    };
    for (j, ((&a, &b), &c)) in red
        .powers_g
        .iter()
        .zip(&red.powers_x)
        .zip(&red.powers_xinv)
        .enumerate()
    {
        let e = 1u64 << j;
        if a != pow_mod(g, e, q) || b != pow_mod(x, e, q) || c != pow_mod(xinv, e, q) {
            return Err(Error::Invariant(format!(
                "power table entry {j} disagrees with direct exponentiation"
            )));
        }
    }
    if pow_mod(g, inst.p, q) != 1 {
        return Err(Error::Invariant("g does not have order p".into()));
    }
    Ok(red)
}

/// `l_q mod 2p` from `l mod p` and `l_q mod 2`.
pub fn crt_combine(l_mod_p: u64, parity: u8, p: u64) -> u64 {
    if l_mod_p % 2 == u64::from(parity) {
        l_mod_p
    } else {
        l_mod_p + p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances() {
        let i = make_instance(11, None).unwrap();
        assert_eq!((i.p, i.n, i.m, i.g_q), (5, 4, 3, 2));
        assert_eq!(make_instance(23, None).unwrap().g_q, 5);
        assert_eq!(make_instance(7, None).unwrap().g_q, 3);
        assert_eq!(make_instance(9, None), Err(Error::NotSafePrime(9)));
        assert_eq!(make_instance(13, None), Err(Error::NotSafePrime(13)));
        assert_eq!(
            make_instance(11, Some(3)),
            Err(Error::NotGenerator { g: 3, q: 11 })
        );
        let json = serde_json::to_string(&i).unwrap();
        assert_eq!(json, r#"{"q":11,"p":5,"g_q":2,"n":4,"m":3}"#);
    }

    #[test]
    fn reductions() {
        let r = reduce_input(&make_instance(11, Some(2)).unwrap(), 7).unwrap();
        assert_eq!((r.g, r.x, r.parity_bit), (4, 5, 1));
        let r = reduce_input(&make_instance(11, Some(2)).unwrap(), 1).unwrap();
        assert_eq!((r.x, r.parity_bit), (1, 0));
        let r = reduce_input(&make_instance(23, Some(5)).unwrap(), 10).unwrap();
        assert_eq!((r.g, r.x, r.parity_bit), (2, 8, 1));
        assert!(reduce_input(&make_instance(7, None).unwrap(), 0).is_err());
        assert_eq!(crt_combine(2, 1, 5), 7);
        assert_eq!(crt_combine(2, 0, 5), 2);
    }
}
