//! Modular arithmetic at desk scale.

pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `q` by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, q: u64) -> Option<u64> {
    let (mut r0, mut r1) = (q as i128, (a % q) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(q as i128) as u64)
}

/// Trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `ceil(log2 v)` for `v >= 1`.
pub fn ceil_log2(v: u64) -> usize {
    (u64::BITS - (v - 1).leading_zeros()) as usize
}

/// Smallest `l` with `g^l = x (mod q)`, by enumeration.
pub fn brute_force_dlog(g: u64, x: u64, q: u64) -> Option<u64> {
    let mut acc = 1 % q;
    for l in 0..q {
        if acc == x % q {
            return Some(l);
        }
        acc = mul_mod(acc, g, q);
    }
    None
}
