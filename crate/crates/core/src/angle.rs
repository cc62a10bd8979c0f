use std::fmt;
use std::ops::{Add, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// An exact angle `pi * num / den`.
///
/// Angles are kept in lowest terms and reduced modulo two half-turns into
/// `(-1, 1]`, so two angles that yield the same phase compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhaseAngle {
    num: i64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl PhaseAngle {
    pub const ZERO: PhaseAngle = PhaseAngle { num: 0, den: 1 };
    pub const PI: PhaseAngle = PhaseAngle { num: 1, den: 1 };

    /// Builds `pi * num / den`. Panics when `den == 0`.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "phase angle denominator must be positive");
        let den_i = den as i128;
        // reduce into (-den, den]
        let mut n = (num as i128).rem_euclid(2 * den_i);
        if n > den_i {
            n -= 2 * den_i;
        }
        let g = gcd(n.unsigned_abs() as u64, den);
        let g = if g == 0 { 1 } else { g };
        PhaseAngle {
            num: (n / g as i128) as i64,
            den: den / g,
        }
    }

    /// `pi * num / 2^k`.
    pub fn dyadic(num: i64, k: u32) -> Self {
        Self::new(num, 1u64 << k)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn radians(&self) -> f64 {
        std::f64::consts::PI * self.num as f64 / self.den as f64
    }

    /// `exp(i * pi * num / den)`, exact on multiples of `pi / 2`.
    pub fn phase(&self) -> Complex64 {
        match (self.num, self.den) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 1) => Complex64::new(-1.0, 0.0),
            (1, 2) => Complex64::new(0.0, 1.0),
            (-1, 2) => Complex64::new(0.0, -1.0),
            _ => Complex64::from_polar(1.0, self.radians()),
        }
    }
}

impl Default for PhaseAngle {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Neg for PhaseAngle {
    type Output = PhaseAngle;
    fn neg(self) -> PhaseAngle {
        PhaseAngle::new(-self.num, self.den)
    }
}

impl Add for PhaseAngle {
    type Output = PhaseAngle;
    fn add(self, rhs: PhaseAngle) -> PhaseAngle {
        let g = gcd(self.den, rhs.den);
        let lcm = self.den / g * rhs.den;
        let a = self.num as i128 * (lcm / self.den) as i128;
        let b = rhs.num as i128 * (lcm / rhs.den) as i128;
        let sum = (a + b).rem_euclid(2 * lcm as i128);
        PhaseAngle::new(sum as i64, lcm)
    }
}

impl fmt::Display for PhaseAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}pi", self.num)
        } else {
            write!(f, "{}pi/{}", self.num, self.den)
        }
    }
}
