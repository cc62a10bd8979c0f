use std::fmt;

use smallvec::SmallVec;

/// Computational-basis label of arbitrary width; bit `q` is qubit `q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BasisLabel {
    words: SmallVec<[u64; 4]>,
}

impl BasisLabel {
    pub fn zeros(width: usize) -> Self {
        BasisLabel {
            words: SmallVec::from_elem(0, width.div_ceil(64).max(1)),
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut l = Self::zeros(bits.len());
        for (q, &b) in bits.iter().enumerate() {
            if b {
                l.flip(q);
            }
        }
        l
    }

    #[inline]
    pub fn get(&self, q: usize) -> bool {
        (self.words[q >> 6] >> (q & 63)) & 1 == 1
    }

    #[inline]
    pub fn flip(&mut self, q: usize) {
        self.words[q >> 6] ^= 1 << (q & 63);
    }

    #[inline]
    pub fn set(&mut self, q: usize, b: bool) {
        if self.get(q) != b {
            self.flip(q);
        }
    }

    /// Little-endian value of the listed qubits (first listed is bit 0).
    pub fn read(&self, qubits: &[usize]) -> u64 {
        qubits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &q)| acc | (u64::from(self.get(q)) << i))
    }

    pub fn write(&mut self, qubits: &[usize], value: u64) {
        for (i, &q) in qubits.iter().enumerate() {
            self.set(q, (value >> i) & 1 == 1);
        }
    }

    /// `'0'`/`'1'` per listed qubit, in list order.
    pub fn bit_string(&self, qubits: &[usize]) -> String {
        qubits
            .iter()
            .map(|&q| if self.get(q) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.words.len() * 64;
        let top = (0..width).rev().find(|&q| self.get(q)).map_or(1, |q| q + 1);
        let s: String = (0..top)
            .map(|q| if self.get(q) { '1' } else { '0' })
            .collect();
        write!(f, "|{s}>")
    }
}
