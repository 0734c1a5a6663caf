//! Hash oracles.
//!
//! `H` maps byte strings to syndromes in `F_2^{n-k}`; `J` maps them to a flag
//! bit plus a weight-`w` word. Both have a SHAKE-256 instantiation with a
//! one-byte domain-separation prefix (`0x01` for `H`, `0x02` for `J`). Output
//! bits are read most significant bit first within each byte.

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::combinatorics::{binomial, unrank_word};
use crate::f2::BitVector;

pub const H_DOMAIN: u8 = 0x01;
pub const J_DOMAIN: u8 = 0x02;

/// A (possibly stateful) function from byte strings to syndromes.
pub trait SyndromeOracle {
    fn output_bits(&self) -> usize;
    fn query(&mut self, input: &[u8]) -> BitVector;
}

impl<T: SyndromeOracle + ?Sized> SyndromeOracle for &mut T {
    fn output_bits(&self) -> usize {
        (**self).output_bits()
    }
    fn query(&mut self, input: &[u8]) -> BitVector {
        (**self).query(input)
    }
}

/// Output of `J`: a flag bit and a weight-`w` error.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlaggedError {
    pub flag: bool,
    pub error: BitVector,
}

/// A function into `F_2 × S_w`.
pub trait ReprogrammingOracle {
    fn length(&self) -> usize;
    fn weight(&self) -> usize;
    fn query(&mut self, input: &[u8]) -> FlaggedError;
}

/// The message/salt encoding used by every oracle: `m | r`.
pub fn salted_input(message: &[u8], salt: &[u8]) -> Vec<u8> {
    let mut v = Vec::with_capacity(message.len() + salt.len());
    v.extend_from_slice(message);
    v.extend_from_slice(salt);
    v
}

fn shake_reader(domain: u8, input: &[u8]) -> impl XofReader {
    let mut h = Shake256::default();
    h.update(&[domain]);
    h.update(input);
    h.finalize_xof()
}

/// SHAKE-256 truncated to `bits` output bits.
#[derive(Clone, Copy, Debug)]
pub struct ShakeSyndromeOracle {
    bits: usize,
}

impl ShakeSyndromeOracle {
    pub fn new(bits: usize) -> Self {
        Self { bits }
    }

    pub fn digest(&self, input: &[u8]) -> BitVector {
        let mut bytes = vec![0u8; self.bits.div_ceil(8)];
        shake_reader(H_DOMAIN, input).read(&mut bytes);
        if !self.bits.is_multiple_of(8) {
            let last = bytes.len() - 1;
            bytes[last] &= 0xffu8 << (8 - self.bits % 8);
        }
        BitVector::from_bytes(self.bits, &bytes).expect("padding cleared")
    }
}

impl SyndromeOracle for ShakeSyndromeOracle {
    fn output_bits(&self) -> usize {
        self.bits
    }
    fn query(&mut self, input: &[u8]) -> BitVector {
        self.digest(input)
    }
}

/// SHAKE-256 instantiation of `J`. The flag is the first output bit; the
/// error is the constant-weight word whose lexicographic rank is the next
/// 128 output bits reduced mod `C(n, w)`. With `exact` set, 128-bit chunks
/// falling in the final partial block are rejected and the next chunk is
/// read, which makes the rank exactly uniform.
#[derive(Clone, Copy, Debug)]
pub struct ShakeReprogrammingOracle {
    n: usize,
    w: usize,
    words: u128,
    exact: bool,
}

impl ShakeReprogrammingOracle {
    pub fn new(n: usize, w: usize, exact: bool) -> Self {
        let words = binomial(n as u64, w as u64)
            .filter(|&c| c > 0)
            .expect("C(n, w) must fit in 128 bits");
        Self { n, w, words, exact }
    }

    /// Upper bound on the distance of the reduced rank from uniform when
    /// `exact` is off: `C(n, w) / 2^128`.
    pub fn bias_bound(&self) -> f64 {
        if self.exact {
            0.0
        } else {
            self.words as f64 / 2f64.powi(128)
        }
    }
}

impl ReprogrammingOracle for ShakeReprogrammingOracle {
    fn length(&self) -> usize {
        self.n
    }
    fn weight(&self) -> usize {
        self.w
    }
    fn query(&mut self, input: &[u8]) -> FlaggedError {
        let mut reader = shake_reader(J_DOMAIN, input);
        let mut first = [0u8; 1];
        reader.read(&mut first);
        let flag = first[0] & 0x80 != 0;
        let limit = (u128::MAX / self.words) * self.words;
        let rank = loop {
            let mut chunk = [0u8; 16];
            reader.read(&mut chunk);
            let v = u128::from_be_bytes(chunk);
            if !self.exact || v < limit {
                break v % self.words;
            }
        };
        FlaggedError {
            flag,
            error: unrank_word(self.n, self.w, rank).expect("rank reduced mod C(n, w)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shake_syndrome_is_deterministic_and_truncated() {
        let mut h = ShakeSyndromeOracle::new(13);
        let a = h.query(b"message");
        assert_eq!(a, h.query(b"message"));
        assert_eq!(a.len(), 13);
        assert_ne!(a, h.query(b"messagf"));
        // The 13-bit output is a prefix of the 16-bit output.
        let wide = ShakeSyndromeOracle::new(16).digest(b"message");
        assert_eq!(wide.slice(0, 13), a);
    }

    #[test]
    fn domains_are_separated() {
        let mut reader = shake_reader(J_DOMAIN, b"x");
        let mut bytes = [0u8; 4];
        reader.read(&mut bytes);
        let j_bits = BitVector::from_bytes(32, &bytes).unwrap();
        assert_ne!(j_bits, ShakeSyndromeOracle::new(32).digest(b"x"));
    }

    #[test]
    fn reprogramming_outputs_have_weight() {
        for exact in [false, true] {
            let mut j = ShakeReprogrammingOracle::new(20, 5, exact);
            let mut flags = 0;
            for i in 0..400u32 {
                let out = j.query(&i.to_le_bytes());
                assert_eq!(out.error.weight(), 5);
                assert_eq!(out.error.len(), 20);
                flags += out.flag as u32;
            }
            assert!((150..250).contains(&flags), "flag count {flags}");
        }
        assert!(ShakeReprogrammingOracle::new(20, 5, false).bias_bound() < 1e-30);
    }

    #[test]
    fn salted_input_concatenates() {
        assert_eq!(salted_input(b"ab", &[1, 2]), vec![b'a', b'b', 1, 2]);
    }
}
