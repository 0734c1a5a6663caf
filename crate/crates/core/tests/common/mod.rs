#![allow(dead_code)]

use codesig::combinatorics::next_combination;
use codesig::f2::{BitMatrix, BitVector};

/// Every weight-`w` word `e` with `H eᵀ = s`, by exhaustive enumeration.
pub fn brute_force_solutions(h: &BitMatrix, s: &BitVector, w: usize) -> Vec<BitVector> {
    let n = h.cols();
    let mut out = Vec::new();
    if w > n {
        return out;
    }
    let mut comb: Vec<usize> = (0..w).collect();
    loop {
        let e = BitVector::from_support(n, &comb).unwrap();
        if &h.mul_vec(&e).unwrap() == s {
            out.push(e);
        }
        if !next_combination(&mut comb, n) {
            return out;
        }
    }
}

pub fn is_solution(h: &BitMatrix, s: &BitVector, e: &BitVector, w: usize) -> bool {
    e.len() == h.cols() && e.weight() == w && &h.mul_vec(e).unwrap() == s
}
