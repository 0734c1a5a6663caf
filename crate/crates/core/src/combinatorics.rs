//! Binomial coefficients and constant-weight word ranking.
//!
//! Weight-`w` words of length `n` are identified with their sorted supports
//! and ordered lexicographically, so rank 0 is `{0, 1, ..., w-1}`.

use statrs::function::factorial::ln_binomial;

use crate::f2::BitVector;
use crate::{Error, Result};

/// Exact `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `log2 C(n, k)`; `-inf` when `k > n`.
pub fn log2_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if let Some(exact) = binomial(n, k).filter(|&b| b < 1 << 52) {
        return (exact as f64).log2();
    }
    ln_binomial(n, k) / std::f64::consts::LN_2
}

/// Advances `comb` (strictly increasing indices below `n`) to its
/// lexicographic successor. Returns `false` after the last combination.
pub fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The `index`-th weight-`w` support of length `n` in lexicographic order.
pub fn unrank_combination(n: usize, w: usize, mut index: u128) -> Result<Vec<usize>> {
    let total = binomial(n as u64, w as u64)
        .ok_or_else(|| Error::Domain(format!("C({n},{w}) overflows u128")))?;
    if index >= total {
        return Err(Error::Domain(format!(
            "rank {index} outside C({n},{w}) = {total}"
        )));
    }
    let mut out = Vec::with_capacity(w);
    let mut next = 0usize;
    for remaining in (1..=w).rev() {
        loop {
            // Words whose current position is `next`.
            let with_next =
                binomial((n - next - 1) as u64, (remaining - 1) as u64).expect("bounded by total");
            if index < with_next {
                out.push(next);
                next += 1;
                break;
            }
            index -= with_next;
            next += 1;
        }
    }
    Ok(out)
}

/// Inverse of [`unrank_combination`].
pub fn rank_combination(n: usize, support: &[usize]) -> Result<u128> {
    let w = support.len();
    let mut rank = 0u128;
    let mut prev = 0usize;
    for (pos, &c) in support.iter().enumerate() {
        if c >= n || (pos > 0 && c < prev) {
            return Err(Error::Domain(format!(
                "{support:?} is not a sorted support below {n}"
            )));
        }
        let remaining = w - pos;
        for skipped in prev..c {
            rank += binomial((n - skipped - 1) as u64, (remaining - 1) as u64)
                .ok_or_else(|| Error::Domain("rank overflows u128".into()))?;
        }
        prev = c + 1;
    }
    Ok(rank)
}

/// Weight-`w` word of length `n` with the given lexicographic rank.
pub fn unrank_word(n: usize, w: usize, index: u128) -> Result<BitVector> {
    BitVector::from_support(n, &unrank_combination(n, w, index)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 1), Some(4));
        assert_eq!(binomial(24, 8), Some(735_471));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
        assert!((log2_binomial(24, 8) - 735_471f64.log2()).abs() < 1e-12);
        let big = log2_binomial(13976, 2668);
        assert!(big > 9000.0 && big < 13976.0);
    }

    #[test]
    fn enumeration_order_matches_unranking() {
        let (n, w) = (9, 4);
        let mut comb: Vec<usize> = (0..w).collect();
        let mut idx = 0u128;
        loop {
            assert_eq!(unrank_combination(n, w, idx).unwrap(), comb);
            assert_eq!(rank_combination(n, &comb).unwrap(), idx);
            idx += 1;
            if !next_combination(&mut comb, n) {
                break;
            }
        }
        assert_eq!(idx, binomial(9, 4).unwrap());
        assert!(unrank_combination(n, w, idx).is_err());
    }

    #[test]
    fn empty_weight() {
        assert_eq!(unrank_combination(5, 0, 0).unwrap(), Vec::<usize>::new());
        let mut c: Vec<usize> = vec![];
        assert!(!next_combination(&mut c, 5));
    }

    proptest! {
        #[test]
        fn rank_unrank_round_trip(n in 1usize..60, wseed in any::<usize>(), iseed in any::<u128>()) {
            let w = wseed % (n + 1);
            let total = binomial(n as u64, w as u64).unwrap();
            let idx = iseed % total;
            let word = unrank_word(n, w, idx).unwrap();
            prop_assert_eq!(word.weight(), w);
            prop_assert_eq!(rank_combination(n, &word.support()).unwrap(), idx);
        }
    }
}
