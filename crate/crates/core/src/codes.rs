//! Linear codes given by parity-check matrices, exact syndrome
//! distributions and statistical distance.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use crate::combinatorics::{binomial, next_combination, unrank_combination};
use crate::f2::{BitMatrix, BitVector};
use crate::{Error, Result};

/// An `[n, k]` code `{x : H xᵀ = 0}` with full-rank `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckCode {
    h: BitMatrix,
}

impl ParityCheckCode {
    pub fn new(h: BitMatrix) -> Result<Self> {
        let rank = h.rank();
        if rank != h.rows() {
            return Err(Error::RankDeficient {
                rank,
                expected: h.rows(),
            });
        }
        if h.rows() > h.cols() {
            return Err(Error::dim("parity-check shape", h.cols(), h.rows()));
        }
        Ok(Self { h })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Self {
        assert!(k <= n);
        Self {
            h: BitMatrix::random_full_rank(n - k, n, rng),
        }
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    pub fn into_parity_check(self) -> BitMatrix {
        self.h
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn k(&self) -> usize {
        self.h.cols() - self.h.rows()
    }

    pub fn syndrome(&self, e: &BitVector) -> Result<BitVector> {
        self.h.mul_vec(e)
    }

    pub fn contains(&self, c: &BitVector) -> Result<bool> {
        Ok(self.syndrome(c)?.is_zero())
    }

    /// A generator matrix: rows span the code.
    pub fn generator(&self) -> BitMatrix {
        self.h.kernel_basis()
    }

    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVector {
        let g = self.generator();
        g.vec_mul(&BitVector::random(g.rows(), rng))
            .expect("generator rows match")
    }
}

/// The `(U, U+V)` construction from two codes of length `n/2`.
#[derive(Clone, Debug)]
pub struct UuvCode {
    pub u: ParityCheckCode,
    pub v: ParityCheckCode,
    pub code: ParityCheckCode,
}

impl UuvCode {
    pub fn random<R: Rng + ?Sized>(half: usize, k_u: usize, k_v: usize, rng: &mut R) -> Self {
        let h_u = BitMatrix::random_full_rank(half - k_u, half, rng);
        let h_v = BitMatrix::random_full_rank(half - k_v, half, rng);
        uuv_parity_check(&h_u, &h_v).expect("full-rank halves with equal length")
    }

    /// `(u, u + v)`.
    pub fn codeword(&self, u: &BitVector, v: &BitVector) -> BitVector {
        u.concat(&u.xor(v))
    }
}

/// Parity check `[H_U | 0 ; H_V | H_V]` of `{(u, u+v) : u ∈ U, v ∈ V}`.
pub fn uuv_parity_check(h_u: &BitMatrix, h_v: &BitMatrix) -> Result<UuvCode> {
    if h_u.cols() != h_v.cols() {
        return Err(Error::dim("uuv half length", h_u.cols(), h_v.cols()));
    }
    let u = ParityCheckCode::new(h_u.clone())?;
    let v = ParityCheckCode::new(h_v.clone())?;
    let half = h_u.cols();
    let top = h_u.hstack(&BitMatrix::zeros(h_u.rows(), half))?;
    let bottom = h_v.hstack(h_v)?;
    let code = ParityCheckCode::new(top.vstack(&bottom)?)?;
    Ok(UuvCode { u, v, code })
}

/// A finite distribution over `width`-bit outcomes. Outcomes missing from
/// the map have mass zero.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDistribution {
    width: usize,
    mass: BTreeMap<u64, f64>,
}

impl DiscreteDistribution {
    pub fn from_masses(width: usize, mass: BTreeMap<u64, f64>) -> Result<Self> {
        if width > 64 {
            return Err(Error::Domain(format!("outcome width {width} above 64")));
        }
        let total: f64 = mass.values().sum();
        if mass.values().any(|&m| m < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "masses do not form a distribution (sum {total})"
            )));
        }
        Ok(Self { width, mass })
    }

    /// Normalizes integer counts. Division happens once per outcome.
    pub fn from_counts(width: usize, counts: &BTreeMap<u64, u128>) -> Result<Self> {
        let total: u128 = counts.values().sum();
        if total == 0 {
            return Err(Error::Domain("empty count table".into()));
        }
        let mass = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&x, &c)| (x, c as f64 / total as f64))
            .collect();
        Self::from_masses(width, mass)
    }

    pub fn point(width: usize, outcome: u64) -> Self {
        Self {
            width,
            mass: BTreeMap::from([(outcome, 1.0)]),
        }
    }

    /// Uniform over all `2^width` outcomes (explicit table; width ≤ 24).
    pub fn uniform(width: usize) -> Result<Self> {
        if width > 24 {
            return Err(Error::Budget(format!(
                "explicit uniform table over 2^{width}"
            )));
        }
        let p = 1.0 / (1u64 << width) as f64;
        Ok(Self {
            width,
            mass: (0..1u64 << width).map(|x| (x, p)).collect(),
        })
    }

    /// Uniform over the listed outcomes.
    pub fn uniform_over(width: usize, outcomes: &[u64]) -> Result<Self> {
        let counts: BTreeMap<u64, u128> = outcomes.iter().map(|&x| (x, 1)).collect();
        if counts.len() != outcomes.len() {
            return Err(Error::Domain("repeated outcomes".into()));
        }
        Self::from_counts(width, &counts)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn mass(&self, outcome: u64) -> f64 {
        self.mass.get(&outcome).copied().unwrap_or(0.0)
    }

    pub fn support_len(&self) -> usize {
        self.mass.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.mass.iter().map(|(&x, &p)| (x, p))
    }

    pub fn total(&self) -> f64 {
        self.mass.values().sum()
    }

    /// Joint distribution of independent draws; the outcome of `other`
    /// occupies the high bits.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let width = self.width + other.width;
        if width > 64 {
            return Err(Error::Domain(format!("product width {width} above 64")));
        }
        let mut mass = BTreeMap::new();
        for (&x, &p) in &self.mass {
            for (&y, &q) in &other.mass {
                mass.insert(x | y << self.width, p * q);
            }
        }
        Ok(Self { width, mass })
    }

    /// `ρ(D, U)` against the uniform distribution on `2^width` outcomes,
    /// without materializing the uniform table.
    pub fn distance_to_uniform(&self) -> f64 {
        let space = 2f64.powi(self.width as i32);
        let u = 1.0 / space;
        let listed: f64 = self.mass.values().map(|&p| (p - u).abs()).sum();
        let unlisted = (space - self.mass.len() as f64) * u;
        0.5 * (listed + unlisted)
    }

    /// One `hex probability` line per outcome with nonzero mass.
    pub fn to_text(&self) -> String {
        let bytes = self.width.div_ceil(8).max(1);
        let mut s = String::new();
        for (&x, &p) in &self.mass {
            let v = BitVector::from_u64(self.width, x);
            let hex = if self.width == 0 {
                "00".repeat(bytes)
            } else {
                v.to_hex()
            };
            s.push_str(&format!("{hex} {p:.16e}\n"));
        }
        s
    }
}

/// `ρ(D⁰, D¹) = ½ Σ |D⁰(x) − D¹(x)|`.
pub fn stat_distance(d0: &DiscreteDistribution, d1: &DiscreteDistribution) -> Result<f64> {
    if d0.width != d1.width {
        return Err(Error::Domain(format!(
            "outcome spaces differ: {} vs {} bits",
            d0.width, d1.width
        )));
    }
    let mut sum = 0.0;
    for (x, p) in d0.iter() {
        sum += (p - d1.mass(x)).abs();
    }
    for (x, q) in d1.iter() {
        if !d0.mass.contains_key(&x) {
            sum += q;
        }
    }
    Ok((0.5 * sum).clamp(0.0, 1.0))
}

/// `Σ ρ(D⁰ᵢ, D¹ᵢ)`, an upper bound on the distance between the products.
pub fn product_distance_bound(
    pairs: &[(DiscreteDistribution, DiscreteDistribution)],
) -> Result<f64> {
    pairs.iter().map(|(a, b)| stat_distance(a, b)).sum()
}

/// Size limits for exhaustive enumeration of `S_w`: the instance is accepted
/// when `n ≤ max_n` or `C(n, w) ≤ max_words`.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationGuard {
    pub max_n: usize,
    pub max_words: u128,
}

impl Default for EnumerationGuard {
    fn default() -> Self {
        Self {
            max_n: 30,
            max_words: 1 << 24,
        }
    }
}

impl EnumerationGuard {
    pub fn check(&self, n: usize, w: usize) -> Result<u128> {
        let words = binomial(n as u64, w as u64)
            .ok_or_else(|| Error::Budget(format!("C({n},{w}) overflows")))?;
        if n > self.max_n && words > self.max_words {
            return Err(Error::Budget(format!(
                "C({n},{w}) = {words} words exceeds the enumeration guard"
            )));
        }
        Ok(words)
    }
}

const DENSE_ROWS: usize = 20;

/// Syndrome counts of every weight-`w` word, split over `shards` contiguous
/// rank ranges. The merged table does not depend on `shards`.
pub fn syndrome_weight_counts(
    h: &BitMatrix,
    w: usize,
    guard: &EnumerationGuard,
    shards: usize,
) -> Result<BTreeMap<u64, u128>> {
    let n = h.cols();
    if h.rows() > 64 {
        return Err(Error::Domain("syndromes wider than 64 bits".into()));
    }
    if w > n {
        return Err(Error::Domain(format!("weight {w} above length {n}")));
    }
    let total = guard.check(n, w)?;
    let columns = h.columns_as_u64();
    let shards = shards.clamp(1, total.max(1) as usize);
    let chunk = total.div_ceil(shards as u128);
    let partial: Vec<Result<BTreeMap<u64, u128>>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let start = chunk * shard as u128;
            let end = (start + chunk).min(total);
            let mut counts = BTreeMap::new();
            if start >= end {
                return Ok(counts);
            }
            // Small syndrome spaces are tallied in a flat table.
            let mut dense = (h.rows() <= DENSE_ROWS).then(|| vec![0u64; 1 << h.rows()]);
            let mut comb = unrank_combination(n, w, start)?;
            let mut remaining = end - start;
            loop {
                let s = comb.iter().fold(0u64, |acc, &j| acc ^ columns[j]);
                match dense.as_mut() {
                    Some(table) => table[s as usize] += 1,
                    None => *counts.entry(s).or_insert(0u128) += 1,
                }
                remaining -= 1;
                if remaining == 0 || !next_combination(&mut comb, n) {
                    break;
                }
            }
            if let Some(table) = dense {
                counts.extend(
                    table
                        .into_iter()
                        .enumerate()
                        .filter(|&(_, c)| c > 0)
                        .map(|(s, c)| (s as u64, c as u128)),
                );
            }
            Ok(counts)
        })
        .collect();
    let mut merged = BTreeMap::new();
    for part in partial {
        for (s, c) in part? {
            *merged.entry(s).or_insert(0) += c;
        }
    }
    Ok(merged)
}

/// `D_w^H`: the law of `H eᵀ` for `e` uniform among weight-`w` words,
/// computed by full enumeration.
pub fn syndrome_weight_distribution(
    code: &ParityCheckCode,
    w: usize,
    guard: &EnumerationGuard,
) -> Result<DiscreteDistribution> {
    let counts =
        syndrome_weight_counts(code.parity_check(), w, guard, rayon::current_num_threads())?;
    DiscreteDistribution::from_counts(code.parity_check().rows(), &counts)
}
