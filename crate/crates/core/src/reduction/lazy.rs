//! Lazily sampled random oracles and the reprogrammed hash `Z`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::{syndrome_weight_counts, DiscreteDistribution, EnumerationGuard};
use crate::combinatorics::binomial;
use crate::f2::{BitMatrix, BitVector};
use crate::oracle::{salted_input, FlaggedError, ReprogrammingOracle, SyndromeOracle};
use crate::scheme::{Salt, Signature};
use crate::{Error, Result};

/// Distribution of fresh oracle outputs.
pub trait Sampler: Clone {
    type Output: Clone;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Output;
}

/// Uniform `bits`-bit strings.
#[derive(Clone, Copy, Debug)]
pub struct UniformBits {
    pub bits: usize,
}

impl Sampler for UniformBits {
    type Output = BitVector;
    fn sample(&self, rng: &mut ChaCha8Rng) -> BitVector {
        BitVector::random(self.bits, rng)
    }
}

/// Uniform elements of `F_2 × S_w`.
#[derive(Clone, Copy, Debug)]
pub struct FlaggedErrorSampler {
    pub n: usize,
    pub w: usize,
}

impl Sampler for FlaggedErrorSampler {
    type Output = FlaggedError;
    fn sample(&self, rng: &mut ChaCha8Rng) -> FlaggedError {
        FlaggedError {
            flag: rng.gen(),
            error: BitVector::random_weight(self.n, self.w, rng),
        }
    }
}

/// A random function emulated by memoising fresh samples. Outputs are drawn
/// in first-query order from a seeded stream, so replaying the same sequence
/// of distinct inputs reproduces the table.
#[derive(Clone, Debug)]
pub struct LazyOracle<S: Sampler> {
    sampler: S,
    seed: u64,
    rng: ChaCha8Rng,
    table: HashMap<Vec<u8>, S::Output>,
    log: Vec<Vec<u8>>,
    queries: u64,
}

impl<S: Sampler> LazyOracle<S> {
    pub fn new(sampler: S, seed: u64) -> Self {
        Self {
            sampler,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            table: HashMap::new(),
            log: Vec::new(),
            queries: 0,
        }
    }

    pub fn get(&mut self, input: &[u8]) -> S::Output {
        self.queries += 1;
        if let Some(v) = self.table.get(input) {
            return v.clone();
        }
        let v = self.sampler.sample(&mut self.rng);
        self.table.insert(input.to_vec(), v.clone());
        self.log.push(input.to_vec());
        v
    }

    /// Fixes the output on `input` without consuming randomness. Later
    /// queries return `output`.
    pub fn program(&mut self, input: &[u8], output: S::Output) {
        if self.table.insert(input.to_vec(), output).is_none() {
            self.log.push(input.to_vec());
        }
    }

    /// Calls made so far, repeated inputs included.
    pub fn query_count(&self) -> u64 {
        self.queries
    }

    /// Distinct inputs in first-query order.
    pub fn transcript(&self) -> &[Vec<u8>] {
        &self.log
    }

    /// A fresh oracle with the same seed that has re-queried this oracle's
    /// transcript, so it agrees with `self` on every input seen so far.
    /// Programmed entries are not carried over.
    pub fn replay(&self) -> Self {
        let mut fresh = Self::new(self.sampler.clone(), self.seed);
        for input in &self.log {
            fresh.get(input);
        }
        fresh.queries = 0;
        fresh
    }
}

impl SyndromeOracle for LazyOracle<UniformBits> {
    fn output_bits(&self) -> usize {
        self.sampler.bits
    }
    fn query(&mut self, input: &[u8]) -> BitVector {
        self.get(input)
    }
}

impl ReprogrammingOracle for LazyOracle<FlaggedErrorSampler> {
    fn length(&self) -> usize {
        self.sampler.n
    }
    fn weight(&self) -> usize {
        self.sampler.w
    }
    fn query(&mut self, input: &[u8]) -> FlaggedError {
        self.get(input)
    }
}

/// `Z(x) = H(x)` when `J(x) = (0, ·)` and `Z(x) = H_pub eᵀ` when
/// `J(x) = (1, e)`.
#[derive(Clone, Debug)]
pub struct ZOracle<H, J> {
    pub h: H,
    pub j: J,
    pub h_pub: BitMatrix,
    j_calls: u64,
}

impl<H: SyndromeOracle, J: ReprogrammingOracle> ZOracle<H, J> {
    pub fn new(h: H, j: J, h_pub: BitMatrix) -> Result<Self> {
        if h.output_bits() != h_pub.rows() {
            return Err(Error::dim("Z hash output", h_pub.rows(), h.output_bits()));
        }
        if j.length() != h_pub.cols() {
            return Err(Error::dim("Z error length", h_pub.cols(), j.length()));
        }
        Ok(Self {
            h,
            j,
            h_pub,
            j_calls: 0,
        })
    }

    /// `J` calls made so far, by `Z` and by secret-free signing.
    pub fn j_calls(&self) -> u64 {
        self.j_calls
    }

    fn j(&mut self, input: &[u8]) -> FlaggedError {
        self.j_calls += 1;
        self.j.query(input)
    }

    pub fn z(&mut self, input: &[u8]) -> BitVector {
        let FlaggedError { flag, error } = self.j(input);
        if flag {
            self.h_pub.mul_vec(&error).expect("J output has length n")
        } else {
            self.h.query(input)
        }
    }

    pub fn z_query(&mut self, message: &[u8], salt: &[u8]) -> BitVector {
        self.z(&salted_input(message, salt))
    }

    /// Draws fresh salts until `J(m|r) = (1, e)` and returns `(e, r)`, which
    /// verifies under `Z` without any secret. Also returns the number of `J`
    /// calls spent; more than `cap` is an error.
    pub fn sign_without_secret<R: Rng + ?Sized>(
        &mut self,
        message: &[u8],
        salt_bits: usize,
        cap: u64,
        rng: &mut R,
    ) -> Result<(Signature, u64)> {
        for calls in 1..=cap {
            let salt = Salt::random(salt_bits, rng);
            let out = self.j(&salted_input(message, salt.as_bytes()));
            if out.flag {
                return Ok((
                    Signature {
                        error: out.error,
                        salt,
                    },
                    calls,
                ));
            }
        }
        Err(Error::Budget(format!(
            "no J(m|r) = (1, e) within {cap} salts"
        )))
    }
}

impl<H: SyndromeOracle, J: ReprogrammingOracle> SyndromeOracle for ZOracle<H, J> {
    fn output_bits(&self) -> usize {
        self.h_pub.rows()
    }
    fn query(&mut self, input: &[u8]) -> BitVector {
        self.z(input)
    }
}

/// Exact law of one fresh `Z` output, by enumerating the `J` randomness
/// `(b, e)` and the `H` randomness `y`: mass `½·2^{-(n-k)}` on each `y` and
/// `½/C(n, w)` on `H_pub eᵀ` for each `e` in `S_w`.
pub fn z_output_distribution(
    h_pub: &BitMatrix,
    w: usize,
    guard: &EnumerationGuard,
) -> Result<DiscreteDistribution> {
    let m = h_pub.rows();
    if m > 24 {
        return Err(Error::Budget(format!(
            "2^{m} syndromes is too many to enumerate"
        )));
    }
    let words = binomial(h_pub.cols() as u64, w as u64).expect("guarded") as f64;
    let counts = syndrome_weight_counts(h_pub, w, guard, rayon::current_num_threads())?;
    let uniform = 0.5 / (1u64 << m) as f64;
    let mass = (0..1u64 << m)
        .map(|y| {
            let planted = counts.get(&y).copied().unwrap_or(0) as f64;
            (y, uniform + 0.5 * planted / words)
        })
        .collect();
    DiscreteDistribution::from_masses(m, mass)
}
