//! The hash-and-sign scheme over a scrambled parity-check matrix.
//!
//! Keys are `sk = (H_sec, P, S)` and `pk = H_pub = S H_sec P`. A signature of
//! `m` is a salt `r` and a weight-`w` word `e` with `H_pub eᵀ = H(m|r)ᵀ`.

use rand::{Rng, RngCore};

use crate::exponents::gv_bound;
use crate::f2::{systematic_form, BitMatrix, BitVector, IndexSet, Permutation};
use crate::oracle::{salted_input, SyndromeOracle};
use crate::{Error, Result};

pub const KEY_MAGIC: &[u8; 6] = b"CBFDH1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchemeParams {
    pub n: usize,
    pub k: usize,
    pub w: usize,
    /// Salt length in bits.
    pub lambda0: usize,
}

impl SchemeParams {
    pub fn new(n: usize, k: usize, w: usize, lambda0: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::Parameter(format!("need 0 < k < n, got n={n} k={k}")));
        }
        if w > n {
            return Err(Error::Parameter(format!("weight {w} above length {n}")));
        }
        if lambda0 == 0 {
            return Err(Error::Parameter("salt length must be positive".into()));
        }
        Ok(Self { n, k, w, lambda0 })
    }

    /// `λ₀ = λ + 2 log₂(q_sign)`, rounded up.
    pub fn salt_bits_for(lambda: usize, q_sign: f64) -> usize {
        let extra = if q_sign > 1.0 {
            2.0 * q_sign.log2()
        } else {
            0.0
        };
        lambda + extra.ceil() as usize
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    /// `d_GV(n, k)`.
    pub fn gv_distance(&self) -> f64 {
        gv_bound(self.n, self.k).expect("0 < k < n")
    }

    /// Non-fatal parameter diagnostics.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let gv = self.gv_distance();
        if (self.w as f64) < gv {
            out.push(format!(
                "w = {} is below the Gilbert-Varshamov distance {gv:.3}; most syndromes have no preimage",
                self.w
            ));
        }
        if 2 * self.w >= self.redundancy() {
            out.push(format!(
                "w = {} is not below (n-k)/2 = {}; inversion is easy for anyone",
                self.w,
                self.redundancy() as f64 / 2.0
            ));
        }
        out
    }
}

/// A family of `(n-k) x n` parity-check matrices.
pub trait CodeFamily {
    /// May return a rank-deficient matrix; key generation retries.
    fn sample(&self, n: usize, k: usize, rng: &mut dyn RngCore) -> Result<BitMatrix>;
}

/// Uniform `(n-k) x n` matrices.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomCodes;

impl CodeFamily for RandomCodes {
    fn sample(&self, n: usize, k: usize, rng: &mut dyn RngCore) -> Result<BitMatrix> {
        Ok(BitMatrix::random(n - k, n, rng))
    }
}

/// `(U, U+V)` codes with random halves of dimensions `k_u`, `k_v`.
#[derive(Clone, Copy, Debug)]
pub struct UuvCodes {
    pub k_u: usize,
    pub k_v: usize,
}

impl CodeFamily for UuvCodes {
    fn sample(&self, n: usize, k: usize, rng: &mut dyn RngCore) -> Result<BitMatrix> {
        if !n.is_multiple_of(2) || self.k_u + self.k_v != k || self.k_u > n / 2 || self.k_v > n / 2
        {
            return Err(Error::Parameter(format!(
                "(U,U+V) needs even n and k_u + k_v = k, got n={n} k={k} k_u={} k_v={}",
                self.k_u, self.k_v
            )));
        }
        let half = n / 2;
        let h_u = BitMatrix::random(half - self.k_u, half, rng);
        let h_v = BitMatrix::random(half - self.k_v, half, rng);
        let top = h_u.hstack(&BitMatrix::zeros(h_u.rows(), half))?;
        top.vstack(&h_v.hstack(&h_v)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub params: SchemeParams,
    pub h_pub: BitMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    pub params: SchemeParams,
    pub h_sec: BitMatrix,
    pub permutation: Permutation,
    pub s: BitMatrix,
    pub s_inv: BitMatrix,
    pub h_pub: BitMatrix,
}

impl SecretKey {
    /// Assembles a key from its parts, computing `S⁻¹` and `H_pub = S H_sec P`.
    pub fn from_parts(
        params: SchemeParams,
        h_sec: BitMatrix,
        permutation: Permutation,
        s: BitMatrix,
    ) -> Result<Self> {
        let m = params.redundancy();
        if h_sec.rows() != m || h_sec.cols() != params.n {
            return Err(Error::dim("H_sec columns", params.n, h_sec.cols()));
        }
        if permutation.len() != params.n {
            return Err(Error::dim(
                "permutation length",
                params.n,
                permutation.len(),
            ));
        }
        let s_inv = s.inverse()?;
        let h_pub = s.mul(&h_sec.permute_columns(&permutation)?)?;
        Ok(Self {
            params,
            h_sec,
            permutation,
            s,
            s_inv,
            h_pub,
        })
    }

    pub fn public_key(&self) -> PublicKey {
        PublicKey {
            params: self.params,
            h_pub: self.h_pub.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct KeyPair {
    pub public: PublicKey,
    pub secret: SecretKey,
}

const KEYGEN_ATTEMPTS: usize = 64;

/// Draws `H_sec` from `family`, a uniform permutation `P` and a uniform
/// nonsingular `S`.
pub fn keygen<R: Rng>(
    params: SchemeParams,
    family: &dyn CodeFamily,
    rng: &mut R,
) -> Result<KeyPair> {
    let m = params.redundancy();
    let mut last_rank = 0;
    for _ in 0..KEYGEN_ATTEMPTS {
        let h_sec = family.sample(params.n, params.k, rng)?;
        if h_sec.rows() != m || h_sec.cols() != params.n {
            return Err(Error::dim("code family output", params.n, h_sec.cols()));
        }
        last_rank = h_sec.rank();
        if last_rank != m {
            continue;
        }
        let permutation = Permutation::random(params.n, rng);
        let s = BitMatrix::random_nonsingular(m, rng);
        let secret = SecretKey::from_parts(params, h_sec, permutation, s)?;
        return Ok(KeyPair {
            public: secret.public_key(),
            secret,
        });
    }
    Err(Error::RankDeficient {
        rank: last_rank,
        expected: m,
    })
}

/// Finds some `e` with `H eᵀ = sᵀ` and `|e| = w`, or reports failure.
pub trait SyndromeDecoder {
    fn decode(
        &self,
        h: &BitMatrix,
        s: &BitVector,
        w: usize,
        rng: &mut dyn RngCore,
    ) -> Result<BitVector>;
}

/// Generic inverter of `e ↦ H eᵀ` on weight-`w` words: each trial picks a
/// random information set, then seeds `p` random ones on the `k` free
/// positions for every feasible `p` and accepts when the completed word has
/// weight `w`.
#[derive(Clone, Copy, Debug)]
pub struct PrangeDecoder {
    /// Information-set trials before giving up.
    pub budget: u64,
    /// Random seeds per free-weight value `p` within a trial.
    pub seeds_per_weight: usize,
}

impl Default for PrangeDecoder {
    fn default() -> Self {
        Self {
            budget: 10_000,
            seeds_per_weight: 4,
        }
    }
}

impl SyndromeDecoder for PrangeDecoder {
    fn decode(
        &self,
        h: &BitMatrix,
        s: &BitVector,
        w: usize,
        rng: &mut dyn RngCore,
    ) -> Result<BitVector> {
        decode_to_weight(h, s, w, self.budget, self.seeds_per_weight, rng)
    }
}

/// See [`PrangeDecoder`]. `Error::NotFound` means the budget ran out, not
/// that no solution exists.
pub fn decode_to_weight<R: Rng + ?Sized>(
    h: &BitMatrix,
    s: &BitVector,
    w: usize,
    budget: u64,
    seeds_per_weight: usize,
    rng: &mut R,
) -> Result<BitVector> {
    let (m, n) = (h.rows(), h.cols());
    if s.len() != m {
        return Err(Error::dim("decode syndrome", m, s.len()));
    }
    if w > n {
        return Err(Error::Domain(format!("weight {w} above length {n}")));
    }
    let k = n - m;
    let (lo, hi) = (w.saturating_sub(m), w.min(k));
    for _ in 0..budget {
        let iset = IndexSet::random(m, n, rng);
        let form = match systematic_form(h, &iset, 0) {
            Ok(f) => f,
            Err(Error::SingularSelection | Error::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        };
        let (s_top, _) = form.split_syndrome(s)?;
        for p in lo..=hi {
            let seeds = if p == 0 || p == k {
                1
            } else {
                seeds_per_weight.max(1)
            };
            for _ in 0..seeds {
                let tail = BitVector::random_weight(k, p, rng);
                let e = form.complete(&tail, &s_top)?;
                if e.weight() == w {
                    return Ok(e);
                }
            }
        }
    }
    Err(Error::NotFound { iterations: budget })
}

/// A `λ₀`-bit salt, stored as bytes with zero padding bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Salt {
    bits: usize,
    bytes: Vec<u8>,
}

impl Salt {
    pub fn random<R: Rng + ?Sized>(bits: usize, rng: &mut R) -> Self {
        let mut bytes = vec![0u8; bits.div_ceil(8)];
        rng.fill_bytes(&mut bytes);
        if !bits.is_multiple_of(8) {
            let last = bytes.len() - 1;
            bytes[last] &= 0xffu8 << (8 - bits % 8);
        }
        Self { bits, bytes }
    }

    pub fn from_bytes(bits: usize, bytes: Vec<u8>) -> Result<Self> {
        // Validates length and padding.
        BitVector::from_bytes(bits, &bytes)?;
        Ok(Self { bits, bytes })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn to_hex(&self) -> String {
        crate::f2::hex_encode(&self.bytes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub error: BitVector,
    pub salt: Salt,
}

impl Signature {
    /// Two lines: salt hex, then `e` as a hex bit-row.
    pub fn to_text(&self) -> String {
        format!("{}\n{}\n", self.salt.to_hex(), self.error.to_hex())
    }

    pub fn from_text(params: &SchemeParams, text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let salt_hex = lines
            .next()
            .ok_or_else(|| Error::Parse("missing salt line".into()))?;
        let e_hex = lines
            .next()
            .ok_or_else(|| Error::Parse("missing error line".into()))?;
        if lines.next().is_some() {
            return Err(Error::Parse("trailing data after signature".into()));
        }
        let salt = Salt::from_bytes(params.lambda0, crate::f2::hex_decode(salt_hex)?)?;
        let error = BitVector::from_hex(params.n, e_hex)?;
        Ok(Self { error, salt })
    }
}

/// What to do when the decoder gives up on a syndrome.
#[derive(Clone, Copy, Debug, Default)]
pub struct SigningPolicy {
    /// Draw a fresh salt and retry. Off by default: resalting changes the
    /// distribution of emitted signatures.
    pub resalt_on_failure: bool,
    pub max_resalts: u32,
}

/// `r ← {0,1}^λ₀; s ← H(m|r); e ← D(S⁻¹ sᵀ); return (eP, r)`.
pub fn sign<R: Rng>(
    sk: &SecretKey,
    message: &[u8],
    hash: &mut dyn SyndromeOracle,
    decoder: &dyn SyndromeDecoder,
    policy: SigningPolicy,
    rng: &mut R,
) -> Result<Signature> {
    let params = sk.params;
    if hash.output_bits() != params.redundancy() {
        return Err(Error::dim(
            "hash output",
            params.redundancy(),
            hash.output_bits(),
        ));
    }
    let attempts = if policy.resalt_on_failure {
        policy.max_resalts as u64 + 1
    } else {
        1
    };
    let mut last = Error::SigningFailure("no attempt made".into());
    for _ in 0..attempts {
        let salt = Salt::random(params.lambda0, rng);
        let s = hash.query(&salted_input(message, salt.as_bytes()));
        let target = sk.s_inv.mul_vec(&s)?;
        match decoder.decode(&sk.h_sec, &target, params.w, rng) {
            Ok(e) => {
                return Ok(Signature {
                    error: sk.permutation.apply(&e)?,
                    salt,
                })
            }
            Err(e @ Error::NotFound { .. }) => last = Error::SigningFailure(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Accepts iff `|e| = w` and `H_pub eᵀ = H(m|r)ᵀ`. Malformed lengths reject.
pub fn verify(
    pk: &PublicKey,
    message: &[u8],
    sig: &Signature,
    hash: &mut dyn SyndromeOracle,
) -> bool {
    let params = pk.params;
    if sig.error.len() != params.n
        || sig.salt.bits() != params.lambda0
        || hash.output_bits() != params.redundancy()
    {
        return false;
    }
    if sig.error.weight() != params.w {
        return false;
    }
    let s = hash.query(&salted_input(message, sig.salt.as_bytes()));
    pk.h_pub
        .mul_vec(&sig.error)
        .map(|x| x == s)
        .unwrap_or(false)
}

fn write_header(params: &SchemeParams, out: &mut Vec<u8>) {
    out.extend_from_slice(KEY_MAGIC);
    for v in [params.n, params.k, params.w, params.lambda0] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
}

fn read_header(bytes: &[u8]) -> Result<(SchemeParams, &str)> {
    if bytes.len() < 22 || &bytes[..6] != KEY_MAGIC {
        return Err(Error::Parse("missing CBFDH1 key header".into()));
    }
    let field =
        |i: usize| u32::from_le_bytes(bytes[6 + 4 * i..10 + 4 * i].try_into().unwrap()) as usize;
    let params = SchemeParams::new(field(0), field(1), field(2), field(3))?;
    let body = std::str::from_utf8(&bytes[22..]).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((params, body))
}

fn expect_shape(m: &BitMatrix, rows: usize, cols: usize, what: &'static str) -> Result<()> {
    if m.rows() != rows {
        return Err(Error::dim(what, rows, m.rows()));
    }
    if m.cols() != cols {
        return Err(Error::dim(what, cols, m.cols()));
    }
    Ok(())
}

impl PublicKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        write_header(&self.params, &mut out);
        out.extend_from_slice(self.h_pub.to_text().as_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (params, body) = read_header(bytes)?;
        let h_pub = BitMatrix::from_text(body)?;
        expect_shape(&h_pub, params.redundancy(), params.n, "H_pub")?;
        Ok(Self { params, h_pub })
    }
}

impl SecretKey {
    /// Header, then `H_pub`, `H_sec`, `S`, `S⁻¹` and the permutation's index
    /// list on one line.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        write_header(&self.params, &mut out);
        for m in [&self.h_pub, &self.h_sec, &self.s, &self.s_inv] {
            out.extend_from_slice(m.to_text().as_bytes());
        }
        let perm: Vec<String> = self
            .permutation
            .order()
            .iter()
            .map(|i| i.to_string())
            .collect();
        out.extend_from_slice(perm.join(" ").as_bytes());
        out.push(b'\n');
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (params, body) = read_header(bytes)?;
        let mut lines = body.lines();
        let (n, m) = (params.n, params.redundancy());
        let h_pub = BitMatrix::read_text(&mut lines)?;
        let h_sec = BitMatrix::read_text(&mut lines)?;
        let s = BitMatrix::read_text(&mut lines)?;
        let s_inv = BitMatrix::read_text(&mut lines)?;
        expect_shape(&h_pub, m, n, "H_pub")?;
        expect_shape(&h_sec, m, n, "H_sec")?;
        expect_shape(&s, m, m, "S")?;
        expect_shape(&s_inv, m, m, "S inverse")?;
        let order = lines
            .next()
            .ok_or_else(|| Error::Parse("missing permutation line".into()))?
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let permutation =
            Permutation::from_order(order).map_err(|e| Error::Parse(e.to_string()))?;
        let key = SecretKey::from_parts(params, h_sec, permutation, s)?;
        if key.s_inv != s_inv || key.h_pub != h_pub {
            return Err(Error::Parse(
                "secret key components are inconsistent".into(),
            ));
        }
        Ok(key)
    }
}
