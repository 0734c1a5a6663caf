//! Dense linear algebra over GF(2).
//!
//! Vectors and matrix rows are packed into `u64` words, least significant bit
//! first: coordinate `i` lives in word `i / 64` at bit `i % 64`. Bits past the
//! logical length are always zero. The packing is an internal detail; the only
//! serialized form is the hex text format (see [`BitMatrix::to_text`]), where
//! coordinate 0 is the most significant bit of the first byte.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from 0/1 entries. Any nonzero entry counts as one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones exactly at `support`.
    pub fn from_support(len: usize, support: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(len);
        for &i in support {
            if i >= len {
                return Err(Error::Domain(format!("index {i} outside length {len}")));
            }
            v.set(i, true);
        }
        Ok(v)
    }

    /// Coordinate `i` is bit `i` of `value`. Requires `len <= 64`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 coordinates");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value & tail_mask(len);
        }
        v
    }

    /// Inverse of [`BitVector::from_u64`].
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 supports at most 64 coordinates");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.gen();
        }
        v.clear_tail();
        v
    }

    /// Uniform vector of exact Hamming weight `weight`.
    pub fn random_weight<R: Rng + ?Sized>(len: usize, weight: usize, rng: &mut R) -> Self {
        assert!(weight <= len, "weight {weight} exceeds length {len}");
        let mut v = Self::zeros(len);
        for i in rand::seq::index::sample(rng, len, weight) {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        parity_and(&self.words, &other.words)
    }

    /// Positions of the ones, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &word) in self.words.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * WORD + b);
                w &= w - 1;
            }
        }
        out
    }

    /// Coordinates `range` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVector {
        assert!(start <= end && end <= self.len);
        let mut out = BitVector::zeros(end - start);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        out
    }

    /// Concatenation `(self | other)`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.support() {
            out.set(i, true);
        }
        for i in other.support() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Bytes with coordinate 0 in the most significant bit of byte 0.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for i in self.support() {
            out[i / 8] |= 0x80 >> (i % 8);
        }
        out
    }

    /// Inverse of [`BitVector::to_bytes`]; padding bits must be zero.
    pub fn from_bytes(len: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Parse(format!(
                "expected {} bytes for {len} bits, found {}",
                len.div_ceil(8),
                bytes.len()
            )));
        }
        let mut v = BitVector::zeros(len);
        for (bi, &byte) in bytes.iter().enumerate() {
            for bit in 0..8 {
                if byte & (0x80 >> bit) != 0 {
                    let i = bi * 8 + bit;
                    if i >= len {
                        return Err(Error::Parse("nonzero padding bits".into()));
                    }
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }

    pub fn to_hex(&self) -> String {
        hex_encode(&self.to_bytes())
    }

    pub fn from_hex(len: usize, text: &str) -> Result<Self> {
        Self::from_bytes(len, &hex_decode(text.trim())?)
    }

    fn clear_tail(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitVector({s})")
    }
}

#[inline]
fn parity_and(a: &[u64], b: &[u64]) -> bool {
    let mut acc = 0u64;
    for (x, y) in a.iter().zip(b) {
        acc ^= x & y;
    }
    acc.count_ones() & 1 == 1
}

pub(crate) fn hex_encode(bytes: &[u8]) -> String {
    const DIGITS: &[u8; 16] = b"0123456789abcdef";
    let mut s = String::with_capacity(bytes.len() * 2);
    for &b in bytes {
        s.push(DIGITS[(b >> 4) as usize] as char);
        s.push(DIGITS[(b & 15) as usize] as char);
    }
    s
}

pub(crate) fn hex_decode(text: &str) -> Result<Vec<u8>> {
    if !text.len().is_multiple_of(2) {
        return Err(Error::Parse("odd-length hex string".into()));
    }
    let nibble = |c: u8| -> Result<u8> {
        match c {
            b'0'..=b'9' => Ok(c - b'0'),
            b'a'..=b'f' => Ok(c - b'a' + 10),
            b'A'..=b'F' => Ok(c - b'A' + 10),
            _ => Err(Error::Parse(format!("invalid hex digit {:?}", c as char))),
        }
    };
    text.as_bytes()
        .chunks(2)
        .map(|pair| Ok(nibble(pair[0])? << 4 | nibble(pair[1])?))
        .collect()
}

/// A dense `rows x cols` matrix over GF(2), row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. All rows must have the same length.
    pub fn from_rows_bits(rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let vectors = rows
            .iter()
            .map(|r| {
                if r.len() != cols {
                    return Err(Error::dim("from_rows_bits", cols, r.len()));
                }
                Ok(BitVector::from_bits(r))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(cols, &vectors)
    }

    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::dim("from_rows", cols, r.len()));
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        let mask = tail_mask(cols);
        for i in 0..rows {
            let row = m.row_words_mut(i);
            for w in row.iter_mut() {
                *w = rng.gen();
            }
            if let Some(last) = row.last_mut() {
                *last &= mask;
            }
        }
        m
    }

    /// Uniformly random invertible `dim x dim` matrix (rejection sampling).
    pub fn random_nonsingular<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        loop {
            let m = Self::random(dim, dim, rng);
            if m.rank() == dim {
                return m;
            }
        }
    }

    /// Uniformly random matrix of full row rank.
    pub fn random_full_rank<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        assert!(rows <= cols, "full row rank needs rows <= cols");
        loop {
            let m = Self::random(rows, cols, rng);
            if m.rank() == rows {
                return m;
            }
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVector {
        assert!(i < self.rows);
        BitVector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> BitVector {
        assert!(j < self.cols);
        let mut v = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    /// Columns packed as integers (bit `i` = row `i`). Requires `rows <= 64`.
    pub fn columns_as_u64(&self) -> Vec<u64> {
        assert!(self.rows <= WORD, "columns_as_u64 needs at most 64 rows");
        let mut cols = vec![0u64; self.cols];
        for i in 0..self.rows {
            for j in self.row(i).support() {
                cols[j] |= 1 << i;
            }
        }
        cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        let idx = i * self.stride + j / WORD;
        let mask = 1u64 << (j % WORD);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let s = self.stride;
        let (src_off, dst_off) = (src * s, dst * s);
        for w in 0..s {
            let v = self.data[src_off + w];
            self.data[dst_off + w] ^= v;
        }
    }

    /// `H eᵀ`: the syndrome of `e`.
    pub fn mul_vec(&self, e: &BitVector) -> Result<BitVector> {
        if e.len() != self.cols {
            return Err(Error::dim("mul_vec", self.cols, e.len()));
        }
        let mut out = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if parity_and(self.row_words(i), e.words()) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// `v M` for a row vector `v`.
    pub fn vec_mul(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.rows {
            return Err(Error::dim("vec_mul", self.rows, v.len()));
        }
        let mut out = BitVector::zeros(self.cols);
        for i in v.support() {
            for (o, r) in out.words.iter_mut().zip(self.row_words(i)) {
                *o ^= r;
            }
        }
        Ok(out)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim("mul", self.cols, other.rows));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            let dst = i * out.stride;
            for j in row.support() {
                let src = other.row_words(j);
                for (w, s) in src.iter().enumerate() {
                    out.data[dst + w] ^= s;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row(i).support() {
                out.set(j, i, true);
            }
        }
        out
    }

    /// New matrix whose column `j` is column `order[j]` of `self`.
    pub fn select_columns(&self, order: &[usize]) -> Result<BitMatrix> {
        let mut out = BitMatrix::zeros(self.rows, order.len());
        for &src in order {
            if src >= self.cols {
                return Err(Error::Domain(format!("column {src} outside {}", self.cols)));
            }
        }
        for i in 0..self.rows {
            let row = self.row_words(i);
            for (j, &src) in order.iter().enumerate() {
                if (row[src / WORD] >> (src % WORD)) & 1 == 1 {
                    out.data[i * out.stride + j / WORD] |= 1u64 << (j % WORD);
                }
            }
        }
        Ok(out)
    }

    /// `H P` where `P` is the matrix of `perm`.
    pub fn permute_columns(&self, perm: &Permutation) -> Result<BitMatrix> {
        if perm.len() != self.cols {
            return Err(Error::dim("permute_columns", self.cols, perm.len()));
        }
        self.select_columns(perm.order())
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> BitMatrix {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        let order: Vec<usize> = (c0..c1).collect();
        let mut out = BitMatrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            let row = self.row(i);
            for (j, &src) in order.iter().enumerate() {
                if row.get(src) {
                    out.set(i - r0, j, true);
                }
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::dim("hstack", self.rows, other.rows));
        }
        let rows: Vec<BitVector> = (0..self.rows)
            .map(|i| self.row(i).concat(&other.row(i)))
            .collect();
        BitMatrix::from_rows(self.cols + other.cols, &rows)
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::dim("vstack", self.cols, other.cols));
        }
        let mut out = BitMatrix::zeros(self.rows + other.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        Ok(out)
    }

    /// Reduces `self` in place to reduced row echelon form and returns the
    /// pivot columns, one per nonzero row.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.add_row(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    pub fn inverse(&self) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::dim("inverse", self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = self.hstack(&BitMatrix::identity(n))?;
        let pivots = aug.reduce();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::RankDeficient {
                rank: pivots.iter().filter(|&&c| c < n).count(),
                expected: n,
            });
        }
        Ok(aug.submatrix(0, n, n, 2 * n))
    }

    /// A basis of `{x : self · xᵀ = 0}`, one vector per row of the result.
    pub fn kernel_basis(&self) -> BitMatrix {
        let mut red = self.clone();
        let pivots = red.reduce();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = BitVector::zeros(self.cols);
            x.set(free, true);
            for (r, &pc) in pivots.iter().enumerate() {
                if red.get(r, free) {
                    x.set(pc, true);
                }
            }
            basis.push(x);
        }
        BitMatrix::from_rows(self.cols, &basis).expect("kernel rows have matching length")
    }

    /// Text form: a `rows cols` header line, then one hex row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            s.push_str(&self.row(i).to_hex());
            s.push('\n');
        }
        s
    }

    /// Parses [`BitMatrix::to_text`] output from a line iterator, consuming
    /// exactly `rows + 1` lines.
    pub fn read_text<'a, I>(lines: &mut I) -> Result<BitMatrix>
    where
        I: Iterator<Item = &'a str>,
    {
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing matrix header".into()))?;
        let mut parts = header.split_whitespace();
        let mut field = |name: &str| -> Result<usize> {
            parts
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {name} in matrix header")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad {name} in matrix header: {e}")))
        };
        let rows = field("rows")?;
        let cols = field("cols")?;
        let mut m = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("matrix truncated at row {i}")))?;
            let row = BitVector::from_hex(cols, line)?;
            m.row_words_mut(i).copy_from_slice(row.words());
        }
        Ok(m)
    }

    pub fn from_text(text: &str) -> Result<BitMatrix> {
        let mut lines = text.lines();
        let m = Self::read_text(&mut lines)?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing data after matrix".into()));
        }
        Ok(m)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let s: String = (0..self.cols)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}

/// A permutation of coordinates. Applying it to `v` yields `out[j] = v[order[j]]`,
/// which is the row-vector product `v P` with `P[order[j]][j] = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || seen[i] {
                return Err(Error::Domain(format!("{order:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self { order })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        Self { order }
    }

    /// Moves `front[0], front[1], ...` to positions `0, 1, ...` and keeps the
    /// remaining coordinates in ascending order after them.
    pub fn front_loading(front: &[usize], n: usize) -> Result<Self> {
        let mut taken = vec![false; n];
        for &i in front {
            if i >= n || taken[i] {
                return Err(Error::Domain(format!(
                    "front indices {front:?} invalid for length {n}"
                )));
            }
            taken[i] = true;
        }
        let mut order = front.to_vec();
        order.extend((0..n).filter(|&i| !taken[i]));
        Ok(Self { order })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.order.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    #[inline]
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.order.len()];
        for (j, &i) in self.order.iter().enumerate() {
            inv[i] = j;
        }
        Permutation { order: inv }
    }

    /// `v P`.
    pub fn apply(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.len() {
            return Err(Error::dim("permutation apply", self.len(), v.len()));
        }
        let mut out = BitVector::zeros(v.len());
        for (j, &i) in self.order.iter().enumerate() {
            if v.get(i) {
                out.set(j, true);
            }
        }
        Ok(out)
    }

    pub fn to_matrix(&self) -> BitMatrix {
        let n = self.len();
        let mut p = BitMatrix::zeros(n, n);
        for (j, &i) in self.order.iter().enumerate() {
            p.set(i, j, true);
        }
        p
    }
}

/// A set of distinct column indices. Member order is kept: it fixes where
/// each column lands under [`IndexSet::permutation`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IndexSet {
    members: Vec<usize>,
    universe: usize,
}

impl IndexSet {
    pub fn new(members: Vec<usize>, universe: usize) -> Result<Self> {
        let mut seen = vec![false; universe];
        for &i in &members {
            if i >= universe || seen[i] {
                return Err(Error::Domain(format!(
                    "index set {members:?} invalid for universe {universe}"
                )));
            }
            seen[i] = true;
        }
        Ok(Self { members, universe })
    }

    pub fn random<R: Rng + ?Sized>(size: usize, universe: usize, rng: &mut R) -> Self {
        assert!(size <= universe);
        Self {
            members: rand::seq::index::sample(rng, universe, size).into_vec(),
            universe,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.members.clone();
        v.sort_unstable();
        v
    }

    /// The permutation sending member `j` to position `j`.
    pub fn permutation(&self) -> Permutation {
        Permutation::front_loading(&self.members, self.universe)
            .expect("members are validated at construction")
    }
}

/// Result of reducing `H P_I` to the block form
/// `U H P_I = [Id  H' ; 0  H'']`.
#[derive(Clone, Debug)]
pub struct SystematicForm {
    pub permutation: Permutation,
    /// The nonsingular row transform `U`.
    pub transform: BitMatrix,
    /// `H'`, `(n-k-l) x (k+l)`.
    pub top: BitMatrix,
    /// `H''`, `l x (k+l)`.
    pub bottom: BitMatrix,
}

impl SystematicForm {
    /// `n - k - l`: the size of the identity block.
    pub fn identity_len(&self) -> usize {
        self.top.rows()
    }

    pub fn window_len(&self) -> usize {
        self.top.cols()
    }

    /// `U sᵀ = (s' | s'')`.
    pub fn split_syndrome(&self, s: &BitVector) -> Result<(BitVector, BitVector)> {
        let us = self.transform.mul_vec(s)?;
        let r = self.identity_len();
        Ok((us.slice(0, r), us.slice(r, us.len())))
    }

    /// `(e'' H'ᵀ + s' | e'')` mapped back through the inverse permutation.
    pub fn complete(&self, tail: &BitVector, s_top: &BitVector) -> Result<BitVector> {
        let mut head = self.top.mul_vec(tail)?;
        head.xor_assign(s_top);
        self.permutation.inverse().apply(&head.concat(tail))
    }
}

/// Gaussian elimination of `H P_I` on the `|I|` leading columns. Fails with
/// [`Error::SingularSelection`] when those columns are not independent; the
/// caller is expected to pick another set.
pub fn systematic_form(h: &BitMatrix, iset: &IndexSet, l: usize) -> Result<SystematicForm> {
    let m = h.rows();
    if iset.universe() != h.cols() {
        return Err(Error::dim(
            "systematic_form universe",
            h.cols(),
            iset.universe(),
        ));
    }
    if l > m || iset.len() != m - l {
        return Err(Error::dim(
            "systematic_form |I|",
            m.saturating_sub(l),
            iset.len(),
        ));
    }
    let r = iset.len();
    let permutation = iset.permutation();
    let mut hp = h.permute_columns(&permutation)?;
    let mut u = BitMatrix::identity(m);
    for c in 0..r {
        let Some(p) = (c..m).find(|&i| hp.get(i, c)) else {
            return Err(Error::SingularSelection);
        };
        hp.swap_rows(c, p);
        u.swap_rows(c, p);
        for i in 0..m {
            if i != c && hp.get(i, c) {
                hp.add_row(c, i);
                u.add_row(c, i);
            }
        }
    }
    let n = h.cols();
    let top = hp.submatrix(0, r, r, n);
    let bottom = hp.submatrix(r, m, r, n);
    let bottom_rank = bottom.rank();
    if bottom_rank < l {
        return Err(Error::RankDeficient {
            rank: r + bottom_rank,
            expected: m,
        });
    }
    Ok(SystematicForm {
        permutation,
        transform: u,
        top,
        bottom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h_example() -> BitMatrix {
        BitMatrix::from_rows_bits(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]).unwrap()
    }

    #[test]
    fn mat_vec_examples() {
        let h = h_example();
        let e = BitVector::from_bits(&[1, 1, 0, 0]);
        assert_eq!(h.mul_vec(&e).unwrap(), BitVector::from_bits(&[1, 1]));
        assert!(h.mul_vec(&BitVector::zeros(4)).unwrap().is_zero());
        let v = BitVector::from_bits(&[0, 1, 1, 0, 1]);
        assert_eq!(BitMatrix::identity(5).mul_vec(&v).unwrap(), v);
        assert!(matches!(
            h.mul_vec(&BitVector::zeros(3)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn front_loading_matches_hand_evaluation() {
        // I = {3, 1} (1-based) on (a, b, c, d) gives (c, a, b, d).
        let iset = IndexSet::new(vec![2, 0], 4).unwrap();
        let perm = iset.permutation();
        assert_eq!(perm.order(), &[2, 0, 1, 3]);
        let v = BitVector::from_bits(&[0, 1, 1, 0]); // a=0 b=1 c=1 d=0
        assert_eq!(perm.apply(&v).unwrap(), BitVector::from_bits(&[1, 0, 1, 0]));
        let via_matrix = perm.to_matrix().vec_mul(&v).unwrap();
        assert_eq!(via_matrix, perm.apply(&v).unwrap());
    }

    #[test]
    fn permutation_errors() {
        assert!(Permutation::from_order(vec![0, 0]).is_err());
        assert!(IndexSet::new(vec![4], 4).is_err());
        let p = Permutation::identity(3);
        assert!(p.apply(&BitVector::zeros(4)).is_err());
    }

    #[test]
    fn systematic_form_on_identity_prefix() {
        let a = BitMatrix::from_rows_bits(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]).unwrap();
        let h = BitMatrix::identity(3).hstack(&a).unwrap();
        let iset = IndexSet::new(vec![0, 1, 2], 6).unwrap();
        let form = systematic_form(&h, &iset, 0).unwrap();
        assert_eq!(form.transform, BitMatrix::identity(3));
        assert_eq!(form.top, a);
        assert_eq!(form.bottom.rows(), 0);
    }

    #[test]
    fn systematic_form_recomposes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut done = 0;
        while done < 50 {
            let h = BitMatrix::random_full_rank(4, 8, &mut rng);
            let iset = IndexSet::random(2, 8, &mut rng);
            let Ok(form) = systematic_form(&h, &iset, 2) else {
                continue;
            };
            let lhs = form
                .transform
                .mul(&h.permute_columns(&form.permutation).unwrap())
                .unwrap();
            let expected = BitMatrix::identity(2)
                .hstack(&form.top)
                .unwrap()
                .vstack(&BitMatrix::zeros(2, 2).hstack(&form.bottom).unwrap())
                .unwrap();
            assert_eq!(lhs, expected);
            assert_eq!(form.transform.rank(), 4);
            assert_eq!((form.top.rows(), form.top.cols()), (2, 6));
            assert_eq!((form.bottom.rows(), form.bottom.cols()), (2, 6));
            done += 1;
        }
    }

    #[test]
    fn systematic_form_rejects_rank_deficient() {
        let h = BitMatrix::from_rows_bits(&[&[1, 1, 0, 0], &[1, 1, 0, 0]]).unwrap();
        for members in [vec![0, 1], vec![0, 2], vec![2, 3]] {
            let iset = IndexSet::new(members, 4).unwrap();
            assert!(systematic_form(&h, &iset, 0).is_err());
        }
        let iset = IndexSet::new(vec![0], 4).unwrap();
        assert!(matches!(
            systematic_form(&h, &iset, 1),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn random_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(
            BitMatrix::random_nonsingular(1, &mut rng),
            BitMatrix::identity(1)
        );
        for k in 0..8 {
            assert_eq!(BitMatrix::identity(k).rank(), k);
        }
        for _ in 0..1000 {
            assert_eq!(BitMatrix::random_nonsingular(6, &mut rng).rank(), 6);
        }
        let p = Permutation::random(20, &mut rng);
        assert!(Permutation::from_order(p.order().to_vec()).is_ok());
    }

    #[test]
    fn inverse_and_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = BitMatrix::random_nonsingular(9, &mut rng);
        let inv = s.inverse().unwrap();
        assert_eq!(s.mul(&inv).unwrap(), BitMatrix::identity(9));
        let h = BitMatrix::random_full_rank(5, 12, &mut rng);
        let ker = h.kernel_basis();
        assert_eq!(ker.rows(), 7);
        assert_eq!(ker.rank(), 7);
        for i in 0..ker.rows() {
            assert!(h.mul_vec(&ker.row(i)).unwrap().is_zero());
        }
        assert!(BitMatrix::zeros(3, 3).inverse().is_err());
    }

    #[test]
    fn text_format() {
        let h = BitMatrix::from_rows_bits(&[&[1, 0, 1, 0, 0, 0, 0, 0, 1], &[0; 9]]).unwrap();
        let text = h.to_text();
        assert_eq!(text, "2 9\na080\n0000\n");
        assert_eq!(BitMatrix::from_text(&text).unwrap(), h);
        assert!(BitMatrix::from_text("2 9\na080\n").is_err());
        assert!(BitMatrix::from_text("1 9\na081\n").is_err());
    }

    /// Rank by enumerating the row space.
    fn brute_rank(m: &BitMatrix) -> usize {
        let rows: Vec<u64> = (0..m.rows()).map(|i| m.row(i).to_u64()).collect();
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let mut acc = 0u64;
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc ^= r;
                }
            }
            span.insert(acc);
        }
        span.len().trailing_zeros() as usize
    }

    fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_rows, 1..=max_cols, any::<u64>())
            .prop_map(|(r, c, seed)| BitMatrix::random(r, c, &mut ChaCha8Rng::seed_from_u64(seed)))
    }

    proptest! {
        #[test]
        fn rank_matches_row_space_enumeration(m in matrix(6, 6)) {
            prop_assert_eq!(m.rank(), brute_rank(&m));
            prop_assert!(m.rank() <= m.rows().min(m.cols()));
        }

        #[test]
        fn product_is_associative(seed in any::<u64>(), a in 1usize..8, b in 1usize..70, c in 1usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = BitMatrix::random(a, b, &mut rng);
            let y = BitMatrix::random(b, c, &mut rng);
            let z = BitMatrix::random(c, 5, &mut rng);
            let v = BitVector::random(c, &mut rng);
            prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().mul_vec(&v).unwrap(), x.mul_vec(&y.mul_vec(&v).unwrap()).unwrap());
        }

        #[test]
        fn permutation_preserves_weight_and_inverts(seed in any::<u64>(), n in 1usize..150) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = Permutation::random(n, &mut rng);
            let v = BitVector::random(n, &mut rng);
            let pv = p.apply(&v).unwrap();
            prop_assert_eq!(pv.weight(), v.weight());
            prop_assert_eq!(p.inverse().apply(&pv).unwrap(), v);
        }

        #[test]
        fn mat_vec_is_linear(seed in any::<u64>(), r in 1usize..20, c in 1usize..130) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = BitMatrix::random(r, c, &mut rng);
            let a = BitVector::random(c, &mut rng);
            let b = BitVector::random(c, &mut rng);
            let lhs = h.mul_vec(&a.xor(&b)).unwrap();
            let rhs = h.mul_vec(&a).unwrap().xor(&h.mul_vec(&b).unwrap());
            prop_assert_eq!(lhs, rhs);
            prop_assert!(a.xor(&a).weight() == 0);
        }

        #[test]
        fn text_round_trip(m in matrix(12, 90)) {
            prop_assert_eq!(BitMatrix::from_text(&m.to_text()).unwrap(), m);
        }
    }
}
