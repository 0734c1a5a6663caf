//! DOOM as a 4-sum problem over `G = F_2^{l/2} × F_2^{l/2}`.
//!
//! For an information set `I`, the `k+l` window is cut into three blocks of
//! `(k+l)/3` positions. `V_i` (`i ≤ 3`) holds the weight-`p/3` patterns of
//! block `i` and `f_i(v) = H'' vᵀ`. `V_4` is a set of hash inputs `a` with
//! `f_4(a)` the bottom `l` coordinates `s''` of `U H(a)ᵀ`. A tuple is a solution
//! when `f_1 + f_2 + f_3 + f_4 = 0` and `g` holds, i.e. the completion
//! `z_I^{H(a)}(v_1 + v_2 + v_3)` has weight `w`.

use std::collections::HashMap;

use crate::combinatorics::{binomial, next_combination};
use crate::f2::{BitMatrix, BitVector, IndexSet, SystematicForm};
use crate::isd::DoomSolution;
use crate::oracle::SyndromeOracle;
use crate::{Error, Result};

/// Indices `(i_1, i_2, i_3, i_4)` into `V_1..V_4`.
pub type FourSumSolution = [usize; 4];

#[derive(Clone, Debug)]
pub struct FourSumInstance {
    pub w: usize,
    pub p: usize,
    pub l: usize,
    pub form: SystematicForm,
    pub information_set: IndexSet,
    /// `V_1..V_3` as words on the `k+l` window.
    pub blocks: [Vec<BitVector>; 3],
    /// `V_4`: hash inputs.
    pub preimages: Vec<Vec<u8>>,
    /// `f_1..f_4` with group coordinate `j` in bit `j`.
    pub images: [Vec<u64>; 4],
    /// `s'` of each `V_4` element, used by `g`.
    s_top: Vec<BitVector>,
}

/// Hash input of the `j`-th element of `V_4`.
pub fn foursum_preimage(j: u64) -> Vec<u8> {
    let mut a = b"4sum:".to_vec();
    a.extend_from_slice(&j.to_le_bytes());
    a
}

fn block_patterns(
    window: usize,
    third: usize,
    block: usize,
    weight: usize,
) -> Result<Vec<BitVector>> {
    let mut out = Vec::new();
    let mut comb: Vec<usize> = (0..weight).collect();
    loop {
        let support: Vec<usize> = comb.iter().map(|&c| block * third + c).collect();
        out.push(BitVector::from_support(window, &support)?);
        if !next_combination(&mut comb, third) {
            return Ok(out);
        }
    }
}

/// Builds the instance for `(H, hash, I, p, l, w)`. Requires `3 | (k+l)`,
/// `3 | p`, `2 | l` and `|I| = n-k-l`.
pub fn build_foursum_instance(
    h: &BitMatrix,
    hash: &mut dyn SyndromeOracle,
    information_set: &IndexSet,
    p: usize,
    l: usize,
    w: usize,
) -> Result<FourSumInstance> {
    let (m, n) = (h.rows(), h.cols());
    if l > m || l > 64 {
        return Err(Error::Parameter(format!(
            "l = {l} must be at most min(n-k, 64)"
        )));
    }
    let window = n - m + l;
    if !window.is_multiple_of(3) || !p.is_multiple_of(3) || !l.is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "4-sum needs 3 | k+l, 3 | p and 2 | l; got k+l={window} p={p} l={l}"
        )));
    }
    let third = window / 3;
    if p / 3 > third {
        return Err(Error::Parameter(format!(
            "p/3 = {} exceeds (k+l)/3 = {third}",
            p / 3
        )));
    }
    if hash.output_bits() != m {
        return Err(Error::dim("4-sum hash output", m, hash.output_bits()));
    }
    let form = crate::f2::systematic_form(h, information_set, l)?;
    let blocks = [
        block_patterns(window, third, 0, p / 3)?,
        block_patterns(window, third, 1, p / 3)?,
        block_patterns(window, third, 2, p / 3)?,
    ];
    let size = binomial(third as u64, (p / 3) as u64).expect("small") as usize;
    let preimages: Vec<Vec<u8>> = (0..size as u64).map(foursum_preimage).collect();
    let mut images: [Vec<u64>; 4] = Default::default();
    for (b, set) in blocks.iter().enumerate() {
        images[b] = set
            .iter()
            .map(|v| form.bottom.mul_vec(v).map(|x| x.to_u64()))
            .collect::<Result<_>>()?;
    }
    let mut s_top = Vec::with_capacity(size);
    for a in &preimages {
        let (top, bottom) = form.split_syndrome(&hash.query(a))?;
        images[3].push(bottom.to_u64());
        s_top.push(top);
    }
    Ok(FourSumInstance {
        w,
        p,
        l,
        form,
        information_set: information_set.clone(),
        blocks,
        preimages,
        images,
        s_top,
    })
}

impl FourSumInstance {
    /// `|V_1| = ... = |V_4| = C((k+l)/3, p/3)`.
    pub fn set_size(&self) -> usize {
        self.preimages.len()
    }

    /// `f_1(v_1) + ... + f_4(v_4)` packed as `l` bits.
    pub fn sum(&self, t: &FourSumSolution) -> u64 {
        (0..4).fold(0, |acc, i| acc ^ self.images[i][t[i]])
    }

    /// `(G_0, G_1)` components of a group element.
    pub fn split(&self, x: u64) -> (u64, u64) {
        let half = self.l / 2;
        let mask = if half == 0 {
            0
        } else {
            u64::MAX >> (64 - half)
        };
        (x & mask, x >> half)
    }

    pub fn window_error(&self, t: &FourSumSolution) -> BitVector {
        let mut e = self.blocks[0][t[0]].clone();
        e.xor_assign(&self.blocks[1][t[1]]);
        e.xor_assign(&self.blocks[2][t[2]]);
        e
    }

    /// `g(v_1, ..., v_4)`: `|z_I^{H(v_4)}(v_1 + v_2 + v_3)| = w`.
    pub fn side_condition(&self, t: &FourSumSolution) -> Result<bool> {
        let e = self.window_error(t);
        let mut head = self.form.top.mul_vec(&e)?;
        head.xor_assign(&self.s_top[t[3]]);
        Ok(head.weight() + e.weight() == self.w)
    }
}

/// Meet-in-the-middle: join `V_1 × V_2` with `V_3 × V_4` on `G_0`, then keep
/// the tuples whose full sum vanishes and satisfy `g`. At most `budget`
/// `G_0` collisions are examined. The output is sorted.
pub fn solve_foursum(inst: &FourSumInstance, budget: u64) -> Result<Vec<FourSumSolution>> {
    let size = inst.set_size();
    let mut left: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
    for i1 in 0..size {
        for i2 in 0..size {
            let key = inst.split(inst.images[0][i1] ^ inst.images[1][i2]).0;
            left.entry(key).or_default().push((i1, i2));
        }
    }
    let mut out = Vec::new();
    let mut examined = 0u64;
    for i3 in 0..size {
        for i4 in 0..size {
            let key = inst.split(inst.images[2][i3] ^ inst.images[3][i4]).0;
            let Some(pairs) = left.get(&key) else {
                continue;
            };
            for &(i1, i2) in pairs {
                if examined == budget {
                    out.sort_unstable();
                    return Ok(out);
                }
                examined += 1;
                let t = [i1, i2, i3, i4];
                if inst.sum(&t) == 0 && inst.side_condition(&t)? {
                    out.push(t);
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `(v_1 + v_2 + v_3, v_4)` as a DOOM solution against `(H, hash)`.
pub fn lift_foursum_solution(
    inst: &FourSumInstance,
    sol: &FourSumSolution,
    h: &BitMatrix,
    hash: &mut dyn SyndromeOracle,
) -> Result<DoomSolution> {
    let size = inst.set_size();
    if sol.iter().any(|&i| i >= size) {
        return Err(Error::Internal(format!(
            "4-sum tuple {sol:?} outside sets of size {size}"
        )));
    }
    if inst.sum(sol) != 0 {
        return Err(Error::Internal(format!(
            "4-sum tuple {sol:?} does not sum to zero"
        )));
    }
    let a = inst.preimages[sol[3]].clone();
    let (s_top, s_bottom) = inst.form.split_syndrome(&hash.query(&a))?;
    let e = inst.window_error(sol);
    if inst.form.bottom.mul_vec(&e)? != s_bottom {
        return Err(Error::Internal(
            "4-sum instance disagrees with the hash oracle".into(),
        ));
    }
    DoomSolution::new(h, inst.form.complete(&e, &s_top)?, a, hash, inst.w)
}

/// Nearest `(p, l)` with `3 | p`, `2 | l`, `3 | (k+l)`, `l ≤ n-k` and
/// `p ≤ k+l`. Ties go to the smaller value.
pub fn snap_foursum_params(n: usize, k: usize, p: usize, l: usize) -> Result<(usize, usize)> {
    let snapped_l = (0..=n - k)
        .filter(|&c| c % 2 == 0 && (k + c).is_multiple_of(3))
        .min_by_key(|&c| (c.abs_diff(l), c))
        .ok_or_else(|| Error::Parameter(format!("no even l ≤ {} with 3 | k+l", n - k)))?;
    let down = p - p % 3;
    let snapped_p = if p % 3 == 2 { down + 3 } else { down };
    Ok((snapped_p.min((k + snapped_l) / 3 * 3), snapped_l))
}
