//! Classical decoding attacks: Prange, generalized ISD, multi-target DOOM and
//! the 4-sum formulation, plus closed-form success predictors.
//!
//! One ISD iteration picks `I` of size `n-k-l`, reduces `H` to
//! `U H_{π_I} = [Id H' ; 0 H'']`, enumerates
//! `S_I = {e'' : H'' e''ᵀ = s''ᵀ, |e''| = p}` in lexicographic order and
//! accepts the first `z_I^s(e'') = (e'' H'ᵀ + s' | e'')_{π⁻¹}` of weight `w`.

pub mod foursum;
pub mod predict;

use std::collections::HashMap;

use rand::Rng;

use crate::combinatorics::{binomial, next_combination, unrank_combination};
use crate::f2::{systematic_form, BitMatrix, BitVector, IndexSet, SystematicForm};
use crate::oracle::SyndromeOracle;
use crate::trials::{first_success, TrialSeeds};
use crate::{Error, Result};

pub use foursum::{
    build_foursum_instance, foursum_preimage, lift_foursum_solution, snap_foursum_params,
    solve_foursum, FourSumInstance, FourSumSolution,
};
pub use predict::{
    doom_success, isd_single, isd_success, m_solutions, m_solutions_planted, prange_success,
    Prediction, SolutionCount,
};

/// How information sets are chosen across iterations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// Independent uniform sets, one per iteration.
    #[default]
    Random,
    /// Every `(n-k-l)`-subset once, in lexicographic order. The budget is
    /// capped at `C(n, n-k-l)`, so a solution with a compatible split is
    /// always found.
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsdParams {
    pub p: usize,
    pub l: usize,
    /// Information-set trials before giving up.
    pub max_iterations: u64,
    pub workers: usize,
    pub schedule: Schedule,
}

impl IsdParams {
    pub fn new(p: usize, l: usize, max_iterations: u64) -> Self {
        Self {
            p,
            l,
            max_iterations,
            workers: 1,
            schedule: Schedule::Random,
        }
    }

    pub fn prange(max_iterations: u64) -> Self {
        Self::new(0, 0, max_iterations)
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    /// `0 ≤ p ≤ w`, `l ≤ n-k`, `p ≤ k+l`, `w-p ≤ n-k-l`.
    pub fn validate(&self, n: usize, k: usize, w: usize) -> Result<()> {
        let (p, l) = (self.p, self.l);
        let bad = |why: &str| {
            Err(Error::Parameter(format!(
                "p={p} l={l} with n={n} k={k} w={w}: {why}"
            )))
        };
        if p > w {
            return bad("p exceeds w");
        }
        if l > n - k {
            return bad("l exceeds n-k");
        }
        if p > k + l {
            return bad("p exceeds k+l");
        }
        if w - p > n - k - l {
            return bad("w-p exceeds n-k-l");
        }
        Ok(())
    }

    fn trial_count(&self, n: usize, k: usize) -> u64 {
        match self.schedule {
            Schedule::Random => self.max_iterations,
            Schedule::Exhaustive => {
                let total = binomial(n as u64, (n - k - self.l) as u64).unwrap_or(u128::MAX);
                self.max_iterations.min(total.min(u64::MAX as u128) as u64)
            }
        }
    }

    fn information_set(
        &self,
        n: usize,
        k: usize,
        seeds: &TrialSeeds,
        trial: u64,
    ) -> Result<IndexSet> {
        let size = n - k - self.l;
        match self.schedule {
            Schedule::Random => Ok(IndexSet::random(size, n, &mut seeds.rng(trial))),
            Schedule::Exhaustive => IndexSet::new(unrank_combination(n, size, trial as u128)?, n),
        }
    }
}

/// A weight-`w` solution together with the iteration that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsdSuccess {
    pub error: BitVector,
    /// Zero-based index of the successful trial.
    pub trial: u64,
    pub information_set: Vec<usize>,
}

fn check_instance(h: &BitMatrix, s: &BitVector, w: usize) -> Result<(usize, usize)> {
    let (m, n) = (h.rows(), h.cols());
    if s.len() != m {
        return Err(Error::dim("ISD syndrome", m, s.len()));
    }
    if m == 0 || m > n {
        return Err(Error::Parameter(format!(
            "parity-check matrix is {m} x {n}"
        )));
    }
    if w > n {
        return Err(Error::Domain(format!("weight {w} above length {n}")));
    }
    Ok((n, n - m))
}

/// Reduces `h` on `iset`; `None` if the selected columns are dependent.
fn reduce(h: &BitMatrix, iset: &IndexSet, l: usize) -> Result<Option<SystematicForm>> {
    match systematic_form(h, iset, l) {
        Ok(f) => Ok(Some(f)),
        Err(Error::SingularSelection | Error::RankDeficient { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Column views of a systematic form, reused across the `S_I` enumeration.
struct Window {
    top: Vec<BitVector>,
    bottom: Vec<BitVector>,
}

impl Window {
    fn new(form: &SystematicForm) -> Self {
        let cols = form.window_len();
        Self {
            top: (0..cols).map(|j| form.top.column(j)).collect(),
            bottom: (0..cols).map(|j| form.bottom.column(j)).collect(),
        }
    }

    fn bottom_sum(&self, comb: &[usize], acc: &mut BitVector) {
        acc.clone_from(&BitVector::zeros(acc.len()));
        for &j in comb {
            acc.xor_assign(&self.bottom[j]);
        }
    }

    fn top_sum(&self, comb: &[usize], s_top: &BitVector) -> BitVector {
        let mut acc = s_top.clone();
        for &j in comb {
            acc.xor_assign(&self.top[j]);
        }
        acc
    }
}

/// Runs one ISD iteration against several targets at once: walks weight-`p`
/// patterns lexicographically and returns the first `(target, e)` whose
/// completion has weight `w`, ties broken by target index.
fn iteration(
    form: &SystematicForm,
    targets: &[BitVector],
    w: usize,
    p: usize,
) -> Result<Option<(usize, BitVector)>> {
    let window = Window::new(form);
    let cols = form.window_len();
    let mut by_tail: HashMap<BitVector, Vec<(usize, BitVector)>> = HashMap::new();
    for (i, s) in targets.iter().enumerate() {
        let (s_top, s_bottom) = form.split_syndrome(s)?;
        by_tail.entry(s_bottom).or_default().push((i, s_top));
    }
    if p > cols {
        return Ok(None);
    }
    let mut comb: Vec<usize> = (0..p).collect();
    let mut acc = BitVector::zeros(form.bottom.rows());
    loop {
        window.bottom_sum(&comb, &mut acc);
        if let Some(hits) = by_tail.get(&acc) {
            for (i, s_top) in hits {
                let head = window.top_sum(&comb, s_top);
                if head.weight() + p == w {
                    let tail = BitVector::from_support(cols, &comb)?;
                    return Ok(Some((*i, form.complete(&tail, s_top)?)));
                }
            }
        }
        if !next_combination(&mut comb, cols) {
            return Ok(None);
        }
    }
}

/// `S_I`: every weight-`p` `e''` with `H'' e''ᵀ = s''ᵀ`, in lexicographic
/// order of supports.
pub fn enumerate_candidates(
    form: &SystematicForm,
    s_bottom: &BitVector,
    p: usize,
) -> Result<Vec<BitVector>> {
    if s_bottom.len() != form.bottom.rows() {
        return Err(Error::dim("S_I target", form.bottom.rows(), s_bottom.len()));
    }
    let window = Window::new(form);
    let cols = form.window_len();
    let mut out = Vec::new();
    if p > cols {
        return Ok(out);
    }
    let mut comb: Vec<usize> = (0..p).collect();
    let mut acc = BitVector::zeros(s_bottom.len());
    loop {
        window.bottom_sum(&comb, &mut acc);
        if &acc == s_bottom {
            out.push(BitVector::from_support(cols, &comb)?);
        }
        if !next_combination(&mut comb, cols) {
            return Ok(out);
        }
    }
}

/// Algorithm-1 style ISD. `Error::NotFound` once the trial budget is spent.
pub fn generalized_isd<R: Rng + ?Sized>(
    h: &BitMatrix,
    s: &BitVector,
    w: usize,
    params: &IsdParams,
    rng: &mut R,
) -> Result<IsdSuccess> {
    let (n, k) = check_instance(h, s, w)?;
    params.validate(n, k, w)?;
    let seeds = TrialSeeds::draw(rng);
    let trials = params.trial_count(n, k);
    let targets = std::slice::from_ref(s);
    let found = first_success(trials, params.workers, |t| {
        let iset = params.information_set(n, k, &seeds, t)?;
        let Some(form) = reduce(h, &iset, params.l)? else {
            return Ok(None);
        };
        Ok(iteration(&form, targets, w, params.p)?.map(|(_, e)| (e, iset.members().to_vec())))
    })?;
    match found {
        Some((trial, (error, information_set))) => Ok(IsdSuccess {
            error,
            trial,
            information_set,
        }),
        None => Err(Error::NotFound { iterations: trials }),
    }
}

/// Prange: generalized ISD with `p = l = 0`.
pub fn prange_attack<R: Rng + ?Sized>(
    h: &BitMatrix,
    s: &BitVector,
    w: usize,
    budget: u64,
    rng: &mut R,
) -> Result<IsdSuccess> {
    generalized_isd(h, s, w, &IsdParams::prange(budget), rng)
}

/// Outcome counts of independent ISD iterations on one instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IterationStats {
    pub trials: u64,
    /// Iterations whose selected columns were independent.
    pub eliminations: u64,
    /// Iterations that produced a weight-`w` solution.
    pub hits: u64,
}

impl IterationStats {
    pub fn merge(&mut self, other: IterationStats) {
        self.trials += other.trials;
        self.eliminations += other.eliminations;
        self.hits += other.hits;
    }

    /// Hits per successful elimination.
    pub fn rate(&self) -> f64 {
        if self.eliminations == 0 {
            0.0
        } else {
            self.hits as f64 / self.eliminations as f64
        }
    }
}

/// Runs `iterations` random-schedule iterations against all `targets` and
/// counts how many would have succeeded.
pub fn measure_iterations<R: Rng + ?Sized>(
    h: &BitMatrix,
    targets: &[BitVector],
    w: usize,
    p: usize,
    l: usize,
    iterations: u64,
    rng: &mut R,
) -> Result<IterationStats> {
    let (n, k) = check_instance(
        h,
        targets
            .first()
            .ok_or_else(|| Error::Parameter("no targets".into()))?,
        w,
    )?;
    let params = IsdParams::new(p, l, iterations);
    params.validate(n, k, w)?;
    let mut stats = IterationStats::default();
    for _ in 0..iterations {
        stats.trials += 1;
        let iset = IndexSet::random(n - k - l, n, rng);
        let Some(form) = reduce(h, &iset, l)? else {
            continue;
        };
        stats.eliminations += 1;
        if iteration(&form, targets, w, p)?.is_some() {
            stats.hits += 1;
        }
    }
    Ok(stats)
}

/// `(e, a)` with `H eᵀ = H(a)ᵀ` and `|e| = w`, checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoomSolution {
    error: BitVector,
    preimage: Vec<u8>,
}

impl DoomSolution {
    pub fn new(
        h: &BitMatrix,
        error: BitVector,
        preimage: Vec<u8>,
        hash: &mut dyn SyndromeOracle,
        w: usize,
    ) -> Result<Self> {
        if error.len() != h.cols() || error.weight() != w {
            return Err(Error::Internal(format!(
                "DOOM candidate has length {} and weight {}, expected {} and {w}",
                error.len(),
                error.weight(),
                h.cols()
            )));
        }
        if hash.output_bits() != h.rows() || h.mul_vec(&error)? != hash.query(&preimage) {
            return Err(Error::Internal(
                "DOOM candidate syndrome does not match H(a)".into(),
            ));
        }
        Ok(Self { error, preimage })
    }

    pub fn error(&self) -> &BitVector {
        &self.error
    }

    pub fn preimage(&self) -> &[u8] {
        &self.preimage
    }
}

/// Hash input of the `i`-th DOOM target.
pub fn doom_target(i: u64) -> Vec<u8> {
    let mut a = b"doom:".to_vec();
    a.extend_from_slice(&i.to_le_bytes());
    a
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoomSuccess {
    pub solution: DoomSolution,
    pub target: u64,
    pub trial: u64,
}

/// Decode-one-out-of-many: targets `H(doom_target(i))` for `i < q_limit`,
/// shared across every ISD iteration.
pub fn doom_attack<R: Rng + ?Sized>(
    h: &BitMatrix,
    hash: &mut dyn SyndromeOracle,
    w: usize,
    params: &IsdParams,
    q_limit: u64,
    rng: &mut R,
) -> Result<DoomSuccess> {
    if q_limit == 0 {
        return Err(Error::Parameter("DOOM needs at least one target".into()));
    }
    if hash.output_bits() != h.rows() {
        return Err(Error::dim("DOOM hash output", h.rows(), hash.output_bits()));
    }
    let targets: Vec<BitVector> = (0..q_limit).map(|i| hash.query(&doom_target(i))).collect();
    let (n, k) = check_instance(h, &targets[0], w)?;
    params.validate(n, k, w)?;
    let seeds = TrialSeeds::draw(rng);
    let trials = params.trial_count(n, k);
    let found = first_success(trials, params.workers, |t| {
        let iset = params.information_set(n, k, &seeds, t)?;
        let Some(form) = reduce(h, &iset, params.l)? else {
            return Ok(None);
        };
        iteration(&form, &targets, w, params.p)
    })?;
    let Some((trial, (target, error))) = found else {
        return Err(Error::NotFound { iterations: trials });
    };
    let solution = DoomSolution::new(h, error, doom_target(target as u64), hash, w)?;
    Ok(DoomSuccess {
        solution,
        target: target as u64,
        trial,
    })
}
