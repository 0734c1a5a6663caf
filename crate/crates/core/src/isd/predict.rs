//! Closed-form success predictors under the independent-solutions heuristic.

use crate::combinatorics::{binomial, log2_binomial};

/// `M_{n,k,w} = C(n, w) / 2^{n-k}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolutionCount {
    pub log2: f64,
    /// `C(n, w)` when it fits in 128 bits; the denominator is `2^{n-k}`.
    pub numerator: Option<u128>,
    pub denominator_log2: usize,
}

impl SolutionCount {
    pub fn value(&self) -> f64 {
        self.log2.exp2()
    }
}

pub fn m_solutions(n: usize, k: usize, w: usize) -> SolutionCount {
    let r = n - k;
    SolutionCount {
        log2: log2_binomial(n as u64, w as u64) - r as f64,
        numerator: binomial(n as u64, w as u64),
        denominator_log2: r,
    }
}

/// Expected solution count when `s` is the syndrome of a planted word:
/// the planted one plus `(C(n, w) - 1) / 2^{n-k}`.
pub fn m_solutions_planted(n: usize, k: usize, w: usize) -> f64 {
    1.0 + (m_solutions(n, k, w).value() - (-((n - k) as f64)).exp2()).max(0.0)
}

/// Per-iteration success of an ISD variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    /// Probability that one fixed solution is caught in one iteration.
    pub single: f64,
    /// Number of solutions the prediction accounts for.
    pub solutions: f64,
    /// `1 - (1 - single)^solutions`.
    pub exact: f64,
    /// `min(1, solutions * single)`.
    pub surrogate: f64,
}

impl Prediction {
    pub fn new(single: f64, solutions: f64) -> Self {
        let exact = if single >= 1.0 {
            1.0
        } else {
            -(solutions * (-single).ln_1p()).exp_m1()
        };
        Self {
            single,
            solutions,
            exact,
            surrogate: (solutions * single).min(1.0),
        }
    }

    /// Same single-solution probability against a different solution count.
    pub fn with_solutions(&self, solutions: f64) -> Self {
        Self::new(self.single, solutions)
    }
}

/// `p_{p,l} = C(k+l, p) C(n-k-l, w-p) / C(n, w)`.
pub fn isd_single(n: usize, k: usize, w: usize, p: usize, l: usize) -> f64 {
    if p > w || k + l > n || w - p > n - k - l {
        return 0.0;
    }
    let log = log2_binomial((k + l) as u64, p as u64)
        + log2_binomial((n - k - l) as u64, (w - p) as u64)
        - log2_binomial(n as u64, w as u64);
    log.exp2()
}

/// Prange: `p_{0,0} = C(n-k, w) / C(n, w)` against `M_{n,k,w}` solutions.
pub fn prange_success(n: usize, k: usize, w: usize) -> Prediction {
    isd_success(n, k, w, 0, 0)
}

pub fn isd_success(n: usize, k: usize, w: usize, p: usize, l: usize) -> Prediction {
    Prediction::new(isd_single(n, k, w, p, l), m_solutions(n, k, w).value())
}

/// DOOM with `q` targets: `1 - (1 - p_{p,l})^{q M}` and `min(1, q M p_{p,l})`.
pub fn doom_success(n: usize, k: usize, w: usize, p: usize, l: usize, q: u64) -> Prediction {
    Prediction::new(
        isd_single(n, k, w, p, l),
        q as f64 * m_solutions(n, k, w).value(),
    )
}
