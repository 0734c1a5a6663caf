//! Asymptotic cost exponents, as `log₂(cost) / n` with polynomial factors
//! dropped via `log₂ C(an, bn) ≈ n·a·h(b/a)`.

use crate::{Error, Result};

const BISECTION_STEPS: usize = 200;

/// Binary entropy `h(x) = -x log₂ x - (1-x) log₂(1-x)`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "entropy argument {x} outside [0, 1]"
        )));
    }
    Ok(h(x))
}

fn h(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// `h⁻¹(y)` on the branch `[0, ½]`.
pub fn entropy_inv(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain(format!(
            "entropy_inv argument {y} outside [0, 1]"
        )));
    }
    Ok(bisect(0.0, 0.5, |x| h(x) - y))
}

/// Root of an increasing `f` on `[lo, hi]`, clamped to the interval ends.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    if f(lo) >= 0.0 {
        return lo;
    }
    if f(hi) <= 0.0 {
        return hi;
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `d_GV(n, k) = n h⁻¹(1 - k/n)`.
pub fn gv_bound(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::Domain(format!("need 0 < k < n, got n={n} k={k}")));
    }
    Ok(n as f64 * entropy_inv(1.0 - k as f64 / n as f64)?)
}

/// `(R, ω) = (k/n, w/n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatePoint {
    pub rate: f64,
    pub omega: f64,
}

impl RatePoint {
    pub fn new(rate: f64, omega: f64) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) || !(omega > 0.0 && omega < 1.0) {
            return Err(Error::Domain(format!(
                "rate point ({rate}, {omega}) outside (0,1)²"
            )));
        }
        Ok(Self { rate, omega })
    }

    /// `h⁻¹(1 - R)`.
    pub fn gv_omega(&self) -> f64 {
        bisect(0.0, 0.5, |x| h(x) - (1.0 - self.rate))
    }

    pub fn below_gv(&self) -> bool {
        self.omega < self.gv_omega()
    }

    fn check_prange_domain(&self) -> Result<()> {
        let r = 1.0 - self.rate;
        if self.omega > r / 2.0 {
            return Err(Error::Domain(format!(
                "ω = {} above (1-R)/2 = {}",
                self.omega,
                r / 2.0
            )));
        }
        Ok(())
    }
}

/// `(1-R)(1 - h(ω/(1-R)))`: Prange with the `M_{n,k,w}` solutions counted.
pub fn prange_exponent_classical(pt: RatePoint) -> Result<f64> {
    pt.check_prange_domain()?;
    let r = 1.0 - pt.rate;
    Ok((r * (1.0 - h(pt.omega / r))).max(0.0))
}

/// Grover over Prange: half the classical exponent.
pub fn prange_exponent_quantum(pt: RatePoint) -> Result<f64> {
    Ok(0.5 * prange_exponent_classical(pt)?)
}

/// One evaluation of the quantum 4-sum objective at a fixed `λ = l/n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoomPoint {
    pub lambda: f64,
    /// `π = p/n` solving `β(π) = 5λ/8`.
    pub pi: f64,
    /// `(6/5)β - ½ min(0, Pexp)`.
    pub objective: f64,
    /// `|β(π) - 5λ/8|`.
    pub residual: f64,
}

/// Evaluates the objective at `λ`, or `None` when the constraint
/// `((R+λ)/3) h(π/(R+λ)) = 5λ/8` has no admissible `π`.
pub fn doom_quantum_objective(pt: RatePoint, lambda: f64) -> Option<DoomPoint> {
    let (r, w) = (pt.rate, pt.omega);
    let a = r + lambda;
    let rest = 1.0 - a;
    if lambda < 0.0 || rest <= 0.0 {
        return None;
    }
    let target = 0.625 * lambda;
    if target > a / 3.0 {
        return None;
    }
    let beta_of = |pi: f64| a / 3.0 * h(pi / a);
    let pi = bisect(0.0, a / 2.0, |pi| beta_of(pi) - target);
    let residual = (beta_of(pi) - target).abs();
    if residual > 1e-9 || pi > w || w - pi > rest {
        return None;
    }
    let beta = target;
    let p_exp = a * h(pi / a) + rest * h((w - pi) / rest) + beta - (1.0 - r);
    Some(DoomPoint {
        lambda,
        pi,
        objective: 1.2 * beta - 0.5 * p_exp.min(0.0),
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentResult {
    pub exponent: f64,
    /// `(l/n, p/n)` at the minimum.
    pub argmin: (f64, f64),
    pub residual: f64,
    /// Interval in `λ` that the final golden-section search was confined to.
    pub bracket: (f64, f64),
}

/// Minimum of [`doom_quantum_objective`] over `λ ∈ [0, 1-R)`, using a grid of
/// step `1e-3` and a golden-section polish around the best grid point.
///
/// Below the GV weight ([`RatePoint::below_gv`]) the value is still computed
/// but describes the unique-solution regime, where amortising over many
/// targets no longer pays off.
pub fn doom_quantum_exponent(pt: RatePoint) -> Result<ExponentResult> {
    doom_quantum_exponent_with_step(pt, 1e-3)
}

pub fn doom_quantum_exponent_with_step(pt: RatePoint, step: f64) -> Result<ExponentResult> {
    pt.check_prange_domain()?;
    if step.is_nan() || step <= 0.0 {
        return Err(Error::Parameter(format!(
            "grid step {step} must be positive"
        )));
    }
    let limit = 1.0 - pt.rate;
    let steps = (limit / step).ceil() as usize;
    let mut best: Option<(usize, DoomPoint)> = None;
    for i in 0..steps {
        let lambda = i as f64 * step;
        if let Some(p) = doom_quantum_objective(pt, lambda) {
            if best.is_none_or(|(_, b)| p.objective < b.objective) {
                best = Some((i, p));
            }
        }
    }
    let (i, grid_best) = best.ok_or_else(|| Error::Domain("no feasible λ on the grid".into()))?;
    let lo = i.saturating_sub(1) as f64 * step;
    let hi = ((i + 1) as f64 * step).min(limit);
    let eval = |l: f64| doom_quantum_objective(pt, l).map_or(f64::INFINITY, |p| p.objective);
    let polished = golden_section(lo, hi, eval);
    let result = match doom_quantum_objective(pt, polished) {
        Some(p) if p.objective <= grid_best.objective => p,
        _ => grid_best,
    };
    Ok(ExponentResult {
        exponent: result.objective.max(0.0),
        argmin: (result.lambda, result.pi),
        residual: result.residual,
        bracket: (lo, hi),
    })
}

fn golden_section(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(r: f64, w: f64) -> RatePoint {
        RatePoint::new(r, w).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(0.5).unwrap(), 1.0);
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        assert_eq!(entropy_inv(0.0).unwrap(), 0.0);
        assert_eq!(entropy_inv(1.0).unwrap(), 0.5);
        assert!(entropy(1.5).is_err());
        assert!(entropy_inv(-0.1).is_err());
        // Independent bisection on the decreasing side of h(x) = ½.
        let (mut lo, mut hi) = (0.0f64, 0.5f64);
        for _ in 0..80 {
            let mid = (lo + hi) / 2.0;
            let v = -mid * mid.log2() - (1.0 - mid) * (1.0 - mid).log2();
            if v < 0.5 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((entropy_inv(0.5).unwrap() - lo).abs() < 1e-12);
        assert!((entropy_inv(0.5).unwrap() - 0.110028).abs() < 1e-5);
    }

    #[test]
    fn gv_examples() {
        let d = gv_bound(1000, 500).unwrap();
        assert!((d / 1000.0 - entropy_inv(0.5).unwrap()).abs() < 1e-12);
        assert!(gv_bound(1000, 999).unwrap() < gv_bound(1000, 998).unwrap());
        assert!(gv_bound(1000, 999).unwrap() < 2.0);
        let surf = gv_bound(13976, 6988).unwrap();
        assert!((surf - 1537.8).abs() < 0.1, "{surf}");
        assert!(2668.0 > surf);
        assert!(gv_bound(10, 0).is_err());
    }

    #[test]
    fn prange_values() {
        let c = prange_exponent_classical(pt(0.5, 0.11)).unwrap();
        assert!((c - 0.1199).abs() < 5e-4, "{c}");
        let c = prange_exponent_classical(pt(0.5, 0.190899)).unwrap();
        assert!((c - 0.02029).abs() < 5e-4, "{c}");
        let q = prange_exponent_quantum(pt(0.5, 0.11)).unwrap();
        assert!((q - 0.059958).abs() < 5e-4, "{q}");
        let q = prange_exponent_quantum(pt(0.5, 0.190899)).unwrap();
        assert!((q - 0.010139).abs() < 5e-4, "{q}");
        assert_eq!(prange_exponent_classical(pt(0.5, 0.25)).unwrap(), 0.0);
        assert_eq!(prange_exponent_quantum(pt(0.4, 0.3)).unwrap(), 0.0);
        assert!(prange_exponent_classical(pt(0.5, 0.3)).is_err());
    }

    #[test]
    fn doom_values() {
        let r = doom_quantum_exponent(pt(0.5, 0.11)).unwrap();
        assert!((r.exponent - 0.056683).abs() < 1e-3, "{r:?}");
        assert!(r.residual <= 1e-9);
        let r = doom_quantum_exponent(pt(0.5, 0.190899)).unwrap();
        assert!((r.exponent - 0.009159).abs() < 1e-3, "{r:?}");
        assert!(pt(0.5, 0.11).below_gv());
        assert!(!pt(0.5, 0.1101).below_gv());
        assert!(doom_quantum_exponent(pt(0.5, 0.3)).is_err());
    }

    #[test]
    fn zero_window_collapses_to_prange() {
        for w in [0.11, 0.15, 0.190899, 0.24] {
            let p = doom_quantum_objective(pt(0.5, w), 0.0).unwrap();
            assert_eq!(p.pi, 0.0);
            let q = prange_exponent_quantum(pt(0.5, w)).unwrap();
            assert!((p.objective - q).abs() < 1e-12);
        }
    }

    #[test]
    fn doom_never_exceeds_prange_on_grid() {
        for r in [0.3, 0.5, 0.7] {
            let probe = pt(r, 0.2);
            let (lo, hi) = (probe.gv_omega(), (1.0 - r) / 2.0);
            for i in 0..20 {
                let w = lo + (hi - lo) * i as f64 / 20.0;
                let p = pt(r, w.max(1e-6));
                let d = doom_quantum_exponent(p).unwrap();
                let q = prange_exponent_quantum(p).unwrap();
                assert!(d.exponent <= q + 1e-9, "R={r} ω={w}: {} > {q}", d.exponent);
            }
        }
    }

    #[test]
    fn stable_under_grid_halving() {
        for w in [0.11, 0.15, 0.190899] {
            let a = doom_quantum_exponent_with_step(pt(0.5, w), 1e-3).unwrap();
            let b = doom_quantum_exponent_with_step(pt(0.5, w), 5e-4).unwrap();
            assert!((a.exponent - b.exponent).abs() < 1e-6, "{a:?} {b:?}");
        }
    }

    #[test]
    fn continuity_in_omega() {
        let mut w = 0.111;
        while w < 0.249 {
            let a = doom_quantum_exponent(pt(0.5, w)).unwrap().exponent;
            let b = doom_quantum_exponent(pt(0.5, w + 1e-4)).unwrap().exponent;
            assert!((a - b).abs() < 1e-2);
            let a = prange_exponent_classical(pt(0.5, w)).unwrap();
            let b = prange_exponent_classical(pt(0.5, w + 1e-4)).unwrap();
            assert!((a - b).abs() < 1e-2);
            w += 0.01;
        }
    }

    #[test]
    fn entropy_round_trip_sweep() {
        for i in 0..=1000 {
            let y = i as f64 / 1000.0;
            let x = entropy_inv(y).unwrap();
            assert!((0.0..=0.5).contains(&x));
            assert!((entropy(x).unwrap() - y).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn entropy_symmetric(x in 0.0f64..=1.0) {
            prop_assert!((entropy(x).unwrap() - entropy(1.0 - x).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn classical_nonnegative(r in 0.05f64..0.95, t in 0.01f64..=1.0) {
            let w = t * (1.0 - r) / 2.0;
            let c = prange_exponent_classical(pt(r, w)).unwrap();
            prop_assert!(c >= 0.0);
        }
    }
}
