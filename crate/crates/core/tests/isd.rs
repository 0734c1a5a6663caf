mod common;

use codesig::combinatorics::next_combination;
use codesig::f2::{BitMatrix, BitVector, IndexSet};
use codesig::isd::{
    build_foursum_instance, doom_attack, generalized_isd, lift_foursum_solution, m_solutions,
    measure_iterations, solve_foursum, IsdParams, IterationStats, Schedule,
};
use codesig::oracle::{ShakeSyndromeOracle, SyndromeOracle};
use codesig::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// With `l = n - k - 1` the information set is one column. `p = w - 1`
/// reaches every solution with a non-zero support column; `p = w` reaches
/// the rest, which are supported on zero columns and force `s = 0`.
#[test]
fn exhaustive_isd_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..60 {
        let n: usize = rng.gen_range(6..=12);
        let k = rng.gen_range(2..=n - 3);
        let w = rng.gen_range(1..=(n - k).min(4));
        let h = BitMatrix::random_full_rank(n - k, n, &mut rng);
        let s = if rng.gen() {
            h.mul_vec(&BitVector::random_weight(n, w, &mut rng))
                .unwrap()
        } else {
            BitVector::random(n - k, &mut rng)
        };
        let solvable = !common::brute_force_solutions(&h, &s, w).is_empty();
        let run = |p: usize, rng: &mut ChaCha8Rng| {
            let params = IsdParams::new(p, n - k - 1, u64::MAX).with_schedule(Schedule::Exhaustive);
            generalized_isd(&h, &s, w, &params, rng)
        };
        let outcome = match run(w - 1, &mut rng) {
            Err(Error::NotFound { .. }) => run(w, &mut rng),
            other => other,
        };
        match outcome {
            Ok(found) => assert!(solvable && common::is_solution(&h, &s, &found.error, w)),
            Err(Error::NotFound { .. }) => {
                assert!(!solvable, "missed a solution at n={n} k={k} w={w}")
            }
            Err(e) => panic!("{e}"),
        }
    }
}

/// Smaller windows can miss solutions whose support columns cannot be
/// completed to an information set, but never report a false one.
#[test]
fn exhaustive_isd_is_sound_for_any_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..60 {
        let n: usize = rng.gen_range(6..=12);
        let k = rng.gen_range(2..=n - 3);
        let w = rng.gen_range(1..=(n - k).min(4));
        let l = rng.gen_range(0..=(n - k - 1).min(2));
        let p = rng.gen_range(w.saturating_sub(n - k - l)..=w.min(k + l));
        let h = BitMatrix::random_full_rank(n - k, n, &mut rng);
        let s = h
            .mul_vec(&BitVector::random_weight(n, w, &mut rng))
            .unwrap();
        let params = IsdParams::new(p, l, u64::MAX).with_schedule(Schedule::Exhaustive);
        match generalized_isd(&h, &s, w, &params, &mut rng) {
            Ok(found) => assert!(common::is_solution(&h, &s, &found.error, w)),
            Err(Error::NotFound { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn mean_solution_count_matches_formula() {
    // For a fixed non-zero s, E_H[#{e ∈ S_w : H eᵀ = s}] = C(n, w) / 2^{n-k}.
    let (n, k, w) = (24, 12, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let s = BitVector::random(n - k, &mut rng).to_u64() | 1;
    let mut total = 0u64;
    for _ in 0..500 {
        let h = BitMatrix::random(n - k, n, &mut rng);
        let cols: Vec<u64> = (0..n).map(|j| h.column(j).to_u64()).collect();
        let mut comb: Vec<usize> = (0..w).collect();
        loop {
            total += (comb.iter().fold(0, |a, &j| a ^ cols[j]) == s) as u64;
            if !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    let mean = total as f64 / 500.0;
    let expected = m_solutions(n, k, w).value();
    assert!((mean / expected - 1.0).abs() < 0.10, "{mean} vs {expected}");
}

#[test]
fn more_targets_raise_iteration_success() {
    // q M p ≈ 0.7 at q = 16, so the gain sits between linear and saturated.
    let (n, k, w) = (30, 15, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut one, mut many) = (IterationStats::default(), IterationStats::default());
    for _ in 0..200 {
        let h = BitMatrix::random_full_rank(n - k, n, &mut rng);
        let targets: Vec<BitVector> = (0..16)
            .map(|_| BitVector::random(n - k, &mut rng))
            .collect();
        one.merge(measure_iterations(&h, &targets[..1], w, 0, 0, 200, &mut rng).unwrap());
        many.merge(measure_iterations(&h, &targets, w, 0, 0, 200, &mut rng).unwrap());
    }
    let factor = many.rate() / one.rate();
    assert!((4.0..=16.0).contains(&factor), "factor {factor}");
}

#[test]
fn doom_validates_against_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = BitMatrix::random_full_rank(16, 32, &mut rng);
    let mut hash = ShakeSyndromeOracle::new(16);
    let found = doom_attack(
        &h,
        &mut hash,
        5,
        &IsdParams::new(1, 2, 100_000),
        64,
        &mut rng,
    )
    .unwrap();
    let e = found.solution.error();
    assert_eq!(e.weight(), 5);
    assert_eq!(h.mul_vec(e).unwrap(), hash.query(found.solution.preimage()));
}

#[test]
fn foursum_with_empty_blocks_is_prange_on_hashes() {
    // p = 0: V_1..V_3 hold only the zero word, so a solution is a hash input
    // whose s'' vanishes and whose s' has weight w.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (n, k, l, w) = (12, 4, 2, 3);
    let mut seen = 0;
    for _ in 0..200 {
        let h = BitMatrix::random_full_rank(n - k, n, &mut rng);
        let iset = IndexSet::random(n - k - l, n, &mut rng);
        let mut hash = ShakeSyndromeOracle::new(n - k);
        let Ok(inst) = build_foursum_instance(&h, &mut hash, &iset, 0, l, w) else {
            continue;
        };
        let (top, bottom) = inst
            .form
            .split_syndrome(&hash.query(&inst.preimages[0]))
            .unwrap();
        let expect = bottom.is_zero() && top.weight() == w;
        let got = solve_foursum(&inst, u64::MAX).unwrap();
        assert_eq!(got.is_empty(), !expect);
        for t in &got {
            seen += 1;
            let sol = lift_foursum_solution(&inst, t, &h, &mut hash).unwrap();
            assert_eq!(sol.error().weight(), w);
        }
    }
    assert!(seen > 0);
}
