//! Product-calculus tests: frozen oracle values, convergence contracts, and
//! rearrangement invariance.

use mulmeasure::mvalue::{
    finite_product, infinite_product, infinite_product_with, iterated_double_product,
    iterated_double_product_with, rearrange_double_to_single, rearranged_product,
    telescoping_epsilon_closed_form, telescoping_epsilon_product, unordered_double_product,
    unordered_double_product_with, Certification, DoubleFactorFamily, FactorFamily,
    IterationOrder, MValue, Pairing, Permutation, ProductError, ProductOptions, ProductStatus,
};
use mulmeasure::{ratio, BigInt, BigRational};
use num_traits::One;
use proptest::prelude::*;

fn mv_rat(n: i64, d: i64) -> MValue {
    MValue::rational(ratio(n, d)).unwrap()
}

/// The telescoping factor `(j+1)^2 / (j (j+2))`.
fn telescoping_factor(j: u64) -> BigRational {
    let j = BigInt::from(j);
    let jp1 = &j + 1;
    BigRational::new(&jp1 * &jp1, &j * (&j + 2))
}

/// Independent oracle: fold the factors directly in rational arithmetic.
fn brute_force_partial(n: u64) -> BigRational {
    let mut p = BigRational::one();
    for j in 1..=n {
        p *= telescoping_factor(j);
    }
    p
}

fn telescoping_family() -> FactorFamily {
    FactorFamily::new(|j| MValue::rational(telescoping_factor(j)).unwrap()).with_exact_tail(|n| {
        let n = BigInt::from(n);
        MValue::rational(BigRational::new(&n + 2, n + 1)).unwrap()
    })
}

/// The same family certified only through an upper bound on the log tail
/// (`log((N+2)/(N+1)) <= 1/(N+1)`), exercising the bounded path.
fn telescoping_family_upper_bound() -> FactorFamily {
    FactorFamily::new(|j| MValue::rational(telescoping_factor(j)).unwrap())
        .with_tail_log_bound(|n| 1.0 / (n as f64 + 1.0))
}

#[test]
fn telescoping_partial_products_match_brute_force_and_closed_form() {
    let family = telescoping_family();
    for n in [1u64, 2, 3, 7, 50, 1000] {
        let oracle = brute_force_partial(n);
        // Closed form 2(N+1)/(N+2) from the same telescoping.
        let closed = ratio(2, 1) * BigRational::new(BigInt::from(n + 1), BigInt::from(n + 2));
        assert_eq!(oracle, closed);
        assert_eq!(family.partial_product(n).unwrap(), MValue::rational(oracle).unwrap());
    }
}

#[test]
fn infinite_telescoping_product_is_exactly_two() {
    let result = infinite_product(&telescoping_family(), 1e-10).unwrap();
    assert_eq!(result.status, ProductStatus::Converged);
    assert_eq!(result.certification, Some(Certification::ExactTail));
    assert_eq!(result.value, mv_rat(2, 1));
    assert_eq!(result.log_error_bound, Some(0.0));
    assert!(result.terms_used <= 10_000);
}

#[test]
fn upper_bound_certification_reports_its_bound() {
    let result = infinite_product(&telescoping_family_upper_bound(), 1e-3).unwrap();
    assert_eq!(result.status, ProductStatus::Converged);
    assert_eq!(result.certification, Some(Certification::SuppliedBound));
    let bound = result.log_error_bound.unwrap();
    assert!(bound <= 1e-3);
    // The reported value is the partial product: below 2, within the bound.
    assert!(result.value < mv_rat(2, 1));
    assert!((result.value.log_f64() - 2f64.ln()).abs() <= bound);
}

#[test]
fn constant_factors_diverge() {
    let twos = FactorFamily::new(|_| mv_rat(2, 1));
    let result = infinite_product(&twos, 1e-9).unwrap();
    assert_eq!(result.status, ProductStatus::DivergesToInfinity);
    assert!(result.value.is_infinite());
    // log p_N = N log 2 crosses 700 at N = 1010.
    assert_eq!(result.terms_used, 1010);
}

#[test]
fn identity_factors_converge_to_one() {
    let ones = FactorFamily::new(|_| MValue::one());
    let result = infinite_product(&ones, 1e-9).unwrap();
    assert_eq!(result.status, ProductStatus::Converged);
    assert_eq!(result.certification, Some(Certification::Heuristic));
    assert!(result.value.is_one());
}

#[test]
fn geometric_log_factors_certify_heuristically() {
    // a_j = exp(2^-j): ratios of log factors are exactly 1/2.
    let family = FactorFamily::new(|j| {
        MValue::exp_log(BigRational::new(BigInt::from(1), BigInt::from(2).pow(j as u32))).unwrap()
    });
    let result = infinite_product(&family, 1e-10).unwrap();
    assert_eq!(result.status, ProductStatus::Converged);
    assert_eq!(result.certification, Some(Certification::Heuristic));
    // True limit is e; the certified bound must cover the gap.
    let gap = (result.value.log_f64() - 1.0).abs();
    assert!(gap <= result.log_error_bound.unwrap() + 1e-15);
}

#[test]
fn slowly_converging_family_stays_undetermined() {
    // a_j = 1 + 1/j^2 converges, but the log-ratio window never certifies
    // within the term budget, and no tail bound is supplied.
    let family = FactorFamily::new(|j| {
        MValue::rational(BigRational::one() + BigRational::new(1.into(), BigInt::from(j * j)))
            .unwrap()
    });
    let opts = ProductOptions { max_terms: 2_000, ..ProductOptions::with_log_tolerance(1e-10) };
    let result = infinite_product_with(&family, &opts).unwrap();
    assert_eq!(result.status, ProductStatus::Undetermined);
    assert!(result.log_error_bound.is_none());
}

#[test]
fn factors_below_one_are_rejected() {
    let family = FactorFamily::new(|j| {
        if j == 5 {
            MValue::ExactRational(ratio(1, 2))
        } else {
            MValue::one()
        }
    });
    assert_eq!(
        infinite_product(&family, 1e-9).unwrap_err(),
        ProductError::FactorBelowOne { index: 5 }
    );
    assert_eq!(
        finite_product(&[mv_rat(2, 1), MValue::ExactRational(ratio(2, 3))]).unwrap_err(),
        ProductError::FactorBelowOne { index: 2 }
    );
}

#[test]
fn finite_product_examples() {
    assert!(finite_product(&[]).unwrap().is_one());
    let p = finite_product(&[mv_rat(2, 1), mv_rat(3, 2), mv_rat(4, 3)]).unwrap();
    assert_eq!(p, mv_rat(4, 1));
    let quarter = MValue::exp_log(ratio(1, 4)).unwrap();
    let e = finite_product(&[quarter.clone(), quarter.clone(), quarter.clone(), quarter]).unwrap();
    assert_eq!(e, MValue::exp_log(ratio(1, 1)).unwrap());
}

#[test]
fn rearrangements_of_the_telescoping_family_agree_exactly() {
    let family = telescoping_family();
    let baseline = infinite_product(&family, 1e-10).unwrap();
    let rules = [
        Permutation::pair_swap(),
        Permutation::block_reversal(4),
        Permutation::Table(vec![7, 3, 1, 6, 2, 8, 5, 4]),
    ];
    for rule in &rules {
        let rearranged = rearranged_product(&family, rule, 1e-10).unwrap();
        assert_eq!(rearranged.status, ProductStatus::Converged);
        assert_eq!(rearranged.value, baseline.value, "rearranged value differs");
        let combined = baseline.log_error_bound.unwrap() + rearranged.log_error_bound.unwrap();
        assert!(
            (rearranged.value.log_f64() - baseline.value.log_f64()).abs() <= combined + 1e-15
        );
    }
}

#[test]
fn identity_permutation_matches_direct_evaluation() {
    let family = telescoping_family();
    let direct = infinite_product(&family, 1e-9).unwrap();
    let identity = rearranged_product(&family, &Permutation::Identity, 1e-9).unwrap();
    assert_eq!(direct.value, identity.value);
    assert_eq!(direct.terms_used, identity.terms_used);
}

#[test]
fn finite_support_swap_is_exact() {
    // Factors [2, 3, 1, 1, ...]; swapping the first two leaves the value 6.
    let family = FactorFamily::new(|j| match j {
        1 => mv_rat(2, 1),
        2 => mv_rat(3, 1),
        _ => MValue::one(),
    });
    let swap = Permutation::Table(vec![2, 1]);
    let swapped = rearranged_product(&family, &swap, 1e-9).unwrap();
    let direct = infinite_product(&family, 1e-9).unwrap();
    assert_eq!(swapped.value, mv_rat(6, 1));
    assert_eq!(direct.value, mv_rat(6, 1));
}

#[test]
fn non_injective_rules_error() {
    let family = telescoping_family();
    let constant = Permutation::rule(|_| 3);
    assert_eq!(
        rearranged_product(&family, &constant, 1e-9).unwrap_err(),
        ProductError::InvalidPermutation { index: 3 }
    );
    let zero = Permutation::rule(|_| 0);
    assert_eq!(
        rearranged_product(&family, &zero, 1e-9).unwrap_err(),
        ProductError::InvalidPermutation { index: 0 }
    );
}

#[test]
fn epsilon_telescoping_matches_frozen_oracle_values() {
    // Oracle: multiply the three factors for eps = 1/2 directly.
    //   (3/2)/(5/4) * (5/4)/(9/8) * (9/8)/(17/16) = (3/2)/(17/16) = 24/17.
    let eps = ratio(1, 2);
    assert_eq!(telescoping_epsilon_product(&eps, 3).unwrap(), ratio(24, 17));
    assert_eq!(telescoping_epsilon_product(&eps, 1).unwrap(), ratio(6, 5));
    assert_eq!(telescoping_epsilon_product(&eps, 0).unwrap(), ratio(1, 1));
    assert_eq!(
        telescoping_epsilon_product(&ratio(3, 2), 3).unwrap_err(),
        ProductError::EpsilonOutOfRange
    );
    assert_eq!(
        telescoping_epsilon_product(&ratio(0, 1), 3).unwrap_err(),
        ProductError::EpsilonOutOfRange
    );
}

/// The grid family `a_ij = exp(2^{-i-j})`, whose exponents sum to 1.
fn exp_grid_family() -> DoubleFactorFamily {
    DoubleFactorFamily::new(|i, j| {
        MValue::exp_log(BigRational::new(
            BigInt::from(1),
            BigInt::from(2).pow((i + j) as u32),
        ))
        .unwrap()
    })
    .with_rect_tail(|n, m| 0.5f64.powi(n as i32) + 0.5f64.powi(m as i32))
    .with_row_tail(|i, m| 0.5f64.powi((i + m) as i32))
    .with_col_tail(|j, n| 0.5f64.powi((j + n) as i32))
    .with_row_outer_tail(|n| 0.5f64.powi(n as i32))
    .with_col_outer_tail(|m| 0.5f64.powi(m as i32))
}

#[test]
fn double_product_routes_agree_on_the_exp_grid() {
    let family = exp_grid_family();
    let tol = 1e-12;
    let unordered = unordered_double_product(&family, tol).unwrap();
    let rows = iterated_double_product(&family, IterationOrder::RowsFirst, tol).unwrap();
    let cols = iterated_double_product(&family, IterationOrder::ColumnsFirst, tol).unwrap();
    let diagonal =
        infinite_product(&rearrange_double_to_single(&family, &Pairing::Diagonal).unwrap(), tol)
            .unwrap();
    let snake =
        infinite_product(&rearrange_double_to_single(&family, &Pairing::SquareSnake).unwrap(), tol)
            .unwrap();
    for result in [&unordered, &rows, &cols, &diagonal, &snake] {
        assert_eq!(result.status, ProductStatus::Converged);
        // True limit is e: |log(value) - 1| within the certified bound.
        let gap = (result.value.log_f64() - 1.0).abs();
        assert!(gap <= result.log_error_bound.unwrap() + 1e-15);
        assert!(gap <= tol);
    }
    // Pairwise agreement within combined bounds.
    let pairs = [(&unordered, &rows), (&unordered, &cols), (&diagonal, &snake)];
    for (a, b) in pairs {
        let combined = a.log_error_bound.unwrap() + b.log_error_bound.unwrap();
        assert!((a.value.log_f64() - b.value.log_f64()).abs() <= combined + 1e-15);
    }
}

#[test]
fn constant_one_grid_converges_to_one() {
    let family = DoubleFactorFamily::new(|_, _| MValue::one());
    let unordered = unordered_double_product(&family, 1e-9).unwrap();
    assert_eq!(unordered.status, ProductStatus::Converged);
    assert!(unordered.value.is_one());
    for order in [IterationOrder::RowsFirst, IterationOrder::ColumnsFirst] {
        let iterated = iterated_double_product(&family, order, 1e-9).unwrap();
        assert_eq!(iterated.status, ProductStatus::Converged);
        assert!(iterated.value.is_one());
    }
}

#[test]
fn harmonic_grid_diverges() {
    // a_ij = 1 + 1/(i j): sum of logs grows like (log N)^2, unbounded. The
    // default threshold of 700 sits beyond desk scale, so probe a lowered
    // (still configurable) threshold to witness the crossing.
    let family = DoubleFactorFamily::new(|i, j| {
        MValue::log_float((1.0 + 1.0 / (i as f64 * j as f64)).ln()).unwrap()
    });
    let opts = ProductOptions {
        divergence_log_threshold: 30.0,
        max_terms: 2_000_000,
        ..ProductOptions::with_log_tolerance(1e-9)
    };
    let result = unordered_double_product_with(&family, &opts).unwrap();
    assert_eq!(result.status, ProductStatus::DivergesToInfinity);
}

#[test]
fn single_row_telescoping_grid_converges_to_two() {
    // Row 1 telescopes to 2, every other row is identically 1.
    let family = DoubleFactorFamily::new(|i, j| {
        if i == 1 {
            MValue::rational(telescoping_factor(j)).unwrap()
        } else {
            MValue::one()
        }
    })
    .with_rect_tail(|_, m| 1.0 / (m as f64 + 1.0))
    .with_row_tail(|i, m| if i == 1 { 1.0 / (m as f64 + 1.0) } else { 0.0 })
    .with_col_tail(|_, _| 0.0)
    .with_row_outer_tail(|_| 0.0)
    .with_col_outer_tail(|m| 1.0 / (m as f64 + 1.0));
    // Row 1 only decays like 1/N, so a modest tolerance keeps the inner
    // evaluation inside the term budget.
    let tol = 1e-4;
    for order in [IterationOrder::RowsFirst, IterationOrder::ColumnsFirst] {
        let result = iterated_double_product(&family, order, tol).unwrap();
        assert_eq!(result.status, ProductStatus::Converged, "{order:?}");
        let gap = (result.value.log_f64() - 2f64.ln()).abs();
        assert!(gap <= result.log_error_bound.unwrap() + 1e-15, "{order:?}");
    }
}

#[test]
fn double_factor_below_one_is_located() {
    let family = DoubleFactorFamily::new(|i, j| {
        if (i, j) == (2, 3) {
            MValue::ExactRational(ratio(1, 2))
        } else {
            MValue::one()
        }
    });
    assert_eq!(
        unordered_double_product(&family, 1e-9).unwrap_err(),
        ProductError::DoubleFactorBelowOne { row: 2, col: 3 }
    );
}

#[test]
fn bad_pairings_are_rejected() {
    let family = exp_grid_family();
    let constant = Pairing::rule(|_| (1, 1));
    assert!(matches!(
        rearrange_double_to_single(&family, &constant).unwrap_err(),
        ProductError::InvalidPermutation { .. }
    ));
}

proptest! {
    /// Partial products of factors >= 1 are monotone nondecreasing.
    #[test]
    fn partial_products_are_monotone(factors in prop::collection::vec((1u32..200, 1u32..200), 1..20)) {
        let values: Vec<MValue> = factors
            .iter()
            .map(|(a, b)| {
                let (num, den) = if a >= b { (*a, *b) } else { (*b, *a) };
                MValue::rational(ratio(num as i64, den as i64)).unwrap()
            })
            .collect();
        let mut previous = MValue::one();
        for k in 1..=values.len() {
            let p = finite_product(&values[..k]).unwrap();
            prop_assert!(p >= previous);
            previous = p;
        }
    }

    /// Finite products are invariant under permutation, bit for bit.
    #[test]
    fn finite_rearrangement_is_exact(
        factors in prop::collection::vec((1u32..50, 1u32..50), 1..10),
        seed in 0u64..1000,
    ) {
        let values: Vec<MValue> = factors
            .iter()
            .map(|(a, b)| {
                let (num, den) = if a >= b { (*a, *b) } else { (*b, *a) };
                MValue::rational(ratio(num as i64, den as i64)).unwrap()
            })
            .collect();
        let direct = finite_product(&values).unwrap();
        // Deterministic shuffle driven by the seed.
        let mut shuffled = values.clone();
        let mut state = seed.wrapping_add(0x9E3779B97F4A7C15);
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let j = (state % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        let permuted = finite_product(&shuffled).unwrap();
        prop_assert_eq!(direct, permuted);
    }

    /// The epsilon-telescoping product equals its closed form exactly.
    #[test]
    fn epsilon_identity_holds(num in 1u32..100, den in 2u32..100, n in 1u64..50) {
        let (num, den) = if num < den { (num, den) } else { (den.saturating_sub(1).max(1), den) };
        prop_assume!(num < den);
        let eps = ratio(num as i64, den as i64);
        let product = telescoping_epsilon_product(&eps, n).unwrap();
        let closed = telescoping_epsilon_closed_form(&eps, n);
        prop_assert_eq!(product, closed);
    }

    /// Identity and absorption hold for every representation.
    #[test]
    fn identity_and_absorption(num in 1u32..1000, den in 1u32..1000) {
        let (n, d) = if num >= den { (num, den) } else { (den, num) };
        for v in [
            MValue::rational(ratio(n as i64, d as i64)).unwrap(),
            MValue::exp_log(ratio(num as i64, den as i64)).unwrap(),
            MValue::log_float(num as f64 / den as f64).unwrap(),
        ] {
            prop_assert_eq!(&v * &MValue::one(), v.clone());
            prop_assert_eq!(&MValue::one() * &v, v.clone());
            prop_assert!((&v * &MValue::infinity()).is_infinite());
            prop_assert!((&MValue::infinity() * &v).is_infinite());
        }
    }
}

#[test]
fn iterated_product_propagates_inner_undetermined() {
    // Rows converge like 1 + 1/(i j^2) but carry no tail bound the inner
    // evaluator can certify within its budget.
    let family = DoubleFactorFamily::new(|i, j| {
        MValue::rational(
            BigRational::one() + BigRational::new(1.into(), BigInt::from(i * j * j)),
        )
        .unwrap()
    });
    let opts = ProductOptions { max_terms: 300, ..ProductOptions::with_log_tolerance(1e-12) };
    let result =
        iterated_double_product_with(&family, IterationOrder::RowsFirst, &opts).unwrap();
    assert_eq!(result.status, ProductStatus::Undetermined);
}

#[test]
fn epsilon_telescoping_tends_to_one_plus_epsilon() {
    // The closed form (1+eps)/(1+eps^{N+1}) climbs monotonically to 1+eps.
    let eps = ratio(1, 2);
    let limit = BigRational::one() + &eps;
    let mut previous = telescoping_epsilon_closed_form(&eps, 1);
    for n in [2u64, 5, 20, 100, 400] {
        let value = telescoping_epsilon_closed_form(&eps, n);
        assert!(value > previous);
        assert!(value < limit);
        previous = value;
    }
    // At N = 400 the defect is (1+eps) eps^{401} / (1 + eps^{401}).
    let defect = &limit - telescoping_epsilon_closed_form(&eps, 400);
    let mut bound = BigRational::one();
    for _ in 0..390 {
        bound /= ratio(2, 1);
    }
    assert!(defect < bound);
}
