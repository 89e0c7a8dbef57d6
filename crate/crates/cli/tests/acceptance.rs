//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Run with `cargo test -p mulmeasure-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines. Every tolerance is pinned here; "exact"
//! means equality of exact values, no floating point involved.

use mulmeasure::families::{cantor_gaps, geometric_family, telescoping_family, LogCantor};
use mulmeasure::intervals::{dilate, PosIntervalSet, RealIntervalSet};
use mulmeasure::measure::{
    caratheodory_test, cover_value, greedy_cover, lambda_quadrature, mu, mu_countable_with,
    mu_log_image, null_equivalence_limit, outer_measure, partial_union_measure,
};
use mulmeasure::mvalue::{
    infinite_product, iterated_double_product, rearrange_double_to_single, rearranged_product,
    telescoping_epsilon_closed_form, telescoping_epsilon_product, DoubleFactorFamily,
    IterationOrder, MValue, Pairing, Permutation, ProductOptions, ProductStatus,
};
use mulmeasure::{ratio, BigInt, BigRational};
use mulmeasure_cli::ast::print_expr;
use mulmeasure_cli::gen::{self, GenConfig};
use mulmeasure_cli::parse::parse;
use mulmeasure_cli::rng::SplitMix64;
use num_traits::One;

const SEED: u64 = 0x5EED_ACCE;

fn rng_for(criterion: &str, trial: u64) -> SplitMix64 {
    SplitMix64::derive(SEED, criterion, trial)
}

fn pass(number: u32, title: &str) {
    println!("acceptance {number:02} ({title}): PASS");
}

/// 1. Exterior measure of a closed interval equals hi/lo, exactly.
#[test]
fn criterion_01_interval_length_law() {
    let cfg = GenConfig::default();
    for trial in 0..1000 {
        let mut rng = rng_for("interval-length", trial);
        let interval = gen::closed_interval(&mut rng, &cfg);
        let set = PosIntervalSet::singleton(interval.clone());
        let (Some(lo), Some(hi)) = interval.value_span() else { unreachable!() };
        let expected = MValue::rational(hi / lo).expect("hi >= lo");
        assert_eq!(outer_measure(&set), expected, "trial {trial}: I = {interval}");
    }
    pass(1, "interval length law, 1000 trials exact");
}

/// 2. Finite disjoint multiplicativity, exactly.
#[test]
fn criterion_02_finite_disjoint_multiplicativity() {
    let cfg = GenConfig::default();
    for trial in 0..500 {
        let mut rng = rng_for("disjoint-multiplicativity", trial);
        let members = rng.range_inclusive(2, 8);
        let family = gen::disjoint_family(&mut rng, &cfg, members);
        let mut union = PosIntervalSet::empty();
        let mut product = MValue::one();
        for part in &family {
            assert!(union.is_disjoint_from(part), "trial {trial}: family not disjoint");
            union = union.union(part);
            product = product * mu(part);
        }
        assert_eq!(mu(&union), product, "trial {trial}");
    }
    pass(2, "finite disjoint multiplicativity, 500 trials exact");
}

/// 3. Submultiplicativity over overlapping families, exactly.
#[test]
fn criterion_03_submultiplicativity() {
    let cfg = GenConfig::default();
    for trial in 0..500 {
        let mut rng = rng_for("submultiplicativity", trial);
        let members = rng.range_inclusive(1, 6);
        let parts: Vec<PosIntervalSet> =
            (0..members).map(|_| gen::set(&mut rng, &cfg)).collect();
        let mut union = PosIntervalSet::empty();
        let mut product = MValue::one();
        for part in &parts {
            union = union.union(part);
            product = product * mu(part);
        }
        assert!(mu(&union) <= product, "trial {trial}");
    }
    pass(3, "submultiplicativity, 500 trials exact");
}

/// 4. The Caratheodory splitting equality, including infinite cases.
#[test]
fn criterion_04_caratheodory() {
    let cfg = GenConfig::default();
    for trial in 0..1000 {
        let mut rng = rng_for("caratheodory", trial);
        let e = gen::set(&mut rng, &cfg);
        let a = gen::set(&mut rng, &cfg);
        assert!(caratheodory_test(&e, &a), "trial {trial}: E = {e}, A = {a}");
    }
    pass(4, "caratheodory criterion, 1000 trials exact");
}

/// 5. Cover bounds: every valid cover dominates exactly; greedy covers meet
///    the exact (1 + eps) certificate at eps in {1/2, 1/10, 1/100}.
#[test]
fn criterion_05_cover_bounds() {
    let cfg = GenConfig::bounded();
    for trial in 0..500 {
        let mut rng = rng_for("cover-bounds", trial);
        let e = gen::bounded_set(&mut rng, &cfg);
        let cover = gen::valid_cover(&mut rng, &cfg, &e);
        let nu = cover_value(&cover).expect("generated covers are valid");
        assert!(nu >= outer_measure(&e), "trial {trial}: E = {e}");
    }
    for trial in 0..150 {
        let mut rng = rng_for("greedy-cover", trial);
        let e = gen::bounded_set(&mut rng, &cfg);
        for (num, den) in [(1i64, 2i64), (1, 10), (1, 100)] {
            let eps = ratio(num, den);
            let cover = greedy_cover(&e, &eps).expect("finite measure");
            let nu = cover_value(&cover).expect("greedy covers are valid");
            let bound = (BigRational::one() + &eps)
                * mu(&e).as_rational().expect("finite measure is rational");
            assert!(
                nu <= MValue::rational(bound).expect("bound >= 1"),
                "trial {trial}: eps = {eps}, E = {e}"
            );
        }
    }
    pass(5, "cover lower bounds and greedy certificates, exact");
}

/// 6. Countable multiplicativity, convergent case: both routes for the
///    telescoping family within 1e-10 of 2 using at most 1e4 terms; Cantor
///    gap partial products exact at every full depth <= 25, limit e.
#[test]
fn criterion_06_countable_convergent() {
    let telescoping = telescoping_family();
    let eval = mu_countable_with(&telescoping, &ProductOptions::with_log_tolerance(1e-10))
        .expect("telescoping family is disjoint");
    for route in [&eval.product_route, &eval.union_route] {
        assert_eq!(route.status, ProductStatus::Converged);
        assert!(route.terms_used <= 10_000, "route used {} terms", route.terms_used);
        assert!(
            (route.value.log_f64() - 2f64.ln()).abs() <= 1e-10,
            "route value {} is not within 1e-10 of 2",
            route.value
        );
    }
    // Both certified values are in fact exactly 2.
    assert_eq!(eval.product_route.value, MValue::rational(ratio(2, 1)).unwrap());
    assert_eq!(eval.union_route.value, MValue::rational(ratio(2, 1)).unwrap());

    let gaps = cantor_gaps(ratio(1, 1), 1 << 25).expect("positive length");
    let measures = gaps.measure_family();
    let mut partial = MValue::one();
    let mut k = 0u64;
    for depth in 1..=25u32 {
        while k < (1u64 << depth) - 1 {
            k += 1;
            partial = partial * measures.factor(k).expect("gap measures are >= 1");
        }
        let expected = BigRational::one()
            - BigRational::new(BigInt::from(2).pow(depth), BigInt::from(3).pow(depth));
        assert_eq!(
            partial,
            MValue::exp_log(expected).expect("nonnegative exponent"),
            "full depth {depth}"
        );
    }
    let limit = infinite_product(&measures, 1e-10).expect("gap family is valid");
    assert_eq!(limit.status, ProductStatus::Converged);
    assert_eq!(limit.value, MValue::exp_log(ratio(1, 1)).unwrap());
    pass(6, "countable multiplicativity, convergent case");
}

/// 7. Countable multiplicativity, divergent case: geometric(4, 2).
#[test]
fn criterion_07_countable_divergent() {
    let family = geometric_family(ratio(4, 1), ratio(2, 1)).expect("1 < 2 < 4");
    let eval = mu_countable_with(&family, &ProductOptions::with_log_tolerance(1e-9))
        .expect("geometric family is disjoint");
    assert_eq!(eval.product_route.status, ProductStatus::DivergesToInfinity);
    assert_eq!(eval.union_route.status, ProductStatus::DivergesToInfinity);
    assert!(eval.report.value.is_infinite());
    for n in 1..=64u64 {
        let truncated = partial_union_measure(&family, n).expect("disjoint");
        let expected = BigRational::from_integer(BigInt::from(2).pow(n as u32));
        assert_eq!(truncated, MValue::rational(expected).unwrap(), "truncation {n}");
    }
    pass(7, "countable multiplicativity, divergent case");
}

/// 8. The quadrature oracle for exp(int dx/x) agrees with the exact measure
///    to relative error 1e-10 on 100 random finite-measure sets.
#[test]
fn criterion_08_lambda_equivalence() {
    let cfg = GenConfig::bounded();
    for trial in 0..100 {
        let mut rng = rng_for("lambda", trial);
        let e = gen::bounded_set(&mut rng, &cfg);
        let lambda = lambda_quadrature(&e, 1e-11).expect("finite measure");
        let exact = mu(&e).to_f64();
        let rel = (lambda / exact - 1.0).abs();
        assert!(rel <= 1e-10, "trial {trial}: relative error {rel:.3e} on E = {e}");
    }
    pass(8, "lambda quadrature oracle, 100 trials at 1e-10");
}

/// 9. Null-set equivalence on the log-space Cantor set: stage measures are
///    exactly exp((2/3)^n), monotone to 1; stage lengths shrink to 0; the
///    stage-times-gaps partition multiplies to e at every n <= 20.
#[test]
fn criterion_09_null_set_equivalence() {
    let cantor = LogCantor::new(ratio(1, 1)).expect("positive length");
    let e = MValue::exp_log(ratio(1, 1)).unwrap();
    let mut previous_measure = None;
    let mut previous_length = None;
    let mut gaps_product = MValue::one();
    let mut k = 0u64;
    for n in 0..=20u32 {
        let ratio_pow = BigRational::new(BigInt::from(2).pow(n), BigInt::from(3).pow(n));
        let stage_measure = cantor.stage_measure(n);
        assert_eq!(
            stage_measure,
            MValue::exp_log(ratio_pow.clone()).unwrap(),
            "stage measure at n = {n}"
        );
        assert_eq!(cantor.stage_lebesgue_length(n), ratio_pow, "stage length at n = {n}");
        if let (Some(pm), Some(pl)) = (&previous_measure, &previous_length) {
            assert!(stage_measure < *pm, "measures decrease monotonically toward 1");
            assert!(ratio_pow < *pl, "lengths decrease monotonically toward 0");
        }
        // Partition identity: mu(stage n) * prod(gaps to depth n) = e.
        while k < (1u64 << n) - 1 {
            k += 1;
            gaps_product = gaps_product * cantor.gap_measure(k);
        }
        assert_eq!(stage_measure.clone() * gaps_product.clone(), e, "partition at n = {n}");
        previous_measure = Some(stage_measure);
        previous_length = Some(ratio_pow);
    }
    // The limit: exact geometric decay certifies measure -> 1 and length -> 0.
    assert!(null_equivalence_limit(&cantor, 20));
    pass(9, "null-set equivalence on the Cantor construction");
}

/// 10. Product calculus: three rearrangements of the telescoping product
///     within combined tolerance 1e-10 of 2; the exp(2^{-i-j}) grid equal
///     to e within 1e-12 along every route; the epsilon identity exact on
///     100 random pairs.
#[test]
fn criterion_10_product_calculus() {
    let telescoping = telescoping_family().measure_family();
    let two_log = 2f64.ln();
    for (label, rule) in [
        ("pair swap", Permutation::pair_swap()),
        ("block reversal", Permutation::block_reversal(8)),
        ("table", Permutation::Table(vec![12, 7, 3, 9, 1, 11, 5, 2, 10, 4, 8, 6])),
    ] {
        let result = rearranged_product(&telescoping, &rule, 1e-10).expect("valid rule");
        assert_eq!(result.status, ProductStatus::Converged, "{label}");
        let tolerance = 1e-10 + result.log_error_bound.unwrap_or(0.0);
        assert!(
            (result.value.log_f64() - two_log).abs() <= tolerance,
            "{label}: value {}",
            result.value
        );
        assert_eq!(result.value, MValue::rational(ratio(2, 1)).unwrap(), "{label} is exact");
    }

    let grid = exp_grid_family();
    let tol = 1e-12;
    let mut routes = vec![
        ("unordered", mulmeasure::mvalue::unordered_double_product(&grid, tol)),
        ("rows first", iterated_double_product(&grid, IterationOrder::RowsFirst, tol)),
        ("columns first", iterated_double_product(&grid, IterationOrder::ColumnsFirst, tol)),
    ];
    for (label, pairing) in [("diagonal", Pairing::Diagonal), ("snake", Pairing::SquareSnake)] {
        let single = rearrange_double_to_single(&grid, &pairing).expect("bijective pairing");
        routes.push((label, infinite_product(&single, tol)));
    }
    for (label, result) in routes {
        let result = result.expect("valid grid");
        assert_eq!(result.status, ProductStatus::Converged, "{label}");
        assert!(
            (result.value.log_f64() - 1.0).abs() <= tol,
            "{label}: value off e by more than 1e-12"
        );
    }

    for trial in 0..100 {
        let mut rng = rng_for("epsilon-identity", trial);
        let den = rng.range_inclusive(2, 300);
        let num = rng.range_inclusive(1, den - 1);
        let eps = ratio(num as i64, den as i64);
        let n = rng.range_inclusive(1, 50);
        assert_eq!(
            telescoping_epsilon_product(&eps, n).expect("eps in (0,1)"),
            telescoping_epsilon_closed_form(&eps, n),
            "trial {trial}: eps = {eps}, N = {n}"
        );
    }
    pass(10, "product calculus: rearrangement and double-product routes");
}

/// 11. Dilation invariance of the measure, exactly.
#[test]
fn criterion_11_dilation_invariance() {
    let cfg = GenConfig::default();
    for trial in 0..1000 {
        let mut rng = rng_for("dilation", trial);
        let c = gen::rational(&mut rng, &cfg);
        let e = gen::set(&mut rng, &cfg);
        let scaled = dilate(&c, &e).expect("c > 0");
        assert_eq!(mu(&scaled), mu(&e), "trial {trial}: c = {c}, E = {e}");
    }
    pass(11, "dilation invariance, 1000 trials exact");
}

/// 12. Parser robustness: 1000 printed expressions reparse identically and
///     100_000 fuzzed inputs are handled without a crash.
#[test]
fn criterion_12_parser_robustness() {
    let cfg = GenConfig::default();
    let mut rng = rng_for("round-trip", 0);
    for trial in 0..1000 {
        let expr = gen::expression(&mut rng, &cfg);
        let printed = print_expr(&expr);
        let reparsed = parse(&printed)
            .unwrap_or_else(|e| panic!("trial {trial}: {printed} failed to reparse: {e}"));
        assert!(expr.structural_eq(&reparsed), "trial {trial}: round trip changed {printed}");
    }
    let mut rng = rng_for("fuzz", 0);
    for _ in 0..100_000 {
        let input = gen::fuzz_string(&mut rng, 80);
        let _ = parse(&input); // must return, never panic
    }
    pass(12, "parser round-trip and fuzz robustness");
}

/// The grid `a_ij = exp(2^{-i-j})` with its exact tail bounds; exponents
/// sum to 1, so every evaluation route must land on e.
fn exp_grid_family() -> DoubleFactorFamily {
    DoubleFactorFamily::new(|i, j| {
        MValue::exp_log(BigRational::new(BigInt::one(), BigInt::from(2).pow((i + j) as u32)))
            .expect("nonnegative exponent")
    })
    .with_rect_tail(|n, m| 0.5f64.powi(n as i32) + 0.5f64.powi(m as i32))
    .with_row_tail(|i, m| 0.5f64.powi((i + m) as i32))
    .with_col_tail(|j, n| 0.5f64.powi((j + n) as i32))
    .with_row_outer_tail(|n| 0.5f64.powi(n as i32))
    .with_col_outer_tail(|m| 0.5f64.powi(m as i32))
}

/// Verify the partial-union route of criterion 6 on the log side as well:
/// the union of the first N gaps measures exactly exp(covered mass).
#[test]
fn criterion_06b_gap_unions_are_exact() {
    let cantor = LogCantor::new(ratio(1, 1)).expect("positive length");
    let family = cantor_gaps(ratio(1, 1), 4096).expect("positive length");
    for n in [1u64, 2, 3, 7, 15, 100, 1023] {
        let union_measure = partial_union_measure(&family, n).expect("gaps are disjoint");
        assert_eq!(
            union_measure,
            MValue::exp_log(cantor.covered_by_gaps(n)).expect("nonnegative"),
            "union of first {n} gaps"
        );
    }
    // Gap unions in log space respect the stage partition too.
    let stage = cantor.stage_set(10);
    let gaps = RealIntervalSet::from_intervals((1..(1u64 << 10)).map(|k| cantor.gap(k)));
    assert_eq!(mu_log_image(&stage.union(&gaps)), MValue::exp_log(ratio(1, 1)).unwrap());
    pass(6, "gap partial unions measure exactly (supplement)");
}
