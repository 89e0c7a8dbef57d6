//! The named verification suites behind `verify --suite ...`.
//!
//! Every trial draws its inputs from a stream derived from the seed, the
//! property name, and the trial index, so results are reproducible and
//! independent of property ordering. A failing trial is shrunk by dropping
//! set components while the failure persists, and the minimized inputs are
//! reported in canonical textual form.

use num_rational::BigRational;
use num_traits::One;

use mulmeasure::families::{cantor_gaps, geometric_family, telescoping_family, LogCantor};
use mulmeasure::intervals::{
    dilate, exp_transform, log_transform, normalize, PosIntervalSet,
};
use mulmeasure::measure::{
    caratheodory_test, cover_value, greedy_cover, lambda_quadrature, mu, mu_countable_with,
    mu_log_image, null_equivalence_limit, outer_measure, partial_union_measure,
};
use mulmeasure::mvalue::{
    finite_product, infinite_product, iterated_double_product, rearrange_double_to_single,
    rearranged_product, telescoping_epsilon_closed_form, telescoping_epsilon_product,
    DoubleFactorFamily, FactorFamily, IterationOrder, MValue, Pairing, Permutation,
    ProductOptions, ProductStatus,
};
use mulmeasure::{ratio, BigInt};

use crate::gen::{self, GenConfig};
use crate::rng::SplitMix64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Products,
    Algebra,
    Measure,
    Countable,
    Lambda,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Products => "products",
            Suite::Algebra => "algebra",
            Suite::Measure => "measure",
            Suite::Countable => "countable",
            Suite::Lambda => "lambda",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub trials: u64,
    pub failures: u64,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub outcomes: Vec<PropertyOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.failures == 0)
    }
}

/// Evaluation tolerance shared by the limit-taking properties.
const LIMIT_TOL: f64 = 1e-10;

type Trial = dyn Fn(&mut SplitMix64) -> Result<(), String>;

struct Property {
    name: &'static str,
    /// Randomized properties run `trials` times; deterministic checks once.
    randomized: bool,
    run: Box<Trial>,
}

fn property(
    name: &'static str,
    randomized: bool,
    run: impl Fn(&mut SplitMix64) -> Result<(), String> + 'static,
) -> Property {
    Property { name, randomized, run: Box::new(run) }
}

/// Shrink a failing tuple of sets by dropping one component at a time.
fn shrink_sets(
    mut sets: Vec<PosIntervalSet>,
    fails: impl Fn(&[PosIntervalSet]) -> bool,
) -> Vec<PosIntervalSet> {
    loop {
        let mut improved = false;
        'outer: for i in 0..sets.len() {
            let comps = sets[i].components().to_vec();
            for k in 0..comps.len() {
                let mut fewer = comps.clone();
                fewer.remove(k);
                let mut candidate = sets.clone();
                candidate[i] = normalize(fewer);
                if fails(&candidate) {
                    sets = candidate;
                    improved = true;
                    break 'outer;
                }
            }
        }
        if !improved {
            return sets;
        }
    }
}

fn describe_sets(label: &[&str], sets: &[PosIntervalSet]) -> String {
    label
        .iter()
        .zip(sets)
        .map(|(name, set)| format!("{name} = {set}"))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Check one failing predicate over sets, shrinking on failure.
fn check_sets(
    labels: &'static [&'static str],
    sets: Vec<PosIntervalSet>,
    holds: impl Fn(&[PosIntervalSet]) -> bool,
) -> Result<(), String> {
    if holds(&sets) {
        return Ok(());
    }
    let minimized = shrink_sets(sets, |candidate| !holds(candidate));
    Err(describe_sets(labels, &minimized))
}

fn products_properties() -> Vec<Property> {
    let mut props = Vec::new();
    props.push(property("partial products are monotone", true, |rng| {
        let factors = gen::factor_list(rng, 20);
        let mut previous = MValue::one();
        for k in 1..=factors.len() {
            let p = finite_product(&factors[..k]).map_err(|e| e.to_string())?;
            if p < previous {
                return Err(format!("partial product dropped at k = {k}"));
            }
            previous = p;
        }
        Ok(())
    }));
    props.push(property("finite products are permutation invariant", true, |rng| {
        let factors = gen::factor_list(rng, 12);
        let direct = finite_product(&factors).map_err(|e| e.to_string())?;
        let mut shuffled = factors.clone();
        gen::shuffle(rng, &mut shuffled);
        let permuted = finite_product(&shuffled).map_err(|e| e.to_string())?;
        if direct != permuted {
            return Err(format!("products differ: {direct} vs {permuted}"));
        }
        Ok(())
    }));
    props.push(property("telescoping rearrangements converge to 2", false, |_| {
        let family = telescoping_measure_family();
        let two = MValue::rational(ratio(2, 1)).expect("2 >= 1");
        for (label, rule) in [
            ("pair swap", Permutation::pair_swap()),
            ("block reversal", Permutation::block_reversal(4)),
            ("table", Permutation::Table(vec![5, 2, 7, 1, 8, 3, 6, 4])),
        ] {
            let result =
                rearranged_product(&family, &rule, LIMIT_TOL).map_err(|e| e.to_string())?;
            if result.status != ProductStatus::Converged || result.value != two {
                return Err(format!("{label}: value {} status {:?}", result.value, result.status));
            }
        }
        Ok(())
    }));
    props.push(property("double-product routes agree on the exp grid", false, |_| {
        let family = exp_grid_family();
        let tol = 1e-12;
        let mut results = Vec::new();
        results.push(("unordered", mulmeasure::mvalue::unordered_double_product(&family, tol)));
        results.push((
            "rows first",
            iterated_double_product(&family, IterationOrder::RowsFirst, tol),
        ));
        results.push((
            "columns first",
            iterated_double_product(&family, IterationOrder::ColumnsFirst, tol),
        ));
        for (label, pairing) in
            [("diagonal", Pairing::Diagonal), ("square snake", Pairing::SquareSnake)]
        {
            let single = rearrange_double_to_single(&family, &pairing)
                .map_err(|e| e.to_string())?;
            results.push((label, infinite_product(&single, tol)));
        }
        for (label, result) in results {
            let result = result.map_err(|e| e.to_string())?;
            let gap = (result.value.log_f64() - 1.0).abs();
            if result.status != ProductStatus::Converged || gap > tol {
                return Err(format!("{label}: off e by {gap}"));
            }
        }
        Ok(())
    }));
    props.push(property("epsilon telescoping identity is exact", true, |rng| {
        let den = rng.range_inclusive(2, 200);
        let num = rng.range_inclusive(1, den - 1);
        let eps = ratio(num as i64, den as i64);
        let n = rng.range_inclusive(1, 50);
        let product = telescoping_epsilon_product(&eps, n).map_err(|e| e.to_string())?;
        let closed = telescoping_epsilon_closed_form(&eps, n);
        if product != closed {
            return Err(format!("eps = {eps}, N = {n}"));
        }
        Ok(())
    }));
    props.push(property("identity and absorption", true, |rng| {
        let factors = gen::factor_list(rng, 6);
        for v in factors {
            if &v * &MValue::one() != v || &MValue::one() * &v != v {
                return Err(format!("identity failed at {v}"));
            }
            if !(&v * &MValue::infinity()).is_infinite() {
                return Err(format!("absorption failed at {v}"));
            }
        }
        Ok(())
    }));
    props
}

fn algebra_properties() -> Vec<Property> {
    let cfg = GenConfig::default;
    let mut props = Vec::new();
    props.push(property("normalization is canonical", true, move |rng| {
        let e = gen::set(rng, &cfg());
        let renorm = normalize(e.components().iter().cloned());
        if renorm != e {
            return Err(format!("e = {e}"));
        }
        Ok(())
    }));
    props.push(property("boolean algebra laws", true, move |rng| {
        let a = gen::set(rng, &cfg());
        let b = gen::set(rng, &cfg());
        let c = gen::set(rng, &cfg());
        check_sets(&["A", "B", "C"], vec![a, b, c], |sets| {
            let (a, b, c) = (&sets[0], &sets[1], &sets[2]);
            a.union(b) == b.union(a)
                && a.intersection(b) == b.intersection(a)
                && a.union(b).union(c) == a.union(&b.union(c))
                && a.intersection(b).intersection(c) == a.intersection(&b.intersection(c))
                && a.intersection(&b.union(c))
                    == a.intersection(b).union(&a.intersection(c))
                && a.union(&b.intersection(c)) == a.union(b).intersection(&a.union(c))
                && a.union(b).complement() == a.complement().intersection(&b.complement())
                && a.intersection(b).complement() == a.complement().union(&b.complement())
        })
    }));
    props.push(property("interval length is at least 1", true, move |rng| {
        let i = gen::interval(rng, &cfg());
        if i.length() < MValue::one() {
            return Err(format!("interval {i}"));
        }
        Ok(())
    }));
    props.push(property("length obeys the two-interval cover bound", true, move |rng| {
        let cfg = cfg();
        let mut points = [
            gen::rational(rng, &cfg),
            gen::rational(rng, &cfg),
            gen::rational(rng, &cfg),
            gen::rational(rng, &cfg),
        ];
        points.sort();
        let [lo, m1, m2, hi] = points;
        if !(lo < m1 && m1 <= m2 && m2 < hi) {
            return Ok(()); // degenerate draw
        }
        let i = mulmeasure::intervals::PosInterval::closed(lo.clone(), hi.clone()).unwrap();
        let j1 = mulmeasure::intervals::PosInterval::closed(lo, m2).unwrap();
        let j2 = mulmeasure::intervals::PosInterval::closed(m1, hi).unwrap();
        if i.length() > j1.length() * j2.length() {
            return Err(format!("I = {i}, J1 = {j1}, J2 = {j2}"));
        }
        Ok(())
    }));
    props.push(property("dilation preserves structure and lengths", true, move |rng| {
        let cfg = cfg();
        let c = gen::rational(rng, &cfg);
        let e = gen::set(rng, &cfg);
        let scaled = dilate(&c, &e).map_err(|e| e.to_string())?;
        if scaled.components().len() != e.components().len() {
            return Err(format!("c = {c}, E = {e}"));
        }
        for (x, y) in e.components().iter().zip(scaled.components()) {
            if x.length() != y.length() {
                return Err(format!("c = {c}, E = {e}"));
            }
        }
        let back = dilate(&c.recip(), &scaled).map_err(|e| e.to_string())?;
        if back != e {
            return Err(format!("c = {c}, E = {e}"));
        }
        Ok(())
    }));
    props.push(property("exp inverts log bit-exactly", true, move |rng| {
        let e = gen::set(rng, &cfg());
        let round = exp_transform(&log_transform(&e)).map_err(|e| e.to_string())?;
        if round != e {
            return Err(format!("E = {e}"));
        }
        Ok(())
    }));
    props
}

fn measure_properties() -> Vec<Property> {
    let cfg = GenConfig::default;
    let bounded = GenConfig::bounded;
    let mut props = Vec::new();
    props.push(property("outer measure of an interval is its length", true, move |rng| {
        let i = gen::closed_interval(rng, &cfg());
        let set = PosIntervalSet::singleton(i.clone());
        if outer_measure(&set) != i.length() {
            return Err(format!("I = {i}"));
        }
        Ok(())
    }));
    props.push(property("monotone under inclusion", true, move |rng| {
        let a = gen::set(rng, &cfg());
        let b = gen::set(rng, &cfg());
        check_sets(&["A", "B"], vec![a, b], |sets| {
            let smaller = sets[0].intersection(&sets[1]);
            outer_measure(&smaller) <= outer_measure(&sets[0])
        })
    }));
    props.push(property("submultiplicative over arbitrary unions", true, move |rng| {
        let count = rng.range_inclusive(1, 4);
        let sets: Vec<PosIntervalSet> = (0..count).map(|_| gen::set(rng, &cfg())).collect();
        check_sets(&["E1", "E2", "E3", "E4"], sets, |sets| {
            let mut union = PosIntervalSet::empty();
            let mut product = MValue::one();
            for part in sets {
                union = union.union(part);
                product = product * mu(part);
            }
            mu(&union) <= product
        })
    }));
    props.push(property("multiplicative over disjoint unions", true, move |rng| {
        let count = rng.range_inclusive(2, 8);
        let family = gen::disjoint_family(rng, &cfg(), count);
        check_sets(&["E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8"], family, |sets| {
            let mut union = PosIntervalSet::empty();
            let mut product = MValue::one();
            for part in sets {
                union = union.union(part);
                product = product * mu(part);
            }
            mu(&union) == product
        })
    }));
    props.push(property("every valid cover dominates the measure", true, move |rng| {
        let e = gen::bounded_set(rng, &bounded());
        let cover = gen::valid_cover(rng, &bounded(), &e);
        let nu = cover_value(&cover).map_err(|err| format!("{err}: E = {e}"))?;
        if nu < outer_measure(&e) {
            return Err(format!("E = {e}"));
        }
        Ok(())
    }));
    props.push(property("greedy covers meet the (1+eps) certificate", true, move |rng| {
        let e = gen::bounded_set(rng, &bounded());
        for (num, den) in [(1i64, 2i64), (1, 10), (1, 100)] {
            let eps = ratio(num, den);
            let cover = greedy_cover(&e, &eps).map_err(|err| err.to_string())?;
            let nu = cover_value(&cover).map_err(|err| err.to_string())?;
            let mu_e = mu(&e);
            let bound = (BigRational::one() + &eps)
                * mu_e.as_rational().expect("bounded sets have rational measure");
            if nu > MValue::rational(bound).expect("bound >= 1") || nu < mu_e {
                return Err(format!("eps = {eps}, E = {e}"));
            }
        }
        Ok(())
    }));
    props.push(property("caratheodory splitting equality", true, move |rng| {
        let e = gen::set(rng, &cfg());
        let a = gen::set(rng, &cfg());
        check_sets(&["E", "A"], vec![e, a], |sets| caratheodory_test(&sets[0], &sets[1]))
    }));
    props.push(property("dilation invariance of the measure", true, move |rng| {
        let cfg = cfg();
        let c = gen::rational(rng, &cfg);
        let e = gen::set(rng, &cfg);
        let scaled = dilate(&c, &e).map_err(|e| e.to_string())?;
        if mu(&scaled) != mu(&e) {
            return Err(format!("c = {c}, E = {e}"));
        }
        Ok(())
    }));
    props
}

fn countable_properties() -> Vec<Property> {
    let mut props = Vec::new();
    props.push(property("telescoping family: both routes give exactly 2", false, |_| {
        let family = telescoping_family();
        let eval = mu_countable_with(&family, &ProductOptions::with_log_tolerance(LIMIT_TOL))
            .map_err(|e| e.to_string())?;
        let two = MValue::rational(ratio(2, 1)).expect("2 >= 1");
        if eval.product_route.value != two || eval.union_route.value != two {
            return Err(format!(
                "product route {} / union route {}",
                eval.product_route.value, eval.union_route.value
            ));
        }
        Ok(())
    }));
    props.push(property("cantor gaps: exact partial products, limit e", false, |_| {
        let cantor = LogCantor::new(ratio(1, 1)).expect("positive length");
        let family = cantor_gaps(ratio(1, 1), 4096).expect("positive length");
        let measures = family.measure_family();
        for depth in 1..=12u32 {
            let partial = measures.partial_product((1 << depth) - 1).map_err(|e| e.to_string())?;
            let expected = BigRational::one()
                - BigRational::new(BigInt::from(2).pow(depth), BigInt::from(3).pow(depth));
            if partial != MValue::exp_log(expected).expect("nonnegative") {
                return Err(format!("depth {depth}"));
            }
        }
        let eval = mu_countable_with(&family, &ProductOptions::with_log_tolerance(LIMIT_TOL))
            .map_err(|e| e.to_string())?;
        let e = MValue::exp_log(ratio(1, 1)).expect("nonnegative");
        if eval.product_route.value != e || eval.union_route.value != e {
            return Err("limit is not e".to_string());
        }
        // Partition at each stage: remaining set times gaps = ambient.
        for n in 1..=12u32 {
            let gaps = mulmeasure::intervals::RealIntervalSet::from_intervals(
                (1..(1u64 << n)).map(|k| cantor.gap(k)),
            );
            let product = cantor.stage_measure(n) * mu_log_image(&gaps);
            if product != e {
                return Err(format!("partition identity failed at stage {n}"));
            }
        }
        Ok(())
    }));
    props.push(property("geometric family: divergence with exact truncations", false, |_| {
        let family = geometric_family(ratio(4, 1), ratio(2, 1)).expect("1 < 2 < 4");
        let eval = mu_countable_with(&family, &ProductOptions::with_log_tolerance(LIMIT_TOL))
            .map_err(|e| e.to_string())?;
        if eval.product_route.status != ProductStatus::DivergesToInfinity
            || eval.union_route.status != ProductStatus::DivergesToInfinity
        {
            return Err("divergence not detected".to_string());
        }
        for n in [1u64, 8, 40] {
            let truncated = partial_union_measure(&family, n).map_err(|e| e.to_string())?;
            let expected = BigRational::from_integer(BigInt::from(2).pow(n as u32));
            if truncated != MValue::rational(expected).expect(">= 1") {
                return Err(format!("truncation {n}"));
            }
        }
        Ok(())
    }));
    props
}

fn lambda_properties() -> Vec<Property> {
    let bounded = GenConfig::bounded;
    let mut props = Vec::new();
    props.push(property("quadrature oracle agrees with exact measure", true, move |rng| {
        let e = gen::bounded_set(rng, &bounded());
        let lambda = lambda_quadrature(&e, 1e-11).map_err(|err| err.to_string())?;
        let exact = mu(&e).to_f64();
        let rel = (lambda / exact - 1.0).abs();
        if rel > 1e-10 {
            return Err(format!("relative error {rel:.3e} on E = {e}"));
        }
        Ok(())
    }));
    props.push(property("cantor limit set is null with measure one", false, |_| {
        let cantor = LogCantor::new(ratio(1, 1)).expect("positive length");
        if !null_equivalence_limit(&cantor, 14) {
            return Err("geometric decay of stage measures broke".to_string());
        }
        Ok(())
    }));
    props
}

/// The telescoping factor family with its exact tail (for rearrangements).
fn telescoping_measure_family() -> FactorFamily {
    telescoping_family().measure_family()
}

/// The grid `a_ij = exp(2^{-i-j})` with exact upper tail bounds.
fn exp_grid_family() -> DoubleFactorFamily {
    DoubleFactorFamily::new(|i, j| {
        MValue::exp_log(BigRational::new(
            BigInt::from(1),
            BigInt::from(2).pow((i + j) as u32),
        ))
        .expect("nonnegative exponent")
    })
    .with_rect_tail(|n, m| 0.5f64.powi(n as i32) + 0.5f64.powi(m as i32))
    .with_row_tail(|i, m| 0.5f64.powi((i + m) as i32))
    .with_col_tail(|j, n| 0.5f64.powi((j + n) as i32))
    .with_row_outer_tail(|n| 0.5f64.powi(n as i32))
    .with_col_outer_tail(|m| 0.5f64.powi(m as i32))
}

fn properties_for(suite: Suite) -> Vec<Property> {
    match suite {
        Suite::Products => products_properties(),
        Suite::Algebra => algebra_properties(),
        Suite::Measure => measure_properties(),
        Suite::Countable => countable_properties(),
        Suite::Lambda => lambda_properties(),
        Suite::All => {
            let mut all = products_properties();
            all.extend(algebra_properties());
            all.extend(measure_properties());
            all.extend(countable_properties());
            all.extend(lambda_properties());
            all
        }
    }
}

/// Run a suite with a seeded deterministic generator; trial index order is
/// fixed, so reports are bit-identical across runs.
pub fn run_suite(suite: Suite, trials: u64, seed: u64) -> SuiteReport {
    let mut outcomes = Vec::new();
    for prop in properties_for(suite) {
        let runs = if prop.randomized { trials.max(1) } else { 1 };
        let mut failures = 0;
        let mut counterexample = None;
        for trial in 0..runs {
            let mut rng = SplitMix64::derive(seed, prop.name, trial);
            if let Err(cx) = (prop.run)(&mut rng) {
                failures += 1;
                if counterexample.is_none() {
                    counterexample = Some(format!("trial {trial}: {cx}"));
                }
            }
        }
        outcomes.push(PropertyOutcome { name: prop.name, trials: runs, failures, counterexample });
    }
    SuiteReport { suite, seed, outcomes }
}
