//! End-to-end checks of the command surface: spec examples, exit codes,
//! deterministic output, round-trips, and crash-freedom on garbage input.

use mulmeasure_cli::ast::print_expr;
use mulmeasure_cli::cmd::run;
use mulmeasure_cli::gen;
use mulmeasure_cli::parse::parse;
use mulmeasure_cli::rng::SplitMix64;

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("mulmeasure".to_string())
        .chain(args.iter().map(|s| s.to_string()));
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).expect("reports are UTF-8"))
}

#[test]
fn measure_spec_examples() {
    let (code, out) = run_cli(&["measure", "union([1,2],[3,6])"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"value":"4/1","method":"ExactComponents"}"#);

    let (code, out) = run_cli(&["measure", "(0,1)"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"inf""#));

    let (code, out) = run_cli(&["measure", "[7/2,7/2]"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"1/1""#));
}

#[test]
fn measure_families_and_flags() {
    let (code, out) = run_cli(&["measure", "telescoping()"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"2/1""#), "{out}");
    assert!(out.contains(r#""method":"GeneratorLimit""#));

    let (code, out) = run_cli(&["measure", "cantor_gaps(1,100)"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"exp(1/1)""#), "{out}");

    let (code, out) = run_cli(&["measure", "cantor_gaps(1,100)", "--float"]);
    assert_eq!(code, 0);
    assert!(out.contains("2.718281828459045"), "{out}");

    let (code, out) = run_cli(&["measure", "[1,4]", "--log-domain"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"log(4/1)""#), "{out}");

    let (code, out) = run_cli(&["measure", "log([1,4])"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"4/1""#), "{out}");

    let (code, out) = run_cli(&["measure", "geometric(4,2)"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"inf""#), "{out}");
}

#[test]
fn eval_prints_canonical_forms() {
    let (code, out) = run_cli(&["eval", "diff([1,4],(2,3))"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"[1,2] U [3,4]""#), "{out}");

    let (code, out) = run_cli(&["eval", "complement((0,1))"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"[1,inf)""#), "{out}");

    let (code, out) = run_cli(&["eval", "log([1,4])"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"[0,log(4)]""#), "{out}");

    let (code, out) = run_cli(&["eval", "{}"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"{}""#), "{out}");
}

#[test]
fn exit_codes_follow_the_contract() {
    // Usage errors: 2.
    let (code, _) = run_cli(&["measure"]);
    assert_eq!(code, 2);
    let (code, _) = run_cli(&["bogus-subcommand"]);
    assert_eq!(code, 2);
    // Parse/type/domain errors: 2, with a structured report.
    let (code, out) = run_cli(&["measure", "[2,1]"]);
    assert_eq!(code, 2);
    assert!(out.contains(r#""kind":"domain""#), "{out}");
    let (code, out) = run_cli(&["measure", "inter(telescoping(),[1,2])"]);
    assert_eq!(code, 2);
    assert!(out.contains(r#""kind":"type""#), "{out}");
    let (code, out) = run_cli(&["measure", "union([1,2]"]);
    assert_eq!(code, 2);
    assert!(out.contains(r#""kind":"syntax""#), "{out}");
    assert!(out.contains(r#""line":1"#), "{out}");
    // Measure-level failures: 1.
    let (code, out) = run_cli(&["cover", "(0,1)", "--epsilon", "1/10"]);
    assert_eq!(code, 1);
    assert!(out.contains("infinite"), "{out}");
    // Success: 0.
    let (code, _) = run_cli(&["verify", "--suite", "algebra", "--trials", "25", "--seed", "7"]);
    assert_eq!(code, 0);
}

#[test]
fn cover_reports_the_exact_certificate() {
    let (code, out) = run_cli(&["cover", "union([1,2],[3,6])", "--epsilon", "1/2"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""within_bound":true"#), "{out}");
    assert!(out.contains(r#""mu":"4/1""#), "{out}");
    assert!(out.contains(r#""bound":"6/1""#), "{out}");
}

#[test]
fn verify_reports_are_deterministic() {
    let (code_a, out_a) =
        run_cli(&["verify", "--suite", "measure", "--trials", "40", "--seed", "11"]);
    let (code_b, out_b) =
        run_cli(&["verify", "--suite", "measure", "--trials", "40", "--seed", "11"]);
    assert_eq!(code_a, 0);
    assert_eq!(code_a, code_b);
    assert_eq!(out_a, out_b);
    // A different seed is allowed to differ in its trials but must pass too.
    let (code_c, _) = run_cli(&["verify", "--suite", "measure", "--trials", "40", "--seed", "12"]);
    assert_eq!(code_c, 0);
}

#[test]
fn measure_reports_are_deterministic() {
    let (_, a) = run_cli(&["measure", "cantor_gaps(1,64)"]);
    let (_, b) = run_cli(&["measure", "cantor_gaps(1,64)"]);
    assert_eq!(a, b);
}

#[test]
fn printed_expressions_reparse_identically() {
    let cfg = gen::GenConfig::default();
    let mut rng = SplitMix64::new(2024);
    for _ in 0..1000 {
        let expr = gen::expression(&mut rng, &cfg);
        let printed = print_expr(&expr);
        let reparsed = parse(&printed)
            .unwrap_or_else(|e| panic!("printed form failed to parse: {printed}: {e}"));
        assert!(
            expr.structural_eq(&reparsed),
            "round trip changed the tree for {printed}"
        );
    }
}

#[test]
fn fuzzed_inputs_never_panic() {
    let mut rng = SplitMix64::new(7);
    for _ in 0..20_000 {
        let input = gen::fuzz_string(&mut rng, 60);
        let _ = parse(&input);
    }
}

#[test]
fn tolerance_env_var_is_tolerated() {
    // An unparsable value falls back to the default; a valid one is
    // accepted. Either way the exact-tail families still certify exactly.
    std::env::set_var("MULMEASURE_TOL", "not-a-number");
    let (code, out) = run_cli(&["measure", "telescoping()"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"2/1""#));
    std::env::set_var("MULMEASURE_TOL", "1e-6");
    let (code, out) = run_cli(&["measure", "cantor_gaps(1,50)"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""value":"exp(1/1)""#));
    std::env::remove_var("MULMEASURE_TOL");
}
