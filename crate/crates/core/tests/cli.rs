use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use bcorlicz::cli::{run_with_defaults, Outcome, Report, RunConfig};
use serde_json::{json, Value};
use tempfile::TempDir;

struct Inputs {
    dir: TempDir,
}

impl Inputs {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let files = [
            ("one-atom.json", r#"{"weights": [1]}"#),
            ("3e4ed.json", r#"[{"idempotent": {"b1": [3, 0], "b2": [4, 0]}}]"#),
            ("e.json", r#"{"cartesian": {"z1": [0.5, 0], "z2": [0, 0.5]}}"#),
            ("edag.json", r#"{"idempotent": {"b1": [0, 0], "b2": [1, 0]}}"#),
            ("shift.json", r#"{"map_rule": "right_shift"}"#),
            ("counting.json", r#"{"weights_rule": "counting", "n_max": 1e5}"#),
            ("two.json", r#"{"weights": [1, 2], "map": [2, 2]}"#),
            (
                "pair.json",
                r#"[{"idempotent": {"b1": [1, 0], "b2": [2, 0]}}, {"idempotent": {"b1": [0, 1], "b2": [0, 0]}}]"#,
            ),
            (
                "unit-poly.json",
                r#"[{"idempotent": {"b1": -1, "b2": -1}}, {"idempotent": {"b1": 0, "b2": 0}}, {"idempotent": {"b1": 1, "b2": 1}}]"#,
            ),
            (
                "degenerate-poly.json",
                r#"[{"idempotent": {"b1": 1, "b2": 1}}, {"idempotent": {"b1": 1, "b2": 0}}]"#,
            ),
            ("dense.json", r#"{"dense": {"m1": [[2, 0], [0, 4]], "m2": [[1, 1], [0, 1]]}}"#),
            ("singular.json", r#"{"dense": {"m1": [[1, 0], [0, 1]], "m2": [[1, 2], [2, 4]]}}"#),
            ("shift-op.json", r#"{"right_shift": {}}"#),
            ("theta.json", r#"[{"idempotent": {"b1": 2, "b2": 3}}, {"idempotent": {"b1": -1, "b2": 0.5}}]"#),
            ("sets.json", r#"{"u1": {"disc": {"center": [0, 0], "radius": 2}}, "u2": "everything"}"#),
            ("broken.json", "{\n  \"weights\": [1,\n  2,,\n]}"),
            ("extra-field.json", r#"{"weights": [1], "colour": "red"}"#),
        ];
        for (name, text) in files {
            fs::write(dir.path().join(name), text).unwrap();
        }
        Inputs { dir }
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }

    fn run(&self, args: &[&str]) -> Outcome {
        let mut full = vec!["bcorlicz".to_string(), "--format".into(), "json".into()];
        for a in args {
            full.push(if a.ends_with(".json") { self.path(a) } else { a.to_string() });
        }
        run_with_defaults(full, None)
    }

    fn report(&self, args: &[&str]) -> Report {
        let out = self.run(args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        serde_json::from_str(&out.stdout).unwrap()
    }
}

fn value<'a>(report: &'a Report, name: &str) -> &'a Value {
    &report
        .results
        .iter()
        .find(|r| r.name == name)
        .unwrap_or_else(|| panic!("no result {name} in {report:?}"))
        .value
}

fn binary(args: &[&str], cwd: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_bcorlicz"))
        .args(args)
        .current_dir(cwd)
        .env_remove("BCORLICZ_CONFIG")
        .output()
        .unwrap()
}

#[test]
fn norm_example() {
    let inputs = Inputs::new();
    let r = inputs.report(&["norm", "--phi", "power:p=2", "--space", "one-atom.json", "--seq", "3e4ed.json"]);
    let n = value(&r, "norm_bc").as_f64().unwrap();
    assert!((n - 5.0 / 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(value(&r, "component_norms"), &json!([3.0, 4.0]));
    assert!(r.results.iter().all(|e| !e.op.is_empty()));
}

#[test]
fn product_of_idempotents_is_zero() {
    let inputs = Inputs::new();
    let r = inputs.report(&["bc", "eval", "--op", "mul", "--lhs", "e.json", "--rhs", "edag.json"]);
    let v = value(&r, "value");
    assert_eq!(v["idempotent"], json!({"b1": [0.0, 0.0], "b2": [0.0, 0.0]}));
    assert_eq!(v["cartesian"], json!({"z1": [0.0, 0.0], "z2": [0.0, 0.0]}));
}

#[test]
fn shift_check_is_bounded_with_unit_constant() {
    let inputs = Inputs::new();
    let r = inputs.report(&[
        "op", "check", "--kind", "composition", "--map", "shift.json", "--space", "counting.json", "--phi",
        "power:p=2",
    ]);
    assert_eq!(r.verdicts[0].verdict, "bounded");
    assert_eq!(value(&r, "M"), &json!(1.0));
    assert!(value(&r, "empirical_norm").as_f64().unwrap() <= 1.0 + 1e-10);
    assert!(r.warnings.iter().any(|w| w.contains("truncation")));
    assert_eq!(value(&r, "report")["compact"], Value::Null);
}

#[test]
fn composition_on_finite_space_uses_space_map() {
    let inputs = Inputs::new();
    let r = inputs.report(&[
        "op", "check", "--kind", "composition", "--space", "two.json", "--phi", "power:p=2", "--seq", "pair.json",
    ]);
    assert_eq!(r.verdicts[0].verdict, "bounded");
    // b_2 = (1 + 2) / 2
    assert_eq!(value(&r, "M"), &json!(1.5));
    let lambdas = &value(&r, "report")["lambda_pairs"];
    assert_eq!(lambdas[0]["lambda1"], json!(1.0));
}

#[test]
fn multiplication_check() {
    let inputs = Inputs::new();
    let r = inputs.report(&[
        "op", "check", "--kind", "multiplication", "--theta", "theta.json", "--space", "two.json", "--phi", "exp",
    ]);
    assert_eq!(r.verdicts[0].verdict, "bounded");
    assert_eq!(value(&r, "ess_sups"), &json!([2.0, 3.0]));
    assert!(value(&r, "empirical_norm").as_f64().unwrap() <= 3.0 + 1e-8);
}

#[test]
fn bicomplex_operations() {
    let inputs = Inputs::new();
    let r = inputs.report(&["bc", "eval", "--op", "poly-roots", "--coeffs", "unit-poly.json"]);
    assert_eq!(value(&r, "count"), &json!(4));
    let r = inputs.report(&["bc", "eval", "--op", "classify", "--lhs", "e.json"]);
    assert_eq!(value(&r, "classification"), &json!({"class": "zero_divisor", "vanishing": "second"}));
    let r = inputs.report(&["bc", "eval", "--op", "conj-dagger", "--lhs", "e.json"]);
    assert_eq!(value(&r, "value")["idempotent"], json!({"b1": [0.0, 0.0], "b2": [1.0, 0.0]}));
    let r = inputs.report(&["bc", "eval", "--op", "norm", "--lhs", "e.json"]);
    assert!((value(&r, "norm").as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    let r = inputs.report(&["bc", "eval", "--op", "indicator", "--sets", "sets.json", "--lhs", "e.json"]);
    assert_eq!(value(&r, "indicator"), &json!(1));
}

#[test]
fn operators_and_sequences() {
    let inputs = Inputs::new();
    let r = inputs.report(&["op", "apply", "--operator", "shift-op.json", "--space", "two.json", "--seq", "pair.json"]);
    let image = value(&r, "image").as_array().unwrap();
    assert_eq!(image.len(), 2);
    assert_eq!(image[0]["idempotent"], json!({"b1": [0.0, 0.0], "b2": [0.0, 0.0]}));
    assert_eq!(image[1]["idempotent"], json!({"b1": [1.0, 0.0], "b2": [2.0, 0.0]}));

    let r = inputs.report(&["op", "invert", "--operator", "dense.json"]);
    assert_eq!(value(&r, "inverse")["m1"], json!([[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.25, 0.0]]]));

    let r = inputs.report(&["schauder", "--seq", "pair.json", "--p", "2"]);
    let tails = value(&r, "tails").as_array().unwrap();
    assert_eq!(tails.len(), 3);
    assert_eq!(tails[2]["tail"], json!(0.0));

    let r = inputs.report(&["pairing", "--lhs", "pair.json", "--rhs", "pair.json", "--space", "two.json"]);
    // (1 + 2 i^2) e + (4) e†
    assert_eq!(value(&r, "pairing")["idempotent"], json!({"b1": [-1.0, 0.0], "b2": [4.0, 0.0]}));

    let r = inputs.report(&["phi", "classify", "--phi", "entropy", "--grid-max", "1e12", "--grid-points", "200"]);
    let probe = value(&r, "probe");
    assert_eq!(probe["convexity_ok"], json!(true));
    assert_eq!(probe["delta2"]["holds_on_grid"], json!(true));
    assert_eq!(probe["n_function"]["limit0_ok"], json!(true));
}

#[test]
fn error_certificates_and_strict_mode() {
    let inputs = Inputs::new();
    let r = inputs.report(&["bc", "eval", "--op", "invert", "--lhs", "e.json"]);
    let cert = r.error.unwrap();
    assert_eq!(cert.kind, "not_invertible");
    assert_eq!(serde_json::to_value(&cert.vanishing).unwrap(), json!(["second"]));

    let strict = inputs.run(&["--strict", "bc", "eval", "--op", "invert", "--lhs", "e.json"]);
    assert_eq!(strict.code, 2);
    let strict = inputs.run(&["--strict", "bc", "eval", "--op", "poly-roots", "--coeffs", "degenerate-poly.json"]);
    assert_eq!(strict.code, 2);
    let report: Report = serde_json::from_str(&strict.stdout).unwrap();
    assert_eq!(report.error.unwrap().kind, "leading_not_invertible");
    let strict = inputs.run(&["--strict", "op", "invert", "--operator", "singular.json"]);
    assert_eq!(strict.code, 2);
    let report: Report = serde_json::from_str(&strict.stdout).unwrap();
    assert_eq!(serde_json::to_value(report.error.unwrap().vanishing).unwrap(), json!(["second"]));
    let other = inputs.run(&["--strict", "bc", "eval", "--op", "invert", "--lhs", "edag.json"]);
    assert_eq!(other.code, 2);
    let ok = inputs.run(&["--strict", "op", "invert", "--operator", "dense.json"]);
    assert_eq!(ok.code, 0);
}

#[test]
fn input_errors_point_at_the_problem() {
    let inputs = Inputs::new();
    let out = inputs.run(&["norm", "--phi", "power:p=2", "--space", "broken.json", "--seq", "3e4ed.json"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("broken.json") && out.stderr.contains("line 3"), "{}", out.stderr);
    let out = inputs.run(&["norm", "--phi", "power:p=2", "--space", "extra-field.json", "--seq", "3e4ed.json"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("colour"), "{}", out.stderr);
    let out = inputs.run(&["norm", "--phi", "power:p=0.5", "--space", "one-atom.json", "--seq", "3e4ed.json"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("power:p=0.5"), "{}", out.stderr);
    let out = inputs.run(&["norm", "--phi", "exp", "--space", "two.json", "--seq", "3e4ed.json"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("1 terms") && out.stderr.contains("2 atoms"), "{}", out.stderr);
    let out = inputs.run(&["norm", "--phi", "exp", "--space", "missing.json", "--seq", "3e4ed.json"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("missing.json"));
}

#[test]
fn defaults_file_and_flag_precedence() {
    let inputs = Inputs::new();
    let defaults = inputs.path("defaults.json");
    fs::write(&defaults, r#"{"format": "json", "seed": 7, "trials": 3, "lux_tol": 1e-9}"#).unwrap();
    let args = |extra: &[&str]| {
        let mut v = vec!["bcorlicz".to_string()];
        v.extend(extra.iter().map(|s| s.to_string()));
        v.extend(["phi", "classify", "--phi", "exp"].map(String::from));
        v
    };
    let out = run_with_defaults(args(&[]), Some(&defaults));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r: Report = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!((r.config.seed, r.config.trials, r.config.lux_tol), (7, 3, 1e-9));
    let out = run_with_defaults(args(&["--seed", "11", "--tol", "1e-11"]), Some(&defaults));
    let r: Report = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!((r.config.seed, r.config.lux_tol), (11, 1e-11));
    let out = run_with_defaults(args(&["--format", "text"]), Some(&defaults));
    assert!(out.stdout.starts_with("command: "));

    fs::write(&defaults, r#"{"format": "json", "sede": 7}"#).unwrap();
    let out = run_with_defaults(args(&[]), Some(&defaults));
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("sede"));
}

#[test]
fn reports_round_trip_their_config() {
    let inputs = Inputs::new();
    let runs: [&[&str]; 3] = [
        &["norm", "--phi", "entropy", "--space", "two.json", "--seq", "pair.json"],
        &["--seed", "3", "op", "check", "--kind", "composition", "--space", "two.json", "--phi", "exp"],
        &["schauder", "--seq", "pair.json", "--p", "1.5", "--n", "0", "1"],
    ];
    for args in runs {
        let out = inputs.run(args);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let report: Report = serde_json::from_str(&out.stdout).unwrap();
        // the echoed config re-parses to itself
        let text = serde_json::to_string(&report.config).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report.config);
        // re-running the echoed command line reproduces the report byte for byte
        let mut again = vec!["bcorlicz".to_string()];
        again.extend(report.command.iter().cloned());
        let rerun = run_with_defaults(again, None);
        assert_eq!(rerun.stdout, out.stdout);
    }
}

#[test]
fn binary_exit_codes() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let ok = binary(&["bc", "eval", "--op", "mul", "--lhs", "e.json", "--rhs", "edag.json"], &dir);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("value = "));
    let strict = binary(&["--strict", "bc", "eval", "--op", "invert", "--lhs", "e.json"], &dir);
    assert_eq!(strict.status.code(), Some(2));
    let bad = binary(&["bc", "eval", "--op", "teleport"], &dir);
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
    let help = binary(&["--help"], &dir);
    assert_eq!(help.status.code(), Some(0));
}
