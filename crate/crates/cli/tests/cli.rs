use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.display().to_string()
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_adelic"));
    cmd.args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .env_remove("ADELIC_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    validate(&v);
    v
}

fn validate(v: &Value) {
    static SCHEMA: OnceLock<jsonschema::Validator> = OnceLock::new();
    let validator = SCHEMA.get_or_init(|| {
        let text = include_str!("../schema/report.schema.json");
        jsonschema::validator_for(&serde_json::from_str(text).unwrap()).expect("schema compiles")
    });
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
}

fn f64_at(v: &Value, path: &str) -> f64 {
    v.pointer(path)
        .and_then(Value::as_f64)
        .unwrap_or_else(|| panic!("no number at {path}"))
}

fn histogram(v: &Value) -> BTreeMap<String, u64> {
    v["result"]["histogram"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e[0].as_str().unwrap().to_string(), e[1].as_u64().unwrap()))
        .collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn density_single_prime_partial() {
    let v = report(&["density", "--polys", &fixture("xy.txt"), "--pmax", "2"]);
    assert_eq!(f64_at(&v, "/result/partial"), 0.75);
    assert_eq!(v["result"]["factors"][0]["s_p"], 1);
    assert_eq!(v["manifest"]["flags"]["pmax"], 2);
}

#[test]
fn density_bracket_contains_inverse_zeta_two() {
    let v = report(&["density", "--polys", &fixture("xy.txt"), "--pmax", "10000"]);
    let lo = f64_at(&v, "/result/bracket/0");
    let hi = f64_at(&v, "/result/bracket/1");
    let target = 6.0 / std::f64::consts::PI.powi(2);
    assert!(lo <= target && target <= hi, "[{lo}, {hi}]");
    assert!(lo > 0.6079 - 1e-3 && hi < 0.6079 + 1e-3);
    assert_eq!(v["result"]["tail_label"], "heuristic");
}

#[test]
fn density_csv_lists_factors() {
    let out = run(&[
        "--format",
        "csv",
        "density",
        "--polys",
        &fixture("xy.txt"),
        "--pmax",
        "10",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        lines,
        [
            "p,s_p,factor",
            "2,1,0.75",
            "3,1,0.888888888889",
            "5,1,0.96",
            "7,1,0.979591836735"
        ]
    );
}

#[test]
fn malformed_file_exits_two_without_output() {
    let out = run(&["density", "--polys", &fixture("malformed.txt")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed.txt:2"));

    let out = run(&["density", "--polys", &fixture("does-not-exist.txt")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    let xy = fixture("xy.txt");
    let cases: [&[&str]; 5] = [
        &[
            "simulate", "--stat", "G", "--polys", &xy, "--trials", "0", "--seed", "1",
        ],
        &["simulate", "--stat", "G", "--polys", &xy, "--trials", "10"],
        &[
            "empirical",
            "--stat",
            "gcd",
            "--polys",
            &xy,
            "--trials",
            "10",
            "--seed",
            "1",
        ],
        &[
            "empirical",
            "--stat",
            "mean",
            "--polys",
            &xy,
            "--n",
            "5",
            "--trials",
            "10",
            "--seed",
            "1",
        ],
        &[
            "--format",
            "csv",
            "certificate",
            "--polys",
            &fixture("pair.txt"),
        ],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let out = run_env(
        &["count", "--polys", &fixture("conic.txt"), "--p", "13"],
        &[("ADELIC_BUDGET", "lots")],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precondition_failures_exit_three() {
    let shared = fixture("shared.txt");
    for args in [
        vec!["density", "--polys", &shared],
        vec![
            "simulate", "--stat", "G", "--polys", &shared, "--trials", "10", "--seed", "1",
        ],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(out.stdout.is_empty());
    }
    let out = run(&["count", "--polys", &fixture("conic.txt"), "--p", "15"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn budget_overruns_exit_four() {
    let out = run_env(
        &["count", "--polys", &fixture("conic.txt"), "--p", "13"],
        &[("ADELIC_BUDGET", "100")],
    );
    assert_eq!(out.status.code(), Some(4));
    let out = run_env(
        &["density", "--polys", &fixture("xyz.txt"), "--pmax", "100"],
        &[("ADELIC_BUDGET", "1000")],
    );
    assert_eq!(out.status.code(), Some(4));
    assert!(out.stdout.is_empty());
}

#[test]
fn simulate_gcd_mass_at_one() {
    let trials = 20_000u64;
    let v = report(&[
        "simulate",
        "--stat",
        "G",
        "--polys",
        &fixture("xy.txt"),
        "--trials",
        "20000",
        "--seed",
        "7",
    ]);
    let h = histogram(&v);
    assert_eq!(h.values().sum::<u64>(), trials);
    let p1 = h["1"] as f64 / trials as f64;
    let target = 6.0 / std::f64::consts::PI.powi(2);
    let se = (target * (1.0 - target) / trials as f64).sqrt();
    assert!((p1 - target).abs() < 4.0 * se, "P(G=1) = {p1}");
    assert_eq!(v["manifest"]["seed"], 7);
    assert_eq!(v["result"]["P_max"], 1000);
    assert_eq!(v["result"]["cap"], 64);
}

#[test]
fn simulate_reports_are_reproducible() {
    let xy = fixture("xy.txt");
    for stat in ["G", "L", "scaled-lcm"] {
        let args = [
            "simulate", "--stat", stat, "--polys", &xy, "--trials", "3000", "--seed", "11",
            "--pmax", "200",
        ];
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{stat}");
        let mut threaded = vec!["--threads", "1"];
        threaded.extend_from_slice(&args);
        assert_eq!(run(&threaded).stdout, a.stdout, "{stat} with one thread");
        validate(&serde_json::from_slice(&a.stdout).unwrap());
    }
    let other = run(&[
        "simulate", "--stat", "G", "--polys", &xy, "--trials", "3000", "--seed", "12", "--pmax",
        "200",
    ]);
    let first = run(&[
        "simulate", "--stat", "G", "--polys", &xy, "--trials", "3000", "--seed", "11", "--pmax",
        "200",
    ]);
    assert_ne!(other.stdout, first.stdout);
}

#[test]
fn simulate_nlcm_support_is_unit_fractions() {
    let v = report(&[
        "simulate",
        "--stat",
        "L",
        "--polys",
        &fixture("xy.txt"),
        "--trials",
        "2000",
        "--seed",
        "5",
        "--pmax",
        "100",
    ]);
    for value in histogram(&v).keys() {
        let den = value.strip_prefix("1/").unwrap_or(value);
        assert!(value == "1" || den.parse::<u64>().unwrap() > 1, "{value}");
    }
}

#[test]
fn empirical_gcd_matches_enumeration() {
    let (n, trials) = (100u64, 10_000u64);
    let v = report(&[
        "empirical",
        "--stat",
        "gcd",
        "--polys",
        &fixture("xy.txt"),
        "--n",
        "100",
        "--trials",
        "10000",
        "--seed",
        "3",
    ]);
    let h = histogram(&v);
    assert_eq!(h.values().sum::<u64>(), trials);
    // exact law of gcd(x, y) on {1..100}^2
    let mut exact = BTreeMap::new();
    for x in 1..=n {
        for y in 1..=n {
            *exact.entry(gcd(x, y).to_string()).or_insert(0u64) += 1;
        }
    }
    for (value, &count) in &h {
        let p = exact[value] as f64 / (n * n) as f64;
        let se = (p * (1.0 - p) / trials as f64)
            .sqrt()
            .max(1.0 / trials as f64);
        let p_hat = count as f64 / trials as f64;
        assert!((p_hat - p).abs() < 5.0 * se, "gcd {value}: {p_hat} vs {p}");
    }
}

#[test]
fn empirical_scaled_lcm_values_are_exact() {
    let v = report(&[
        "empirical",
        "--stat",
        "scaled-lcm",
        "--polys",
        &fixture("intro.txt"),
        "--n",
        "10000",
        "--trials",
        "50000",
        "--seed",
        "9",
    ]);
    let h = histogram(&v);
    let total: u64 = h.values().sum::<u64>() + v["result"]["degenerate"].as_u64().unwrap();
    assert_eq!(total, 50_000);
    assert_eq!(v["result"]["statistic"], "scaled-lcm");
    // LCM / n^5 with n = 10^4: every denominator divides 10^20
    for value in h.keys() {
        if let Some((_, den)) = value.split_once('/') {
            let den: u128 = den.parse().unwrap();
            assert_eq!(100_000_000_000_000_000_000u128 % den, 0, "{value}");
        }
    }
}

#[test]
fn empirical_csv_histogram() {
    let out = run(&[
        "--format",
        "csv",
        "empirical",
        "--stat",
        "gcd",
        "--polys",
        &fixture("xy.txt"),
        "--n",
        "10",
        "--trials",
        "500",
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    assert_eq!(lines.next(), Some("value,count"));
    let total: u64 = lines
        .map(|l| l.split_once(',').unwrap().1.parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 500);
}

#[test]
fn check_common_factor_reports() {
    let v = report(&["check-common-factor", "--polys", &fixture("shared.txt")]);
    assert_eq!(v["result"]["common_factor"], true);
    assert!(!v["result"]["method_trace"].as_array().unwrap().is_empty());
    let v = report(&["check-common-factor", "--polys", &fixture("intro.txt")]);
    assert_eq!(v["result"]["common_factor"], false);
}

#[test]
fn certificate_prints_verified_identity() {
    let v = report(&["certificate", "--polys", &fixture("pair.txt")]);
    // (x^2 + 1) * 1 + (x + 3) * (3 - x) = 10
    assert_eq!(v["result"]["A"], "10");
    assert_eq!(
        v["result"]["cofactors"],
        serde_json::json!(["1", "-x1 + 3"])
    );
    assert_eq!(v["result"]["verified"], true);
    let out = run(&["certificate", "--polys", &fixture("shared1.txt")]);
    assert_eq!(out.status.code(), Some(3));
    // only univariate inputs are accepted
    let out = run(&["certificate", "--polys", &fixture("shared.txt")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_conic_over_f13() {
    let v = report(&[
        "count",
        "--polys",
        &fixture("conic.txt"),
        "--p",
        "13",
        "--p",
        "7",
    ]);
    // -1 is a square mod 13 but not mod 7
    assert_eq!(v["result"]["counts"][0]["count"], 25);
    assert_eq!(v["result"]["counts"][1]["count"], 1);

    let out = run(&[
        "--format",
        "csv",
        "count",
        "--polys",
        &fixture("conic.txt"),
        "--p",
        "13",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows[0], "p,count,elapsed_ms");
    assert!(rows[1].starts_with("13,25,"));
}

#[test]
fn manifest_records_inputs() {
    let v = report(&["density", "--polys", &fixture("xy.txt"), "--pmax", "3"]);
    let m = &v["manifest"];
    assert_eq!(m["command"], "density");
    assert_eq!(m["timestamp"], 1_700_000_000u64);
    assert_eq!(m["seed"], Value::Null);
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["flags"]["budget"], 100_000_000u64);
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn schema_rejects_tampered_reports() {
    let v = report(&["count", "--polys", &fixture("conic.txt"), "--p", "13"]);
    let text = include_str!("../schema/report.schema.json");
    let validator = jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap();
    let mut bad = v.clone();
    bad["result"]["counts"][0]["count"] = Value::from(-1);
    assert!(!validator.is_valid(&bad));
    let mut bad = v.clone();
    bad["manifest"]["command"] = Value::from("density");
    assert!(!validator.is_valid(&bad));
    let mut bad = v;
    bad["result"]["extra"] = Value::from(1);
    assert!(!validator.is_valid(&bad));
}
