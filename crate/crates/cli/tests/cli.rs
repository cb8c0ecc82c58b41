//! End-to-end runs of the `iwalk` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn iwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iwalk"))
        .args(args)
        .env_remove("IWALK_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn iwalk_with_cache(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iwalk"))
        .args(args)
        .env("IWALK_CACHE_DIR", dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(schema: &Value, instance: &Value) {
    let validator = jsonschema::validator_for(schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema errors {errors:?} for {instance}");
}

fn run_json(args: &[&str]) -> Value {
    let out = iwalk(args);
    assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
    stdout_json(&out)
}

#[test]
fn every_command_matches_the_schema() {
    let schema = schema();
    let runs: &[&[&str]] = &[
        &["eigen", "--n", "4", "--p", "0/1", "--partition", "1,1,1,1"],
        &["eigen", "--n", "6", "--p", "1/2"],
        &["eigen", "--n", "6", "--p", "0.75", "--method", "recursive"],
        &["eigen", "--n", "8", "--p", "1/2", "--method", "closed"],
        &["character", "--partition", "3,2,1"],
        &["character", "--partition", "3,1", "--class", "1:2,2:1"],
        &["dist", "--n", "4", "--p", "1/2", "--t", "3"],
        &["dist", "--n", "4", "--p", "1/2", "--t", "3", "--method", "convolve"],
        &["dist", "--n", "4", "--p", "1/2", "--t", "3", "--method", "mc", "--samples", "500"],
        &["tv", "--n", "6", "--p", "1/2", "--t", "1", "--t-max", "4"],
        &["sep", "--n", "6", "--p", "3/4", "--t", "2"],
        &["sep", "--n", "6", "--p", "1/2", "--t", "2", "--t-max", "5", "--conjecture"],
        &["bounds", "--n", "6", "--p", "1/2", "--kind", "ds", "--t", "3"],
        &["bounds", "--n", "6", "--p", "1/2", "--kind", "wilson", "--t-max", "4"],
        &["bounds", "--n", "6", "--p", "1/10", "--kind", "parity", "--t", "2"],
        &["bounds", "--n", "16", "--p", "3/4", "--kind", "analytic"],
        &["bounds", "--n", "16", "--p", "3/4", "--kind", "analytic", "--i", "3"],
        &["bounds", "--n", "64", "--p", "3/4", "--kind", "invup", "--c", "-1"],
        &["order", "--n", "4", "--p", "1/2", "--t", "12"],
        &["order", "--n", "6", "--p", "3/4", "--find-limit", "--t-max", "16"],
        &["verify", "--n", "4", "--p", "1/2"],
    ];
    for args in runs {
        assert_valid(&schema, &run_json(args));
    }
}

#[test]
fn cache_outputs_and_files_match_the_schema() {
    let schema = schema();
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["cache", "warm", "--n", "4,6", "--p", "1/2"][..],
        &["cache", "inspect"][..],
    ] {
        let out = iwalk_with_cache(dir.path(), args);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert_valid(&schema, &stdout_json(&out));
    }
    let file_schema = json!({
        "$defs": schema["$defs"].clone(),
        "$ref": "#/$defs/cache_file",
    });
    let text = std::fs::read_to_string(dir.path().join("eigen_n6_p1-2.json")).unwrap();
    assert_valid(&file_schema, &serde_json::from_str(&text).unwrap());
    let out = iwalk_with_cache(dir.path(), &["cache", "clear"]);
    assert_valid(&schema, &stdout_json(&out));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn sign_representation_at_p_zero() {
    let v = run_json(&["eigen", "--n", "4", "--p", "0/1", "--partition", "1,1,1,1"]);
    assert_eq!(v["psi"], "1/1");
}

#[test]
fn verify_oracle_and_recursion_pass() {
    let v = run_json(&["verify", "--n", "6", "--p", "1/2", "--suite", "oracle,recursion"]);
    assert_eq!(v["all_passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert!(checks.iter().all(|c| c["ok"] == true && c["claim_holds"] == true));
}

#[test]
fn verify_all_suites_pass_with_anomaly_fixtures() {
    for p in ["1/2", "2/3", "9/10"] {
        let v = run_json(&["verify", "--n", "8", "--p", p]);
        assert_eq!(v["all_passed"], true, "p = {p}: {}", v["failures"]);
        let checks = v["checks"].as_array().unwrap();
        let expected_fail: Vec<&Value> = checks.iter().filter(|c| c["mode"] == "expected-fail").collect();
        assert_eq!(expected_fail.len(), 5);
        assert!(expected_fail.iter().all(|c| c["claim_holds"] == false));
    }
}

#[test]
fn report_only_failures_do_not_change_the_exit_status() {
    // Below p = 1/2 the ordering claims are not made, so their failures are shown only.
    let v = run_json(&["verify", "--n", "6", "--p", "1/4", "--suite", "deci,twopart,detectors"]);
    assert_eq!(v["all_passed"], true);
    let shown_failures = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["mode"] == "report-only" && c["claim_holds"] == false)
        .count();
    assert!(shown_failures >= 2);
}

#[test]
fn n4_anomalies_are_reported() {
    let v = run_json(&["verify", "--n", "4", "--p", "1/2", "--suite", "deci,detectors,closedforms"]);
    let find = |name: &str| {
        v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .cloned()
            .unwrap_or_else(|| panic!("no check {name}"))
    };
    assert_eq!(find("two-row-decreasing")["mode"], "report-only");
    assert_eq!(find("two-row-decreasing")["claim_holds"], false);
    assert_eq!(find("printed-two-row-two-sign-at-n4")["detail"], "printed 0/1 vs exact 1/2");
}

#[test]
fn separation_against_conjecture_at_n4() {
    let v = run_json(&["sep", "--n", "4", "--p", "1/2", "--t", "2", "--conjecture"]);
    let row = &v["rows"][0];
    assert_eq!(row["conjectured"], "1/3");
    assert_eq!(row["n_cycle_deficit"], "1/3");
    // The least likely class at t = 2 is (3,1), not the 4-cycle.
    assert_eq!(row["exact"], "1/2");
    assert_eq!(row["argmax"], "1:1,3:1");
    assert_eq!(row["match"], false);
}

#[test]
fn exact_values_cross_as_strings() {
    let v = run_json(&["tv", "--n", "4", "--p", "1/2", "--t", "1"]);
    assert_eq!(v["rows"][0]["tv"], "7/12");
    let v = run_json(&["bounds", "--n", "4", "--p", "1/2", "--kind", "wilson", "--t", "1"]);
    assert_eq!(v["witnesses"]["value"], "1/7");
    let v = run_json(&["dist", "--n", "4", "--p", "1/2", "--t", "2", "--method", "convolve"]);
    assert_eq!(v["probs"]["2:2"], "5/72");
}

#[test]
fn csv_headers_are_stable() {
    let cases: &[(&[&str], &str)] = &[
        (&["eigen", "--n", "4", "--p", "1/2"], "partition,psi_num,psi_den,float_approx"),
        (&["dist", "--n", "4", "--p", "1/2", "--t", "1"], "class,class_size,prob_num,prob_den,float_approx"),
        (&["tv", "--n", "4", "--p", "1/2", "--t", "1"], "t,tv_num,tv_den,float_approx"),
        (
            &["sep", "--n", "6", "--p", "1/2", "--t", "3", "--conjecture"],
            "n,t,conjectured,exact_num,exact_den,match",
        ),
        (&["bounds", "--n", "4", "--p", "1/2", "--kind", "ds", "--t-max", "2"], "n,t,p,exact,bound,satisfied"),
        (&["order", "--n", "4", "--p", "1/2", "--t", "2"], "rank,class,prob_num,prob_den,float_approx"),
        (&["character", "--partition", "2,2"], "class,class_size,value"),
    ];
    for (args, header) in cases {
        let mut full = args.to_vec();
        full.extend(["--format", "csv"]);
        let out = iwalk(&full);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(text.lines().next(), Some(*header), "{args:?}");
    }
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    let cases: &[(&[&str], &str)] = &[
        (&["eigen", "--n", "5", "--p", "1/2"], "even"),
        (&["eigen", "--n", "4", "--p", "3/2"], "[0, 1]"),
        (&["dist", "--n", "10", "--p", "1/2", "--t", "1"], "cap exceeded"),
        (&["eigen", "--n", "22", "--p", "1/2"], "cap exceeded"),
        (&["verify", "--n", "6", "--p", "1/2", "--suite", "bogus"], "unknown suite"),
        (&["sep", "--n", "6", "--p", "3/4", "--t", "2", "--conjecture"], "p = 1/2"),
        (&["bounds", "--n", "6", "--p", "1/2", "--kind", "parity", "--t", "3"], "even"),
        (&["cache", "inspect"], "cache directory"),
        (&["verify", "--n", "6", "--p", "1/2", "--format", "csv"], "csv"),
    ];
    for (args, needle) in cases {
        let out = iwalk(args);
        assert_eq!(code(&out), 2, "{args:?}");
        let err = stderr(&out);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.contains(needle), "{args:?}: {err}");
    }
    assert_eq!(code(&iwalk(&["frobnicate"])), 2);
    assert_eq!(code(&iwalk(&["eigen", "--n", "4", "--p", "one half"])), 2);
}

#[test]
fn unsafe_caps_lift_the_limits() {
    let out = iwalk(&["--unsafe-caps", "dist", "--n", "10", "--p", "1/2", "--t", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = stdout_json(&out);
    assert_eq!(v["probs"].as_object().unwrap().len(), 42);
}

#[test]
fn cache_hit_skips_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let first = iwalk_with_cache(dir.path(), &["-v", "eigen", "--n", "8", "--p", "1/2"]);
    assert!(stderr(&first).contains("cache miss"), "{}", stderr(&first));
    assert!(stderr(&first).contains("computed table"));
    let second = iwalk_with_cache(dir.path(), &["-v", "eigen", "--n", "8", "--p", "1/2"]);
    assert!(stderr(&second).contains("cache hit"), "{}", stderr(&second));
    assert!(!stderr(&second).contains("computed table"));
    assert!(stderr(&second).contains("elapsed"));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn corrupt_cache_is_recomputed_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eigen_n6_p1-2.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = iwalk_with_cache(dir.path(), &["eigen", "--n", "6", "--p", "1/2"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("warning"), "{}", stderr(&out));
    let clean = iwalk(&["eigen", "--n", "6", "--p", "1/2"]);
    assert_eq!(out.stdout, clean.stdout);
    // The bad file was replaced by a valid table.
    let again = iwalk_with_cache(dir.path(), &["-v", "eigen", "--n", "6", "--p", "1/2"]);
    assert!(stderr(&again).contains("cache hit"));
}

#[test]
fn mismatched_cache_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    iwalk_with_cache(dir.path(), &["cache", "warm", "--n", "4", "--p", "1/2"]);
    std::fs::rename(dir.path().join("eigen_n4_p1-2.json"), dir.path().join("eigen_n6_p1-2.json")).unwrap();
    let out = iwalk_with_cache(dir.path(), &["eigen", "--n", "6", "--p", "1/2"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("n = 4"), "{}", stderr(&out));
    assert_eq!(stdout_json(&out)["psi"].as_object().unwrap().len(), 11);
    let inspect = stdout_json(&iwalk_with_cache(dir.path(), &["cache", "inspect"]));
    assert_eq!(inspect["entries"][0]["valid"], true);
}

#[test]
fn out_directory_receives_atomic_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("plots");
    let out = iwalk(&[
        "tv",
        "--n",
        "4",
        "--p",
        "1/2",
        "--t-max",
        "5",
        "--format",
        "csv",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let files: Vec<String> = std::fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert_eq!(files, vec!["tv_n4_p1-2_t0-5.csv".to_string()]);
    let text = std::fs::read_to_string(out_dir.join(&files[0])).unwrap();
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn monte_carlo_is_deterministic_per_seed() {
    let args = ["dist", "--n", "6", "--p", "1/2", "--t", "2", "--method", "mc", "--samples", "5000", "--seed", "11"];
    let a = iwalk(&args);
    let b = iwalk(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout_json(&a)["max_sigma_deviation"].as_f64().unwrap() < 5.0);
}

#[test]
fn limit_search_reports_the_settling_time() {
    let v = run_json(&["order", "--n", "6", "--p", "1/2", "--find-limit"]);
    assert_eq!(v["t_star"], 11);
    assert_eq!(v["final_separation_class"], "6:1");
    let v = run_json(&["order", "--n", "4", "--p", "1/2", "--find-limit"]);
    assert_eq!(v["t_star"], Value::Null);
    let pairs = v["persistent_pairs"].as_array().unwrap();
    assert!(pairs.contains(&json!(["1:1,3:1", "4:1"])), "{pairs:?}");
}
