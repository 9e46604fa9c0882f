use std::path::Path;
use std::process::{Command, Output};

use ybe_core::{analyze, Solution};
use ybekit::format::{read_catalog, solution_to_json};

fn ybekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ybekit"))
        .args(args)
        .env_remove("YBEKIT_BUDGET_SECS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(
        dir.path(),
        "ok.json",
        r#"{"n": 2, "sigma": [[0, 1], [0, 1]]}"#,
    );
    let o = ybekit(&["validate", &ok]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o)["valid"], true);

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"n": 2, "sigma": [[0, 1], [1, 0]]}"#,
    );
    let o = ybekit(&["validate", &bad]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout(&o)["braid"], false);
    assert!(stdout(&o)["braid_counterexample"].is_array());

    let nonperm = write(
        dir.path(),
        "np.json",
        r#"{"n": 2, "sigma": [[0, 0], [0, 1]]}"#,
    );
    let o = ybekit(&["validate", &nonperm]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a permutation"));

    let broken = write(
        dir.path(),
        "broken.json",
        "{\"n\": 2,\n  \"sigma\": [[0, 1] [0, 1]]}",
    );
    let o = ybekit(&["validate", &broken]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column"));

    assert_eq!(code(&ybekit(&["validate", "/nonexistent/file.json"])), 1);
}

#[test]
fn analyze_cyclic_five() {
    let o = ybekit(&["analyze", &solution_to_json(&Solution::cyclic(5))]);
    assert_eq!(code(&o), 0);
    let v = stdout(&o);
    assert_eq!(v["record"]["primitive"], true);
    assert_eq!(v["record"]["group_order"], 5);
    assert_eq!(v["checks"]["all_pass"], true);

    let o = ybekit(&["analyze", r#"{"n":2,"sigma":[[0,1],[1,0]]}"#]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o)["record"].is_null());
}

#[test]
fn caps_are_budget_failures() {
    let s = solution_to_json(&Solution::cyclic(5));
    assert_eq!(code(&ybekit(&["analyze", &s, "--group-cap", "4"])), 3);
    assert_eq!(code(&ybekit(&["brace", &s, "--brace-cap", "4"])), 3);
    assert_eq!(code(&ybekit(&["brace", &s, "--brace-cap", "0"])), 1);
}

#[test]
fn brace_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("brace.json");
    let o = ybekit(&[
        "brace",
        &solution_to_json(&Solution::cyclic(3)),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(out).unwrap()).unwrap();
    assert_eq!(v["order"], 3);
    assert_eq!(v["mul"], v["add"]);
    assert!(v.get("lambda").is_none());
    assert_eq!(
        code(&ybekit(&["brace", r#"{"n":2,"sigma":[[0,1],[1,0]]}"#])),
        2
    );
}

#[test]
fn enumerate_guards() {
    assert_eq!(code(&ybekit(&["enumerate", "--n", "8"])), 3);
    assert_eq!(
        code(&ybekit(&["enumerate", "--n", "9", "--allow-large"])),
        3
    );
    assert_eq!(code(&ybekit(&["enumerate", "--n", "0"])), 1);
    let o = Command::new(env!("CARGO_BIN_EXE_ybekit"))
        .args(["enumerate", "--n", "6"])
        .env("YBEKIT_BUDGET_SECS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn enumerated_catalog_reanalyzes_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c5.jsonl");
    let o = ybekit(&[
        "enumerate",
        "--n",
        "5",
        "--threads",
        "2",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let summary = stdout(&o);
    assert_eq!(summary["classes"], 88);
    assert_eq!(summary["duplicates"], 0);

    let file = std::io::BufReader::new(std::fs::File::open(&out).unwrap());
    let (header, records) = read_catalog(file).unwrap();
    assert_eq!((header.n, header.classes, header.threads), (5, 88, 2));
    assert_eq!(
        summary["primitive"],
        records.iter().filter(|r| r.primitive).count()
    );
    for r in records {
        assert_eq!(analyze(&r.solution).unwrap().record.unwrap(), r);
    }
}

#[test]
fn classify_reports() {
    let o = ybekit(&["classify", "--n-max", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o)["rows"].as_array().unwrap().len(), 0);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("summary.csv");
    let o = ybekit(&["classify", "--n-max", "6", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = stdout(&o);
    let counts: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["primitive_count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [1, 1, 0, 1, 0]);
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().nth(3).unwrap().starts_with("4,23,0,"));
}

#[test]
fn usage_errors_use_io_code() {
    assert_eq!(code(&ybekit(&[])), 1);
    assert_eq!(code(&ybekit(&["frobnicate"])), 1);
    assert_eq!(code(&ybekit(&["--help"])), 0);
}
