use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bsrinf"));
    cmd.env_remove("BSRINF_ORACLE_CAP");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn schema() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

#[test]
fn outputs_match_the_schema() {
    let v = schema();
    let queries: &[&[&str]] = &[
        &["degree", "1", "3"],
        &["degree", "2", "6", "--method", "both", "--c-max", "8"],
        &["degree", "1", "-2", "--method", "search"],
        &["quotient", "1", "3", "2"],
        &["quotient", "2", "6", "2"],
        &["quotient", "1", "2", "5"],
        &["reidemeister", "1", "3", "2", "--mu", "1", "--eps", "-1"],
        &["reidemeister", "2", "6", "2", "--image", "0,1", "--beta", "1"],
        &["reidemeister", "1", "3", "9", "--mu", "1", "--eps", "+1", "--oracle-cap", "4"],
        &["verify", "snf", "--random", "5"],
        &["sweep", "3", "4", "--c-max", "6", "--timing"],
    ];
    for q in queries {
        let record = json(q);
        let errors: Vec<String> = v.iter_errors(&record).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{q:?}: {errors:?}");
    }
}

#[test]
fn negative_parameters_and_canonicalization_echo() {
    let r = json(&["degree", "-3", "-1"]);
    assert_eq!(r["query"]["m"], -3);
    assert_eq!(r["query"]["canonical"]["m"], 1);
    assert_eq!(r["query"]["canonical"]["n"], 3);
    assert_eq!(r["query"]["canonical"]["canonicalized"], true);
    assert_eq!(r["result"]["kind"]["value"], 4);
    let r = json(&["degree", "--", "1", "-1"]);
    assert_eq!(r["result"]["kind"]["kind"], "infinite");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["degree", "0", "3"]).status.code(), Some(2));
    assert_eq!(run(&["degree", "1"]).status.code(), Some(2));
    assert_eq!(run(&["quotient", "3", "3", "2"]).status.code(), Some(2));
    assert_eq!(run(&["reidemeister", "1", "3", "2", "--mu", "2"]).status.code(), Some(2));
    assert_eq!(run(&["reidemeister", "2", "5", "2", "--mu", "1"]).status.code(), Some(2));
    assert_eq!(run(&["reidemeister", "1", "3", "2", "--mu", "1", "--eps", "3"]).status.code(), Some(2));
    assert_eq!(run(&["quotient", "2", "8", "2", "--aut-cap", "1"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "snf", "--random", "5"]).status.code(), Some(0));
}

#[test]
fn oracle_cap_from_environment() {
    let args = ["reidemeister", "1", "3", "3", "--mu", "1"];
    let out = bin().args(args).env("BSRINF_ORACLE_CAP", "4").output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["result"]["oracle"].is_null());
    assert!(v["result"]["oracle_skipped"].as_str().unwrap().contains("cap 4"));
    let out = bin().args(args).env("BSRINF_ORACLE_CAP", "4").args(["--oracle-cap", "16"]).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["agree"], true);
}

#[test]
fn sweep_files_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&["sweep", "10", "10", "--format", "csv", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().any(|l| l.starts_with("1,3,1,diff_eq_2d,4,")));
}

/// JSON, csv and markdown carry the same rows.
#[test]
fn formats_agree() {
    let j = json(&["sweep", "6", "6", "--c-max", "8"]);
    let csv = String::from_utf8(run(&["sweep", "6", "6", "--c-max", "8", "--format", "csv"]).stdout).unwrap();
    let md = String::from_utf8(run(&["sweep", "6", "6", "--c-max", "8", "--format", "md"]).stdout).unwrap();
    let rows = j["result"]["rows"].as_array().unwrap();
    let csv_rows: Vec<Vec<String>> = csv::Reader::from_reader(csv.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect();
    let md_rows: Vec<Vec<String>> = md
        .lines()
        .skip(2)
        .map(|l| l.trim_matches('|').split('|').map(|c| c.trim().to_string()).collect())
        .collect();
    assert_eq!(rows.len(), csv_rows.len());
    assert_eq!(csv_rows, md_rows);
    for (r, c) in rows.iter().zip(&csv_rows) {
        assert_eq!(r["params"]["m"].to_string(), c[0]);
        assert_eq!(r["params"]["n"].to_string(), c[1]);
        assert_eq!(r["case_label"].as_str().unwrap(), c[3]);
        let kind = &r["kind"];
        let shown = match kind["kind"].as_str().unwrap() {
            "exact" => kind["value"].to_string(),
            "infinite" => "inf".into(),
            _ => format!("[{},{}]", kind["lower"], kind["upper"]),
        };
        assert_eq!(shown, c[4]);
        match r["p"].as_u64() {
            Some(p) => assert_eq!(p.to_string(), c[7]),
            None => assert!(c[7].is_empty()),
        }
        let t = &r["gc_threshold"];
        let shown = match t["kind"].as_str() {
            Some("found") => t["c"].to_string(),
            Some(_) => format!(">{}", t["c_max"]),
            None => String::new(),
        };
        assert_eq!(shown, c[9]);
    }
    // Rows carrying an interval also carry the searched threshold.
    assert!(csv_rows.iter().any(|c| c[4].starts_with('[') && !c[9].is_empty()));
    assert!(md.lines().any(|l| l.starts_with("| 1 | 3 |") && l.contains("| 4 |")));
}

#[test]
fn timing_is_opt_in() {
    assert!(json(&["degree", "1", "3"]).get("timing_ms").is_none());
    assert!(json(&["degree", "1", "3", "--timing"])["timing_ms"].is_u64());
}
