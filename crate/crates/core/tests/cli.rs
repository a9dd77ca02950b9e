use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn quasihex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasihex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = quasihex(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn count_by_every_method() {
    let region = [
        "--kind",
        "symmetric",
        "--a",
        "3",
        "--d",
        "3,3",
        "--dp",
        "3,3",
    ];
    for method in ["formula", "counter", "auto"] {
        let mut args = vec!["count"];
        args.extend(region);
        args.extend(["--method", method]);
        assert_eq!(ok(&args).trim(), "17920", "method {method}");
    }
    let mut args = vec!["count"];
    args.extend(region);
    args.extend([
        "--method",
        "oracle",
        "--max-oracle-vertices",
        "64",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&ok(&args)).unwrap();
    assert_eq!(v["value"], "17920");
    assert_eq!(v["method"], "oracle");
    assert_eq!(v["vertices"], 64);
}

#[test]
fn douglas_count_equals_its_aztec_rectangle() {
    let region = ok(&[
        "count", "--kind", "douglas", "--a", "2", "--d", "2", "--method", "oracle",
    ]);
    let rectangle = ok(&[
        "count", "--family", "ar", "--params", "1,2", "--method", "oracle",
    ]);
    assert_eq!(region, rectangle);
}

#[test]
fn white_bottom_regions_count_zero() {
    for method in ["formula", "oracle"] {
        let out = ok(&[
            "count",
            "--kind",
            "symmetric",
            "--a",
            "1",
            "--d",
            "2",
            "--dp",
            "1",
            "--method",
            method,
        ]);
        assert_eq!(out.trim(), "0");
    }
}

#[test]
fn formula_eval() {
    assert_eq!(
        ok(&["formula", "eval", "--name", "macmahon", "--args", "4,1,4"]).trim(),
        "70"
    );
    let v: Value = serde_json::from_str(&ok(&[
        "formula", "eval", "--name", "macmahon", "--args", "4,1,4", "--json",
    ]))
    .unwrap();
    assert_eq!(v["value"], "70");
    assert_eq!(
        ok(&["formula", "eval", "--name", "aztec-diamond", "--args", "3"]).trim(),
        "64"
    );
    assert_eq!(
        ok(&[
            "formula",
            "eval",
            "--name",
            "aztec-dent",
            "--args",
            "2,2,1,3"
        ])
        .trim(),
        "4"
    );
    assert_eq!(
        quasihex(&["formula", "eval", "--name", "macmahon", "--args", "1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        quasihex(&["formula", "eval", "--name", "nope", "--args", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn families_and_regions_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    ok(&[
        "families",
        "build",
        "--family",
        "gamma",
        "--params",
        "3,7,3,3,5",
        "--out",
        g.to_str().unwrap(),
    ]);
    let by_graph = ok(&[
        "count",
        "--graph",
        g.to_str().unwrap(),
        "--method",
        "counter",
    ]);
    let by_formula = ok(&["formula", "eval", "--name", "gamma", "--args", "3,7,3,3,5"]);
    assert_eq!(by_graph, by_formula);
    assert_ne!(by_graph.trim(), "0");

    let r = dir.path().join("r.json");
    ok(&[
        "region",
        "build",
        "--kind",
        "douglas",
        "--a",
        "7",
        "--d",
        "4,2,5,4",
        "--out",
        r.to_str().unwrap(),
    ]);
    assert_eq!(json_file(&r)["a"], 7);
    let stats: Value = serde_json::from_str(&ok(&[
        "region",
        "stats",
        "--region",
        r.to_str().unwrap(),
        "--format",
        "json",
    ]))
    .unwrap();
    assert!(stats["h"].is_i64());
    let from_file = ok(&["count", "--region", r.to_str().unwrap()]);
    let from_flags = ok(&["count", "--kind", "douglas", "--a", "7", "--d", "4,2,5,4"]);
    assert_eq!(from_file, from_flags);
}

#[test]
fn replay_writes_a_trace_that_recombines_to_the_count() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let region = [
        "--kind",
        "symmetric",
        "--a",
        "3",
        "--d",
        "3,3",
        "--dp",
        "3,3",
    ];
    let mut args = vec!["transform", "replay"];
    args.extend(region);
    args.extend([
        "--pipeline",
        "thm21",
        "--check",
        "--max-oracle-vertices",
        "64",
        "--trace",
        t.to_str().unwrap(),
    ]);
    ok(&args);
    let trace = json_file(&t);
    assert_eq!(trace["pipeline"], "symmetric");
    assert_eq!(trace["predicted"], "17920");
    let steps = trace["steps"].as_array().unwrap();
    assert!(!steps.is_empty());
    assert_eq!(steps.last().unwrap()["cumulative"], trace["cumulative"]);
    assert!(trace["checked"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c == true));
}

#[test]
fn replay_starts_with_the_expected_block_moves() {
    let out = ok(&[
        "transform",
        "replay",
        "--kind",
        "douglas",
        "--a",
        "7",
        "--d",
        "4,2,5,4",
        "--pipeline",
        "thm23",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["steps"][0]["name"], "t1");

    let out = ok(&[
        "transform",
        "replay",
        "--kind",
        "asymmetric",
        "--a",
        "2",
        "--d",
        "3",
        "--c",
        "3,3",
        "--dp",
        "3",
        "--pipeline",
        "thm61-stages",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let names: Vec<&str> = v["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    let first_t3 = names.iter().position(|&n| n == "t3").expect("a t3 step");
    assert!(
        names[..first_t3]
            .iter()
            .all(|n| n.starts_with("t1") || n.starts_with("t2")),
        "{names:?}"
    );
    let count = ok(&[
        "count",
        "--kind",
        "asymmetric",
        "--a",
        "2",
        "--d",
        "3",
        "--c",
        "3,3",
        "--dp",
        "3",
    ]);
    assert_eq!(v["predicted"], count.trim());
}

#[test]
fn verify_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("report.csv");
    ok(&[
        "verify",
        "--checks",
        "macmahon,douglas",
        "--max-side",
        "2",
        "--format",
        "csv",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let body = std::fs::read_to_string(&csv).unwrap();
    assert!(body.starts_with("check,params,formula,oracle,match,status"));
    assert!(body
        .lines()
        .skip(1)
        .any(|l| l.starts_with("douglas") && l.contains(",0,0,true,match")));

    let out = quasihex(&[
        "verify",
        "--checks",
        "macmahon",
        "--max-side",
        "3",
        "--max-oracle-vertices",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["summary"]["skipped"].as_u64().unwrap() > 0);
    assert_eq!(v["summary"]["mismatched"], 0);
}

#[test]
fn verify_is_deterministic() {
    let args = [
        "verify",
        "--checks",
        "counter,gamma",
        "--max-side",
        "2",
        "--random-graphs",
        "30",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let strip = |s: String| -> Value {
        let mut v: Value = serde_json::from_str(&s).unwrap();
        for case in v["cases"].as_array_mut().unwrap() {
            case.as_object_mut().unwrap().remove("runtime_ms");
        }
        v
    };
    assert_eq!(strip(ok(&args)), strip(ok(&args)));
}

#[test]
fn errors_map_to_exit_codes() {
    assert_eq!(
        quasihex(&[
            "count",
            "--kind",
            "symmetric",
            "--a",
            "0",
            "--d",
            "3",
            "--dp",
            "3"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        quasihex(&["count", "--kind", "hexagonal", "--a", "1", "--d", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        quasihex(&["count", "--family", "grid", "--params", "10,10", "--method", "oracle"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        quasihex(&[
            "transform",
            "replay",
            "--kind",
            "douglas",
            "--a",
            "2",
            "--d",
            "2",
            "--pipeline",
            "thm99"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        quasihex(&["count", "--graph", "/nonexistent/g.json"])
            .status
            .code(),
        Some(1)
    );
}
