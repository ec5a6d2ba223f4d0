use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use posetpack::io::{parse_copies, parse_family, CertificateJson};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_posetpack"));
    c.env_remove("POSETPACK_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn closure_reports_convexity() {
    let dir = TempDir::new().unwrap();
    let v = write(dir.path(), "v.json", r#"{"n": 2, "sets": [[], [1], [2]]}"#);
    let out = run(&["closure", p(&v)]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["convex"], true);
    assert_eq!(json["sets"], serde_json::json!([[], [1], [2]]));

    let gap = write(dir.path(), "gap.json", r#"{"n": 2, "sets": [[], [1, 2]]}"#);
    let json = stdout_json(&run(&["closure", p(&gap)]));
    assert_eq!(json["convex"], false);
    assert_eq!(json["sets"].as_array().unwrap().len(), 4);
    // the output is itself a valid family file
    let text = serde_json::to_string(&json).unwrap();
    assert_eq!(parse_family(&text).unwrap().len(), 4);

    let empty = write(dir.path(), "e.json", r#"{"n": 3, "sets": []}"#);
    let json = stdout_json(&run(&["closure", p(&empty)]));
    assert_eq!(json["convex"], true);
    assert_eq!(json["sets"], serde_json::json!([]));
}

#[test]
fn parse_errors_exit_with_input_code() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        "{\"n\": 3,\n  \"sets\": [[1, 2],, [3]]}",
    );
    let out = run(&["convex", p(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2 column"), "{err}");

    let out = run(&["cp", "--poset", "no-such-poset"]);
    assert_eq!(out.status.code(), Some(2));
    let cyclic = write(
        dir.path(),
        "c.json",
        r#"{"elements": 2, "relations": [[0, 1], [1, 0]]}"#,
    );
    assert_eq!(run(&["cp", "--poset", p(&cyclic)]).status.code(), Some(2));
    assert_eq!(
        run(&["construct", "--poset", "V", "--n", "2", "--iters", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn budget_errors_exit_with_budget_code() {
    let out = run(&["--budget", "10", "abar", "--m", "2", "--n", "4"]);
    assert_eq!(out.status.code(), Some(3));
    let out = bin()
        .env("POSETPACK_BUDGET", "10")
        .args(["construct", "--poset", "V", "--n", "12", "--iters", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = run(&[
        "construct",
        "--poset",
        "V",
        "--n",
        "12",
        "--iters",
        "1",
        "--count-only",
        "--budget",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn cp_output_round_trips() {
    let out = run(&["cp", "--poset", "J", "--strong"]);
    assert_eq!(out.status.code(), Some(0));
    let cert: CertificateJson = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((cert.m, cert.k, cert.exhaustive_to), (5, 3, 4));
    assert_eq!(cert.witness_masks().unwrap().len(), 4);

    let json = stdout_json(&run(&["cp", "--poset", "chain(2)", "--kmax", "3"]));
    assert_eq!(json["m"], 4);
    assert_eq!(
        run(&["cp", "--poset", "chain(2)", "--kmax", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn construct_then_verify() {
    let dir = TempDir::new().unwrap();
    let copies = dir.path().join("copies.json");
    let out = run(&[
        "construct",
        "--poset",
        "V",
        "--n",
        "10",
        "--iters",
        "2",
        "--out",
        p(&copies),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = stdout_json(&out);
    let parsed = parse_copies(&std::fs::read_to_string(&copies).unwrap()).unwrap();
    assert_eq!(summary["copies"], parsed.len().to_string());
    assert_eq!(parsed[0].layer.as_ref().unwrap().word.len(), 2);

    let out = run(&["verify", p(&copies)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["passed"], true);

    // V's copies are induced copies of V but not of Lambda
    assert_eq!(
        run(&["verify", p(&copies), "--pattern", "V"]).status.code(),
        Some(0)
    );
    let out = run(&["verify", p(&copies), "--pattern", "Lambda"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stdout_json(&out)["pattern_violation"]["copy"], 0);

    let clash = write(
        dir.path(),
        "clash.json",
        r#"[{"n": 3, "sets": [[1], [1, 2]]}, {"n": 3, "sets": [[2], [1, 2, 3]]}]"#,
    );
    let out = run(&["verify", p(&clash)]);
    assert_eq!(out.status.code(), Some(4));
    let json = stdout_json(&out);
    assert_eq!(json["violation"]["copies"], serde_json::json!([0, 1]));
}

#[test]
fn construct_prints_copies_without_out() {
    let out = run(&["construct", "--poset", "V", "--n", "6", "--iters", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed = parse_copies(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(parsed.len(), 4);
    assert_eq!(
        parsed[0].sets,
        vec![vec![3, 4, 5], vec![1, 3, 4, 5], vec![2, 3, 4, 5]]
    );
}

#[test]
fn chains_and_abar() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", r#"{"n": 4, "sets": [[1], [1, 2]]}"#);
    let json = stdout_json(&run(&["chains", p(&f), "--oracle"]));
    assert_eq!(json["chains"], "8");
    assert_eq!(json["agree"], true);
    let json = stdout_json(&run(&["abar", "--m", "1", "--n", "4"]));
    assert_eq!(json["value"], "4");
    assert_eq!(json["witness"]["sets"], serde_json::json!([[1, 2]]));
}

#[test]
fn oracle_commands() {
    let json = stdout_json(&run(&["oracle-pa", "--poset", "antichain(1)", "--n", "4"]));
    assert_eq!(json["size"], 6);
    let json = stdout_json(&run(&[
        "oracle-pa-collection",
        "--posets",
        "antichain(1),chain(1)",
        "--n",
        "3",
    ]));
    assert_eq!(json["size"], 4);
    let json = stdout_json(&run(&["gst", "--k", "1", "--n", "4"]));
    assert_eq!(json["value"], "6");
    let json = stdout_json(&run(&["best-ratio", "--posets", "V,J,chain(1)"]));
    assert_eq!(json["poset"], "V");
    assert_eq!(json["ratio"], "1/1");
}

#[test]
fn report_renders_exact_ratios() {
    let json = stdout_json(&run(&[
        "report",
        "--poset",
        "antichain(1)",
        "--n",
        "10",
        "--iters",
        "1",
    ]));
    assert_eq!(json["copies"], "252");
    assert_eq!(json["asymptotic_ratio"]["decimal"], "1.00000");

    let out = run(&[
        "--tsv", "report", "--poset", "chain(1)", "--n", "4", "--iters", "1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "family_size\t6"), "{text}");
}

#[test]
fn selftest_is_seed_independent() {
    let a = run(&["selftest", "--seed", "1"]);
    let b = run(&["selftest", "--seed", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn workers_flag_keeps_results() {
    let one = run(&["--workers", "1", "abar", "--m", "2", "--n", "4"]);
    let many = run(&["--workers", "4", "abar", "--m", "2", "--n", "4"]);
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(
        run(&["--workers", "0", "gst", "--k", "1", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
}
