use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sumnet"));
    cmd.env_remove("SUMNET_SEARCH_LIMIT");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(name)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_matches_committed_fixtures() {
    let out = run(&["gen", "g1"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        std::fs::read_to_string(fixture("fixtures/g1.json")).unwrap()
    );

    let dir = TempDir::new().unwrap();
    let json = dir.path().join("s4.json");
    let dot = dir.path().join("s4.dot");
    let out = run(&[
        "gen",
        "smstar",
        "--m",
        "4",
        "--out",
        path_str(&json),
        "--dot",
        path_str(&dot),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read_to_string(&json).unwrap(),
        std::fs::read_to_string(fixture("fixtures/smstar_4.json")).unwrap()
    );
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert!(dot.starts_with("digraph \"S_4*\" {"));
    assert!(dot.contains("\"s1\" [shape=box];"));
    assert!(dot.contains("\"t4\" [shape=doublecircle];"));
}

#[test]
fn gen_rejects_small_m() {
    let out = run(&["gen", "smstar", "--m", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reverse_round_trip_and_counts() {
    let dir = TempDir::new().unwrap();
    let once = dir.path().join("once.json");
    let twice = dir.path().join("twice.json");
    let s4 = fixture("fixtures/smstar_4.json");
    let out = run(&["reverse", "--net", path_str(&s4), "--out", path_str(&once)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "reversed network: 4 sources, 3 terminals\n");
    let out = run(&[
        "reverse",
        "--net",
        path_str(&once),
        "--out",
        path_str(&twice),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&twice).unwrap(), std::fs::read(&s4).unwrap());
}

#[test]
fn solve_verify_transfer_reverse_pipeline() {
    let dir = TempDir::new().unwrap();
    let g1 = fixture("fixtures/g1.json");
    let code = dir.path().join("code.json");
    let out = run(&[
        "solve",
        "--net",
        path_str(&g1),
        "--field",
        "3",
        "--mode",
        "brute",
        "--wlog",
        "--out",
        path_str(&code),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("SolvableWithWitness"));

    let out = run(&["verify", "--net", path_str(&g1), "--code", path_str(&code)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "solves\n");

    for extra in [&[][..], &["--via-paths"][..]] {
        let mut args = vec![
            "transfer",
            "--net",
            path_str(&g1),
            "--code",
            path_str(&code),
        ];
        args.extend_from_slice(extra);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0));
        assert!(stdout(&out).starts_with("X1: ([1])  ([1])  ([1])\n"));
    }

    let rev_net = dir.path().join("rev.json");
    let rev_code = dir.path().join("rev_code.json");
    let out = run(&[
        "--json",
        "reverse",
        "--net",
        path_str(&g1),
        "--out",
        path_str(&rev_net),
        "--code",
        path_str(&code),
        "--code-out",
        path_str(&rev_code),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reversed_code_solves"], true);
    let out = run(&[
        "verify",
        "--net",
        path_str(&rev_net),
        "--code",
        path_str(&rev_code),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn zero_code_fails_verification() {
    let dir = TempDir::new().unwrap();
    let g1 = fixture("fixtures/g1.json");
    let code = dir.path().join("zero.json");
    std::fs::write(&code, r#"{"field": "2", "N": 1}"#).unwrap();
    let out = run(&["verify", "--net", path_str(&g1), "--code", path_str(&code)]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "transfer",
        "--net",
        path_str(&g1),
        "--code",
        path_str(&code),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).ends_with("all blocks identity: no\n"));
}

#[test]
fn solve_exit_codes() {
    let g1 = fixture("fixtures/g1.json");
    let g1 = path_str(&g1);
    let out = run(&["solve", "--net", g1, "--field", "2", "--mode", "structured"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "solve",
        "--net",
        g1,
        "--field",
        "2",
        "--mode",
        "brute",
        "--wlog",
        "--sequential",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("UnsolvableExhaustive"));
    let out = run(&[
        "solve", "--net", g1, "--field", "2", "--mode", "brute", "--limit", "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("16777216"));
    let out = bin()
        .args(["solve", "--net", g1, "--field", "2", "--mode", "brute"])
        .env("SUMNET_SEARCH_LIMIT", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["solve", "--net", g1, "--field", "2", "--block", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["solve", "--net", g1, "--field", "6"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn solve_json_output() {
    let g1 = fixture("fixtures/g1.json");
    let out = run(&["--json", "solve", "--net", path_str(&g1), "--field", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "SolvableWithWitness");
    assert_eq!(v["field"], "GF(2^2)");
    assert_eq!(v["witness"]["field"], "2^2");
    let again = run(&["--json", "solve", "--net", path_str(&g1), "--field", "2^2"]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn probe_reports_characteristic_set() {
    let out = run(&[
        "--json",
        "probe",
        "smstar",
        "--m",
        "8",
        "--fields",
        "2,3,4,5,7,9",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let statuses: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["status"].as_str().unwrap())
        .collect();
    assert_eq!(
        statuses,
        [
            "UnsolvableStructural",
            "UnsolvableStructural",
            "UnsolvableStructural",
            "SolvableWithWitness",
            "SolvableWithWitness",
            "UnsolvableStructural"
        ]
    );
}

#[test]
fn paper_suite_matches_golden() {
    let out = run(&["--json", "paper-suite", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(fixture("golden/paper_suite.json")).unwrap();
    assert_eq!(stdout(&out), golden);
}

#[test]
fn paper_suite_filter() {
    let out = run(&["--json", "paper-suite", "--no-timing", "--filter", "g1*"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ids: Vec<&str> = v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(
        ids,
        [
            "g1-gf2-unsolvable",
            "g1-solvable-odd-fields",
            "g1-vector-gf2",
            "g1-condition-equivalence"
        ]
    );
}

#[test]
fn paper_suite_names_failing_claim() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("smstar_4.json"), "{\"vertices\": [").unwrap();
    let out = run(&[
        "paper-suite",
        "--no-timing",
        "--fixtures",
        path_str(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let failing: Vec<&str> = text
        .lines()
        .filter(|l| l.split_whitespace().nth(1) == Some("FAIL"))
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(
        failing,
        [
            "smstar-m4-characteristic",
            "reverse-witnesses",
            "transfer-path-oracle"
        ]
    );
    assert!(text.contains("6 of 9 claims passed"));
}

#[test]
fn paper_suite_accepts_committed_fixtures() {
    let out = run(&[
        "paper-suite",
        "--no-timing",
        "--fixtures",
        path_str(&fixture("fixtures")),
    ]);
    assert_eq!(out.status.code(), Some(0));
}
