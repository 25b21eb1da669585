use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const GENUS_ONE: &str = r#"{"genus":1,"A":["-3","0","1"],"R":["-2","-1"],"P0":["-1","0","1"],"Q0":["-2","-2"]}"#;
const GENUS_TWO: &str =
    r#"{"genus":2,"A":["-1","-5","0","1"],"R":["-3","-2","-1"],"P0":["1/2","-5/2","0","1"],"Q0":["6","-2","-4"]}"#;
// R = 0: the expansion of A terminates after a few lines.
const TERMINATING: &str = r#"{"genus":2,"A":["-1","-5","0","1"],"R":[],"P0":["-1","-5","0","1"],"Q0":["1","2","3"]}"#;

fn hypercf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercf")).args(args).output().expect("spawn hypercf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn expand_prints_json_lines() {
    let dir = TempDir::new().unwrap();
    let curve = write(&dir, "c.json", GENUS_ONE);
    let o = hypercf(&["expand", "--curve", arg(&curve), "--lines", "2", "--backward", "1"]);
    assert!(o.status.success());
    let lines: Vec<serde_json::Value> =
        stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["n"], -1);
    assert_eq!((lines[1]["d"].as_str(), lines[1]["v"].as_str()), (Some("1"), Some("-1")));
    assert_eq!((lines[2]["d"].as_str(), lines[2]["v"].as_str()), (Some("1"), Some("0")));
}

#[test]
fn singular_expansion_keeps_prefix_and_fails() {
    let dir = TempDir::new().unwrap();
    let curve = write(&dir, "c.json", TERMINATING);
    let o = hypercf(&["expand", "--curve", arg(&curve), "--lines", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stdout(&o).is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular"));
}

#[test]
fn moments_and_determinants() {
    let dir = TempDir::new().unwrap();
    let g1 = write(&dir, "g1.json", GENUS_ONE);
    let g2 = write(&dir, "g2.json", GENUS_TWO);
    let o = hypercf(&["moments", "--curve", arg(&g1), "--count", "12", "--oeis-style"]);
    assert_eq!(stdout(&o).trim(), "1 0 2 1 6 7 24 41 115 236 613 1380");
    let o = hypercf(&["hankel", "--curve", arg(&g2), "--size", "6", "--shifted", "--oeis-style"]);
    assert_eq!(stdout(&o).trim(), "0 0 0 4 16 200 6987");
    let o = hypercf(&["hankel", "--curve", arg(&g2), "--size", "3", "--backward"]);
    let values: Vec<String> = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(values, ["1", "-5/8", "7/8", "-303/128"]);
}

#[test]
fn tau_feeds_the_finder() {
    let dir = TempDir::new().unwrap();
    let g2 = write(&dir, "g2.json", GENUS_TWO);
    let o = hypercf(&["tau", "--curve", arg(&g2), "--forward", "14", "--backward", "14"]);
    assert!(o.status.success());
    let seq = write(&dir, "tau.json", &stdout(&o));
    let o = hypercf(&["somos", "find", "--input", arg(&seq)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rel: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rel["k"], 8);
    assert_eq!(rel["coefficients"], serde_json::json!(["7", "137", "2504", "-43424", "-26959"]));

    let rel_path = write(&dir, "rel.json", &stdout(&o));
    let o = hypercf(&["somos", "verify", "--relation", arg(&rel_path), "--input", arg(&seq)]);
    assert!(o.status.success());

    let wrong = write(&dir, "wrong.json", r#"{"k":8,"coefficients":["1","1","1","1","1"],"window":[0,0]}"#);
    let o = hypercf(&["somos", "verify", "--relation", arg(&wrong), "--input", arg(&seq)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn plain_arrays_are_sequences() {
    let dir = TempDir::new().unwrap();
    let seq = write(&dir, "s.json", r#"[1,1,1,1,2,3,7,23,59,314,1529,8209,83313,620297]"#);
    let o = hypercf(&["somos", "find", "--input", arg(&seq), "--kmax", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(r#""k":4"#));
}

#[test]
fn orbits_as_csv() {
    let dir = TempDir::new().unwrap();
    let g1 = write(&dir, "g1.json", GENUS_ONE);
    let o = hypercf(&["orbit", "--genus", "1", "--steps", "3", "--seed-json", arg(&g1)]);
    assert_eq!(stdout(&o), "n,d,v\n0,1,-1\n1,1,0\n2,2,-1/2\n3,3/4,-5/6\n");

    let pairs = write(&dir, "p.json", r#"{"f":"-5","g":"-1","u":"-1","start":{"d0":"5/4","d1":"2","v0":"-1/2","v1":"0"}}"#);
    let o = hypercf(&["orbit", "--genus", "2", "--steps", "5", "--seed-json", arg(&pairs), "--float"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rows = text.lines();
    assert!(rows.next().unwrap().starts_with("n,d,e,v,w,"));
    assert_eq!(rows.count(), 6);

    let o = hypercf(&["orbit", "--genus", "2", "--steps", "3", "--seed-json", arg(&g1)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{ not json");
    assert_eq!(hypercf(&["expand", "--curve", arg(&bad)]).status.code(), Some(2));
    let wrong_degree = write(&dir, "w.json", &GENUS_ONE.replace(r#""Q0":["-2","-2"]"#, r#""Q0":["1"]"#));
    assert_eq!(hypercf(&["expand", "--curve", arg(&wrong_degree)]).status.code(), Some(2));
    assert_eq!(hypercf(&["expand", "--curve", "/nonexistent/curve.json"]).status.code(), Some(2));
    assert_eq!(hypercf(&["repro", "nope"]).status.code(), Some(2));
    assert_eq!(hypercf(&["verify", "poisson", "--genus", "0"]).status.code(), Some(2));
}

#[test]
fn repro_bundle_report() {
    let dir = TempDir::new().unwrap();
    let o = hypercf(&["repro", "example4"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(report["passed"], true);

    let csv = dir.path().join("orbit.csv");
    let o = hypercf(&["repro", "fig1-orbit", "--csv", arg(&csv)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    // header plus one (d_{n-1}, d_n) point per step
    assert_eq!(text.lines().count(), 2001);
}

#[test]
fn verify_reports_are_deterministic() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_hypercf"))
            .args(["verify", "poisson", "--genus", "2", "--samples", "6", "--seed", "11"])
            .env("HYPERCF_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        let mut v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn verify_a_given_curve() {
    let dir = TempDir::new().unwrap();
    let g2 = write(&dir, "g2.json", GENUS_TWO);
    let o = hypercf(&["verify", "theorem2", "--curve", arg(&g2)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains(r#""passed":true"#));
}
