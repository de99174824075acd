//! The `lp-embed` binary end to end: files written, exit codes, verdicts.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lp-embed")).args(args).output().expect("binary runs")
}

fn run_with_cap(args: &[&str], cap: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lp-embed"))
        .args(args)
        .env(lp_embed::limits::CAP_ENV, cap)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write_cycle(dir: &Path) -> String {
    let path = dir.join("cycle4.json");
    std::fs::write(
        &path,
        r#"{"n": 4, "arith": "rational", "dist": [[0,1,2,1],[1,0,1,2],[2,1,0,1],[1,2,1,0]]}"#,
    )
    .unwrap();
    path.display().to_string()
}

#[test]
fn gen_l1_sizes_and_cap() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("l1");
    let o = run(&["gen-l1", "--max-len", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let space = json(&out.join("space.json"));
    assert_eq!(space["n"], 4);
    assert_eq!(space["dist"][2][3], "3/1");
    assert!(out.join("manifest.json").exists());

    let out2 = tmp.path().join("l2");
    assert!(run(&["gen-l1", "--max-len", "2", "--out", out2.to_str().unwrap()]).status.success());
    assert_eq!(json(&out2.join("space.json"))["n"], 8);

    let out0 = tmp.path().join("l0");
    assert!(run(&["gen-l1", "--max-len", "0", "--out", out0.to_str().unwrap()]).status.success());
    let s0 = json(&out0.join("space.json"));
    assert_eq!(s0["n"], 2);
    assert_eq!(s0["dist"][0][1], "1/1");

    let capped = run_with_cap(&["gen-l1", "--max-len", "5", "--out", tmp.path().join("c").to_str().unwrap()], "16");
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn gen_sc_levels() {
    let tmp = tempfile::tempdir().unwrap();
    let one = tmp.path().join("one");
    assert!(run(&["gen-sc", "--levels", "1", "--out", one.to_str().unwrap()]).status.success());
    let scaffold = json(&one.join("scaffold.json"));
    let pts = scaffold["levels"][0]["points"].as_array().unwrap();
    assert!(pts.iter().any(|p| p[0] == 1.0), "level 1 contains e_1");

    let two = tmp.path().join("two");
    assert!(run(&["gen-sc", "--levels", "2", "--out", two.to_str().unwrap()]).status.success());
    assert_eq!(json(&two.join("certificates.json"))["passed"], true);

    let coarse = tmp.path().join("coarse");
    let o = run(&["gen-sc", "--levels", "2", "--delta-schedule", "10,10", "--out", coarse.to_str().unwrap()]);
    assert!(o.status.success());
    let scaffold = json(&coarse.join("scaffold.json"));
    assert_eq!(scaffold["levels"][1]["net"]["points"].as_array().unwrap().len(), 1);

    let quarter = tmp.path().join("quarter");
    assert!(run(&["gen-sc", "--levels", "2", "--delta-schedule", "1/(4n)", "--out", quarter.to_str().unwrap()]).status.success());

    let bad = run(&["gen-sc", "--levels", "2", "--delta-schedule", "nonsense", "--out", tmp.path().join("bad").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn solve_cycle_and_l1_witness() {
    let tmp = tempfile::tempdir().unwrap();
    let cycle = write_cycle(tmp.path());
    let out = tmp.path().join("s2");
    let o = run(&["solve", "--space", &cycle, "--p", "2", "--dim", "2", "--restarts", "8", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let res = json(&out.join("result.json"));
    let c = res["distortion"].as_f64().unwrap();
    assert!((c - 2f64.sqrt()).abs() < 1e-3, "{c}");
    assert_eq!(res["coords"].as_array().unwrap().len(), 4);
    let csv = std::fs::read_to_string(out.join("result.csv")).unwrap();
    assert!(csv.starts_with("space_id,n,p,d,restarts,distortion,r,converged,seconds\ncycle4,4,2,2,8,"));

    let out1 = tmp.path().join("s1");
    assert!(run(&["solve", "--space", &cycle, "--p", "1", "--dim", "2", "--out", out1.to_str().unwrap()]).status.success());
    assert!(json(&out1.join("result.json"))["distortion"].as_f64().unwrap() <= 1.0 + 1e-4);

    let l1 = tmp.path().join("l1");
    assert!(run(&["gen-l1", "--max-len", "1", "--out", l1.to_str().unwrap()]).status.success());
    let outw = tmp.path().join("sw");
    let o = run(&["solve", "--space", l1.join("space.json").to_str().unwrap(), "--p", "1", "--dim", "4", "--out", outw.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(json(&outw.join("result.json"))["distortion"].as_f64().unwrap() <= 1.0 + 1e-4);

    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 3, "arith": "double", "dist": [[0,1,1],[1,0,3],[1,3,0]]}"#).unwrap();
    let o = run(&["solve", "--space", bad.to_str().unwrap(), "--out", tmp.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_verdicts() {
    let tmp = tempfile::tempdir().unwrap();
    let line = tmp.path().join("line.json");
    std::fs::write(&line, r#"{"n": 3, "arith": "rational", "dist": [["0","1","2"],["1","0","1"],["2","1","0"]]}"#).unwrap();
    let o = run(&["verify", "--space", line.to_str().unwrap(), "--schoenberg"]);
    assert_eq!(o.status.code(), Some(0));

    let cycle = write_cycle(tmp.path());
    let o = run(&["verify", "--space", &cycle, "--schoenberg", "--out", tmp.path().join("v").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&tmp.path().join("v/verdict.json"));
    assert!(v["checks"]["schoenberg"]["verdict"]["eigenvalue"].as_f64().unwrap() < 0.0);

    let x = tmp.path().join("x.json");
    std::fs::write(&x, r#"["1/2", "1/2"]"#).unwrap();
    let o = run(&["verify", "--space", line.to_str().unwrap(), "--split", x.to_str().unwrap(), "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"]["split"]["verdict"]["certificate"]["kind"], "max_coordinate");
    let o = run(&["verify", "--space", line.to_str().unwrap(), "--split", x.to_str().unwrap(), "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));

    let sc = tmp.path().join("sc");
    assert!(run(&["gen-sc", "--levels", "2", "--out", sc.to_str().unwrap()]).status.success());
    let o = run(&["verify", "--space", sc.join("space.json").to_str().unwrap(), "--rigidity", sc.join("scaffold.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify", "--space", &cycle, "--rigidity", sc.join("scaffold.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "scaffold does not describe the cycle");

    let junk = tmp.path().join("junk.json");
    std::fs::write(&junk, "{").unwrap();
    let o = run(&["verify", "--space", line.to_str().unwrap(), "--rigidity", junk.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
