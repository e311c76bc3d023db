use std::path::Path;
use std::process::{Command, Output};

use bargmann::io::parse_tuple;
use bargmann::state::{bargmann_pure, Tuple};
use bargmann::C64;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bargmann")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const OBG3: &str = r#"{"n": 3, "d": 2, "kind": "pure", "states": [
  [[0.7071067811865476, 0], [-0.35355339059327373, 0.6123724356957946]],
  [[0.7071067811865476, 0], [-0.35355339059327384, -0.6123724356957945]],
  [[0.7071067811865476, 0], [0.7071067811865476, 0]]
]}"#;

#[test]
fn invariant_command() {
    let dir = tempfile::tempdir().unwrap();
    let same = r#"{"n": 3, "d": 2, "kind": "pure", "states": [[[1,0],[0,0]], [[1,0],[0,0]], [[1,0],[0,0]]]}"#;
    let o = bin(&["invariant", &write(dir.path(), "same.json", same)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next().unwrap(), "1 0");

    let o = bin(&["invariant", &write(dir.path(), "obg.json", OBG3)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next().unwrap(), "-0.125 0");

    let mixed = r#"{"n": 3, "d": 2, "kind": "mixed", "states": [
      [[[0.5,0],[0,0]],[[0,0],[0.5,0]]], [[[0.5,0],[0,0]],[[0,0],[0.5,0]]], [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]]}"#;
    let o = bin(&["invariant", &write(dir.path(), "mixed.json", mixed)]);
    assert_eq!(stdout(&o).lines().next().unwrap(), "0.25 0");

    let o = bin(&["invariant", &write(dir.path(), "bad.json", "{\"n\": 3,\n \"d\": ")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = bin(&["invariant", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn membership_command() {
    let o = bin(&["membership", "-0.125", "0", "--n", "3", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("boundary"));

    let o = bin(&["membership", "0.5", "0", "--n", "3", "--d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert!(line.starts_with("inside") && line.contains("t=0.5") && line.contains("p=1"), "{line}");

    let o = bin(&["membership", "-0.2", "0", "--n", "3", "--d", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("outside"));

    assert_eq!(bin(&["membership", "abc", "0", "--n", "3", "--d", "2"]).status.code(), Some(1));
    assert_eq!(bin(&["membership", "0.1", "0", "--n", "3"]).status.code(), Some(1));
    assert_eq!(bin(&["membership", "0.1", "0", "--n", "3", "--d", "0"]).status.code(), Some(1));
    assert_eq!(
        bin(&["membership", "0.1", "0", "--n", "3", "--d", "2", "--tol", "-1"]).status.code(),
        Some(1)
    );
}

#[test]
fn synth_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ones.json");
    let o = bin(&["synth", "1", "0", "--n", "4", "--mode", "circular", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["method"], "circular-gram");
    let Tuple::Pure(t) = parse_tuple(&text).unwrap() else { panic!("pure expected") };
    for s in t.states() {
        assert!((s.overlap(t.cyclic(0)).norm() - 1.0).abs() < 1e-12);
    }

    let o = bin(&["synth", "-0.125", "0", "--n", "3", "--mode", "qubit"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["method"], "qubit-optimizer");
    assert!(v["residual"].as_f64().unwrap() < 1e-9);
    let Tuple::Pure(t) = parse_tuple(&text).unwrap() else { panic!("pure expected") };
    assert_eq!(t.dim(), 2);
    assert!((bargmann_pure(&t).value() - C64::new(-0.125, 0.0)).norm() < 1e-9);

    assert_eq!(bin(&["synth", "2", "0", "--n", "3", "--mode", "circular"]).status.code(), Some(3));
    assert_eq!(bin(&["synth", "0.1", "0", "--n", "3", "--mode", "bogus"]).status.code(), Some(1));
}

#[test]
fn boundary_command() {
    let o = bin(&["boundary", "--n", "3", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(text.lines().next().unwrap(), "theta,re,im,radius");
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[0][3], 1.0);
    assert!((rows[1][0] - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-15);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = bin(&["boundary", "--n", "4", "--samples", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let row: Vec<f64> = text.lines().nth(2).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((row[3] - 0.25).abs() < 1e-15);

    assert_eq!(bin(&["boundary", "--n", "3", "--samples", "1"]).status.code(), Some(1));
    assert_eq!(bin(&["boundary", "--n", "2", "--samples", "5"]).status.code(), Some(1));
}

#[test]
fn symmetrize_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sym.json");
    let o = bin(&["symmetrize", &write(dir.path(), "obg.json", OBG3), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let Tuple::Pure(t) = parse_tuple(&std::fs::read_to_string(&out).unwrap()).unwrap() else {
        panic!("pure expected")
    };
    assert!((bargmann_pure(&t).value() - C64::new(-0.125, 0.0)).norm() < 1e-10);
    assert!(String::from_utf8_lossy(&o.stderr).contains("before 0.125 after 0.125"));

    let random = r#"{"n": 3, "d": 2, "kind": "pure", "states": [
      [[0.6, 0], [0, 0.8]], [[0.8, 0], [0.6, 0]], [[0, 1], [0, 0]]]}"#;
    let o = bin(&["symmetrize", &write(dir.path(), "r.json", random)]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    let nums: Vec<f64> = err.split_whitespace().filter_map(|w| w.parse().ok()).collect();
    assert!(nums[1] >= nums[0], "{err}");

    let zero = r#"{"n": 3, "d": 2, "kind": "pure", "states": [[[1,0],[0,0]], [[0,0],[1,0]], [[1,0],[0,0]]]}"#;
    assert_eq!(bin(&["symmetrize", &write(dir.path(), "z.json", zero)]).status.code(), Some(2));

    let mixed = r#"{"n": 1, "d": 1, "kind": "mixed", "states": [[[[1,0]]]]}"#;
    assert_eq!(bin(&["symmetrize", &write(dir.path(), "m.json", mixed)]).status.code(), Some(1));
}

#[test]
fn verify_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = bin(&["verify", "--samples", "300", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pass"], true);
    assert!(String::from_utf8_lossy(&o.stderr).contains("overall: PASS"));

    assert_eq!(bin(&["verify", "--samples", "0"]).status.code(), Some(1));
    assert_eq!(bin(&["verify", "--n", "5..3"]).status.code(), Some(1));
    assert_eq!(bin(&["verify", "--n", "x"]).status.code(), Some(1));

    let o = bin(&["verify", "--samples", "100", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["failures"].as_u64().unwrap() > 0));
}
