use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn descriptor(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../descriptors").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starreg")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn m2_gf3_with_transpose_is_star_regular() {
    let out = run(&["ring", "check", descriptor("m2_gf3_transpose.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("star-regular: true"));
}

#[test]
fn m3_gf2_with_transpose_fails_with_an_isotropic_witness() {
    let path = descriptor("m3_gf2_transpose.json");
    let out = run(&["ring", "check", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("star-regular: false"));

    let out = run(&["--format", "json", "ring", "check", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let report = json_of(&out);
    assert_eq!(report["passed"], json!(false));
    let w: Vec<Vec<i64>> = serde_json::from_value(report["witness"].clone()).expect("3x3 witness");
    // x x^T = 0 over GF(2) with x != 0 breaks properness of the transpose.
    assert!(w.iter().flatten().any(|&e| e % 2 != 0));
    for i in 0..3 {
        for j in 0..3 {
            let s: i64 = (0..3).map(|k| w[i][k] * w[j][k]).sum();
            assert_eq!(s % 2, 0, "entry ({i},{j}) of x x^T");
        }
    }
}

#[test]
fn canonical_q3_frame_is_stable_orthogonal() {
    let out = run(&["frame", "verify", "--level", "stable-orthogonal", descriptor("q3_canonical.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn found_and_stabilized_frame_round_trips_through_files() {
    let dir = TempDir::new().unwrap();
    let found = dir.path().join("found.json");
    let stable = dir.path().join("stable.json");
    let out = run(&[
        "--format",
        "json",
        "--out",
        found.to_str().unwrap(),
        "frame",
        "find",
        "-n",
        "3",
        descriptor("q3_space.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&["--format", "json", "--out", stable.to_str().unwrap(), "frame", "stabilize", found.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&stable).unwrap()).unwrap();
    assert_eq!(v["level"], json!("stable-orthogonal"));
    let out = run(&["frame", "verify", stable.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        vec!["ring", "check", "m3_gf2_transpose.json"],
        vec!["lattice", "build", "m2_gf3_transpose.json"],
        vec!["coord", "rho", "q3_canonical.json"],
        vec!["repr", "extend", "repr_m2_gf3.json"],
    ] {
        let path = descriptor(args[2]);
        let full = ["--format", "json", "--seed", "5", args[0], args[1], path.to_str().unwrap()];
        let (a, b) = (run(&full), run(&full));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(json_of(&a)["schema"], json!("v1"));
        assert_eq!(json_of(&a)["seed"], json!(5));
    }
}

#[test]
fn bad_input_exits_2_with_a_location() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", &json!({"kind": "matrix", "field": {"kind": "gf", "p": 3}}));
    let out = run(&["ring", "check", &p]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.json/n"), "{err}");

    let out = run(&["ring", "check", "/nonexistent/ring.json"]);
    assert_eq!(code(&out), 2);

    let p = write(&dir, "frame.json", &json!({"space": {"field": {"kind": "q"}, "dim": 2}, "format": [2, 0], "a": [[[1, 0]]], "a0": [], "axes": {}, "z": {}}));
    let out = run(&["frame", "verify", &p]);
    assert_eq!(code(&out), 2);
}

#[test]
fn skewed_iota_fails_star_preservation_with_a_witness() {
    let out = run(&["--format", "json", "coord", "rho", descriptor("q3_rho_skewed.json").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let report = json_of(&out);
    assert_eq!(report["passed"], json!(false));
    assert!(report["error"].as_str().unwrap().contains("involution"));
    assert!(!report["witness"].is_null());
}

#[test]
fn representation_round_trip_and_tamper_detection() {
    let dir = TempDir::new().unwrap();
    let rep = dir.path().join("rep.json");
    let out =
        run(&["--format", "json", "--out", rep.to_str().unwrap(), "repr", "extend", descriptor("repr_m2_gf3.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let out = run(&["repr", "verify", rep.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("matches recorded verdicts: true"));

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    // The ideal misses the second factor, so the extension has a kernel.
    assert_eq!(v["verdicts"]["faithful"], json!(false));
    v["verdicts"]["faithful"] = json!(true);
    let tampered = write(&dir, "tampered.json", &v);
    let out = run(&["repr", "verify", &tampered]);
    assert_eq!(code(&out), 1);
}

#[test]
fn theta_eta_representation_recomputes_from_seed() {
    let dir = TempDir::new().unwrap();
    let out = run(&["--format", "json", "--seed", "3", "--samples", "32", "coord", "rho", descriptor("q3_canonical.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rho = json_of(&out)["rho"].clone();
    let frame: Value = serde_json::from_str(&std::fs::read_to_string(descriptor("q3_canonical.json")).unwrap()).unwrap();
    let file = write(&dir, "te.json", &json!({"map": "theta-eta", "frame": frame, "samples": 32, "seed": 3, "verdicts": rho}));
    let out = run(&["repr", "verify", &file]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn lattice_check_and_dot_output() {
    let out = run(&["lattice", "check", descriptor("m2_gf3_ring.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = run(&["--format", "dot", "lattice", "build", descriptor("m2_gf3_transpose.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).trim_start().starts_with("digraph") || stdout(&out).contains("graph"));
    let out = run(&["--format", "dot", "ring", "check", descriptor("m2_gf3_transpose.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn coordinatization_on_a_ring_frame() {
    let dir = TempDir::new().unwrap();
    let ring = json!({"ring": {"kind": "matrix", "field": {"kind": "gf", "p": 2}, "n": 3}});
    let ctx = write(&dir, "ring.json", &ring);
    let found = dir.path().join("f.json");
    let out = run(&["--format", "json", "--out", found.to_str().unwrap(), "frame", "find", "-n", "3", &ctx]);
    assert_eq!(code(&out), 0);
    for verb in ["theta", "eta", "rho"] {
        let out = run(&["coord", verb, found.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{verb}: {}", stdout(&out));
    }
}

#[test]
fn adjoint_and_lift_examples_pass() {
    for (args, file) in [
        (vec!["coord", "adjoint"], "adjoint_m2_gf3.json"),
        (vec!["coord", "adjoint"], "q3_canonical.json"),
        (vec!["frame", "lift"], "lift_m2xm2.json"),
        (vec!["frame", "orthogonalize"], "q3_canonical.json"),
    ] {
        let path = descriptor(file);
        let mut full = args.clone();
        full.push(path.to_str().unwrap());
        let out = run(&full);
        assert_eq!(code(&out), 0, "{full:?}: {}", stdout(&out));
    }
}

#[test]
fn catalog_lists_rings() {
    let out = run(&["catalog", "list"]);
    assert_eq!(code(&out), 0);
    assert!(!stdout(&out).trim().is_empty());
}
