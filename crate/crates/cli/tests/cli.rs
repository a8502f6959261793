use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn ncgpi1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncgpi1"))
        .args(args)
        .output()
        .unwrap()
}

fn ncgpi1_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ncgpi1"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_passes_on_fixtures() {
    for f in [
        "exterior2.json",
        "two_point_d6.json",
        "identified_points_d6.json",
        "truncated_poly4.json",
    ] {
        let o = ncgpi1(&["check", "--input", &fixture(f)]);
        assert_eq!(code(&o), 0, "{f}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&o)["pass"], true);
    }
}

#[test]
fn broken_unit_is_reported_with_witness() {
    let mut v: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("exterior2.json")).unwrap()).unwrap();
    let products = v["products"].as_array_mut().unwrap();
    let entry = products
        .iter_mut()
        .find(|p| p["left"] == "1" && p["right"] == "η2")
        .unwrap();
    entry["result"][0]["basis"] = "η1".into();
    let o = ncgpi1_stdin(&["check", "--input", "-"], &v.to_string());
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["pass"], false);
    let failing: Vec<&Value> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .collect();
    assert!(!failing.is_empty());
    assert!(failing
        .iter()
        .all(|c| !c["witnesses"].as_array().unwrap().is_empty()));
}

#[test]
fn flatness_exit_codes() {
    let o = ncgpi1(&["flat", "--input", &fixture("conn_flat.json")]);
    assert_eq!(code(&o), 0);
    let o = ncgpi1(&["flat", "--input", &fixture("conn_noncommuting.json")]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(
        ncgpi1(&[
            "flat",
            "--input",
            &fixture("conn_noncommuting.json"),
            "--format",
            "text",
        ])
        .stdout,
    )
    .unwrap();
    assert!(text.contains("FAIL") && text.contains("witness"));
}

#[test]
fn curvature_tensor_dual() {
    let o = ncgpi1(&["curvature", "--input", &fixture("conn_grassmannian.json")]);
    assert_eq!(code(&o), 0);
    let o = ncgpi1(&[
        "tensor",
        "--input",
        &fixture("conn_noncommuting.json"),
        "--input",
        &fixture("conn_flat.json"),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = ncgpi1(&["dual", "--input", &fixture("conn_numeric.json")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = ncgpi1(&["tensor", "--input", &fixture("conn_flat.json")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn pseudoinverse_rank_one() {
    let o = ncgpi1(&[
        "pseudoinverse",
        "--input",
        &fixture("pseudoinverse_rank1.json"),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["result"]["decision"]["rank"], 1);
}

#[test]
fn pi1_rational_torus() {
    let o = ncgpi1(&["pi1", "--input", &fixture("torus_1_3.json")]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(
        r["result"]["lattice_basis"],
        serde_json::json!([[3, 0], [0, 3]])
    );
    assert_eq!(r["result"]["gamma"], "Z/3 × Z/3");
}

#[test]
fn torus_center_crosscheck_command() {
    let o = ncgpi1(&["center", "--input", &fixture("torus_1_2.json")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn unknown_fields_are_rejected() {
    let mut v: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("torus_1_2.json")).unwrap()).unwrap();
    v["colour"] = "blue".into();
    let o = ncgpi1_stdin(&["pi1", "--input", "-"], &v.to_string());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
}

#[test]
fn malformed_and_missing_inputs() {
    let o = ncgpi1_stdin(&["check", "--input", "-"], "{not json");
    assert_eq!(code(&o), 2);
    let o = ncgpi1(&["check", "--input", "/nonexistent/algebra.json"]);
    assert_eq!(code(&o), 2);
    let o = ncgpi1(&["check"]);
    assert_eq!(code(&o), 2);
    let o = ncgpi1_stdin(
        &["pi1", "--input", "-"],
        r#"{"format_version": "9.0", "n": 2, "theta": [["0","1/2"],["-1/2","0"]], "radius": 2}"#,
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn divergence_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_temp(
        &dir,
        "job.json",
        r#"{"dimension":1,"omega":{"kind":"constant","data":[[20]]},"method":"rk4","steps":4}"#,
    );
    let o = ncgpi1(&["transport", "--input", &job]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("divergence"));
}

#[test]
fn transport_fixtures() {
    for f in ["transport_constant.json", "transport_polynomial.json"] {
        let o = ncgpi1(&["transport", "--input", &fixture(f)]);
        assert_eq!(code(&o), 0, "{f}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn fuzz_requires_seed() {
    let o = ncgpi1(&["fuzz", "axioms"]);
    assert_eq!(code(&o), 2);
    let o = ncgpi1(&["fuzz", "no-such-suite", "--seed", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn fuzz_config_seed_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_temp(
        &dir,
        "cfg.json",
        r#"{"trials": 20, "n_min": 2, "n_max": 3, "seed": 5}"#,
    );
    let a = ncgpi1(&["fuzz", "dm-inequality", "--input", &cfg]);
    assert_eq!(code(&a), 0);
    let b = ncgpi1(&["fuzz", "dm-inequality", "--input", &cfg, "--seed", "6"]);
    assert_eq!(code(&b), 0);
    assert_ne!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 21);
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["summary"]["seed"], 5);
    assert_eq!(last["summary"]["trials"], 20);

    let bad = write_temp(&dir, "bad.json", r#"{"trials": 20, "seed": 5, "extra": 1}"#);
    assert_eq!(
        code(&ncgpi1(&["fuzz", "dm-inequality", "--input", &bad])),
        2
    );
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_temp(&dir, "cfg.json", r#"{"trials": 30, "seed": 9}"#);
    for suite in ["pseudoinverse", "torus-phases", "curvature-laws"] {
        let a = ncgpi1(&["fuzz", suite, "--input", &cfg]);
        let b = ncgpi1(&["fuzz", suite, "--input", &cfg]);
        assert_eq!(code(&a), 0, "{suite}");
        assert_eq!(a.stdout, b.stdout, "{suite}");
    }
    let a = ncgpi1(&["center", "--input", &fixture("two_point_d6.json")]);
    let b = ncgpi1(&["center", "--input", &fixture("two_point_d6.json")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = ncgpi1(&[
        "pi1",
        "--input",
        &fixture("torus_2_5.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["m"], 2);
    assert_eq!(v["echo"]["command"], "pi1");
}

#[test]
fn timing_adds_wall_clock() {
    let o = ncgpi1(&["pi1", "--input", &fixture("torus_1_2.json"), "--timing"]);
    assert!(json(&o)["wall_clock_ms"].is_number());
}
