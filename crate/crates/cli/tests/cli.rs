use std::process::{Command, Output};

fn ebcv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ebcv")).args(args).output().expect("spawn ebcv")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_flat_exits_zero() {
    let o = ebcv(&["verify", "--m", "0", "--l", "0", "--samples", "10", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = stdout_json(&o);
    let curvature = report["checks"].as_array().unwrap().iter().find(|c| c["check-id"] == "table-m0-curvature").unwrap();
    assert_eq!(curvature["status"], "pass");
}

#[test]
fn verify_unreachable_domain_is_exit_2() {
    let o = ebcv(&["verify", "--m", "-1e6", "--l", "1", "--samples", "5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn killing_list_has_thirteen_fields() {
    let o = ebcv(&["killing", "--l", "2", "list"]);
    assert_eq!(code(&o), 0);
    let doc = stdout_json(&o);
    assert_eq!(doc["dimension"], 13);
    assert_eq!(doc["fields"].as_array().unwrap().len(), 13);
}

#[test]
fn killing_check_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let list = ebcv(&["killing", "--l", "1", "list"]);
    let basis = write_temp(&dir, "basis.json", std::str::from_utf8(&list.stdout).unwrap());
    let o = ebcv(&["killing", "--l", "1", "--samples", "20", "check", "--input", &basis]);
    assert_eq!(code(&o), 0);
    for r in stdout_json(&o)["results"].as_array().unwrap() {
        assert_eq!(r["verdict"], "killing", "{r}");
    }

    // X_4 as a field file: one polynomial per frame component
    let x4 = r#"{"coefficients": [{}, {}, {}, {"0,0,0,0,0,0,0": 1.0}, {}, {}, {}]}"#;
    let x4 = write_temp(&dir, "x4.json", x4);
    let o = ebcv(&["killing", "--l", "1", "--samples", "20", "check", "--input", &x4]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = &stdout_json(&o)["results"][0];
    assert_eq!(r["verdict"], "not-killing");
    assert!(r["max_residual"].as_f64().unwrap() >= 1.0);
}

#[test]
fn malformed_polynomial_is_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    // cubic terms are outside the supported degree
    let bad = write_temp(&dir, "bad.json", r#"{"coefficients": [{"0,0,0,3,0,0,0": 1.0}, {}, {}, {}, {}, {}, {}]}"#);
    assert_eq!(code(&ebcv(&["killing", "check", "--input", &bad])), 4);
    let garbage = write_temp(&dir, "garbage.json", "not json");
    assert_eq!(code(&ebcv(&["killing", "check", "--input", &garbage])), 4);
}

#[test]
fn geodesic_leaving_the_chart_is_exit_3_with_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("partial.csv");
    let o = ebcv(&[
        "geodesic", "--mode", "riemannian", "--m", "-1", "--l", "0", "--set", "pw=1", "--h", "0.7", "--n", "20",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("step"));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("u,"));
    assert!(text.lines().count() >= 2);
}

#[test]
fn heisenberg_mode_rejects_other_parameters() {
    let o = ebcv(&["geodesic", "--mode", "heisenberg", "--m", "1", "--set", "pw=1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn geodesic_circle_summary() {
    let o = ebcv(&["geodesic", "--set", "pw=1", "--set", "pr=1", "--h", "1e-3", "--n", "2000"]);
    assert_eq!(code(&o), 0);
    let line = String::from_utf8(o.stdout).unwrap();
    assert!(line.contains("circle, radius 1.000000"), "{line}");
}

#[test]
fn classify_prints_case() {
    let o = ebcv(&["classify", "--m", "0.25", "--l", "1"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "Sphere3 (case ii)");
    let o = ebcv(&["classify", "--m", "0.25", "--l", "1", "--case2", "squared"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "Sphere3 (case ii)");
    let o = ebcv(&["classify", "--m", "1", "--l", "1", "--case2", "squared"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "SU2 (case v)");
}

#[test]
fn curvature_document_at_origin() {
    let o = ebcv(&["curvature", "--m", "0", "--l", "1", "--point", "0,0,0,0,0,0,0"]);
    assert_eq!(code(&o), 0);
    let doc = stdout_json(&o);
    assert!((doc["scalar"].as_f64().unwrap() + 3.0).abs() < 1e-12);
}

#[test]
fn init_vector_is_comma_separated() {
    let o = ebcv(&["geodesic", "--init", "0,0,0,0,0,0,0,1,0,0,1,0,0,0", "--n", "100"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&ebcv(&["geodesic", "--init", "0,0,1"])), 2);
}
