use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FLOWS: [&str; 6] = [
    "predetermined_forward",
    "forward_eps",
    "predetermined_backward",
    "backward_eps",
    "predetermined_outward",
    "outward_eps",
];

fn arflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arflow")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

fn eps_csv(t_min: i64, t_max: i64, n: usize) -> String {
    let mut out = String::from("t");
    for k in 1..=n {
        out.push_str(&format!(",v{k}"));
    }
    out.push('\n');
    for t in t_min..=t_max {
        out.push_str(&t.to_string());
        for k in 0..n {
            let v = if t.abs() <= 2 { ((t + 3) as f64 * 0.25) * (k as f64 + 1.0) } else { 0.0 };
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

fn csv_values(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

const PHI3: &str = "0.5,0.2,0\n0,2,0\n0.1,0,1\n";

#[test]
fn classify_reports_groups() {
    let dir = TempDir::new().unwrap();
    let phi = write(dir.path(), "phi.csv", "0.5,0\n0,2\n");
    let out = arflow(&["classify", "--phi", s(&phi)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    let groups: Vec<&str> = v["eigenvalues"].as_array().unwrap().iter().map(|e| e["group"].as_str().unwrap()).collect();
    assert_eq!(groups.len(), 2);
    assert!(groups.contains(&"forward") && groups.contains(&"backward"));
    assert_eq!(v["frequencies"], Value::Array(vec![]));
}

#[test]
fn synthesize_then_decompose_round_trip() {
    let dir = TempDir::new().unwrap();
    let phi = write(dir.path(), "phi.csv", PHI3);
    let eps = write(dir.path(), "eps.csv", &eps_csv(-8, 8, 3));
    let init = write(
        dir.path(),
        "init.json",
        r#"{"v_forward": [1, 0, -0.2], "v_backward": [0, 0, 0], "v_outward": [0, 0, 2]}"#,
    );
    let out = arflow(&["synthesize", "--phi", s(&phi), "--eps", s(&eps), "--initial", s(&init)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let x = write(dir.path(), "x.csv", std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(csv_values(&fs::read_to_string(&x).unwrap()).len(), 17);

    let verify = arflow(&["verify", "--phi", s(&phi), "--eps", s(&eps), "--x", s(&x)]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(json(&verify.stdout)["satisfied"], Value::Bool(true));

    let report = dir.path().join("report");
    let out = arflow(&["decompose", "--phi", s(&phi), "--eps", s(&eps), "--x", s(&x), "--out", s(&report)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in FLOWS {
        let rows = csv_values(&fs::read_to_string(report.join(format!("{name}.csv"))).unwrap());
        assert_eq!(rows.len(), 17, "{name}");
        assert_eq!(rows[0][0], -8.0);
    }
    let summary = json(&fs::read(report.join("summary.json")).unwrap());
    assert_eq!(summary["schema_version"], 1);
    let rr = &summary["residual_report"];
    assert!(rr["max_recursion_residual"].as_f64().unwrap() <= rr["tol_flow_abs"].as_f64().unwrap());
    let ic = &summary["initial_conditions"];
    let vo: Vec<f64> = ic["v_outward"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((vo[2] - 2.0).abs() < 1e-9);

    let again = dir.path().join("again");
    arflow(&["decompose", "--phi", s(&phi), "--eps", s(&eps), "--x", s(&x), "--out", s(&again)]);
    for name in FLOWS.iter().map(|n| format!("{n}.csv")).chain(["summary.json".to_string()]) {
        assert_eq!(fs::read(report.join(&name)).unwrap(), fs::read(again.join(&name)).unwrap(), "{name}");
    }
}

#[test]
fn no_unit_roots_gives_zero_outward_flows_and_echoes_tolerances() {
    let dir = TempDir::new().unwrap();
    let phi = write(dir.path(), "phi.csv", "0.5,0\n0,2\n");
    let eps = write(dir.path(), "eps.csv", &eps_csv(-6, 6, 2));
    let init = write(dir.path(), "init.json", r#"{"v_forward": [1, 0], "v_backward": [0, 1], "v_outward": [0, 0]}"#);
    let out = arflow(&["synthesize", "--phi", s(&phi), "--eps", s(&eps), "--initial", s(&init)]);
    let x = write(dir.path(), "x.csv", std::str::from_utf8(&out.stdout).unwrap());
    let report = dir.path().join("r");
    let out = arflow(&[
        "decompose", "--phi", s(&phi), "--eps", s(&eps), "--x", s(&x), "--out", s(&report), "--tol-flow", "1e-7",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["predetermined_outward", "outward_eps"] {
        let rows = csv_values(&fs::read_to_string(report.join(format!("{name}.csv"))).unwrap());
        assert!(rows.iter().all(|r| r[1..].iter().all(|v| *v == 0.0)), "{name}");
    }
    let summary = json(&fs::read(report.join("summary.json")).unwrap());
    assert_eq!(summary["tolerances"]["tol_flow"].as_f64(), Some(1e-7));
}

#[test]
fn window_flags_crop_and_extend() {
    let dir = TempDir::new().unwrap();
    let eps = write(dir.path(), "eps.csv", &eps_csv(-4, 4, 1));
    let out = arflow(&["diagnose", "--eps", s(&eps), "--t-min", "-10", "--t-max", "10", "--r", "0.5,0.9"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out.stdout);
    assert_eq!(v["diagnostic"]["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["diagnostic"]["half_widths"].as_array().unwrap().last().unwrap(), 10);

    let bad = arflow(&["diagnose", "--eps", s(&eps), "--t-min", "1", "--t-max", "3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_reports_first_failing_time() {
    let dir = TempDir::new().unwrap();
    let phi = write(dir.path(), "phi.csv", "0.5\n");
    let eps = write(dir.path(), "eps.csv", "t,v1\n-1,0\n0,0\n1,0\n2,0\n3,0\n");
    let x = write(dir.path(), "x.csv", "t,v1\n-1,2\n0,1\n1,0.5\n2,7\n3,3.5\n");
    let out = arflow(&["verify", "--phi", s(&phi), "--eps", s(&eps), "--x", s(&x)]);
    assert_eq!(out.status.code(), Some(4));
    let err = json(&out.stderr);
    assert_eq!(err["error"]["exit_code"], 4);
    assert_eq!(err["error"]["t"], 2);
}

#[test]
fn drazin_and_project_write_matrices() {
    let dir = TempDir::new().unwrap();
    let phi = write(dir.path(), "phi.csv", "1,1\n0,0\n");
    let out = arflow(&["drazin", "--phi", s(&phi), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let d: Vec<Vec<f64>> = fs::read_to_string(dir.path().join("drazin.csv"))
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(d, vec![vec![1.0, 1.0], vec![0.0, 0.0]]);

    let phi = write(dir.path(), "phi2.csv", "1,1\n0,0.5\n");
    let out = arflow(&["project", "--phi", s(&phi), "--subset", "forward"]);
    assert_eq!(out.status.code(), Some(0));
    let p: Vec<Vec<f64>> = std::str::from_utf8(&out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    let want = [[0.0, -2.0], [0.0, 1.0]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((p[i][j] - want[i][j]).abs() < 1e-12);
        }
    }
}

#[test]
fn bad_input_exits_two_with_error_object() {
    let dir = TempDir::new().unwrap();
    let ragged = write(dir.path(), "phi.csv", "1,2\n3\n");
    for args in [
        vec!["classify", "--phi", s(&ragged)],
        vec!["classify", "--phi", "/nonexistent/phi.csv"],
        vec!["classify"],
        vec!["project", "--phi", s(&ragged), "--subset", "sideways"],
        vec!["frobnicate"],
    ] {
        let out = arflow(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = json(&out.stderr);
        assert!(err["error"]["message"].is_string(), "{args:?}");
        assert_eq!(err["error"]["exit_code"], 2);
    }
    let nan = write(dir.path(), "nan.csv", "NaN,0\n0,1\n");
    assert_eq!(arflow(&["classify", "--phi", s(&nan)]).status.code(), Some(2));
    let eps = write(dir.path(), "gap.csv", "t,v1\n0,1\n2,1\n");
    assert_eq!(arflow(&["diagnose", "--eps", s(&eps)]).status.code(), Some(2));
}

#[test]
fn help_goes_to_stdout() {
    let out = arflow(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in ["classify", "decompose", "synthesize", "verify", "drazin", "project", "diagnose"] {
        assert!(text.contains(cmd), "{cmd}");
    }
}
