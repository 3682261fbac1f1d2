use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn slnh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slnh")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn matrix(rows: Vec<Vec<[f64; 4]>>) -> Value {
    json!({ "n": rows.len(), "entries": rows })
}

const Z: [f64; 4] = [0.0; 4];

fn reference_system() -> Value {
    json!({
        "A": matrix(vec![vec![Z, [1.0, 0.0, 1.0, 0.0]], vec![[0.0, 1.0, 0.0, 1.0], Z]]),
        "B": matrix(vec![vec![[1.0, 1.0, 0.0, 0.0], Z], vec![Z, [-1.0, 2f64.sqrt(), 0.0, 0.0]]]),
    })
}

fn state(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn entries(m: &Value) -> Vec<f64> {
    m["entries"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|row| row.as_array().unwrap().iter())
        .flat_map(|q| q.as_array().unwrap().iter().map(|v| v.as_f64().unwrap()))
        .collect()
}

fn max_diff(x: &Value, y: &Value) -> f64 {
    entries(x).iter().zip(entries(y)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

#[test]
fn certify_reference_pair_is_controllable() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "sys.json", &reference_system());
    let out = slnh(&["certify", s(&sys)]);
    assert_eq!(out.status.code(), Some(0));
    let cert = state(&out);
    assert_eq!(cert["verdict"], "Controllable");
    assert_eq!(cert["h1"]["rank"], 15);
}

#[test]
fn certify_commuting_diagonals_is_not_accessible() {
    let dir = TempDir::new().unwrap();
    let sys = write(
        &dir,
        "sys.json",
        &json!({
            "A": matrix(vec![vec![[1.0, 0.0, 0.0, 0.0], Z], vec![Z, [-1.0, 0.0, 0.0, 0.0]]]),
            "B": matrix(vec![vec![[0.5, 0.2, 0.0, 0.0], Z], vec![Z, [-0.5, 0.7, 0.0, 0.0]]]),
        }),
    );
    let out = slnh(&["certify", s(&sys)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(state(&out)["verdict"], "NotAccessible");
}

#[test]
fn malformed_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"A": {"n": 2, "entries": [[[0,0"#).unwrap();
    let out = slnh(&["certify", s(&path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(slnh(&["certify", "/nonexistent/sys.json"]).status.code(), Some(1));
    let sys = write(&dir, "sys.json", &reference_system());
    assert_eq!(slnh(&["--tol", "-1", "certify", s(&sys)]).status.code(), Some(1));
    assert_eq!(slnh(&["--Q", "1", "certify", s(&sys)]).status.code(), Some(1));
}

#[test]
fn verify_suites() {
    for suite in ["cone", "orbits", "homotopy", "limits", "cartan"] {
        let out = slnh(&["verify", suite]);
        let text = String::from_utf8_lossy(&out.stdout);
        assert_eq!(out.status.code(), Some(0), "{suite}:\n{text}");
        assert!(!text.contains("FAIL"));
    }
    let out = slnh(&["--json", "verify", "orbits"]);
    let report = state(&out);
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(slnh(&["verify", "nonsense"]).status.code(), Some(1));
}

#[test]
fn zero_generators_leave_the_identity() {
    let dir = TempDir::new().unwrap();
    let zero = matrix(vec![vec![Z, Z], vec![Z, Z]]);
    let sys = write(&dir, "sys.json", &json!({ "A": zero, "B": zero }));
    let sig = write(&dir, "sig.json", &json!({ "segments": [[0.7, 3.0], [1.1, -2.0]] }));
    let out = slnh(&["simulate", s(&sys), s(&sig)]);
    assert_eq!(out.status.code(), Some(0));
    let identity = matrix(vec![vec![[1.0, 0.0, 0.0, 0.0], Z], vec![Z, [1.0, 0.0, 0.0, 0.0]]]);
    assert_eq!(max_diff(&state(&out)["final"], &identity), 0.0);
}

#[test]
fn reversed_signal_returns_to_start() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "sys.json", &reference_system());
    let forward: Vec<(f64, f64)> = (0..10).map(|k| (0.1 + 0.05 * k as f64, (k as f64 - 4.5) * 0.7)).collect();
    let fwd = write(&dir, "fwd.json", &json!({ "segments": forward }));
    let out = slnh(&["simulate", s(&sys), s(&fwd)]);
    let g = state(&out)["final"].clone();
    // x' = (A + uB)x backwards in time is the flow of -A - uB
    let neg = |m: &Value| {
        let rows: Vec<Vec<[f64; 4]>> = serde_json::from_value(m["entries"].clone()).unwrap();
        matrix(rows.into_iter().map(|r| r.into_iter().map(|q| q.map(|v| -v)).collect()).collect())
    };
    let sys_ref = reference_system();
    let back = write(
        &dir,
        "back.json",
        &json!({ "A": neg(&sys_ref["A"]), "B": neg(&sys_ref["B"]), "g0": g }),
    );
    let reversed: Vec<(f64, f64)> = forward.iter().rev().copied().collect();
    let rev = write(&dir, "rev.json", &json!({ "segments": reversed }));
    let out = slnh(&["simulate", s(&back), s(&rev)]);
    let identity = matrix(vec![vec![[1.0, 0.0, 0.0, 0.0], Z], vec![Z, [1.0, 0.0, 0.0, 0.0]]]);
    let err = max_diff(&state(&out)["final"], &identity);
    assert!(err < 1e-9, "round trip {err:e}");
}

#[test]
fn determinant_drift_over_long_signal() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "sys.json", &reference_system());
    let segments: Vec<(f64, f64)> = (0..100).map(|k| (0.05 + 0.01 * (k % 7) as f64, ((k * 37) % 11) as f64 - 5.0)).collect();
    let sig = write(&dir, "sig.json", &json!({ "segments": segments }));
    let traj = dir.path().join("traj.jsonl");
    let out = slnh(&["simulate", s(&sys), s(&sig), "--trajectory", s(&traj)]);
    assert_eq!(out.status.code(), Some(0));
    let report = state(&out);
    assert!(report["det_drift"].as_f64().unwrap() <= 1e-8);
    let lines = std::fs::read_to_string(&traj).unwrap();
    assert_eq!(lines.lines().count(), 101);
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "sys.json", &reference_system());
    for args in [
        vec!["--seed", "7", "reach", s(&sys), "--budget", "200"],
        vec!["--seed", "3", "sample", "--trials", "40", "--conjugations", "5"],
        vec!["--json", "verify", "cartan"],
        vec!["diag", s(&sys)],
    ] {
        let first = slnh(&args);
        let second = slnh(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_report() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "sys.json", &reference_system());
    let out_path = dir.path().join("cert.json");
    let out = slnh(&["--out", s(&out_path), "certify", s(&sys)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(cert["verdict"], "Controllable");
}

#[test]
fn help_exits_zero() {
    assert_eq!(slnh(&["--help"]).status.code(), Some(0));
    assert_eq!(slnh(&["--version"]).status.code(), Some(0));
}
