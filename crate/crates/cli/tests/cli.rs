use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spcap"))
        .args(args)
        .env("SPCAP_THREADS", "2")
        .output()
        .expect("spawn spcap")
}

fn ok(args: &[&str]) -> String {
    let out = spcap(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn values(path: &Path) -> Vec<f64> {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_poisson_reports_small_residual() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&["solve", "poisson", "--N", "30", "--out", s(dir.path())]);
    let summary: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(summary["residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(summary["decoupled"], true);
    let decay = fs::read_to_string(dir.path().join("decay.csv")).unwrap();
    assert_eq!(decay.lines().count(), 32);
    assert_eq!(values(&dir.path().join("coefficients.json")).len(), 31 * 31);
}

#[test]
fn helmholtz_without_wave_matches_poisson() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    ok(&["solve", "poisson", "--N", "16", "--rhs", "paper-fig4", "--out", s(a.path())]);
    ok(&["solve", "helmholtz", "--N", "16", "--k", "0", "--out", s(b.path())]);
    let (u, v) = (values(&a.path().join("coefficients.json")), values(&b.path().join("coefficients.json")));
    assert_eq!(u.len(), v.len());
    let d = u.iter().zip(&v).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(d < 1e-12, "{d:e}");
}

#[test]
fn spy_bandwidths() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("spy.csv");
    let out = ok(&["spy", "laplacian-w1", "--N", "12", "--out", s(&csv)]);
    assert!(out.contains("sub-block-bandwidths (2, 2)"), "{out}");
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("row,col,absval"));
    assert!(text.lines().count() > 1);
    assert!(ok(&["spy", "dtheta", "--N", "12"]).contains("sub-block-bandwidths (1, 1)"));
    assert!(ok(&["spy", "convert-up", "--N", "12", "--atilde", "2"]).contains("sub-block-bandwidths (0, 4)"));
}

#[test]
fn expand_constant() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("one.json");
    ok(&["expand", "one", "--N", "6", "--out", s(&f)]);
    let v = values(&f);
    assert!((v[0] - 2f64.sqrt()).abs() < 1e-13);
    assert!(v[1..].iter().all(|x| x.abs() < 1e-13));
}

#[test]
fn expand_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.json");
    let pts = dir.path().join("p.csv");
    let out = dir.path().join("v.csv");
    ok(&["expand", "exp-xyz", "--alpha", "-0.3", "--N", "24", "--out", s(&f)]);
    let mut csv = String::from("x,y,z\n");
    for (z, t) in [(0.9, 0.3), (-0.3, 2.0), (0.1, -1.0), (1.0, 0.0), (0.5, 4.0)] {
        let r = f64::sqrt(1.0 - z * z);
        csv.push_str(&format!("{:e},{:e},{:e}\n", r * f64::cos(t), r * f64::sin(t), z));
    }
    fs::write(&pts, csv).unwrap();
    ok(&["eval", "--coeffs", s(&f), "--points", s(&pts), "--out", s(&out)]);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,z,value"));
    let mut count = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let exact = v[0].exp() * v[1] * v[2];
        assert!((v[3] - exact).abs() < 1e-10, "{line}");
        count += 1;
    }
    assert_eq!(count, 5);
}

#[test]
fn empty_points_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.json");
    let pts = dir.path().join("p.csv");
    let out = dir.path().join("v.csv");
    ok(&["expand", "z", "--N", "2", "--out", s(&f)]);
    fs::write(&pts, "").unwrap();
    ok(&["eval", "--coeffs", s(&f), "--points", s(&pts), "--out", s(&out)]);
    assert_eq!(fs::read_to_string(&out).unwrap(), "x,y,z,value\n");
}

#[test]
fn off_cap_point_names_row() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.json");
    let pts = dir.path().join("p.csv");
    ok(&["expand", "z", "--N", "2", "--out", s(&f)]);
    fs::write(&pts, "x,y,z\n0,0,1\n0,0,-1\n").unwrap();
    let out = spcap(&["eval", "--coeffs", s(&f), "--points", s(&pts), "--out", s(&dir.path().join("v.csv"))]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 3"), "{err}");
}

#[test]
fn invalid_parameters_fail() {
    let dir = tempfile::tempdir().unwrap();
    let out = spcap(&["solve", "poisson", "--alpha", "1.5", "--N", "4", "--out", s(dir.path())]);
    assert!(!out.status.success());
    assert!(!spcap(&["spy", "nonsense", "--N", "4"]).status.success());
}

#[test]
fn reruns_are_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        ok(&["solve", "biharmonic", "--N", "14", "--out", s(d.path())]);
    }
    for name in ["coefficients.json", "decay.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}
