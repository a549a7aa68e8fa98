use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use surfframe::geometry::{regular_triangle, Facet, PolytopeDocument};

fn surfframe(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surfframe")).args(args).current_dir(dir).output().unwrap()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn herz_recipe_writes_report_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("herz.json"), r#"{"experiment": "herz"}"#).unwrap();
    let stdout = ok(&surfframe(&["herz", "--config", "herz.json", "--out", "res"], dir.path()));
    assert!(stdout.starts_with("herz:"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("res/herz.json")).unwrap()).unwrap();
    assert!(report["summary"]["metric"].as_f64().unwrap() < -1.3);
    let csv = fs::read_to_string(dir.path().join("res/herz.csv")).unwrap();
    assert!(csv.starts_with("xi,residual_max\n"));
}

#[test]
fn mismatched_recipe_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.json"), r#"{"experiment": "herz"}"#).unwrap();
    let out = surfframe(&["parseval", "--config", "c.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    fs::write(dir.path().join("bad.json"), r#"{"experiment": "herz", "delta": -1}"#).unwrap();
    let out = surfframe(&["herz", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("delta"));
}

#[test]
fn build_frame_then_estimate_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let doc = serde_json::to_string(&PolytopeDocument::from_facets(&regular_triangle())).unwrap();
    fs::write(dir.path().join("tri.json"), doc).unwrap();
    let stdout = ok(&surfframe(&["build-frame", "--polytope", "tri.json", "--n", "2", "--window", "6", "--out", "spec.json"], dir.path()));
    assert!(stdout.contains("audit passed"), "{stdout}");
    ok(&surfframe(&["frame", "--polytope", "tri.json", "--spectrum", "spec.json", "--band", "2", "--out", "bounds.json"], dir.path()));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("bounds.json")).unwrap()).unwrap();
    assert!(r["a_est"].as_f64().unwrap() > 0.0);
    assert!(r["b_est"].as_f64().unwrap() >= r["a_est"].as_f64().unwrap());
}

#[test]
fn degenerate_polytope_exits_with_code_two() {
    // two collinear segments: their projections onto each other coincide
    let a = Facet::new(vec![vec![1.0, 0.0]], vec![0.0, 0.0], vec![1.0]).unwrap();
    let b = Facet::new(vec![vec![1.0, 0.0]], vec![3.0, 0.0], vec![1.0]).unwrap();
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.json"), serde_json::to_string(&PolytopeDocument::from_facets(&[a, b])).unwrap()).unwrap();
    let out = surfframe(&["build-frame", "--polytope", "p.json", "--out", "s.json"], dir.path());
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fourier_of_the_circle_matches_bessel() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("xi.json"), "[[0.0, 0.0], [3.0, 4.0], [-7.5, 1.25]]").unwrap();
    ok(&surfframe(&["fourier", "--sphere", "2", "--frequencies", "xi.json", "--out", "ft.csv"], dir.path()));
    let mut rows = csv::Reader::from_path(dir.path().join("ft.csv")).unwrap();
    assert_eq!(rows.headers().unwrap().iter().collect::<Vec<_>>(), ["xi_1", "xi_2", "re", "im"]);
    for rec in rows.records() {
        let v: Vec<f64> = rec.unwrap().iter().map(|s| s.parse().unwrap()).collect();
        let r = v[0].hypot(v[1]);
        let exact = std::f64::consts::TAU * surfframe::measure::bessel_j0(std::f64::consts::TAU * r);
        assert!((v[2] - exact).abs() < 1e-9 && v[3].abs() < 1e-9, "{v:?}");
    }
}

#[test]
fn eigenbasis_and_sweep_commands() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&surfframe(&["eigenbasis", "--group", "dihedral:3", "--lmax", "4", "--out", "b.json"], dir.path()));
    assert!(stdout.contains("[1, 0, 1, 1, 2]"), "{stdout}");
    let basis: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(basis["degrees"].as_array().unwrap().len(), 5);

    fs::write(dir.path().join("c.json"), r#"{"experiment": "eigenbasis", "l_max": 3, "trials": 3}"#).unwrap();
    ok(&surfframe(&["sweep", "--config", "c.json", "--param", "group", "--values", "cyclic:2,dihedral:2", "--out", "sw"], dir.path()));
    let text = fs::read_to_string(dir.path().join("sw/sweep_group.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().skip(1).all(|l| l.contains(",ok,")));
    ok(&surfframe(&["sweep", "--config", "c.json", "--param", "l_max", "--values", "--out", "empty"], dir.path()));
    assert_eq!(fs::read_to_string(dir.path().join("empty/sweep_l_max.csv")).unwrap().lines().count(), 1);
}

#[test]
fn obstruction_command_reports_a_verdict() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("z2.json"), surfframe::frame::Spectrum::integer_ball(2, 60.0).to_json().unwrap()).unwrap();
    let stdout = ok(&surfframe(&["obstruction", "--spectrum", "z2.json", "--gamma", "1", "--r", "5", "--out", "o.json"], dir.path()));
    assert!(!stdout.trim().is_empty());
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("o.json")).unwrap()).unwrap();
    assert!(r["local_mass_min"].as_f64().unwrap() > 0.0);
}
