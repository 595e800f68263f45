use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hilbert_cli::load_domain;
use hilbert_core::constructions::{disk, no_limit_domain, regular_polygon, zero_entropy_domain, TowerSequenceSpec};
use hilbert_core::{Domain, Vector};

fn hilbert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbert")).args(args).output().expect("spawn hilbert")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn round_trip(args: &[&str], want: &Domain) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("domain.json");
    let path = path.to_str().unwrap();
    let mut full = vec!["--out", path];
    full.extend_from_slice(args);
    let o = hilbert(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let got = load_domain(path).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let u = Vector::polar(rng.gen_range(0.0..std::f64::consts::TAU));
        let p = u * (want.t_plus(Vector::zero(), u).unwrap() * rng.gen_range(0.0..0.95));
        let v = Vector::polar(rng.gen_range(0.0..std::f64::consts::TAU));
        let (a, b) = (want.chord(p, v).unwrap(), got.chord(p, v).unwrap());
        assert!((a.t_plus - b.t_plus).abs() <= 1e-15 * a.t_plus.max(1.0), "{args:?}");
        assert!((a.t_minus - b.t_minus).abs() <= 1e-15 * a.t_minus.max(1.0), "{args:?}");
    }
}

#[test]
fn gen_round_trips() {
    round_trip(&["gen", "disk"], &disk());
    round_trip(&["gen", "ngon", "--n", "7"], &regular_polygon(7).unwrap());
    round_trip(&["gen", "zero-entropy", "--N", "20"], &zero_entropy_domain(20).unwrap());
    round_trip(&["gen", "no-limit", "--spec", "3,20,500"], &no_limit_domain(&TowerSequenceSpec::parse("3,20,500").unwrap()).unwrap().0);
    round_trip(&["gen", "no-limit"], &no_limit_domain(&TowerSequenceSpec::paper()).unwrap().0);
}

#[test]
fn gen_reports_the_tower() {
    let o = hilbert(&["gen", "no-limit"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["report"]["theta_infinity"].as_f64().unwrap() < std::f64::consts::TAU);
}

#[test]
fn dist_and_finsler_on_the_disk() {
    let o = hilbert(&["--domain", "builtin:disk", "dist", "--p", "0,0", "--q", "0.5,0"]);
    assert!(o.status.success());
    let d: f64 = stdout(&o).trim().parse().unwrap();
    assert!((d - 0.5f64.atanh()).abs() < 1e-15);
    let o = hilbert(&["--domain", "builtin:square", "finsler", "--p", "0,0", "--v", "1,0"]);
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 1.0);
}

#[test]
fn exit_codes() {
    assert_eq!(hilbert(&["--help"]).status.code(), Some(0));
    assert_eq!(hilbert(&["--bogus"]).status.code(), Some(1));
    assert_eq!(hilbert(&["--domain", "builtin:nope", "dist", "--p", "0,0", "--q", "0,0"]).status.code(), Some(1));
    // outside the domain
    assert_eq!(hilbert(&["--domain", "builtin:square", "dist", "--p", "0,0", "--q", "2,0"]).status.code(), Some(1));
    assert_eq!(hilbert(&["dist", "--p", "0,0", "--q", "0,0"]).status.code(), Some(1));
    let o = hilbert(&["--domain", "builtin:square", "ball-vol", "--R", "3", "--max-evals", "50"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn ball_vol_formats() {
    let o = hilbert(&["--domain", "builtin:disk", "--format", "csv", "ball-vol", "--R", "1"]);
    let text = stdout(&o);
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|t| t.parse().unwrap()).collect();
    assert!((row[1] - std::f64::consts::TAU * (1f64.cosh() - 1.0)).abs() < 1e-9);
    let o = hilbert(&["--domain", "builtin:disk", "--format", "json", "ball-vol", "--R", "1", "--mc", "100000"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["error_estimate"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_is_deterministic() {
    let args = ["--domain", "builtin:ngon:7", "--seed", "3", "verify", "--points", "300", "--configs", "5"];
    let (a, b) = (hilbert(&args), hilbert(&args));
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.lines().all(|l| l.starts_with("PASS") || l.starts_with("SKIP")), "{text}");
}

#[test]
fn profile_json_has_an_estimate() {
    let o = hilbert(&["--domain", "builtin:square", "--format", "json", "profile", "--radii", "1,2,4", "--window", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["profile"]["samples"].as_array().unwrap().len(), 3);
    assert!(v["estimate"]["upper_window"].as_f64().unwrap() >= v["estimate"]["lower_window"].as_f64().unwrap());
    assert_eq!(hilbert(&["--domain", "builtin:square", "profile", "--radii", "2,1"]).status.code(), Some(1));
}

#[test]
fn svg_renders() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ball.svg");
    let o = hilbert(&["--domain", "builtin:ngon:6", "--out", path.to_str().unwrap(), "svg", "--R", "1.5"]);
    assert!(o.status.success());
    let s = std::fs::read_to_string(path).unwrap();
    assert!(s.starts_with("<?xml") && s.trim_end().ends_with("</svg>"));
    assert_eq!(s.matches("<path").count(), 3);
    let o = hilbert(&["--domain", "builtin:disk", "svg"]);
    assert!(stdout(&o).contains("<svg"));
}
