use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use misdp::cli::{main_with_args, run, Cli};
use misdp::model::{import_cbf, import_json};
use tempfile::TempDir;

/// Runs the command line and returns `(ok, stdout)`; errors become `Err`.
fn exec(args: &[&str]) -> anyhow::Result<(bool, String)> {
    let cli = Cli::try_parse_from(std::iter::once("misdp").chain(args.iter().copied()))?;
    let mut out = String::new();
    let ok = run(&cli, &mut out)?;
    Ok((ok, out))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const C5: &str = "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n";

#[test]
fn build_stable_set_writes_cbf() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c5.dimacs", C5);
    let out = dir.path().join("m.cbf");
    let (ok, text) = exec(&["build", "stable-set", "--graph", s(&g), "--out", s(&out)]).unwrap();
    assert!(ok);
    assert!(text.contains("1 pencils of order [6]"), "{text}");
    let m = import_cbf(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(m.pencils.len(), 1);
    assert_eq!(m.pencils[0].order, 6);
}

#[test]
fn build_tsp_lee() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.txt", "5\n0 1 1 1 1\n1 0 1 1 1\n1 1 0 1 1\n1 1 1 0 1\n1 1 1 1 0\n");
    let out = dir.path().join("m.json");
    let (_, text) = exec(&["build", "tsp-lee", "--n", "5", "--dist", s(&d), "--out", s(&out)]).unwrap();
    assert!(text.contains("2 pencils of order [5, 5]"), "{text}");
    let m = import_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(m.pencils.len(), 2);
    assert!(exec(&["build", "tsp-lee", "--n", "4", "--dist", s(&d)]).is_err());
}

#[test]
fn build_qap_from_qaplib() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "inst.dat", "3\n\n0 1 2\n1 0 3\n2 3 0\n\n0 5 1\n5 0 2\n1 2 0\n");
    let (_, text) = exec(&["build", "qap", "--qaplib", s(&q), "--format", "json"]).unwrap();
    let m = import_json(&text).unwrap();
    assert_eq!(m.pencils[0].order, 9);
}

#[test]
fn build_reports_variant_preconditions() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p3.dimacs", "p edge 3 2\ne 1 2\ne 2 3\n");
    let err = exec(&["build", "gpp", "--graph", s(&g), "--sizes", "1,1,1", "--variant", "bisection"]).unwrap_err();
    assert!(format!("{err:#}").contains("variant precondition"), "{err:#}");
    assert!(exec(&["build", "gpp", "--graph", s(&g), "--sizes", "1,2", "--variant", "bisection"]).is_ok());
}

#[test]
fn check_classifies_matrices() {
    let dir = TempDir::new().unwrap();
    let j3 = write(&dir, "j3.txt", "3\n1 1 1\n1 1 1\n1 1 1\n");
    let (_, text) = exec(&["check", "--matrix", s(&j3)]).unwrap();
    assert_eq!(text, "psd=true rank=1 binary=true integer=true packing={1,2,3} triangle=true\n");

    let y = write(&dir, "y.txt", "3\n2 0.5 0.5\n0.5 0.5 0.5\n0.5 0.5 0.5\n");
    let (_, text) = exec(&["check", "--matrix", s(&y), "--props", "psd,rank,discreteness"]).unwrap();
    assert_eq!(text, "psd=true rank=2 binary=false integer=false\n");

    let b = write(&dir, "b.txt", "2\n1 1\n1 0\n");
    let (_, text) = exec(&["check", "--matrix", s(&b), "--props", "psd,decomposition", "--format", "json"]).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["psd"], false);
    assert_eq!(v["packing"], "none");

    let bad = write(&dir, "bad.txt", "2\n0 1\n2 0\n");
    assert!(exec(&["check", "--matrix", s(&bad)]).is_err());
    assert!(exec(&["check", "--matrix", s(&j3), "--props", "shape"]).is_err());
}

#[test]
fn count_and_enumerate() {
    assert_eq!(exec(&["count", "--n", "3", "--r", "3"]).unwrap().1, "15\n");
    assert_eq!(exec(&["count", "--n", "10", "--r", "1"]).unwrap().1, "1024\n");
    let (_, text) = exec(&["enumerate", "--n", "2", "--r", "2", "--format", "json"]).unwrap();
    let mats: Vec<Vec<Vec<f64>>> = serde_json::from_str(&text).unwrap();
    assert_eq!(mats.len(), 5);
    let (_, text) = exec(&["enumerate", "--n", "2", "--r", "2"]).unwrap();
    assert_eq!(text.split("\n\n").count(), 5);
}

#[test]
fn verify_suites() {
    let (ok, text) = exec(&["verify", "--suite", "tsp-small"]).unwrap();
    assert!(ok, "{text}");
    assert!(text.contains("0 failed"));
    let (_, list) = exec(&["verify", "--list"]).unwrap();
    assert!(list.lines().any(|l| l == "acceptance"));
    assert!(exec(&["verify", "--suite", "nope"]).is_err());
    let (_, json) = exec(&["verify", "--suite", "gpp/cross-variant-C4", "--format", "json", "--timing"]).unwrap();
    for line in json.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["wall_time_ms"].is_number());
    }
}

#[test]
fn scheme_checks() {
    let (ok, text) = exec(&["scheme", "--cycle", "5"]).unwrap();
    assert!(ok);
    assert!(text.starts_with("n=5 r=2 valid\n"), "{text}");

    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "[[[1,0,0],[0,1,0],[0,0,1]],[[0,1,0],[1,0,1],[0,1,0]],[[0,0,1],[0,0,0],[1,0,0]]]");
    let (ok, text) = exec(&["scheme", "--mats", s(&bad)]).unwrap();
    assert!(!ok);
    assert!(text.contains("AxiomViolation(iv)"), "{text}");
    assert_eq!(main_with_args(["misdp", "scheme", "--mats", s(&bad)]), 1);
}

#[test]
fn convert_round_trips() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c5.dimacs", C5);
    let cbf = dir.path().join("m.cbf");
    let json = dir.path().join("m.json");
    let back = dir.path().join("back.cbf");
    exec(&["build", "stable-set", "--graph", s(&g), "--out", s(&cbf)]).unwrap();
    exec(&["convert", s(&cbf), s(&json)]).unwrap();
    exec(&["convert", s(&json), s(&back)]).unwrap();
    assert_eq!(fs::read_to_string(&cbf).unwrap(), fs::read_to_string(&back).unwrap());
}

#[test]
fn global_options_are_validated() {
    assert!(exec(&["count", "--n", "2", "--r", "1", "--budget", "0"]).is_err());
    assert!(exec(&["count", "--n", "2", "--r", "1", "--tolerance", "sloppy"]).is_err());
    assert!(exec(&["count", "--n", "2", "--r", "1", "--tolerance", "strict"]).is_ok());
    assert_eq!(main_with_args(["misdp", "count", "--n", "2"]), 2);
    assert_eq!(main_with_args(["misdp", "count", "--n", "2", "--r", "2"]), 0);
}
