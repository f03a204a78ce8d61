mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use common::*;
use genjacobi::cli::run_cli;
use genjacobi::io::{read_report, save_matrix, save_vector};
use genjacobi::rref::DEFAULT_RREF_TOLERANCE;
use genjacobi::{rref, DenseMatrix, Status, Vector};
use tempfile::TempDir;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("genjacobi").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write_system(dir: &Path, name: &str, a: &[&[f64]], b: &[f64]) -> (String, String) {
    let pa = dir.join(format!("{name}_A.csv"));
    let pb = dir.join(format!("{name}_b.csv"));
    save_matrix(&pa, &DenseMatrix::from_rows(a).unwrap()).unwrap();
    save_vector(&pb, &Vector::new(b.to_vec()).unwrap()).unwrap();
    (pa.display().to_string(), pb.display().to_string())
}

fn data(name: &str) -> String {
    data_path(name).display().to_string()
}

fn diag_dominant(dir: &Path) -> (String, String) {
    write_system(dir, "dd", &[&[4.0, 1.0, 1.0, 0.0], &[1.0, 4.0, 0.0, 1.0]], &[2.0, 3.0])
}

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let (a, b) = diag_dominant(dir.path());
    for method in ["gjacobi", "ggs", "baseline"] {
        let o = cli(&["solve", "--matrix", &a, "--rhs", &b, "--method", method]);
        assert_eq!(o.code, 0, "{method}: {}{}", o.stdout, o.stderr);
        assert!(o.stdout.contains("converged"));
    }

    let o = cli(&["solve", "--matrix", &a, "--rhs", &b, "--method", "gjacobi", "--max-iter", "2"]);
    assert_eq!(o.code, 2, "{}", o.stdout);

    // wrong-length rhs
    let (_, b3) = write_system(dir.path(), "bad", &[&[1.0]], &[1.0, 2.0, 3.0]);
    let o = cli(&["solve", "--matrix", &a, "--rhs", &b3, "--method", "gjacobi"]);
    assert_eq!(o.code, 4);
    assert!(!o.stderr.is_empty());

    let o = cli(&["solve", "--matrix", "/nonexistent.csv", "--rhs", &b, "--method", "gjacobi"]);
    assert_eq!(o.code, 4);
    assert!(o.stderr.contains("nonexistent"));

    let o = cli(&["solve", "--matrix", &a, "--rhs", &b, "--method", "nope"]);
    assert_eq!(o.code, 4);
}

#[test]
fn solve_diverging_baseline_exits_3() {
    let a = data("worked_A.csv");
    let b = data("worked_b.csv");
    let x0 = data("worked_x0.csv");
    let o = cli(&["solve", "--matrix", &a, "--rhs", &b, "--x0", &x0, "--method", "baseline"]);
    assert_eq!(o.code, 3, "{}", o.stdout);
    assert!(o.stdout.contains("diverged"));
}

#[test]
fn square_matrix_rejected_for_generalized_methods() {
    let dir = TempDir::new().unwrap();
    let (a, b) = write_system(dir.path(), "sq", &[&[4.0, 1.0], &[1.0, 3.0]], &[1.0, 2.0]);
    for method in ["gjacobi", "ggs", "baseline"] {
        let o = cli(&["solve", "--matrix", &a, "--rhs", &b, "--method", method]);
        assert_eq!(o.code, 4);
        assert!(o.stderr.contains("method requires m < n"), "{}", o.stderr);
    }
    for method in ["jacobi", "gs"] {
        let o = cli(&["solve", "--matrix", &a, "--rhs", &b, "--method", method]);
        assert_eq!(o.code, 0, "{method}: {}", o.stdout);
    }
    let (wide, wb) = diag_dominant(dir.path());
    let o = cli(&["solve", "--matrix", &wide, "--rhs", &wb, "--method", "jacobi"]);
    assert_eq!(o.code, 4);
}

#[test]
fn solution_as_initial_guess_takes_zero_iterations() {
    let dir = TempDir::new().unwrap();
    let (a, b) = write_system(dir.path(), "s", &[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]], &[2.0, 3.0]);
    let x0 = dir.path().join("x0.csv");
    save_vector(&x0, &Vector::new(vec![1.0, 2.0, 1.0]).unwrap()).unwrap();
    let json = dir.path().join("r.json");
    let o = cli(&[
        "solve", "--matrix", &a, "--rhs", &b, "--x0", x0.to_str().unwrap(), "--method", "ggs",
        "--json", json.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0);
    let report = read_report(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report.iterations, 0);
    assert_eq!(report.status, Status::Converged);
}

#[test]
fn worked_example_solves_after_reduction() {
    let dir = TempDir::new().unwrap();
    let a = example_a();
    let b = example_b();
    let reduced = rref(&a.augment(&b).unwrap(), DEFAULT_RREF_TOLERANCE);
    let abar = reduced.matrix.submatrix(0..reduced.rank, 0..8).unwrap();
    let bbar = Vector::new(reduced.matrix.column(8)[..reduced.rank].to_vec()).unwrap();
    let pa = dir.path().join("abar.mtx");
    let pb = dir.path().join("bbar.csv");
    save_matrix(&pa, &abar).unwrap();
    save_vector(&pb, &bbar).unwrap();
    let json = dir.path().join("r.json");
    let o = cli(&[
        "solve", "--matrix", pa.to_str().unwrap(), "--rhs", pb.to_str().unwrap(),
        "--x0", &data("worked_x0.csv"), "--method", "gjacobi", "--json", json.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let report = read_report(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(report.final_residual() < 1e-8);

    for file in ["worked_A.csv", "worked_A.mtx"] {
        let o = cli(&["rref", "--matrix", &data(file), "--rhs", &data("worked_b.mtx"), "--x0", &data("worked_x0.csv")]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        assert!(o.stdout.contains("residual vs original system"));
    }
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let (a, b) = write_system(
        dir.path(),
        "id",
        &[&[1.0, 0.0, 1.0, 0.0], &[0.0, 1.0, 0.0, 1.0]],
        &[1.0, 1.0],
    );
    let json = dir.path().join("c.json");
    let o = cli(&["check", "--matrix", &a, "--rhs", &b, "--method", "gjacobi", "--json", json.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let text = std::fs::read_to_string(&json).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    for c in value["per_norm"].as_array().unwrap() {
        assert_eq!(c["c1"].as_f64().unwrap(), 0.0);
    }

    // a shared all-ones tail column: c2 = m in every norm
    let (a, b) = write_system(dir.path(), "ones", &[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]], &[1.0, 1.0]);
    for method in ["gjacobi", "ggs"] {
        let o = cli(&["check", "--matrix", &a, "--rhs", &b, "--method", method]);
        assert_eq!(o.code, 1, "{}", o.stdout);
        assert!(o.stdout.contains("not certified"));
    }

    let o = cli(&["check", "--matrix", "/missing.mtx", "--rhs", &b, "--method", "ggs"]);
    assert_eq!(o.code, 4);
}

#[test]
fn rref_exit_codes() {
    let dir = TempDir::new().unwrap();
    let (a, b) = write_system(dir.path(), "inc", &[&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0]], &[1.0, 3.0]);
    let o = cli(&["rref", "--matrix", &a, "--rhs", &b]);
    assert_eq!(o.code, 3);
    assert!(o.stdout.contains("inconsistent"));

    let (a, b) = write_system(
        dir.path(),
        "dup",
        &[&[1.0, 2.0, 0.0, 1.0], &[0.0, 1.0, 3.0, 1.0], &[1.0, 2.0, 0.0, 1.0]],
        &[4.0, 5.0, 4.0],
    );
    let json = dir.path().join("r.json");
    let o = cli(&["rref", "--matrix", &a, "--rhs", &b, "--method", "ggs", "--json", json.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("using 2 of 3 rows"));
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(value["effective_rows"], 2);

    let (a, b) = write_system(dir.path(), "sq", &[&[1.0, 0.0], &[0.0, 1.0]], &[1.0, 1.0]);
    assert_eq!(cli(&["rref", "--matrix", &a, "--rhs", &b]).code, 4);
}

#[test]
fn compare_worked_example() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("cmp.json");
    let o = cli(&[
        "compare", "--matrix", &data("worked_A.csv"), "--rhs", &data("worked_b.csv"),
        "--x0", &data("worked_x0.csv"), "--methods", "baseline,gjacobi", "--rref",
        "--max-iter", "100", "--json", json.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert!(lines[1].starts_with("baseline"));
    assert!(lines[2].starts_with("gjacobi"));

    let reports: Vec<genjacobi::SolveReport> =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0].status, Status::MaxIterations);
    assert!(reports[0].final_residual() > 1.0);
    assert_eq!(reports[1].status, Status::Converged);
    assert_eq!(reports[1].iterations, 1);
    assert!(reports[1].final_residual() < 1e-8);
}

#[test]
fn compare_validation() {
    let dir = TempDir::new().unwrap();
    let (a, b) = diag_dominant(dir.path());
    let o = cli(&["compare", "--matrix", &a, "--rhs", &b, "--methods", ""]);
    assert_eq!(o.code, 4);
    let o = cli(&["compare", "--matrix", &a, "--rhs", &b, "--methods", "gjacobi,jacobi"]);
    assert_eq!(o.code, 4);
    assert!(o.stderr.contains("square"));

    let single = cli(&["compare", "--matrix", &a, "--rhs", &b, "--methods", "ggs"]);
    assert_eq!(single.code, 0);
    assert_eq!(single.stdout.lines().count(), 2);
}

#[test]
fn gen_is_deterministic_and_certified() {
    let dir = TempDir::new().unwrap();
    let p1 = dir.path().join("one");
    let p2 = dir.path().join("two");
    for p in [&p1, &p2] {
        let o = cli(&["gen", "--rows", "3", "--cols", "8", "--seed", "9", "--out-prefix", p.to_str().unwrap()]);
        assert_eq!(o.code, 0, "{}", o.stderr);
    }
    for suffix in ["_A.csv", "_b.csv", "_x.csv"] {
        let read = |p: &PathBuf| std::fs::read(format!("{}{suffix}", p.display())).unwrap();
        assert_eq!(read(&p1), read(&p2));
    }

    let cert = dir.path().join("cert");
    let o = cli(&["gen", "--rows", "4", "--cols", "9", "--seed", "3", "--certified", "--out-prefix", cert.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let a = format!("{}_A.csv", cert.display());
    let b = format!("{}_b.csv", cert.display());
    for method in ["gjacobi", "ggs"] {
        assert_eq!(cli(&["check", "--matrix", &a, "--rhs", &b, "--method", method]).code, 0);
        assert_eq!(cli(&["solve", "--matrix", &a, "--rhs", &b, "--method", method]).code, 0);
    }

    let o = cli(&["gen", "--rows", "5", "--cols", "5", "--out-prefix", cert.to_str().unwrap()]);
    assert_eq!(o.code, 4);
    let o = cli(&["gen", "--rows", "4", "--cols", "7", "--certified", "--out-prefix", cert.to_str().unwrap()]);
    assert_eq!(o.code, 4);
}

#[test]
fn json_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (a, b) = diag_dominant(dir.path());
    let j1 = dir.path().join("1.json");
    let j2 = dir.path().join("2.json");
    for j in [&j1, &j2] {
        let o = cli(&[
            "compare", "--matrix", &a, "--rhs", &b, "--methods", "baseline,gjacobi,ggs",
            "--json", j.to_str().unwrap(),
        ]);
        assert_eq!(o.code, 0);
    }
    assert_eq!(std::fs::read(&j1).unwrap(), std::fs::read(&j2).unwrap());
}

#[test]
fn binary_runs() {
    let dir = TempDir::new().unwrap();
    let (a, b) = diag_dominant(dir.path());
    let status = Command::new(env!("CARGO_BIN_EXE_genjacobi"))
        .args(["solve", "--matrix", &a, "--rhs", &b, "--method", "ggs"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&status.stdout).contains("converged"));

    let bad = Command::new(env!("CARGO_BIN_EXE_genjacobi")).arg("frobnicate").output().unwrap();
    assert_eq!(bad.status.code(), Some(4));
}
