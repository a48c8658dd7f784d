use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use radineq::io::{read_report, MatrixFile};
use radineq::linalg::PsdMatrix;
use radineq::tolerance::ToleranceConfig;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radineq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn column(header: &str, name: &str) -> usize {
    header.split(',').position(|c| c == name).unwrap()
}

#[test]
fn verify_lemmas_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lemmas.csv");
    let out = run(&["verify", "--suite", "lemmas", "--trials", "100", "--seed", "7", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = read_report(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 5 * 100);
}

#[test]
fn verify_all_small_dims() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("all.csv");
    let out = run(&["verify", "--suite", "all", "--dims", "2:3", "--trials", "5", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = read_report(std::fs::File::open(&path).unwrap()).unwrap();
    let bound_rows: Vec<_> = rows.iter().filter(|r| !r[0].starts_with("lemma")).collect();
    assert_eq!(bound_rows.len() % 5, 0);
    // trials run 0..5 within each (theorem, parameter point) block
    for (k, row) in bound_rows.iter().enumerate() {
        assert_eq!(row[1], (k % 5).to_string());
        let dim: usize = row[2].parse().unwrap();
        assert!((2..=3).contains(&dim));
    }
    assert!(rows.iter().all(|r| r[17] != "certified-violation" && r[16] == "0"));
}

#[test]
fn verify_single_theorem_suite() {
    let out = run(&["verify", "--suite", "cor2.19", "--trials", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert_eq!(format!("{header}\n"), std::fs::read_to_string(golden("report_header.csv")).unwrap());
    assert_eq!(text.lines().count(), 1 + 3);
}

#[test]
fn unknown_suite_is_usage_error() {
    let out = run(&["verify", "--suite", "everything", "--trials", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown suite"));
}

#[test]
fn malformed_flags_are_usage_errors() {
    assert_eq!(code(&run(&["verify", "--dims", "3:2"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["gen", "--kind", "psd"])), 1);
    assert_eq!(code(&run(&["gen", "--kind", "gaussian", "--dim", "2"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn report_header_matches_golden() {
    let out = run(&["verify", "--suite", "lemmas", "--trials", "1"]);
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert_eq!(format!("{header}\n"), std::fs::read_to_string(golden("report_header.csv")).unwrap());
}

#[test]
fn radius_single_and_tuple() {
    let input = golden("matrices.json");
    let input = input.to_str().unwrap();

    let out = run(&["radius", "--input", input, "--names", "I"]);
    assert_eq!(code(&out), 0);
    let first = stdout(&out).lines().next().unwrap().to_string();
    assert!(first.ends_with("(lower-of-sup)"), "{first}");
    let value: f64 = first.split_whitespace().next().unwrap().parse().unwrap();
    assert!((value - 1.0).abs() < 1e-12);

    let out = run(&["radius", "--input", input, "--names", "N"]);
    let value: f64 = stdout(&out).split_whitespace().next().unwrap().parse().unwrap();
    assert!((value - 0.5).abs() < 1e-9);
    assert!(stdout(&out).contains("witness: ["));

    // w_e(diag(1,0), diag(0,1)) = sup √(|x1|⁴ + |x2|⁴) = 1
    let out = run(&["radius", "--input", input, "--names", "E1,E2", "--p", "2"]);
    assert_eq!(code(&out), 0);
    let value: f64 = stdout(&out).split_whitespace().next().unwrap().parse().unwrap();
    assert!((value - 1.0).abs() < 1e-6);

    let out = run(&["radius", "--input", input, "--names", "missing"]);
    assert_eq!(code(&out), 1);
    let out = run(&["radius", "--input", input, "--names", "I,I3"]);
    assert_eq!(code(&out), 1);
}

fn bound_json(args: &[&str]) -> (i32, serde_json::Value, String) {
    let out = run(args);
    let value = serde_json::from_str(&stdout(&out)).unwrap_or(serde_json::Value::Null);
    (code(&out), value, stderr(&out))
}

#[test]
fn bound_domain_error_names_constraint() {
    let input = golden("matrices.json");
    let (c, _, err) = bound_json(&["bound", "--theorem", "thm2.13", "--input", input.to_str().unwrap(), "--operands", "X", "--p", "1"]);
    assert_eq!(c, 1);
    assert!(err.contains("p ≥ 2"), "{err}");
}

#[test]
fn bound_identity_young_case() {
    let input = golden("matrices.json");
    let (c, v, err) = bound_json(&[
        "bound", "--theorem", "thm2.3", "--input", input.to_str().unwrap(), "--operands", "I,I,X", "--nu", "0.25", "--levels", "3",
    ]);
    assert_eq!(c, 0, "{err}");
    assert_eq!(v["refinement_upper"].as_f64().unwrap(), 0.0);
    assert_eq!(v["theorem"], "thm2.3");
}

#[test]
fn bound_cartesian_case() {
    let input = golden("matrices.json");
    let (c, v, err) = bound_json(&["bound", "--theorem", "cor2.15", "--input", input.to_str().unwrap(), "--operands", "N", "--p", "2"]);
    assert_eq!(c, 0, "{err}");
    let cart = &v["cartesian"];
    assert!((cart["w_squared"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((cart["half_norm"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["pointwise_violations"].as_u64().unwrap(), 0);
}

#[test]
fn bound_operand_shape_is_checked() {
    let input = golden("matrices.json");
    let (c, _, err) = bound_json(&["bound", "--theorem", "thm2.3", "--input", input.to_str().unwrap(), "--operands", "I,I"]);
    assert_eq!(c, 1);
    assert!(err.contains("A,B,X"), "{err}");
    let (c, _, _) = bound_json(&["bound", "--theorem", "thm9.9", "--input", input.to_str().unwrap(), "--operands", "I"]);
    assert_eq!(c, 1);
}

#[test]
fn gen_writes_deterministic_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["gen", "--kind", "psd", "--dim", "3", "--count", "2", "--seed", "1", "--output", p.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let file = MatrixFile::read(&a).unwrap();
    assert_eq!(file.matrices.len(), 2);
    for m in &file.matrices {
        assert!(PsdMatrix::from_complex(m.to_matrix().unwrap(), &ToleranceConfig::default()).is_ok());
    }
}

#[test]
fn gen_nilpotent_is_strictly_upper() {
    let out = run(&["gen", "--kind", "nilpotent", "--dim", "2", "--seed", "4"]);
    assert_eq!(code(&out), 0);
    let file = MatrixFile::from_reader(out.stdout.as_slice()).unwrap();
    let m = file.matrices[0].to_matrix().unwrap();
    assert_eq!(m.get(0, 0).norm(), 0.0);
    assert_eq!(m.get(1, 0).norm(), 0.0);
    assert_eq!(m.get(1, 1).norm(), 0.0);
    assert!(m.get(0, 1).norm() > 0.0);
}

#[test]
fn gen_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("g.json");
    let b = dir.path().join("h.json");
    let out = run(&["gen", "--kind", "ginibre", "--dim", "4", "--count", "3", "--seed", "9", "--output", a.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let file = MatrixFile::read(&a).unwrap();
    file.write(&b).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let again = MatrixFile::read(&b).unwrap();
    assert_eq!(file, again);
}

#[test]
fn compare_single_level_gains_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cmp.csv");
    let out = run(&[
        "compare", "--trials", "3", "--dims", "2:4", "--levels", "1", "--theorems", "thm2.6,cor2.8,thm2.11,thm2.13,thm2.16",
        "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    let header = text.lines().next().unwrap();
    let (gain, norm) = (column(header, "refinement_gain"), column(header, "norm_term"));
    let rows = read_report(text.as_bytes()).unwrap();
    assert!(!rows.is_empty());
    for r in &rows {
        let g: f64 = r[gain].parse().unwrap();
        let n: f64 = r[norm].parse().unwrap();
        assert!(g.abs() <= 1e-10 * n.abs().max(1.0), "{r:?}");
    }
    let summary = std::fs::read_to_string(path.with_extension("gains.csv")).unwrap();
    assert_eq!(
        format!("{}\n", summary.lines().next().unwrap()),
        std::fs::read_to_string(golden("gain_header.csv")).unwrap()
    );
    assert_eq!(summary.lines().count(), 1 + 5);
}

#[test]
fn compare_default_gains_nonnegative() {
    let out = run(&["compare", "--trials", "2", "--dims", "2:3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let table: String = text.split("\n\n").next().unwrap().to_string();
    let header = table.lines().next().unwrap();
    let (gain, norm) = (column(header, "refinement_gain"), column(header, "norm_term"));
    let rows = read_report(table.as_bytes()).unwrap();
    for r in &rows {
        let g: f64 = r[gain].parse().unwrap();
        let n: f64 = r[norm].parse().unwrap();
        assert!(g >= -1e-10 * n.abs().max(1.0), "{r:?}");
    }
}

#[test]
fn compare_empty_selection_is_usage_error() {
    assert_eq!(code(&run(&["compare", "--trials", "1", "--theorems", ""])), 1);
    assert_eq!(code(&run(&["compare", "--trials", "1", "--theorems", "cor2.19"])), 1);
}

#[test]
fn verify_output_is_deterministic() {
    let a = run(&["verify", "--suite", "thm2.11", "--trials", "2", "--seed", "5"]);
    let b = run(&["verify", "--suite", "thm2.11", "--trials", "2", "--seed", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
