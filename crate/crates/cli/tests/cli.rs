use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const S4: &str = r#"{
  "n": 4,
  "tt_einstein": [6.0, 14.0],
  "coclosed_oneforms": [7.0, 15.0],
  "laplace": [0.0, 4.0, 10.0, 18.0, 28.0],
  "label": "S^4"
}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conestab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_sphere() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s4.json", S4);
    let o = run(&["classify", "--input", arg(&input)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["tangentially_stable"], true);
    assert_eq!(doc["strictly_tangentially_stable"], false);
    assert_eq!(doc["n"], 4);
    let offending: Vec<f64> = doc["offending_eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!(offending.contains(&10.0));
    assert!(doc["exceptional_weights"].is_array());
}

#[test]
fn classify_negative_kappa() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "neg.json", &S4.replace("[6.0, 14.0]", "[-0.5, 14.0]"));
    let o = run(&["classify", "--input", arg(&input)]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["tangentially_stable"], false);
}

#[test]
fn classify_schema_errors() {
    let dir = TempDir::new().unwrap();
    let empty = write(
        &dir,
        "empty.json",
        &S4.replace("[0.0, 4.0, 10.0, 18.0, 28.0]", "[]"),
    );
    let o = run(&["classify", "--input", arg(&empty)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 5"), "{}", stderr(&o));
    let broken = write(
        &dir,
        "broken.json",
        "{\n  \"n\": 4,\n  \"laplace\": [0.0,\n}",
    );
    let o = run(&["classify", "--input", arg(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line "));
}

#[test]
fn classify_writes_out_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s4.json", S4);
    let out = dir.path().join("verdict.json");
    let o = run(&["classify", "--input", arg(&input), "--out", arg(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(doc["label"], "S^4");
}

#[test]
fn catalog_tables() {
    let o = run(&["catalog", "--table", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(
        csv.starts_with("family,cartan_type,params,dim_printed,dim_corrected,Lambda,threshold,")
    );
    // The erratum row of table 2 is reported, not hidden.
    let o = run(&["catalog", "--table", "2", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("SU(p)/SO(p), p>=6"));
    assert_eq!(run(&["catalog", "--table", "3"]).status.code(), Some(2));
    assert_eq!(
        run(&["catalog", "--table", "1", "--samples", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn blocks_tsv() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s4.json", S4);
    let o = run(&["blocks", "--input", arg(&input)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("block\tparameter\tindex\ttheta\n"));
    assert!(text.lines().skip(1).all(|l| l.split('\t').count() == 4));
}

#[test]
fn radial_sine_case() {
    let o = run(&["radial", "--nu", "0.5", "--M", "4000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "lambda\tnu\tm\teigenvalue\toracle\trel_error"
    );
    let first: f64 = lines
        .next()
        .unwrap()
        .split('\t')
        .nth(3)
        .unwrap()
        .parse()
        .unwrap();
    assert!((first - 9.8696).abs() < 1e-4);
}

#[test]
fn radial_from_spectrum() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s4.json", S4);
    let o = run(&[
        "radial",
        "--input",
        arg(&input),
        "--modes",
        "2",
        "--per-mode",
        "2",
        "--M",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn radial_tolerance_failure_is_named() {
    let o = run(&["radial", "--nu", "1", "--M", "50", "--tolerance", "1e-12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Bessel oracle"));
}

#[test]
fn heat_norm_column() {
    let o = run(&["heat", "--nu", "1", "--t", "0.1,0.2", "--M", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split('\t').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    // norm(t) = e^{−tλ₁}: the two rows determine the same λ₁.
    let l1 = -rows[0][1].ln() / rows[0][0];
    let l2 = -rows[1][1].ln() / rows[1][0];
    assert!((l1 - l2).abs() < 1e-9 * l1);
    assert!((l1 - 14.681970642123893).abs() < 1e-3);
}

#[test]
fn flow_trace() {
    let o = run(&["flow", "--N", "4", "--c", "1", "--ctilde", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("k\tdist_g_to_Pi\tbound_g_to_Pi\tdist_step\tbound_step\tdist_Pi_step\tbound_Pi_step\twithin_R\n"));
    assert!(text.lines().count() >= 12);
    assert!(text.lines().skip(1).all(|l| l.ends_with("\ttrue")));
}

#[test]
fn flow_tier_b_and_bad_config() {
    let o = run(&["flow", "--tier", "B", "--c", "1.2", "--legs", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // (c+1)/N ≥ 1.
    assert_eq!(
        run(&["flow", "--N", "2", "--c", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["flow", "--tier", "C"]).status.code(), Some(2));
}

#[test]
fn check_reports() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let oa = run(&["check", "--out", arg(&a)]);
    run(&["check", "--out", arg(&b)]);
    let ta = fs::read(&a).unwrap();
    assert_eq!(ta, fs::read(&b).unwrap());
    // Only the erratum row of table 2 fails in the default run.
    let text = String::from_utf8(ta).unwrap();
    let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 2, "{text}");
    assert!(fails.iter().all(|l| l.contains("SU(p)/SO(p), p>=6")));
    assert_eq!(oa.status.code(), Some(1));
}

#[test]
fn check_mutations() {
    let o = run(&["check", "--flip-a33", "--M", "500"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL tangential.determinant_identity"));
    let o = run(&["check", "--tolerance", "0", "--M", "500"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("failed at tolerance 0.0000000000000000e0"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["classify"]).status.code(), Some(2));
    assert_eq!(
        run(&["classify", "--input", "/nonexistent/file.json"])
            .status
            .code(),
        Some(2)
    );
}
