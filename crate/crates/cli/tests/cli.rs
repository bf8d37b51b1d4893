use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bpcoll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bpcoll"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// `key,value` summary lines printed next to CSV output.
fn summary_value(stdout: &[u8], key: &str) -> String {
    String::from_utf8_lossy(stdout)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")).map(str::to_string))
        .unwrap_or_else(|| panic!("no `{key}` in summary"))
}

#[test]
fn solve_reports_table_error() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("ex1.csv");
    let out = bpcoll(&[
        "solve",
        "--example",
        "1",
        "--n",
        "11",
        "--probe",
        "5",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let err: f64 = summary_value(&out.stdout, "l2_rel_error").parse().unwrap();
    assert!((1.1e-5..1.25e-5).contains(&err), "{err}");
    assert_eq!(summary_value(&out.stdout, "system_size"), "100");

    let text = fs::read_to_string(&out_path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,u_numeric,u_exact,abs_err"));
    assert_eq!(lines.count(), 25);

    let out = bpcoll(&["solve", "--example", "2", "--n", "12", "--probe", "3"]);
    assert_eq!(code(&out), 0);
    let err: f64 = summary_value(&out.stderr, "l2_rel_error").parse().unwrap();
    assert!(err <= 1e-12, "{err}");
}

#[test]
fn csv_values_round_trip_exactly() {
    let out = bpcoll(&["solve", "--example", "3", "--n", "8", "--probe", "4"]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 16);
    for row in &rows {
        assert_eq!(row[4].to_bits(), (row[2] - row[3]).abs().to_bits());
        let x = row[0];
        assert!(x == -std::f64::consts::PI || x == std::f64::consts::PI || x.abs() < 3.2);
    }
}

#[test]
fn json_output_has_summary_and_rows() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("c.json");
    let out = bpcoll(&[
        "converge",
        "--example",
        "3",
        "--orders",
        "12,14,16",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["summary"]["metric"], "l2_rel_error");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let expected = [9.035e-6, 2.430e-7, 4.992e-9];
    for (row, want) in rows.iter().zip(expected) {
        let e = row["l2_rel_error"].as_f64().unwrap();
        assert!(e / want < 10.0 && want / e < 10.0, "{e} vs {want}");
        assert!(row.get("seconds").is_none());
    }
}

#[test]
fn converge_without_exact_solution_uses_self_consistency() {
    let out = bpcoll(&["converge", "--example", "5b", "--orders", "16,20", "--probe", "1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,self_consistency,cond_estimate"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "16");
    assert!(first[1].parse::<f64>().unwrap() <= 1e-4);

    let out = bpcoll(&["converge", "--example", "1", "--orders", "11", "--timing"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("n,l2_rel_error,cond_estimate,seconds"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["solve", "--n", "4"],
        vec!["solve", "--example", "1", "--problem", "p.txt", "--n", "4"],
        vec!["solve", "--example", "9", "--n", "4"],
        vec!["solve", "--example", "5a", "--n", "1"],
        vec!["solve", "--example", "1", "--n", "6", "--grid", "random"],
        vec!["converge", "--example", "1", "--orders", "13,11"],
        vec!["converge", "--example", "1"],
        vec!["frobnicate"],
    ] {
        let out = bpcoll(&args);
        assert_eq!(code(&out), 1, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(code(&bpcoll(&["--help"])), 0);
}

#[test]
fn problem_file_errors_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        dir.path(),
        "bad.txt",
        "domain = 0, 1, 0, 1\noperator = laplacian\nsource = sin(x\nboundary = homogeneous\n",
    );
    let out = bpcoll(&["solve", "--problem", &bad, "--n", "6"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn numerical_failures_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let singular = write(
        dir.path(),
        "singular.txt",
        "domain = 0, 1, 0, 1\noperator = custom\nterm = 2 0 0\nsource = 1\nboundary = homogeneous\n",
    );
    assert_eq!(code(&bpcoll(&["solve", "--problem", &singular, "--n", "5"])), 2);
    let nan = write(
        dir.path(),
        "nan.txt",
        "domain = 0, 1, 0, 1\noperator = laplacian\nsource = ln(x - 2)\nboundary = homogeneous\n",
    );
    assert_eq!(code(&bpcoll(&["solve", "--problem", &nan, "--n", "5"])), 2);
}

#[test]
fn problem_file_reproduces_catalog_example() {
    let dir = TempDir::new().unwrap();
    let file = write(
        dir.path(),
        "helmholtz.txt",
        "# Helmholtz\nname = h\ndomain = -pi, pi, -pi, pi\noperator = helmholtz\nlambda = 1\nsource = x\n\
         exact = sin(x) + sin(y) + x\nboundary = dirichlet\nvalue = sin(x) + sin(y) + x\n",
    );
    let a = bpcoll(&["solve", "--problem", &file, "--n", "12", "--probe", "3"]);
    let b = bpcoll(&["solve", "--example", "3", "--n", "12", "--probe", "3"]);
    assert_eq!(code(&a), 0);
    let ea: f64 = summary_value(&a.stderr, "l2_rel_error").parse().unwrap();
    let eb: f64 = summary_value(&b.stderr, "l2_rel_error").parse().unwrap();
    assert!((ea - eb).abs() <= 1e-3 * eb, "{ea} vs {eb}");
    assert!(eb <= 1e-4);
}

#[test]
fn selftest_passes_and_detects_injected_fault() {
    let out = bpcoll(&["selftest"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let out = bpcoll(&["selftest", "--inject-fault"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("derivative"));
    let help = bpcoll(&["selftest", "--help"]);
    assert!(!String::from_utf8_lossy(&help.stdout).contains("inject"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    for (k, args) in [
        vec!["solve", "--example", "4", "--n", "10", "--probe", "9"],
        vec![
            "solve",
            "--example",
            "5b",
            "--n",
            "12",
            "--grid",
            "chebyshev",
            "--format",
            "json",
        ],
        vec!["converge", "--example", "2", "--orders", "6,8,10", "--format", "json"],
    ]
    .into_iter()
    .enumerate()
    {
        let outputs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
            .map(|r| {
                let path = dir.path().join(format!("run{k}_{r}"));
                let mut full = args.clone();
                full.extend(["--out", path.to_str().unwrap()]);
                let out = bpcoll(&full);
                assert_eq!(code(&out), 0);
                (fs::read(&path).unwrap(), out.stdout)
            })
            .collect();
        assert_eq!(outputs[0], outputs[1], "{args:?}");
    }
}
