//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p bernstein-cli --test acceptance`.

use std::fs;
use std::process::{Command, ExitCode};
use std::time::Instant;

use bernstein_collocation::analysis::{self_consistency, Probes, SolveReport};
use bernstein_collocation::selftest::{self, SelfTestOptions};
use bernstein_collocation::{example, CollocationGrid, Distribution, ExampleId};

struct Solved {
    error: f64,
    seconds: f64,
}

fn solve(id: ExampleId, n: usize) -> Solved {
    let p = example(id);
    let grid = CollocationGrid::for_problem(&p, n, n, Distribution::Uniform).expect("valid order");
    let start = Instant::now();
    let report = SolveReport::compute(&p, &grid).expect("solvable");
    Solved {
        error: report.l2_rel_error.expect("exact solution"),
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn criterion_1() -> (bool, String) {
    let (a, b) = (solve(ExampleId::Poisson, 11), solve(ExampleId::Poisson, 17));
    let slowest = a.seconds.max(b.seconds);
    let pass = (1e-6..=1e-4).contains(&a.error) && b.error <= 1e-8 && slowest < 2.0;
    (
        pass,
        format!(
            "Example 1: e(11) = {:.3e}, e(17) = {:.3e}, slowest solve {:.3} s",
            a.error, b.error, slowest
        ),
    )
}

fn criterion_2() -> (bool, String) {
    let ratio = solve(ExampleId::Poisson, 17).error / solve(ExampleId::Poisson, 11).error;
    (ratio <= 1e-3, format!("Example 1: e(17) / e(11) = {ratio:.3e}"))
}

fn criterion_3() -> (bool, String) {
    let (e21, e41) = (solve(ExampleId::Poisson, 21).error, solve(ExampleId::Poisson, 41).error);
    (e41 > e21, format!("Example 1: e(21) = {e21:.3e}, e(41) = {e41:.3e}"))
}

fn criterion_4() -> (bool, String) {
    let e = solve(ExampleId::PoissonNonHomogeneous, 12).error;
    (e <= 1e-11, format!("Example 2: e(12) = {e:.3e}"))
}

fn criterion_5() -> (bool, String) {
    let (a, b) = (
        solve(ExampleId::Helmholtz, 12).error,
        solve(ExampleId::Helmholtz, 18).error,
    );
    (
        a <= 1e-4 && b <= 1e-8,
        format!("Example 3: e(12) = {a:.3e}, e(18) = {b:.3e}"),
    )
}

fn criterion_6() -> (bool, String) {
    let (a, b) = (
        solve(ExampleId::SimplySupportedPlate, 10).error,
        solve(ExampleId::SimplySupportedPlate, 14).error,
    );
    (
        a <= 1e-6 && b <= 1e-9,
        format!("Example 4: e(10) = {a:.3e}, e(14) = {b:.3e}"),
    )
}

fn criterion_7() -> (bool, String) {
    let e = solve(ExampleId::ClampedPlateExact, 8).error;
    (e <= 1e-11, format!("Example 5a: e(8) = {e:.3e}"))
}

fn criterion_8() -> (bool, String) {
    let p = example(ExampleId::ClampedPlateUniformLoad);
    let d = self_consistency(&p, 16, 20, &Probes::Center, Distribution::Uniform).expect("solvable");
    (
        d <= 1e-4,
        format!("Example 5b: center difference n = 16 vs 20 = {d:.3e}"),
    )
}

fn criterion_9() -> (bool, String) {
    let start = Instant::now();
    let results = selftest::run(SelfTestOptions::default());
    let seconds = start.elapsed().as_secs_f64();
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} ({:.3e} > {:.1e})", r.name, r.worst, r.tolerance))
        .collect();
    let pass = failed.is_empty() && seconds < 30.0;
    let detail = if failed.is_empty() {
        format!("{} properties pass in {seconds:.2} s", results.len())
    } else {
        format!("failing: {}", failed.join(", "))
    };
    (pass, detail)
}

fn criterion_10() -> (bool, String) {
    let dir = tempfile::TempDir::new().expect("temp dir");
    let commands: [&[&str]; 5] = [
        &["solve", "--example", "1", "--n", "11"],
        &["solve", "--example", "5a", "--n", "8", "--format", "json"],
        &["converge", "--example", "3", "--orders", "12,14,16"],
        &["converge", "--example", "5b", "--orders", "12,16", "--format", "json"],
        &["selftest"],
    ];
    let mut mismatched = Vec::new();
    for (k, args) in commands.iter().enumerate() {
        let runs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
            .map(|r| {
                let path = dir.path().join(format!("{k}-{r}.out"));
                let out = Command::new(env!("CARGO_BIN_EXE_bpcoll"))
                    .args(*args)
                    .arg("--out")
                    .arg(&path)
                    .output()
                    .expect("binary runs");
                assert!(out.status.success(), "{args:?} failed");
                (fs::read(&path).expect("output written"), out.stdout)
            })
            .collect();
        if runs[0] != runs[1] {
            mismatched.push(args.join(" "));
        }
    }
    let detail = if mismatched.is_empty() {
        format!("{} commands, outputs byte-identical across two runs", commands.len())
    } else {
        format!("differing: {}", mismatched.join("; "))
    };
    (mismatched.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [fn() -> (bool, String); 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut failures = 0;
    for (k, check) in criteria.iter().enumerate() {
        let (pass, detail) = check();
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {:>2}: {}  {detail}",
            k + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
