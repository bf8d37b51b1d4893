use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use bernstein_collocation::analysis::{consistency_sweep, convergence_sweep, ConvergenceTable, Probes, SolveReport};
use bernstein_collocation::selftest::{self, SelfTestOptions};
use bernstein_collocation::{catalog_example, problem_file, CollocationGrid, Distribution, EllipticProblem, Error};

use crate::args::{Command, ConvergeArgs, Grid, OutputArgs, SelftestArgs, SolveArgs, Source};
use crate::table::{emit, Cell, Summary, Table};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_SOLVER: u8 = 2;
pub const EXIT_PARSE: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::AtOrder { source, .. } => exit_code(source),
        Error::Parse { .. } => EXIT_PARSE,
        Error::Config(_) | Error::UnknownExample(_) => EXIT_USAGE,
        _ => EXIT_SOLVER,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("cannot write output: {e}"),
        }
    }
}

fn load_problem(source: &Source) -> Result<EllipticProblem, Failure> {
    match (&source.example, &source.problem) {
        (Some(id), None) => Ok(catalog_example(id)?),
        (None, Some(path)) => problem_file::load(path).map_err(|e| {
            let mut f = Failure::from(e);
            f.message = format!("{}: {}", path.display(), f.message);
            f
        }),
        _ => Err(Failure {
            code: EXIT_USAGE,
            message: "give exactly one of --example or --problem".into(),
        }),
    }
}

fn distribution(grid: Grid) -> Distribution {
    match grid {
        Grid::Uniform => Distribution::Uniform,
        Grid::Chebyshev => Distribution::ChebyshevLobatto,
    }
}

fn grid_name(grid: Grid) -> &'static str {
    match grid {
        Grid::Uniform => "uniform",
        Grid::Chebyshev => "chebyshev",
    }
}

/// Rows go to `--out` (or stdout); a CSV summary goes to stdout (or stderr).
fn write_output(output: &OutputArgs, summary: &Summary, rows: &Table) -> Result<(), Failure> {
    match &output.out {
        Some(path) => {
            let file = create(path)?;
            let mut main = BufWriter::new(file);
            emit(output.format, summary, rows, &mut main, io::stdout().lock())?;
            main.flush()?;
        }
        None => emit(output.format, summary, rows, io::stdout().lock(), io::stderr().lock())?,
    }
    Ok(())
}

fn create(path: &Path) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("cannot create {}: {e}", path.display()),
    })
}

fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|t| {
            if t + 1 == k {
                b
            } else {
                a + (b - a) * t as f64 / (k - 1) as f64
            }
        })
        .collect()
}

fn solve(args: &SolveArgs) -> Result<(), Failure> {
    let problem = load_problem(&args.source)?;
    let (n, m) = (args.n, args.m.unwrap_or(args.n));
    let grid = CollocationGrid::for_problem(&problem, n, m, distribution(args.grid))?;
    let report = SolveReport::compute(&problem, &grid)?;

    let (ix, iy) = problem.domain;
    let k = args.probe as usize;
    let xs = linspace(ix.lower(), ix.upper(), k);
    let ys = linspace(iy.lower(), iy.upper(), k);
    let values = report.expansion.eval_grid(&xs, &ys)?;
    let exact = problem.exact.as_ref();
    let mut columns = vec!["x", "y", "u_numeric"];
    if exact.is_some() {
        columns.extend(["u_exact", "abs_err"]);
    }
    let mut rows = Table::new(columns);
    let points = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y)));
    for ((x, y), u) in points.zip(values) {
        let mut row = vec![Cell::from(x), Cell::from(y), Cell::from(u)];
        if let Some(e) = exact {
            let ue = e.eval(x, y);
            row.extend([Cell::from(ue), Cell::from((u - ue).abs())]);
        }
        rows.push(row);
    }

    let mut summary: Summary = vec![
        ("problem", Cell::Text(problem.name.clone())),
        ("n", Cell::from(n)),
        ("m", Cell::from(m)),
        ("grid", Cell::Text(grid_name(args.grid).into())),
        ("system_size", Cell::from(report.system_size)),
        ("l2_rel_error", Cell::from(report.l2_rel_error)),
        ("cond_estimate", Cell::from(report.condition)),
        ("max_residual", Cell::from(report.max_residual)),
    ];
    if args.output.timing {
        summary.push(("seconds", Cell::from(report.seconds)));
    }
    write_output(&args.output, &summary, &rows)
}

fn converge(args: &ConvergeArgs) -> Result<(), Failure> {
    let problem = load_problem(&args.source)?;
    let dist = distribution(args.grid);
    let has_exact = problem.exact.is_some();
    let table: ConvergenceTable = if has_exact {
        convergence_sweep(&problem, &args.orders, dist)?
    } else {
        let probes = match args.probe {
            1 => Probes::Center,
            k => Probes::Grid(k as usize),
        };
        consistency_sweep(&problem, &args.orders, dist, &probes)?
    };
    let metric = if has_exact { "l2_rel_error" } else { "self_consistency" };
    let mut columns = vec!["n", metric, "cond_estimate"];
    if args.output.timing {
        columns.push("seconds");
    }
    let mut rows = Table::new(columns);
    for r in &table.rows {
        let value = if has_exact { r.l2_rel_error } else { r.self_consistency };
        let mut row = vec![Cell::from(r.order), Cell::from(value), Cell::from(r.condition)];
        if args.output.timing {
            row.push(Cell::from(r.seconds));
        }
        rows.push(row);
    }
    let summary: Summary = vec![
        ("problem", Cell::Text(problem.name.clone())),
        ("grid", Cell::Text(grid_name(args.grid).into())),
        ("orders", Cell::from(table.rows.len())),
        ("metric", Cell::Text(metric.into())),
    ];
    write_output(&args.output, &summary, &rows)
}

fn run_selftest(args: &SelftestArgs) -> Result<(), Failure> {
    let results = selftest::run(SelfTestOptions {
        flip_derivative_sign: args.inject_fault,
    });
    let mut columns = vec!["property", "passed", "worst", "tolerance"];
    if args.output.timing {
        columns.push("seconds");
    }
    let mut rows = Table::new(columns);
    for r in &results {
        let mut row = vec![
            Cell::Text(r.name.into()),
            Cell::Bool(r.passed),
            Cell::from(r.worst),
            Cell::from(r.tolerance),
        ];
        if args.output.timing {
            row.push(Cell::from(r.seconds));
        }
        rows.push(row);
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    let summary: Summary = vec![
        ("properties", Cell::from(results.len())),
        ("failed", Cell::from(failed.len())),
    ];
    write_output(&args.output, &summary, &rows)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_SOLVER,
            message: format!("failed properties: {}", failed.join("; ")),
        })
    }
}

pub fn run(command: &Command) -> Result<(), Failure> {
    match command {
        Command::Solve(a) => solve(a),
        Command::Converge(a) => converge(a),
        Command::Selftest(a) => run_selftest(a),
    }
}
