//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain function that returns
//! `Result<_, String>`, so the logic is testable without a browser.

use bernstein_collocation::analysis::{consistency_sweep, convergence_sweep, Probes, SolveReport};
use bernstein_collocation::{catalog_example, BernsteinBasis, CollocationGrid, Distribution, Interval};
use wasm_bindgen::prelude::*;

/// Largest order the page will solve; the dense solve is cubic in `n²`.
pub const MAX_ORDER: usize = 30;

fn distribution(chebyshev: bool) -> Distribution {
    if chebyshev {
        Distribution::ChebyshevLobatto
    } else {
        Distribution::Uniform
    }
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

/// A solution sampled on a `probe × probe` grid, row-major with `y` fastest.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Field {
    probe: usize,
    bounds: Vec<f64>,
    values: Vec<f64>,
    error: Vec<f64>,
    l2: f64,
    condition: f64,
}

#[wasm_bindgen]
impl Field {
    #[wasm_bindgen(getter)]
    pub fn probe(&self) -> usize {
        self.probe
    }

    /// `[x1, x2, y1, y2]`.
    #[wasm_bindgen(getter)]
    pub fn bounds(&self) -> Vec<f64> {
        self.bounds.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    /// Pointwise `|u - u_exact|`; empty when the problem has no exact solution.
    #[wasm_bindgen(getter)]
    pub fn error(&self) -> Vec<f64> {
        self.error.clone()
    }

    /// Nodal L² relative error, `NaN` without an exact solution.
    #[wasm_bindgen(getter)]
    pub fn l2(&self) -> f64 {
        self.l2
    }

    #[wasm_bindgen(getter)]
    pub fn condition(&self) -> f64 {
        self.condition
    }
}

pub fn solve_field(id: &str, n: usize, probe: usize, chebyshev: bool) -> Result<Field, String> {
    if n > MAX_ORDER {
        return Err(format!("order {n} is above the demo limit of {MAX_ORDER}"));
    }
    let probe = probe.clamp(2, 201);
    let problem = catalog_example(id).map_err(|e| e.to_string())?;
    let grid = CollocationGrid::for_problem(&problem, n, n, distribution(chebyshev)).map_err(|e| e.to_string())?;
    let report = SolveReport::compute(&problem, &grid).map_err(|e| e.to_string())?;
    let (ix, iy) = problem.domain;
    let xs = linspace(ix.lower(), ix.upper(), probe);
    let ys = linspace(iy.lower(), iy.upper(), probe);
    let values = report.expansion.eval_grid(&xs, &ys).map_err(|e| e.to_string())?;
    let error = match &problem.exact {
        Some(u) => xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
            .zip(&values)
            .map(|((x, y), v)| (v - u.eval(x, y)).abs())
            .collect(),
        None => Vec::new(),
    };
    Ok(Field {
        probe,
        bounds: vec![ix.lower(), ix.upper(), iy.lower(), iy.upper()],
        values,
        error,
        l2: report.l2_rel_error.unwrap_or(f64::NAN),
        condition: report.condition,
    })
}

/// `D^p B_{i,n}` on `[0, 1]` at `samples` points, row-major by `i`.
pub fn basis_table(n: usize, p: usize, samples: usize) -> Result<Vec<f64>, String> {
    if n > 60 {
        return Err("degree must be at most 60".into());
    }
    let basis = BernsteinBasis::new(n, Interval::new(0.0, 1.0).map_err(|e| e.to_string())?);
    let xs = linspace(0.0, 1.0, samples.clamp(2, 2001));
    let columns: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| basis.derivative_all(p, x))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    Ok((0..=n).flat_map(|i| columns.iter().map(move |c| c[i])).collect())
}

/// `[n, error, condition]` triples. The error is the nodal L² relative error,
/// or the difference to the highest order at the domain center when the
/// problem has no exact solution.
pub fn convergence_table(id: &str, orders: &[usize], chebyshev: bool) -> Result<Vec<f64>, String> {
    if let Some(&n) = orders.iter().find(|&&n| n > MAX_ORDER) {
        return Err(format!("order {n} is above the demo limit of {MAX_ORDER}"));
    }
    let problem = catalog_example(id).map_err(|e| e.to_string())?;
    let dist = distribution(chebyshev);
    let table = if problem.exact.is_some() {
        convergence_sweep(&problem, orders, dist)
    } else {
        consistency_sweep(&problem, orders, dist, &Probes::Center)
    }
    .map_err(|e| e.to_string())?;
    Ok(table
        .rows
        .iter()
        .flat_map(|r| {
            [
                r.order as f64,
                r.l2_rel_error.or(r.self_consistency).unwrap_or(f64::NAN),
                r.condition,
            ]
        })
        .collect())
}

#[wasm_bindgen(js_name = solveExample)]
pub fn solve_example(id: &str, n: usize, probe: usize, chebyshev: bool) -> Result<Field, JsError> {
    solve_field(id, n, probe, chebyshev).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = basisCurves)]
pub fn basis_curves(n: usize, p: usize, samples: usize) -> Result<Vec<f64>, JsError> {
    basis_table(n, p, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn convergence(id: &str, orders: Vec<u32>, chebyshev: bool) -> Result<Vec<f64>, JsError> {
    let orders: Vec<usize> = orders.into_iter().map(|n| n as usize).collect();
    convergence_table(id, &orders, chebyshev).map_err(|e| JsError::new(&e))
}
