//! Error measures and convergence studies.

use std::time::Instant;

use crate::assembly::{solve_detailed, CollocationGrid, Distribution};
use crate::error::{Error, Result};
use crate::problem::EllipticProblem;
use crate::surface::TensorExpansion;

fn check_shapes(numeric: &[f64], exact: &[f64]) -> Result<()> {
    if numeric.len() != exact.len() {
        return Err(Error::DimensionMismatch {
            expected: exact.len(),
            got: numeric.len(),
        });
    }
    Ok(())
}

/// `Σ (u - uᵉ)² / Σ (uᵉ)²` over all nodes.
pub fn squared_relative_error(numeric: &[f64], exact: &[f64]) -> Result<f64> {
    check_shapes(numeric, exact)?;
    let den: f64 = exact.iter().map(|e| e * e).sum();
    if den == 0.0 {
        return Err(Error::ZeroReference);
    }
    let num: f64 = numeric.iter().zip(exact).map(|(u, e)| (u - e) * (u - e)).sum();
    Ok(num / den)
}

/// Relative L² error over the nodes, `sqrt(Σ (u - uᵉ)² / Σ (uᵉ)²)`.
pub fn l2_relative_error(numeric: &[f64], exact: &[f64]) -> Result<f64> {
    squared_relative_error(numeric, exact).map(f64::sqrt)
}

/// Root-mean-square of the pointwise error divided by the RMS of the
/// reference, `sqrt(mean((u - uᵉ)²)) / sqrt(mean((uᵉ)²))`. Numerically the
/// same as [`l2_relative_error`] on a shared node set; kept for callers that
/// compare fields sampled at different resolutions.
pub fn rms_relative_error(numeric: &[f64], exact: &[f64]) -> Result<f64> {
    check_shapes(numeric, exact)?;
    let n = exact.len() as f64;
    let den = (exact.iter().map(|e| e * e).sum::<f64>() / n).sqrt();
    if den == 0.0 {
        return Err(Error::ZeroReference);
    }
    let num = (numeric.iter().zip(exact).map(|(u, e)| (u - e) * (u - e)).sum::<f64>() / n).sqrt();
    Ok(num / den)
}

/// Outcome of one solve, with errors measured at the collocation nodes.
/// Nodal matrices are row-major `(n+1) × (m+1)`, `y` varying fastest.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub expansion: TensorExpansion,
    pub grid: CollocationGrid,
    pub nodal_values: Vec<f64>,
    pub exact_values: Option<Vec<f64>>,
    pub abs_error: Option<Vec<f64>>,
    pub l2_rel_error: Option<f64>,
    pub system_size: usize,
    pub condition: f64,
    pub max_residual: f64,
    pub seconds: f64,
}

impl SolveReport {
    pub fn compute(problem: &EllipticProblem, grid: &CollocationGrid) -> Result<Self> {
        let start = Instant::now();
        let solution = solve_detailed(problem, grid)?;
        let seconds = start.elapsed().as_secs_f64();
        let nodal_values = solution.expansion.eval_grid(grid.nodes_x(), grid.nodes_y())?;
        let exact_values: Option<Vec<f64>> = problem.exact.as_ref().map(|u| {
            grid.nodes_x()
                .iter()
                .flat_map(|&x| grid.nodes_y().iter().map(move |&y| u.eval(x, y)))
                .collect()
        });
        let abs_error = exact_values
            .as_ref()
            .map(|e| nodal_values.iter().zip(e).map(|(u, ue)| (u - ue).abs()).collect());
        let l2_rel_error = exact_values
            .as_ref()
            .map(|e| l2_relative_error(&nodal_values, e))
            .transpose()?;
        Ok(Self {
            system_size: solution.system_size(),
            condition: solution.condition(),
            max_residual: solution.systems.iter().map(|s| s.residual_inf).fold(0.0, f64::max),
            expansion: solution.expansion,
            grid: grid.clone(),
            nodal_values,
            exact_values,
            abs_error,
            l2_rel_error,
            seconds,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub order: usize,
    pub l2_rel_error: Option<f64>,
    /// Difference to the highest-order solve, for problems without an exact solution.
    pub self_consistency: Option<f64>,
    pub condition: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn orders(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.order).collect()
    }

    pub fn errors(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.l2_rel_error).collect()
    }
}

fn check_orders(orders: &[usize]) -> Result<()> {
    if orders.is_empty() {
        return Err(Error::Config("at least one polynomial order is required".into()));
    }
    if orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("polynomial orders must be strictly increasing".into()));
    }
    Ok(())
}

fn at_order(order: usize) -> impl Fn(Error) -> Error {
    move |e| Error::AtOrder {
        order,
        source: Box::new(e),
    }
}

fn map_orders<T, F>(orders: &[usize], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        orders.par_iter().map(|&n| f(n)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        orders.iter().map(|&n| f(n)).collect()
    }
}

/// One solve per order with `n = m`, reporting the nodal L² relative error.
pub fn convergence_sweep(
    problem: &EllipticProblem,
    orders: &[usize],
    distribution: Distribution,
) -> Result<ConvergenceTable> {
    check_orders(orders)?;
    if problem.exact.is_none() {
        return Err(Error::NoExactSolution);
    }
    let rows = map_orders(orders, |n| {
        let grid = CollocationGrid::for_problem(problem, n, n, distribution).map_err(at_order(n))?;
        let report = SolveReport::compute(problem, &grid).map_err(at_order(n))?;
        Ok(ConvergenceRow {
            order: n,
            l2_rel_error: report.l2_rel_error,
            self_consistency: None,
            condition: report.condition,
            seconds: report.seconds,
        })
    })?;
    Ok(ConvergenceTable { rows })
}

/// Points at which two expansions are compared.
#[derive(Debug, Clone, PartialEq)]
pub enum Probes {
    /// `k × k` uniform grid over the closed domain.
    Grid(usize),
    /// The midpoint of the domain only.
    Center,
    Points(Vec<(f64, f64)>),
}

impl Default for Probes {
    fn default() -> Self {
        Probes::Grid(11)
    }
}

impl Probes {
    pub fn points(&self, problem: &EllipticProblem) -> Vec<(f64, f64)> {
        let (ix, iy) = problem.domain;
        match self {
            Probes::Center => vec![(ix.midpoint(), iy.midpoint())],
            Probes::Points(p) => p.clone(),
            Probes::Grid(k) => {
                let k = (*k).max(2);
                let lin = |a: f64, b: f64, t: usize| {
                    if t == k - 1 {
                        b
                    } else {
                        a + (b - a) * t as f64 / (k - 1) as f64
                    }
                };
                (0..k)
                    .flat_map(|i| (0..k).map(move |j| (lin(ix.lower(), ix.upper(), i), lin(iy.lower(), iy.upper(), j))))
                    .collect()
            }
        }
    }
}

fn relative_difference(a: &TensorExpansion, b: &TensorExpansion, points: &[(f64, f64)]) -> Result<f64> {
    let mut diff = 0.0f64;
    let mut scale = 0.0f64;
    for &(x, y) in points {
        let va = a.eval(x, y)?;
        let vb = b.eval(x, y)?;
        diff = diff.max((va - vb).abs());
        scale = scale.max(vb.abs());
    }
    if diff == 0.0 {
        return Ok(0.0);
    }
    if scale == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(diff / scale)
}

fn solve_at(problem: &EllipticProblem, n: usize, distribution: Distribution) -> Result<TensorExpansion> {
    let grid = CollocationGrid::for_problem(problem, n, n, distribution).map_err(at_order(n))?;
    solve_detailed(problem, &grid).map(|s| s.expansion).map_err(at_order(n))
}

/// `max |u_lo - u_hi| / max |u_hi|` over the probe points, comparing solves
/// at two orders. Meant for problems without an exact solution.
pub fn self_consistency(
    problem: &EllipticProblem,
    order_lo: usize,
    order_hi: usize,
    probes: &Probes,
    distribution: Distribution,
) -> Result<f64> {
    let points = probes.points(problem);
    let lo = solve_at(problem, order_lo, distribution)?;
    if order_lo == order_hi {
        return relative_difference(&lo, &lo, &points);
    }
    let hi = solve_at(problem, order_hi, distribution)?;
    relative_difference(&lo, &hi, &points)
}

/// Sweep for problems without an exact solution: each order is compared to
/// the highest one with [`self_consistency`]'s measure.
pub fn consistency_sweep(
    problem: &EllipticProblem,
    orders: &[usize],
    distribution: Distribution,
    probes: &Probes,
) -> Result<ConvergenceTable> {
    check_orders(orders)?;
    let points = probes.points(problem);
    let solved = map_orders(orders, |n| {
        let grid = CollocationGrid::for_problem(problem, n, n, distribution).map_err(at_order(n))?;
        let start = Instant::now();
        let s = solve_detailed(problem, &grid).map_err(at_order(n))?;
        Ok((n, s.condition(), start.elapsed().as_secs_f64(), s.expansion))
    })?;
    let reference = &solved.last().expect("orders not empty").3;
    let rows = solved
        .iter()
        .map(|(n, condition, seconds, e)| {
            Ok(ConvergenceRow {
                order: *n,
                l2_rel_error: None,
                self_consistency: Some(relative_difference(e, reference, &points)?),
                condition: *condition,
                seconds: *seconds,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConvergenceTable { rows })
}
