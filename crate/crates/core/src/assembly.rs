//! Collocation grids and assembly of the dense collocation system.
//!
//! Unknowns are the expansion coefficients `β_kl`; each row enforces either
//! the interior operator, a Dirichlet condition, or (for clamped biharmonic
//! problems) a Neumann condition at one collocation point.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::basis::{BernsteinBasis, Interval};
use crate::error::{Error, Result};
use crate::linalg::{inverse_norm1_estimate, lu_factor, DenseMatrix};
use crate::problem::{BoundarySpec, Edge, EdgeData, EllipticProblem, Field, LinearOperator, Regime};
use crate::surface::TensorExpansion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distribution {
    #[default]
    Uniform,
    ChebyshevLobatto,
}

impl std::str::FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(Distribution::Uniform),
            "chebyshev" | "chebyshev-lobatto" => Ok(Distribution::ChebyshevLobatto),
            other => Err(Error::Config(format!(
                "unknown grid distribution `{other}` (expected uniform or chebyshev)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Interior,
    Edge(Edge),
    Corner,
}

/// Tensor grid of `(n + 1) × (m + 1)` collocation points including the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationGrid {
    domain: (Interval, Interval),
    nodes_x: Vec<f64>,
    nodes_y: Vec<f64>,
    distribution: Distribution,
}

fn nodes(n: usize, interval: Interval, distribution: Distribution) -> Vec<f64> {
    let (a, b) = (interval.lower(), interval.upper());
    let mut v: Vec<f64> = (0..=n)
        .map(|k| match distribution {
            Distribution::Uniform => a + (b - a) * (k as f64 / n as f64),
            Distribution::ChebyshevLobatto => {
                interval.midpoint() - 0.5 * interval.width() * (k as f64 * PI / n as f64).cos()
            }
        })
        .collect();
    v[0] = a;
    v[n] = b;
    v
}

impl CollocationGrid {
    /// Requires `n, m >= 2` so that the grid has interior nodes.
    pub fn new(n: usize, m: usize, domain: (Interval, Interval), distribution: Distribution) -> Result<Self> {
        if n < 2 || m < 2 {
            return Err(Error::Config(format!(
                "polynomial degrees must satisfy n >= 2 and m >= 2, got n = {n}, m = {m}"
            )));
        }
        Ok(Self {
            domain,
            nodes_x: nodes(n, domain.0, distribution),
            nodes_y: nodes(m, domain.1, distribution),
            distribution,
        })
    }

    /// Grid over the problem's domain, checking the degree floor of its regime.
    pub fn for_problem(problem: &EllipticProblem, n: usize, m: usize, distribution: Distribution) -> Result<Self> {
        check_degree(problem, n, m)?;
        Self::new(n, m, problem.domain, distribution)
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.nodes_x.len() - 1, self.nodes_y.len() - 1)
    }

    pub fn domain(&self) -> (Interval, Interval) {
        self.domain
    }

    pub fn distribution(&self) -> Distribution {
        self.distribution
    }

    pub fn nodes_x(&self) -> &[f64] {
        &self.nodes_x
    }

    pub fn nodes_y(&self) -> &[f64] {
        &self.nodes_y
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.nodes_x[i], self.nodes_y[j])
    }

    pub fn node_kind(&self, i: usize, j: usize) -> NodeKind {
        let (n, m) = self.degrees();
        let on_x = i == 0 || i == n;
        let on_y = j == 0 || j == m;
        match (on_x, on_y) {
            (true, true) => NodeKind::Corner,
            (false, false) => NodeKind::Interior,
            (true, false) => NodeKind::Edge(if i == 0 { Edge::Left } else { Edge::Right }),
            (false, true) => NodeKind::Edge(if j == 0 { Edge::Bottom } else { Edge::Top }),
        }
    }

    /// Edge whose data a boundary node takes. Corners are resolved in the
    /// order left, bottom, right, top.
    pub fn boundary_edge(&self, i: usize, j: usize) -> Option<Edge> {
        let (n, m) = self.degrees();
        if i == 0 {
            Some(Edge::Left)
        } else if j == 0 {
            Some(Edge::Bottom)
        } else if i == n {
            Some(Edge::Right)
        } else if j == m {
            Some(Edge::Top)
        } else {
            None
        }
    }

    /// `(interior, edge, corner)` node counts.
    pub fn counts(&self) -> (usize, usize, usize) {
        let (n, m) = self.degrees();
        let mut c = (0, 0, 0);
        for i in 0..=n {
            for j in 0..=m {
                match self.node_kind(i, j) {
                    NodeKind::Interior => c.0 += 1,
                    NodeKind::Edge(_) => c.1 += 1,
                    NodeKind::Corner => c.2 += 1,
                }
            }
        }
        c
    }

    fn bases(&self) -> (BernsteinBasis, BernsteinBasis) {
        let (n, m) = self.degrees();
        (
            BernsteinBasis::new(n, self.domain.0),
            BernsteinBasis::new(m, self.domain.1),
        )
    }
}

pub fn make_grid(
    n: usize,
    m: usize,
    domain: (Interval, Interval),
    distribution: Distribution,
) -> Result<CollocationGrid> {
    CollocationGrid::new(n, m, domain, distribution)
}

fn check_degree(problem: &EllipticProblem, n: usize, m: usize) -> Result<()> {
    let min = problem.min_degree();
    if n < min || m < min {
        let what = match problem.regime() {
            Regime::BiharmonicTypeI | Regime::BiharmonicTypeII => "biharmonic problems",
            _ => "this operator",
        };
        return Err(Error::Config(format!(
            "{what} require n >= {min} and m >= {min}, got n = {n}, m = {m}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexMode {
    Full,
    InteriorOnly,
}

/// Bijection between coefficient indices `(i, j)` and unknown positions.
/// Full: `(m+1) i + j`. Interior only: `(m-1)(i-1) + (j-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexMap {
    mode: IndexMode,
    n: usize,
    m: usize,
}

impl IndexMap {
    pub fn new(mode: IndexMode, n: usize, m: usize) -> Self {
        Self { mode, n, m }
    }

    pub fn mode(&self) -> IndexMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        match self.mode {
            IndexMode::Full => (self.n + 1) * (self.m + 1),
            IndexMode::InteriorOnly => (self.n - 1) * (self.m - 1),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> Option<usize> {
        match self.mode {
            IndexMode::Full => (i <= self.n && j <= self.m).then(|| (self.m + 1) * i + j),
            IndexMode::InteriorOnly => {
                (i >= 1 && i < self.n && j >= 1 && j < self.m).then(|| (self.m - 1) * (i - 1) + (j - 1))
            }
        }
    }

    pub fn node(&self, k: usize) -> Option<(usize, usize)> {
        if k >= self.len() {
            return None;
        }
        Some(match self.mode {
            IndexMode::Full => (k / (self.m + 1), k % (self.m + 1)),
            IndexMode::InteriorOnly => (k / (self.m - 1) + 1, k % (self.m - 1) + 1),
        })
    }

    /// Places a solution vector into a full `(n+1) × (m+1)` coefficient array,
    /// zero where no unknown exists.
    pub fn scatter(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: b.len(),
            });
        }
        let full = IndexMap::new(IndexMode::Full, self.n, self.m);
        let mut beta = vec![0.0; full.len()];
        for (k, v) in b.iter().enumerate() {
            let (i, j) = self.node(k).expect("index in range");
            beta[full.index(i, j).expect("node in range")] = *v;
        }
        Ok(beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// Interior operator `L[u] = f`.
    Operator,
    /// `u = g` at a boundary node.
    Dirichlet(Edge),
    /// `∂u/∂n = h` at the boundary point next to the row's interior node.
    Neumann(Edge),
}

/// Provenance of a system row: the collocation node it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowLabel {
    pub node: (usize, usize),
    pub kind: RowKind,
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub row_labels: Vec<RowLabel>,
}

impl LinearSystem {
    pub fn size(&self) -> usize {
        self.rhs.len()
    }

    pub fn count(&self, pred: impl Fn(RowKind) -> bool) -> usize {
        self.row_labels.iter().filter(|r| pred(r.kind)).count()
    }

    /// `‖A b - c‖∞`.
    pub fn residual_inf(&self, b: &[f64]) -> Result<f64> {
        let ab = self.matrix.mul_vec(b)?;
        Ok(ab.iter().zip(&self.rhs).map(|(l, r)| (l - r).abs()).fold(0.0, f64::max))
    }
}

/// `table[p][node][k] = D^p B_k(node)` at every grid node of one direction.
struct DerivativeTable(Vec<Vec<Vec<f64>>>);

impl DerivativeTable {
    fn new(basis: &BernsteinBasis, nodes: &[f64], max_order: usize) -> Result<Self> {
        (0..=max_order)
            .map(|p| nodes.iter().map(|&x| basis.derivative_all(p, x)).collect())
            .collect::<Result<_>>()
            .map(Self)
    }

    #[inline]
    fn get(&self, p: usize, node: usize) -> &[f64] {
        &self.0[p][node]
    }
}

/// One row before expansion into matrix entries: `Σ c D^p B_k(x_xi) D^q B_l(y_yj)`.
struct RowPlan {
    label: RowLabel,
    at: (usize, usize),
    terms: Vec<(f64, usize, usize)>,
    rhs: f64,
}

fn operator_terms(op: &LinearOperator, x: f64, y: f64) -> Vec<(f64, usize, usize)> {
    op.terms()
        .iter()
        .filter(|t| !t.coefficient.is_zero())
        .map(|t| (t.coefficient.eval(x, y), t.order.p, t.order.q))
        .collect()
}

/// Edge whose Neumann row replaces the operator row at an interior node of a
/// clamped problem. The four nodes diagonally next to the corners keep their
/// operator rows.
fn neumann_edge(i: usize, j: usize, n: usize, m: usize) -> Option<Edge> {
    let near_x = i == 1 || i == n - 1;
    let near_y = j == 1 || j == m - 1;
    if near_x && near_y {
        None
    } else if i == 1 {
        Some(Edge::Left)
    } else if i == n - 1 {
        Some(Edge::Right)
    } else if j == 1 {
        Some(Edge::Bottom)
    } else if j == m - 1 {
        Some(Edge::Top)
    } else {
        None
    }
}

fn plan_rows(problem: &EllipticProblem, grid: &CollocationGrid, map: &IndexMap) -> Vec<RowPlan> {
    let (n, m) = grid.degrees();
    let value = problem.boundary.value_data();
    let normal = match &problem.boundary {
        BoundarySpec::BiharmonicTypeII { normal, .. } => Some(normal),
        _ => None,
    };

    let mut plans = Vec::with_capacity(map.len());
    for row in 0..map.len() {
        let (i, j) = map.node(row).expect("row in range");
        let (x, y) = grid.point(i, j);
        let plan = match (grid.boundary_edge(i, j), normal.zip(neumann_edge(i, j, n, m))) {
            (Some(edge), _) => RowPlan {
                label: RowLabel {
                    node: (i, j),
                    kind: RowKind::Dirichlet(edge),
                },
                at: (i, j),
                terms: vec![(1.0, 0, 0)],
                rhs: value.edge(edge).eval(x, y),
            },
            (None, Some((h, edge))) => {
                let at = match edge {
                    Edge::Left => (0, j),
                    Edge::Right => (n, j),
                    Edge::Bottom => (i, 0),
                    Edge::Top => (i, m),
                };
                let (bx, by) = grid.point(at.0, at.1);
                let (nx, ny) = edge.outward_normal();
                let terms = if nx != 0.0 { vec![(nx, 1, 0)] } else { vec![(ny, 0, 1)] };
                RowPlan {
                    label: RowLabel {
                        node: (i, j),
                        kind: RowKind::Neumann(edge),
                    },
                    at,
                    terms,
                    rhs: h.edge(edge).eval(bx, by),
                }
            }
            (None, None) => RowPlan {
                label: RowLabel {
                    node: (i, j),
                    kind: RowKind::Operator,
                },
                at: (i, j),
                terms: operator_terms(&problem.operator, x, y),
                rhs: problem.source.eval(x, y),
            },
        };
        plans.push(plan);
    }
    plans
}

fn fill_row(row: &mut [f64], plan: &RowPlan, map: &IndexMap, tx: &DerivativeTable, ty: &DerivativeTable) {
    let (xi, yj) = plan.at;
    for (col, entry) in row.iter_mut().enumerate() {
        let (k, l) = map.node(col).expect("column in range");
        *entry = plan
            .terms
            .iter()
            .map(|&(c, p, q)| c * tx.get(p, xi)[k] * ty.get(q, yj)[l])
            .sum();
    }
}

/// Builds the collocation system for the homogeneous Dirichlet, non-homogeneous
/// Dirichlet and clamped (Type II) biharmonic regimes.
pub fn assemble(problem: &EllipticProblem, grid: &CollocationGrid) -> Result<(LinearSystem, IndexMap)> {
    problem.validate()?;
    if problem.regime() == Regime::BiharmonicTypeI {
        return Err(Error::Config(
            "Type I biharmonic problems are solved as two coupled Poisson problems; use solve_problem".into(),
        ));
    }
    if grid.domain() != problem.domain {
        return Err(Error::Config(
            "grid and problem are defined over different domains".into(),
        ));
    }
    let (n, m) = grid.degrees();
    check_degree(problem, n, m)?;

    let mode = match problem.regime() {
        Regime::HomogeneousDirichlet => IndexMode::InteriorOnly,
        _ => IndexMode::Full,
    };
    let map = IndexMap::new(mode, n, m);
    let (bx, by) = grid.bases();
    let max_order = problem.operator.max_directional_order().max(1);
    let tx = DerivativeTable::new(&bx, grid.nodes_x(), max_order)?;
    let ty = DerivativeTable::new(&by, grid.nodes_y(), max_order)?;

    let plans = plan_rows(problem, grid, &map);
    let size = map.len();
    let mut matrix = DenseMatrix::zeros(size, size);

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        matrix
            .data_mut()
            .par_chunks_mut(size)
            .zip(plans.par_iter())
            .for_each(|(row, plan)| fill_row(row, plan, &map, &tx, &ty));
    }
    #[cfg(not(feature = "parallel"))]
    for (row, plan) in matrix.data_mut().chunks_mut(size).zip(&plans) {
        fill_row(row, plan, &map, &tx, &ty);
    }

    let rhs = plans.iter().map(|p| p.rhs).collect();
    let row_labels = plans.iter().map(|p| p.label).collect();
    Ok((
        LinearSystem {
            matrix,
            rhs,
            row_labels,
        },
        map,
    ))
}

/// Diagnostics of one linear solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemStats {
    pub size: usize,
    /// `‖A b - c‖∞`.
    pub residual_inf: f64,
    /// `‖c‖∞`.
    pub rhs_inf: f64,
    /// 1-norm condition number estimate.
    pub condition: f64,
}

/// A solved expansion and the systems it came from (two for Type I problems).
#[derive(Debug, Clone)]
pub struct Solution {
    pub expansion: TensorExpansion,
    pub systems: Vec<SystemStats>,
}

impl Solution {
    pub fn condition(&self) -> f64 {
        self.systems.iter().map(|s| s.condition).fold(0.0, f64::max)
    }

    pub fn system_size(&self) -> usize {
        self.systems.iter().map(|s| s.size).max().unwrap_or(0)
    }
}

pub fn solve_problem(problem: &EllipticProblem, grid: &CollocationGrid) -> Result<TensorExpansion> {
    solve_detailed(problem, grid).map(|s| s.expansion)
}

/// Solves and keeps residual and conditioning diagnostics.
pub fn solve_detailed(problem: &EllipticProblem, grid: &CollocationGrid) -> Result<Solution> {
    match problem.regime() {
        Regime::BiharmonicTypeI => solve_type_one(problem, grid),
        _ => solve_direct(problem, grid),
    }
}

fn solve_direct(problem: &EllipticProblem, grid: &CollocationGrid) -> Result<Solution> {
    let (system, map) = assemble(problem, grid)?;
    let factors = lu_factor(&system.matrix)?;
    let b = factors.solve(&system.rhs)?;
    let stats = SystemStats {
        size: system.size(),
        residual_inf: system.residual_inf(&b)?,
        rhs_inf: system.rhs.iter().map(|v| v.abs()).fold(0.0, f64::max),
        condition: system.matrix.norm_1() * inverse_norm1_estimate(&factors)?,
    };
    let (bx, by) = grid.bases();
    let expansion = TensorExpansion::new(bx, by, map.scatter(&b)?)?;
    Ok(Solution {
        expansion,
        systems: vec![stats],
    })
}

fn dirichlet_boundary(data: EdgeData) -> BoundarySpec {
    if data.is_zero() {
        BoundarySpec::HomogeneousDirichlet
    } else {
        BoundarySpec::Dirichlet(data)
    }
}

/// `Δ²u = f` with `u` and `∂²u/∂n²` given: solve `Δv = f` with `v = ∂²u/∂n²`
/// on the boundary, then `Δu = v` with the `u` data. The second source is
/// the first expansion evaluated at the collocation points.
fn solve_type_one(problem: &EllipticProblem, grid: &CollocationGrid) -> Result<Solution> {
    problem.validate()?;
    let (n, m) = grid.degrees();
    check_degree(problem, n, m)?;
    let BoundarySpec::BiharmonicTypeI { value, second_normal } = &problem.boundary else {
        unreachable!("regime checked by caller")
    };

    let inner = EllipticProblem {
        name: format!("{}-inner", problem.name),
        domain: problem.domain,
        operator: LinearOperator::laplacian(),
        source: problem.source.clone(),
        boundary: dirichlet_boundary(second_normal.clone()),
        exact: None,
    };
    let first = solve_direct(&inner, grid)?;
    let v = Arc::new(first.expansion);

    let outer = EllipticProblem {
        name: format!("{}-outer", problem.name),
        domain: problem.domain,
        operator: LinearOperator::laplacian(),
        source: Field::function(move |x, y| v.eval(x, y).unwrap_or(f64::NAN)),
        boundary: dirichlet_boundary(value.clone()),
        exact: None,
    };
    let second = solve_direct(&outer, grid)?;
    Ok(Solution {
        expansion: second.expansion,
        systems: [first.systems, second.systems].concat(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{example, ExampleId};

    fn square(a: f64, b: f64) -> (Interval, Interval) {
        let i = Interval::new(a, b).unwrap();
        (i, i)
    }

    #[test]
    fn uniform_and_chebyshev_nodes() {
        let g = make_grid(2, 2, square(0.0, 1.0), Distribution::Uniform).unwrap();
        assert_eq!(g.nodes_x(), &[0.0, 0.5, 1.0]);
        let g = make_grid(2, 2, square(-1.0, 1.0), Distribution::ChebyshevLobatto).unwrap();
        assert_eq!(g.nodes_x()[0], -1.0);
        assert!(g.nodes_x()[1].abs() < 1e-15);
        assert_eq!(g.nodes_x()[2], 1.0);
        let g = make_grid(9, 7, square(-2.0, 3.0), Distribution::ChebyshevLobatto).unwrap();
        assert!(g.nodes_x().windows(2).all(|w| w[0] < w[1]));
        assert!(g.nodes_y().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn node_counts() {
        let g = make_grid(3, 3, square(0.0, 1.0), Distribution::Uniform).unwrap();
        assert_eq!(g.counts(), (4, 8, 4));
        let g = make_grid(5, 8, square(0.0, 1.0), Distribution::Uniform).unwrap();
        assert_eq!(g.counts(), (4 * 7, 2 * 4 + 2 * 7, 4));
    }

    #[test]
    fn degree_guards() {
        assert!(make_grid(1, 4, square(0.0, 1.0), Distribution::Uniform).is_err());
        let p = example(ExampleId::ClampedPlateExact);
        let err = CollocationGrid::for_problem(&p, 3, 3, Distribution::Uniform).unwrap_err();
        assert!(err.to_string().contains("n >= 4"), "{err}");
        let g = make_grid(3, 3, p.domain, Distribution::Uniform).unwrap();
        assert!(matches!(assemble(&p, &g), Err(Error::Config(_))));
    }

    #[test]
    fn index_maps_are_bijections() {
        for mode in [IndexMode::Full, IndexMode::InteriorOnly] {
            let map = IndexMap::new(mode, 5, 3);
            for k in 0..map.len() {
                let (i, j) = map.node(k).unwrap();
                assert_eq!(map.index(i, j), Some(k));
            }
            assert_eq!(map.node(map.len()), None);
        }
        assert_eq!(IndexMap::new(IndexMode::Full, 5, 3).len(), 24);
        assert_eq!(IndexMap::new(IndexMode::InteriorOnly, 5, 3).len(), 8);
        assert_eq!(IndexMap::new(IndexMode::InteriorOnly, 5, 3).index(0, 1), None);
        assert_eq!(IndexMap::new(IndexMode::Full, 5, 3).index(2, 1), Some(9));
    }

    #[test]
    fn system_sizes() {
        let p = example(ExampleId::Poisson);
        let g = CollocationGrid::for_problem(&p, 4, 4, Distribution::Uniform).unwrap();
        let (s, map) = assemble(&p, &g).unwrap();
        assert_eq!(s.size(), 9);
        assert_eq!(map.mode(), IndexMode::InteriorOnly);

        let p = example(ExampleId::PoissonNonHomogeneous);
        let g = CollocationGrid::for_problem(&p, 4, 4, Distribution::Uniform).unwrap();
        let (s, _) = assemble(&p, &g).unwrap();
        assert_eq!(s.size(), 25);
        assert_eq!(s.count(|k| matches!(k, RowKind::Dirichlet(_))), 16);
        assert_eq!(s.count(|k| k == RowKind::Operator), 9);
    }

    #[test]
    fn type_one_not_assembled_directly() {
        let p = example(ExampleId::SimplySupportedPlate);
        let g = CollocationGrid::for_problem(&p, 6, 6, Distribution::Uniform).unwrap();
        assert!(matches!(assemble(&p, &g), Err(Error::Config(_))));
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let mut p = example(ExampleId::Poisson);
        p.source = Field::Zero;
        let g = CollocationGrid::for_problem(&p, 8, 8, Distribution::Uniform).unwrap();
        let e = solve_problem(&p, &g).unwrap();
        assert!(e.coefficients().iter().all(|c| c.abs() <= 1e-10));
    }

    #[test]
    fn mismatched_domain_rejected() {
        let p = example(ExampleId::Poisson);
        let g = make_grid(4, 4, square(0.0, 1.0), Distribution::Uniform).unwrap();
        assert!(matches!(assemble(&p, &g), Err(Error::Config(_))));
    }
}
