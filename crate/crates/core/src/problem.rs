//! Linear elliptic boundary value problems on rectangles and the built-in
//! example catalog.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::basis::Interval;
use crate::error::{Error, Result};
use crate::surface::DerivativeOrder;

pub type ScalarFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A scalar field on the domain: operator coefficients, sources and boundary data.
#[derive(Clone)]
pub enum Field {
    Zero,
    Constant(f64),
    Function(ScalarFn),
}

impl Field {
    pub fn function<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Field::Function(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Field::Zero => 0.0,
            Field::Constant(c) => *c,
            Field::Function(f) => f(x, y),
        }
    }

    /// True only for fields known to vanish identically.
    pub fn is_zero(&self) -> bool {
        match self {
            Field::Zero => true,
            Field::Constant(c) => *c == 0.0,
            Field::Function(_) => false,
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Zero => f.write_str("Zero"),
            Field::Constant(c) => write!(f, "Constant({c})"),
            Field::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl From<f64> for Field {
    fn from(c: f64) -> Self {
        if c == 0.0 {
            Field::Zero
        } else {
            Field::Constant(c)
        }
    }
}

/// One term `c(x, y) ∂^(p+q) u / ∂x^p ∂y^q` of a linear operator.
#[derive(Debug, Clone)]
pub struct OperatorTerm {
    pub order: DerivativeOrder,
    pub coefficient: Field,
}

impl OperatorTerm {
    pub fn new(p: usize, q: usize, coefficient: impl Into<Field>) -> Self {
        Self {
            order: DerivativeOrder::new(p, q),
            coefficient: coefficient.into(),
        }
    }
}

/// `L[u] = Σ_t c_t(x, y) ∂^(p_t+q_t) u / ∂x^p_t ∂y^q_t`.
#[derive(Debug, Clone)]
pub struct LinearOperator {
    terms: Vec<OperatorTerm>,
}

impl LinearOperator {
    pub fn new(terms: Vec<OperatorTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Config("operator needs at least one term".into()));
        }
        if terms.iter().all(|t| t.order.total() == 0) {
            return Err(Error::Config(
                "operator needs at least one derivative term (p + q >= 1)".into(),
            ));
        }
        Ok(Self { terms })
    }

    pub fn laplacian() -> Self {
        Self {
            terms: vec![OperatorTerm::new(2, 0, 1.0), OperatorTerm::new(0, 2, 1.0)],
        }
    }

    /// `Δ + λ`.
    pub fn helmholtz(lambda: f64) -> Self {
        let mut op = Self::laplacian();
        op.terms.push(OperatorTerm::new(0, 0, lambda));
        op
    }

    /// `Δ² = ∂⁴/∂x⁴ + 2 ∂⁴/∂x²∂y² + ∂⁴/∂y⁴`.
    pub fn biharmonic() -> Self {
        Self {
            terms: vec![
                OperatorTerm::new(4, 0, 1.0),
                OperatorTerm::new(2, 2, 2.0),
                OperatorTerm::new(0, 4, 1.0),
            ],
        }
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    /// Highest total derivative order among the terms with a nonzero coefficient.
    pub fn order(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| !t.coefficient.is_zero())
            .map(|t| t.order.total())
            .max()
            .unwrap_or(0)
    }

    /// Largest single-direction derivative order, `max(p, q)` over all terms.
    pub fn max_directional_order(&self) -> usize {
        self.terms.iter().map(|t| t.order.p.max(t.order.q)).max().unwrap_or(0)
    }

    /// Structural check for exactly `Δ²` with constant coefficients.
    pub fn is_biharmonic(&self) -> bool {
        let mut acc = [0.0f64; 3];
        for t in &self.terms {
            let c = match t.coefficient {
                Field::Zero => 0.0,
                Field::Constant(c) => c,
                Field::Function(_) => return false,
            };
            match (t.order.p, t.order.q) {
                (4, 0) => acc[0] += c,
                (2, 2) => acc[1] += c,
                (0, 4) => acc[2] += c,
                _ if c == 0.0 => {}
                _ => return false,
            }
        }
        acc == [1.0, 2.0, 1.0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    Left,
    Right,
    Bottom,
    Top,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Left, Edge::Right, Edge::Bottom, Edge::Top];

    /// Outward normal as `(nx, ny)`.
    pub fn outward_normal(self) -> (f64, f64) {
        match self {
            Edge::Left => (-1.0, 0.0),
            Edge::Right => (1.0, 0.0),
            Edge::Bottom => (0.0, -1.0),
            Edge::Top => (0.0, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Edge::Left => "left",
            Edge::Right => "right",
            Edge::Bottom => "bottom",
            Edge::Top => "top",
        }
    }
}

/// One data function per edge of the rectangle.
#[derive(Debug, Clone)]
pub struct EdgeData {
    pub left: Field,
    pub right: Field,
    pub bottom: Field,
    pub top: Field,
}

impl EdgeData {
    pub fn zero() -> Self {
        Self::uniform(Field::Zero)
    }

    pub fn uniform(field: Field) -> Self {
        Self {
            left: field.clone(),
            right: field.clone(),
            bottom: field.clone(),
            top: field,
        }
    }

    pub fn edge(&self, edge: Edge) -> &Field {
        match edge {
            Edge::Left => &self.left,
            Edge::Right => &self.right,
            Edge::Bottom => &self.bottom,
            Edge::Top => &self.top,
        }
    }

    pub fn edge_mut(&mut self, edge: Edge) -> &mut Field {
        match edge {
            Edge::Left => &mut self.left,
            Edge::Right => &mut self.right,
            Edge::Bottom => &mut self.bottom,
            Edge::Top => &mut self.top,
        }
    }

    pub fn is_zero(&self) -> bool {
        Edge::ALL.iter().all(|&e| self.edge(e).is_zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    HomogeneousDirichlet,
    NonHomogeneous,
    BiharmonicTypeI,
    BiharmonicTypeII,
}

/// Boundary conditions. Edge kinds are implied by the regime: the value
/// conditions are Dirichlet, the secondary biharmonic data is a normal
/// derivative (Type II, `∂u/∂n`) or second normal derivative (Type I, `∂²u/∂n²`).
#[derive(Debug, Clone)]
pub enum BoundarySpec {
    HomogeneousDirichlet,
    Dirichlet(EdgeData),
    BiharmonicTypeI { value: EdgeData, second_normal: EdgeData },
    BiharmonicTypeII { value: EdgeData, normal: EdgeData },
}

impl BoundarySpec {
    pub fn regime(&self) -> Regime {
        match self {
            BoundarySpec::HomogeneousDirichlet => Regime::HomogeneousDirichlet,
            BoundarySpec::Dirichlet(_) => Regime::NonHomogeneous,
            BoundarySpec::BiharmonicTypeI { .. } => Regime::BiharmonicTypeI,
            BoundarySpec::BiharmonicTypeII { .. } => Regime::BiharmonicTypeII,
        }
    }

    /// Dirichlet data for `u`.
    pub fn value_data(&self) -> EdgeData {
        match self {
            BoundarySpec::HomogeneousDirichlet => EdgeData::zero(),
            BoundarySpec::Dirichlet(d)
            | BoundarySpec::BiharmonicTypeI { value: d, .. }
            | BoundarySpec::BiharmonicTypeII { value: d, .. } => d.clone(),
        }
    }
}

/// `L[u] = f` in the rectangle, boundary conditions on its edges.
#[derive(Debug, Clone)]
pub struct EllipticProblem {
    pub name: String,
    pub domain: (Interval, Interval),
    pub operator: LinearOperator,
    pub source: Field,
    pub boundary: BoundarySpec,
    pub exact: Option<Field>,
}

impl EllipticProblem {
    pub fn regime(&self) -> Regime {
        self.boundary.regime()
    }

    /// Smallest polynomial degree per direction the regime supports.
    pub fn min_degree(&self) -> usize {
        match self.regime() {
            Regime::BiharmonicTypeI | Regime::BiharmonicTypeII => 4,
            _ => self.operator.max_directional_order().max(2),
        }
    }

    /// Checks that the boundary regime fits the operator.
    pub fn validate(&self) -> Result<()> {
        let order = self.operator.order();
        match self.regime() {
            Regime::HomogeneousDirichlet | Regime::NonHomogeneous if order > 2 => Err(Error::Config(format!(
                "Dirichlet-only boundary conditions need an operator of order <= 2, got order {order}"
            ))),
            Regime::BiharmonicTypeI if !self.operator.is_biharmonic() => Err(Error::Config(
                "Type I biharmonic conditions require the operator to be exactly the bilaplacian".into(),
            )),
            Regime::BiharmonicTypeII if order != 4 => Err(Error::Config(format!(
                "Type II biharmonic conditions require a fourth-order operator, got order {order}"
            ))),
            _ => Ok(()),
        }
    }
}

/// Identifiers of the built-in examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleId {
    Poisson,
    PoissonNonHomogeneous,
    Helmholtz,
    SimplySupportedPlate,
    ClampedPlateExact,
    ClampedPlateUniformLoad,
}

impl ExampleId {
    pub const ALL: [ExampleId; 6] = [
        ExampleId::Poisson,
        ExampleId::PoissonNonHomogeneous,
        ExampleId::Helmholtz,
        ExampleId::SimplySupportedPlate,
        ExampleId::ClampedPlateExact,
        ExampleId::ClampedPlateUniformLoad,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::Poisson => "1",
            ExampleId::PoissonNonHomogeneous => "2",
            ExampleId::Helmholtz => "3",
            ExampleId::SimplySupportedPlate => "4",
            ExampleId::ClampedPlateExact => "5a",
            ExampleId::ClampedPlateUniformLoad => "5b",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// Load amplitude of the uniformly loaded clamped plate.
pub const UNIFORM_LOAD: f64 = 1000.0;

/// Scale of the clamped-plate polynomial solution `2350 x⁴(x-a)² y⁴(y-b)²`.
const CLAMPED_SCALE: f64 = 2350.0;

pub fn catalog_example(id: &str) -> Result<EllipticProblem> {
    Ok(example(id.parse()?))
}

pub fn example(id: ExampleId) -> EllipticProblem {
    let unit = Interval::new(0.0, 1.0).expect("unit interval");
    match id {
        ExampleId::Poisson => {
            let sym = Interval::new(-1.0, 1.0).expect("[-1, 1]");
            EllipticProblem {
                name: "poisson-homogeneous".into(),
                domain: (sym, sym),
                operator: LinearOperator::laplacian(),
                source: Field::function(|x, y| -2.0 * PI * PI * (PI * x).sin() * (PI * y).sin()),
                boundary: BoundarySpec::HomogeneousDirichlet,
                exact: Some(Field::function(|x, y| (PI * x).sin() * (PI * y).sin())),
            }
        }
        ExampleId::PoissonNonHomogeneous => {
            let exact = |x: f64, y: f64| y * (1.0 - y) * x.powi(3);
            EllipticProblem {
                name: "poisson-dirichlet".into(),
                domain: (unit, unit),
                operator: LinearOperator::laplacian(),
                source: Field::function(|x, y| 6.0 * x * y * (1.0 - y) - 2.0 * x.powi(3)),
                boundary: BoundarySpec::Dirichlet(EdgeData {
                    left: Field::Zero,
                    right: Field::function(|_, y| y * (1.0 - y)),
                    bottom: Field::Zero,
                    top: Field::Zero,
                }),
                exact: Some(Field::function(exact)),
            }
        }
        ExampleId::Helmholtz => {
            let box_ = Interval::new(-PI, PI).expect("[-pi, pi]");
            let exact = Field::function(|x, y| x.sin() + y.sin() + x);
            EllipticProblem {
                name: "helmholtz".into(),
                domain: (box_, box_),
                operator: LinearOperator::helmholtz(1.0),
                source: Field::function(|x, _| x),
                boundary: BoundarySpec::Dirichlet(EdgeData::uniform(exact.clone())),
                exact: Some(exact),
            }
        }
        ExampleId::SimplySupportedPlate => {
            // Half-wave numbers (m, n) and plate extents (a, b).
            let (mw, nw, a, b): (f64, f64, f64, f64) = (1.0, 1.0, 1.0, 1.0);
            let amp = PI.powi(4) * (mw * mw / (a * a) + nw * nw / (b * b)).powi(2);
            let shape = move |x: f64, y: f64| (mw * PI * x / a).sin() * (nw * PI * y / b).sin();
            EllipticProblem {
                name: "plate-simply-supported".into(),
                domain: (
                    Interval::new(0.0, a).expect("[0, a]"),
                    Interval::new(0.0, b).expect("[0, b]"),
                ),
                operator: LinearOperator::biharmonic(),
                source: Field::function(move |x, y| amp * shape(x, y)),
                boundary: BoundarySpec::BiharmonicTypeI {
                    value: EdgeData::zero(),
                    second_normal: EdgeData::zero(),
                },
                exact: Some(Field::function(shape)),
            }
        }
        ExampleId::ClampedPlateExact => {
            let (a, b): (f64, f64) = (1.0, 1.0);
            EllipticProblem {
                name: "plate-clamped-polynomial".into(),
                domain: (
                    Interval::new(0.0, a).expect("[0, a]"),
                    Interval::new(0.0, b).expect("[0, b]"),
                ),
                operator: LinearOperator::biharmonic(),
                source: Field::function(move |x, y| clamped_polynomial_load(a, b, x, y)),
                boundary: BoundarySpec::BiharmonicTypeII {
                    value: EdgeData::zero(),
                    normal: EdgeData::zero(),
                },
                exact: Some(Field::function(move |x, y| {
                    CLAMPED_SCALE * x.powi(4) * (x - a).powi(2) * y.powi(4) * (y - b).powi(2)
                })),
            }
        }
        ExampleId::ClampedPlateUniformLoad => EllipticProblem {
            name: "plate-clamped-uniform-load".into(),
            domain: (unit, unit),
            operator: LinearOperator::biharmonic(),
            source: Field::Constant(UNIFORM_LOAD),
            boundary: BoundarySpec::BiharmonicTypeII {
                value: EdgeData::zero(),
                normal: EdgeData::zero(),
            },
            exact: None,
        },
    }
}

/// Bilaplacian of `2350 x⁴(x-a)² y⁴(y-b)²`.
fn clamped_polynomial_load(a: f64, b: f64, x: f64, y: f64) -> f64 {
    56400.0 * (a * a - 10.0 * a * x + 15.0 * x * x) * (b - y).powi(2) * y.powi(4)
        + 18800.0
            * x
            * x
            * (6.0 * a * a - 20.0 * a * x + 15.0 * x * x)
            * y
            * y
            * (6.0 * b * b - 20.0 * b * y + 15.0 * y * y)
        + 56400.0 * (a - x).powi(2) * x.powi(4) * (b * b - 10.0 * b * y + 15.0 * y * y)
}

/// Worst boundary mismatch of the exact solution against the prescribed data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConsistency {
    /// `max |u_exact - g|` over all edge samples.
    pub value: f64,
    /// Same for the secondary biharmonic data (`∂u/∂n` or `∂²u/∂n²`), when present.
    pub secondary: Option<f64>,
    pub samples_per_edge: usize,
}

impl BoundaryConsistency {
    pub fn max(&self) -> f64 {
        self.value.max(self.secondary.unwrap_or(0.0))
    }
}

/// Samples each edge at `n_samples` points and compares the exact solution
/// (and its normal derivatives, by fourth-order central differences) against the boundary data.
pub fn boundary_data_consistency(problem: &EllipticProblem, n_samples: usize) -> Result<BoundaryConsistency> {
    let exact = problem.exact.as_ref().ok_or(Error::NoExactSolution)?;
    let n_samples = n_samples.max(2);
    let (ix, iy) = problem.domain;
    let value_data = problem.boundary.value_data();

    let edge_points = |edge: Edge| -> Vec<(f64, f64)> {
        (0..n_samples)
            .map(|k| {
                let t = k as f64 / (n_samples - 1) as f64;
                let x = ix.lower() + t * ix.width();
                let y = iy.lower() + t * iy.width();
                match edge {
                    Edge::Left => (ix.lower(), y),
                    Edge::Right => (ix.upper(), y),
                    Edge::Bottom => (x, iy.lower()),
                    Edge::Top => (x, iy.upper()),
                }
            })
            .collect()
    };

    let mut value_dev = 0.0f64;
    for edge in Edge::ALL {
        let g = value_data.edge(edge);
        for (x, y) in edge_points(edge) {
            value_dev = value_dev.max((exact.eval(x, y) - g.eval(x, y)).abs());
        }
    }

    let secondary = match &problem.boundary {
        BoundarySpec::BiharmonicTypeII { normal, .. } => {
            let h = 1e-4 * ix.width().min(iy.width());
            let mut dev = 0.0f64;
            for edge in Edge::ALL {
                let (nx, ny) = edge.outward_normal();
                for (x, y) in edge_points(edge) {
                    let u = |s: f64| exact.eval(x + nx * s * h, y + ny * s * h);
                    let d = (-u(2.0) + 8.0 * u(1.0) - 8.0 * u(-1.0) + u(-2.0)) / (12.0 * h);
                    dev = dev.max((d - normal.edge(edge).eval(x, y)).abs());
                }
            }
            Some(dev)
        }
        BoundarySpec::BiharmonicTypeI { second_normal, .. } => {
            let h = 1e-3 * ix.width().min(iy.width());
            let mut dev = 0.0f64;
            for edge in Edge::ALL {
                let (nx, ny) = edge.outward_normal();
                for (x, y) in edge_points(edge) {
                    let u = |s: f64| exact.eval(x + nx * s * h, y + ny * s * h);
                    let d = (-u(2.0) + 16.0 * u(1.0) - 30.0 * u(0.0) + 16.0 * u(-1.0) - u(-2.0)) / (12.0 * h * h);
                    dev = dev.max((d - second_normal.edge(edge).eval(x, y)).abs());
                }
            }
            Some(dev)
        }
        _ => None,
    };

    Ok(BoundaryConsistency {
        value: value_dev,
        secondary,
        samples_per_edge: n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_id() {
        for id in ExampleId::ALL {
            assert_eq!(id.as_str().parse::<ExampleId>().unwrap(), id);
        }
        assert_eq!("5A".parse::<ExampleId>().unwrap(), ExampleId::ClampedPlateExact);
        let err = catalog_example("6").unwrap_err();
        assert!(err.to_string().contains("1, 2, 3, 4, 5a, 5b"), "{err}");
    }

    #[test]
    fn operator_validation() {
        assert!(LinearOperator::new(vec![]).is_err());
        assert!(LinearOperator::new(vec![OperatorTerm::new(0, 0, 3.0)]).is_err());
        assert_eq!(LinearOperator::laplacian().order(), 2);
        assert_eq!(LinearOperator::helmholtz(1.0).order(), 2);
        assert_eq!(LinearOperator::biharmonic().order(), 4);
        assert!(LinearOperator::biharmonic().is_biharmonic());
        assert!(!LinearOperator::laplacian().is_biharmonic());
    }

    #[test]
    fn example1_vanishes_on_edges() {
        let p = example(ExampleId::Poisson);
        let u = p.exact.as_ref().unwrap();
        for k in 0..=20 {
            let t = -1.0 + k as f64 / 10.0;
            for (x, y) in [(-1.0, t), (1.0, t), (t, -1.0), (t, 1.0)] {
                assert!(u.eval(x, y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn example3_source_at_pi() {
        let p = example(ExampleId::Helmholtz);
        assert_eq!(p.source.eval(PI, 0.0), PI);
    }

    #[test]
    fn example2_right_edge_data() {
        let p = example(ExampleId::PoissonNonHomogeneous);
        let BoundarySpec::Dirichlet(g) = &p.boundary else {
            panic!("expected Dirichlet data")
        };
        let u = p.exact.as_ref().unwrap();
        for k in 0..=10 {
            let y = k as f64 / 10.0;
            assert_eq!(g.right.eval(1.0, y), y * (1.0 - y));
            assert!((g.right.eval(1.0, y) - u.eval(1.0, y)).abs() < 1e-15);
        }
    }

    #[test]
    fn boundary_consistency_of_catalog() {
        let r = boundary_data_consistency(&example(ExampleId::Poisson), 50).unwrap();
        assert!(r.max() <= 1e-12);
        let r = boundary_data_consistency(&example(ExampleId::PoissonNonHomogeneous), 50).unwrap();
        assert!(r.max() <= 1e-12);
        let r = boundary_data_consistency(&example(ExampleId::Helmholtz), 50).unwrap();
        assert!(r.max() <= 1e-12);
        let r = boundary_data_consistency(&example(ExampleId::ClampedPlateExact), 50).unwrap();
        assert!(r.value <= 1e-10 && r.secondary.unwrap() <= 1e-10, "{r:?}");
        let r = boundary_data_consistency(&example(ExampleId::SimplySupportedPlate), 50).unwrap();
        assert!(r.value <= 1e-12 && r.secondary.unwrap() <= 1e-6, "{r:?}");
        assert_eq!(
            boundary_data_consistency(&example(ExampleId::ClampedPlateUniformLoad), 10).unwrap_err(),
            Error::NoExactSolution
        );
    }

    #[test]
    fn regime_operator_mismatch() {
        let mut p = example(ExampleId::ClampedPlateExact);
        p.operator = LinearOperator::laplacian();
        assert!(matches!(p.validate(), Err(Error::Config(_))));
        let mut p = example(ExampleId::Poisson);
        p.operator = LinearOperator::biharmonic();
        assert!(matches!(p.validate(), Err(Error::Config(_))));
        for id in ExampleId::ALL {
            example(id).validate().unwrap();
        }
    }
}
