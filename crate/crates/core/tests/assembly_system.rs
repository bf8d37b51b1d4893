use std::collections::HashSet;

use approx::assert_relative_eq;
use bernstein_collocation::analysis::SolveReport;
use bernstein_collocation::problem_file;
use bernstein_collocation::{
    assemble, example, make_grid, solve_detailed, solve_problem, BoundarySpec, CollocationGrid, Distribution, EdgeData,
    Error, ExampleId, Field, IndexMap, IndexMode, Interval, LinearOperator, NodeKind, OperatorTerm, RowKind,
};

fn grid(id: ExampleId, n: usize) -> CollocationGrid {
    CollocationGrid::for_problem(&example(id), n, n, Distribution::Uniform).unwrap()
}

#[test]
fn node_distributions() {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let sym = Interval::new(-1.0, 1.0).unwrap();
    let g = make_grid(2, 2, (unit, unit), Distribution::Uniform).unwrap();
    assert_eq!(g.nodes_x(), &[0.0, 0.5, 1.0]);
    let g = make_grid(2, 3, (sym, sym), Distribution::ChebyshevLobatto).unwrap();
    assert_eq!(g.nodes_x()[0], -1.0);
    assert!(g.nodes_x()[1].abs() < 1e-15);
    assert_eq!(g.nodes_x()[2], 1.0);
    for n in 2..30 {
        let g = make_grid(n, n, (sym, unit), Distribution::ChebyshevLobatto).unwrap();
        assert!(g.nodes_x().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*g.nodes_y().last().unwrap(), 1.0);
    }
}

#[test]
fn node_classification_counts() {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let g = make_grid(3, 3, (unit, unit), Distribution::Uniform).unwrap();
    assert_eq!(g.counts(), (4, 8, 4));
    let g = make_grid(5, 8, (unit, unit), Distribution::Uniform).unwrap();
    let mut tally = [0usize; 3];
    for i in 0..=5 {
        for j in 0..=8 {
            match g.node_kind(i, j) {
                NodeKind::Interior => tally[0] += 1,
                NodeKind::Edge(_) => tally[1] += 1,
                NodeKind::Corner => tally[2] += 1,
            }
        }
    }
    assert_eq!(tally, [4 * 7, 2 * 4 + 2 * 7, 4]);
}

#[test]
fn degree_floor_is_enforced() {
    let plate = example(ExampleId::ClampedPlateExact);
    let err = CollocationGrid::for_problem(&plate, 3, 3, Distribution::Uniform).unwrap_err();
    assert!(err.to_string().contains(">= 4"), "{err}");
    let unit = Interval::new(0.0, 1.0).unwrap();
    assert!(make_grid(1, 4, (unit, unit), Distribution::Uniform).is_err());
}

#[test]
fn index_maps_are_bijections() {
    for mode in [IndexMode::Full, IndexMode::InteriorOnly] {
        let map = IndexMap::new(mode, 6, 4);
        let mut seen = HashSet::new();
        for k in 0..map.len() {
            let (i, j) = map.node(k).unwrap();
            assert_eq!(map.index(i, j), Some(k));
            assert!(seen.insert((i, j)));
        }
        assert!(map.node(map.len()).is_none());
    }
    assert_eq!(IndexMap::new(IndexMode::Full, 6, 4).len(), 35);
    assert_eq!(IndexMap::new(IndexMode::InteriorOnly, 6, 4).len(), 15);
    assert_eq!(IndexMap::new(IndexMode::Full, 6, 4).index(2, 3), Some(13));
    assert_eq!(IndexMap::new(IndexMode::InteriorOnly, 6, 4).index(2, 3), Some(5));
    assert_eq!(IndexMap::new(IndexMode::InteriorOnly, 6, 4).index(0, 3), None);
}

#[test]
fn row_accounting() {
    let (sys, map) = assemble(&example(ExampleId::Poisson), &grid(ExampleId::Poisson, 10)).unwrap();
    assert_eq!(map.mode(), IndexMode::InteriorOnly);
    assert_eq!(sys.size(), 81);
    assert_eq!(sys.count(|k| k == RowKind::Operator), 81);

    let n = 9;
    let (sys, map) = assemble(&example(ExampleId::Helmholtz), &grid(ExampleId::Helmholtz, n)).unwrap();
    assert_eq!(map.mode(), IndexMode::Full);
    assert_eq!(sys.size(), (n + 1) * (n + 1));
    assert_eq!(sys.count(|k| matches!(k, RowKind::Dirichlet(_))), 2 * (n + n));
    assert_eq!(sys.count(|k| k == RowKind::Operator), (n - 1) * (n - 1));
    let nodes: HashSet<_> = sys.row_labels.iter().map(|r| r.node).collect();
    assert_eq!(nodes.len(), sys.size());

    let (sys, _) = assemble(
        &example(ExampleId::ClampedPlateExact),
        &grid(ExampleId::ClampedPlateExact, 6),
    )
    .unwrap();
    assert_eq!(sys.size(), 49);
    assert_eq!(sys.count(|k| matches!(k, RowKind::Dirichlet(_))), 24);
    assert_eq!(sys.count(|k| matches!(k, RowKind::Neumann(_))), 12);
    assert_eq!(sys.count(|k| k == RowKind::Operator), 13);
}

#[test]
fn type_one_problems_are_not_assembled_directly() {
    let p = example(ExampleId::SimplySupportedPlate);
    assert!(matches!(
        assemble(&p, &grid(ExampleId::SimplySupportedPlate, 6)),
        Err(Error::Config(_))
    ));
    let s = solve_detailed(&p, &grid(ExampleId::SimplySupportedPlate, 6)).unwrap();
    assert_eq!(s.systems.len(), 2);
}

#[test]
fn every_example_solves_with_small_residual() {
    for id in ExampleId::ALL {
        for dist in [Distribution::Uniform, Distribution::ChebyshevLobatto] {
            let p = example(id);
            let g = CollocationGrid::for_problem(&p, 10, 10, dist).unwrap();
            let s = solve_detailed(&p, &g).unwrap();
            for sys in &s.systems {
                assert!(sys.residual_inf <= 1e-9 * (1.0 + sys.rhs_inf), "{id} {dist:?}: {sys:?}");
                assert!(sys.condition.is_finite() && sys.condition >= 1.0);
            }
        }
    }
}

#[test]
fn polynomial_solutions_are_reproduced() {
    let r = SolveReport::compute(
        &example(ExampleId::PoissonNonHomogeneous),
        &grid(ExampleId::PoissonNonHomogeneous, 12),
    )
    .unwrap();
    assert!(r.l2_rel_error.unwrap() <= 1e-11, "{:?}", r.l2_rel_error);
    let r = SolveReport::compute(
        &example(ExampleId::ClampedPlateExact),
        &grid(ExampleId::ClampedPlateExact, 8),
    )
    .unwrap();
    assert!(r.l2_rel_error.unwrap() <= 1e-11, "{:?}", r.l2_rel_error);
}

#[test]
fn elimination_matches_full_assembly() {
    let reduced = example(ExampleId::Poisson);
    let mut full = reduced.clone();
    full.boundary = BoundarySpec::Dirichlet(EdgeData::zero());
    for n in [6, 10, 13] {
        let g = grid(ExampleId::Poisson, n);
        let a = solve_problem(&reduced, &g).unwrap();
        let b = solve_problem(&full, &g).unwrap();
        for k in 0..=10 {
            for l in 0..=10 {
                let (x, y) = (-1.0 + 0.2 * k as f64, -1.0 + 0.2 * l as f64);
                assert!((a.eval(x, y).unwrap() - b.eval(x, y).unwrap()).abs() <= 1e-8);
            }
        }
    }
}

#[test]
fn negated_equation_gives_same_solution() {
    let p = example(ExampleId::PoissonNonHomogeneous);
    let mut q = p.clone();
    let terms = p
        .operator
        .terms()
        .iter()
        .map(|t| {
            let c = t.coefficient.clone();
            OperatorTerm::new(t.order.p, t.order.q, Field::function(move |x, y| -c.eval(x, y)))
        })
        .collect();
    q.operator = LinearOperator::new(terms).unwrap();
    let f = p.source.clone();
    q.source = Field::function(move |x, y| -f.eval(x, y));
    let g = grid(ExampleId::PoissonNonHomogeneous, 8);
    let a = solve_problem(&p, &g).unwrap();
    let b = solve_problem(&q, &g).unwrap();
    for (ca, cb) in a.coefficients().iter().zip(b.coefficients()) {
        assert_relative_eq!(ca, cb, epsilon = 1e-12);
    }
}

#[test]
fn problem_file_matches_catalog() {
    let text = "\
name = poisson-2
domain = 0, 1, 0, 1
operator = laplacian
source = 6*x*y*(1-y) - 2*x^3
exact = y*(1-y)*x^3
boundary = dirichlet
value = 0
value.right = y*(1-y)
";
    let from_file = problem_file::parse(text).unwrap();
    let g = grid(ExampleId::PoissonNonHomogeneous, 8);
    let a = solve_problem(&from_file, &g).unwrap();
    let b = solve_problem(&example(ExampleId::PoissonNonHomogeneous), &g).unwrap();
    for (ca, cb) in a.coefficients().iter().zip(b.coefficients()) {
        assert_relative_eq!(ca, cb, epsilon = 1e-12);
    }
}

#[test]
fn domain_mismatch_is_rejected() {
    let p = example(ExampleId::Poisson);
    let unit = Interval::new(0.0, 1.0).unwrap();
    let g = make_grid(6, 6, (unit, unit), Distribution::Uniform).unwrap();
    assert!(matches!(solve_problem(&p, &g), Err(Error::Config(_))));
}
