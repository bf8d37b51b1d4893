//! Point collocation for linear elliptic boundary value problems on
//! rectangles, with the unknown expanded globally in a tensor product of
//! Bernstein polynomials defined over the domain's own intervals.
//!
//! The pipeline is: describe an [`EllipticProblem`], build a
//! [`CollocationGrid`], then [`solve_problem`] to get a [`TensorExpansion`].
//! [`analysis`] measures errors and runs convergence studies.

pub mod analysis;
pub mod assembly;
pub mod basis;
mod error;
pub mod expr;
pub mod linalg;
pub mod problem;
pub mod problem_file;
pub mod selftest;
pub mod surface;

pub use assembly::{
    assemble, make_grid, solve_detailed, solve_problem, CollocationGrid, Distribution, IndexMap, IndexMode,
    LinearSystem, NodeKind, RowKind, RowLabel, Solution, SystemStats,
};
pub use basis::{binomial, BernsteinBasis, Interval};
pub use error::{Error, Result};
pub use linalg::{condition_estimate, lu_factor, lu_solve, DenseMatrix, LuFactors};
pub use problem::{
    boundary_data_consistency, catalog_example, example, BoundarySpec, Edge, EdgeData, EllipticProblem, ExampleId,
    Field, LinearOperator, OperatorTerm, Regime,
};
pub use surface::{DerivativeOrder, TensorExpansion};
