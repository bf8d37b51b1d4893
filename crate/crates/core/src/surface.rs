//! Surfaces `f(x, y) = Σ_i Σ_j β_ij B_{i,n}(x) B_{j,m}(y)` and their derivatives.

use crate::basis::{BernsteinBasis, Interval};
use crate::error::{Error, Result};

/// Partial derivative order `∂^(p+q) / ∂x^p ∂y^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DerivativeOrder {
    pub p: usize,
    pub q: usize,
}

impl DerivativeOrder {
    pub const VALUE: Self = Self { p: 0, q: 0 };
    pub const DX: Self = Self { p: 1, q: 0 };
    pub const DY: Self = Self { p: 0, q: 1 };
    pub const DXX: Self = Self { p: 2, q: 0 };
    pub const DYY: Self = Self { p: 0, q: 2 };

    pub const fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    #[inline]
    pub const fn total(&self) -> usize {
        self.p + self.q
    }
}

/// A tensor-product Bernstein expansion with coefficients stored row-major,
/// `coefficients[i * (m + 1) + j] = β_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorExpansion {
    basis_x: BernsteinBasis,
    basis_y: BernsteinBasis,
    coefficients: Vec<f64>,
}

impl TensorExpansion {
    pub fn new(basis_x: BernsteinBasis, basis_y: BernsteinBasis, coefficients: Vec<f64>) -> Result<Self> {
        let expected = basis_x.len() * basis_y.len();
        if coefficients.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coefficients.len(),
            });
        }
        if let Some(bad) = coefficients.iter().position(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("coefficient {bad} is not finite")));
        }
        Ok(Self {
            basis_x,
            basis_y,
            coefficients,
        })
    }

    /// Expansion with every coefficient equal to `value`.
    pub fn constant(basis_x: BernsteinBasis, basis_y: BernsteinBasis, value: f64) -> Result<Self> {
        let len = basis_x.len() * basis_y.len();
        Self::new(basis_x, basis_y, vec![value; len])
    }

    pub fn basis_x(&self) -> &BernsteinBasis {
        &self.basis_x
    }

    pub fn basis_y(&self) -> &BernsteinBasis {
        &self.basis_y
    }

    pub fn domain(&self) -> (Interval, Interval) {
        (self.basis_x.interval(), self.basis_y.interval())
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.basis_x.degree(), self.basis_y.degree())
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    #[inline]
    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        self.coefficients[i * self.basis_y.len() + j]
    }

    /// Entrywise `alpha * self + beta * other`; both must share bases.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if self.basis_x != other.basis_x || self.basis_y != other.basis_y {
            return Err(Error::Config("expansions are defined over different bases".into()));
        }
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Self::new(self.basis_x.clone(), self.basis_y.clone(), coefficients)
    }

    /// `Σ_i Σ_j β_ij u_i v_j` for precomputed 1D tables.
    fn contract(&self, u: &[f64], v: &[f64]) -> f64 {
        let cols = v.len();
        u.iter()
            .enumerate()
            .map(|(i, ui)| {
                let row = &self.coefficients[i * cols..(i + 1) * cols];
                ui * row.iter().zip(v).map(|(b, vj)| b * vj).sum::<f64>()
            })
            .sum()
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let u = self.basis_x.eval_all(x)?;
        let v = self.basis_y.eval_all(y)?;
        Ok(self.contract(&u, &v))
    }

    /// Values at every `(xs[a], ys[b])`, row-major with `ys` fastest.
    pub fn eval_grid(&self, xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
        let vy: Vec<Vec<f64>> = ys.iter().map(|&y| self.basis_y.eval_all(y)).collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &x in xs {
            let u = self.basis_x.eval_all(x)?;
            out.extend(vy.iter().map(|v| self.contract(&u, v)));
        }
        Ok(out)
    }

    pub fn eval_partial(&self, order: DerivativeOrder, x: f64, y: f64) -> Result<f64> {
        let u = self.basis_x.derivative_all(order.p, x)?;
        let v = self.basis_y.derivative_all(order.q, y)?;
        Ok(self.contract(&u, &v))
    }

    /// `Δf = Σ β_ij [B_j(y) D²B_i(x) + B_i(x) D²B_j(y)]`.
    pub fn laplacian(&self, x: f64, y: f64) -> Result<f64> {
        let bx = self.basis_x.eval_all(x)?;
        let by = self.basis_y.eval_all(y)?;
        let dxx = self.basis_x.derivative_all(2, x)?;
        let dyy = self.basis_y.derivative_all(2, y)?;
        Ok(self.contract(&dxx, &by) + self.contract(&bx, &dyy))
    }

    /// `Δ²f = Σ β_ij [B_j(y) D⁴B_i(x) + 2 D²B_i(x) D²B_j(y) + B_i(x) D⁴B_j(y)]`.
    pub fn biharmonic(&self, x: f64, y: f64) -> Result<f64> {
        let bx = self.basis_x.eval_all(x)?;
        let by = self.basis_y.eval_all(y)?;
        let dxx = self.basis_x.derivative_all(2, x)?;
        let dyy = self.basis_y.derivative_all(2, y)?;
        let dx4 = self.basis_x.derivative_all(4, x)?;
        let dy4 = self.basis_y.derivative_all(4, y)?;
        Ok(self.contract(&dx4, &by) + 2.0 * self.contract(&dxx, &dyy) + self.contract(&bx, &dy4))
    }
}
