//! Dense LU factorization with partial pivoting.

use crate::error::{Error, Result};

/// Relative pivot threshold: a pivot below `PIVOT_TOLERANCE * ‖A‖∞` is singular.
pub const PIVOT_TOLERANCE: f64 = 1e-20;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                got: bad.len(),
            });
        }
        Self::from_row_major(r, c, rows.concat())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        let mut sums = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (s, v) in sums.iter_mut().zip(self.row(i)) {
                *s += v.abs();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `P A = L U` with unit-lower `L` and upper `U` packed into one matrix.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DenseMatrix,
    /// `perm[k]` is the original row placed at position `k`.
    perm: Vec<usize>,
    sign: f64,
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// `+1` for an even number of row swaps, `-1` otherwise.
    pub fn permutation_sign(&self) -> f64 {
        self.sign
    }

    pub fn packed(&self) -> &DenseMatrix {
        &self.lu
    }

    pub fn lower(&self) -> DenseMatrix {
        let n = self.dim();
        let mut l = DenseMatrix::identity(n);
        for i in 0..n {
            for j in 0..i {
                l[(i, j)] = self.lu[(i, j)];
            }
        }
        l
    }

    pub fn upper(&self) -> DenseMatrix {
        let n = self.dim();
        let mut u = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                u[(i, j)] = self.lu[(i, j)];
            }
        }
        u
    }

    pub fn determinant(&self) -> f64 {
        (0..self.dim()).fold(self.sign, |d, i| d * self.lu[(i, i)])
    }

    /// Solves `A x = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: f64 = row[..i].iter().zip(&x[..i]).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }

    /// Solves `Aᵀ x = rhs`.
    pub fn solve_transpose(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        // Uᵀ z = rhs, then Lᵀ w = z, then x = Pᵀ w.
        let mut z = rhs.to_vec();
        for i in 0..n {
            z[i] /= self.lu[(i, i)];
            let zi = z[i];
            let row = self.lu.row(i);
            for (zk, u) in z[i + 1..].iter_mut().zip(&row[i + 1..]) {
                *zk -= u * zi;
            }
        }
        for i in (0..n).rev() {
            let zi = z[i];
            let row = self.lu.row(i);
            for (zk, l) in z[..i].iter_mut().zip(&row[..i]) {
                *zk -= l * zi;
            }
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        Ok(x)
    }
}

/// LU factorization with partial pivoting. The pivot is the entry of largest
/// magnitude in the current column; ties go to the smallest row index.
pub fn lu_factor(matrix: &DenseMatrix) -> Result<LuFactors> {
    if !matrix.is_square() {
        return Err(Error::DimensionMismatch {
            expected: matrix.rows,
            got: matrix.cols,
        });
    }
    let n = matrix.rows;
    let threshold = PIVOT_TOLERANCE * matrix.norm_inf();
    let mut lu = matrix.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;

    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_abs = lu[(k, k)].abs();
        for i in k + 1..n {
            let v = lu[(i, k)].abs();
            if v > pivot_abs {
                pivot_abs = v;
                pivot_row = i;
            }
        }
        if pivot_abs.is_nan() || pivot_abs <= threshold {
            return Err(Error::Singular { column: k });
        }
        if pivot_row != k {
            swap_rows(&mut lu, k, pivot_row);
            perm.swap(k, pivot_row);
            sign = -sign;
        }

        let (head, tail) = lu.data.split_at_mut((k + 1) * n);
        let pivot = &head[k * n..];
        let inv = 1.0 / pivot[k];
        for row in tail.chunks_exact_mut(n) {
            let l = row[k] * inv;
            row[k] = l;
            if l != 0.0 {
                for (r, p) in row[k + 1..].iter_mut().zip(&pivot[k + 1..]) {
                    *r -= l * p;
                }
            }
        }
    }
    Ok(LuFactors { lu, perm, sign })
}

fn swap_rows(m: &mut DenseMatrix, a: usize, b: usize) {
    let n = m.cols;
    let (lo, hi) = (a.min(b), a.max(b));
    let (first, second) = m.data.split_at_mut(hi * n);
    first[lo * n..(lo + 1) * n].swap_with_slice(&mut second[..n]);
}

pub fn lu_solve(factors: &LuFactors, rhs: &[f64]) -> Result<Vec<f64>> {
    factors.solve(rhs)
}

/// Factor and solve in one step.
pub fn solve(matrix: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    lu_factor(matrix)?.solve(rhs)
}

/// Estimate of `κ₁(A) = ‖A‖₁ ‖A⁻¹‖₁` using Hager's method with Higham's
/// alternating-vector safeguard. Only the order of magnitude is meaningful.
/// A singular matrix yields `f64::INFINITY`.
pub fn condition_estimate(matrix: &DenseMatrix) -> Result<f64> {
    if !matrix.is_square() {
        return Err(Error::DimensionMismatch {
            expected: matrix.rows,
            got: matrix.cols,
        });
    }
    match lu_factor(matrix) {
        Ok(f) => Ok(matrix.norm_1() * inverse_norm1_estimate(&f)?),
        Err(Error::Singular { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Lower bound estimate of `‖A⁻¹‖₁` from existing factors.
pub fn inverse_norm1_estimate(factors: &LuFactors) -> Result<f64> {
    let n = factors.dim();
    if n == 0 {
        return Ok(0.0);
    }
    let mut x = vec![1.0 / n as f64; n];
    let mut estimate = 0.0;
    let mut last_j = usize::MAX;
    for _ in 0..5 {
        let y = factors.solve(&x)?;
        estimate = y.iter().map(|v| v.abs()).sum::<f64>();
        let xi: Vec<f64> = y.iter().map(|&v| if v >= 0.0 { 1.0 } else { -1.0 }).collect();
        let z = factors.solve_transpose(&xi)?;
        let (j, zmax) = z.iter().enumerate().fold((0, f64::NEG_INFINITY), |(bj, bv), (k, v)| {
            if v.abs() > bv {
                (k, v.abs())
            } else {
                (bj, bv)
            }
        });
        let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
        if zmax <= ztx || j == last_j {
            break;
        }
        x.iter_mut().for_each(|v| *v = 0.0);
        x[j] = 1.0;
        last_j = j;
    }
    let alt: Vec<f64> = (0..n)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
        })
        .collect();
    let w = factors.solve(&alt)?;
    let alt_estimate = 2.0 * w.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
    Ok(estimate.max(alt_estimate))
}
