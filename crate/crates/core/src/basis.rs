//! Bernstein polynomials defined over an arbitrary closed interval `[a, b]`.
//!
//! ```text
//!              ⎛n⎞ (x - a)^i (b - x)^(n-i)
//! B_{i,n}(x) = ⎜ ⎟ ───────────────────────,   i = 0..=n
//!              ⎝i⎠        (b - a)^n
//! ```
//!
//! Derivatives of any order use the explicit (non-recursive) form
//!
//! ```text
//!                    n!                  min(i,p)
//! D^p B_{i,n}(x) = ────────────────   Σ         (-1)^(p-k) C(p,k) B_{i-k,n-p}(x)
//!                  (n-p)! (b - a)^p  k=max(0,i+p-n)
//! ```

use crate::error::{Error, Result};

/// A closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!("interval bounds must be finite, got [{a}, {b}]")));
        }
        if a >= b {
            return Err(Error::Domain(format!("interval requires a < b, got [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    #[inline]
    pub fn lower(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn upper(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// Points within a few ulps of an endpoint count as inside; rounding in
    /// `a + (b - a) * t` must not make the upper node unusable.
    #[inline]
    fn slack(&self) -> f64 {
        8.0 * f64::EPSILON * (self.a.abs() + self.b.abs()).max(1.0)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a - self.slack() && x <= self.b + self.slack()
    }

    /// Barycentric pair `((x-a)/(b-a), (b-x)/(b-a))`, clamped to `[0, 1]`.
    fn unit_coords(&self, x: f64) -> Result<(f64, f64)> {
        if !self.contains(x) {
            return Err(Error::Domain(format!("x = {x} lies outside [{}, {}]", self.a, self.b)));
        }
        let w = self.width();
        let t = ((x - self.a) / w).clamp(0.0, 1.0);
        let s = ((self.b - x) / w).clamp(0.0, 1.0);
        Ok((t, s))
    }
}

/// Binomial coefficient accumulated in floating point with the
/// multiplicative formula `∏_{i=1..k} (n - (k - i)) / i`, using `k = min(k, n - k)`.
pub fn binomial(n: usize, k: usize) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("binomial({n}, {k}) requires k <= n")));
    }
    Ok(binomial_unchecked(n, k))
}

#[inline]
pub(crate) fn binomial_unchecked(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 1..=k {
        c *= (n - (k - i)) as f64;
        c /= i as f64;
    }
    c
}

/// `n (n-1) ... (n-p+1)`; equals `n! / (n-p)!` without forming factorials.
#[inline]
fn falling_product(n: usize, p: usize) -> f64 {
    (0..p).fold(1.0, |acc, r| acc * (n - r) as f64)
}

/// The degree-`n` Bernstein family on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinBasis {
    degree: usize,
    interval: Interval,
    binomials: Vec<f64>,
}

impl BernsteinBasis {
    pub fn new(degree: usize, interval: Interval) -> Self {
        let binomials = (0..=degree).map(|i| binomial_unchecked(degree, i)).collect();
        Self {
            degree,
            interval,
            binomials,
        }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Number of members in the family, `degree + 1`.
    #[inline]
    pub fn len(&self) -> usize {
        self.degree + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i > self.degree {
            Err(Error::Domain(format!(
                "basis index {i} out of range 0..={}",
                self.degree
            )))
        } else {
            Ok(())
        }
    }

    /// `B_{i,n}(x)`.
    pub fn eval(&self, i: usize, x: f64) -> Result<f64> {
        self.check_index(i)?;
        let (t, s) = self.interval.unit_coords(x)?;
        Ok(self.binomials[i] * pow(t, i) * pow(s, self.degree - i))
    }

    /// `D^p B_{i,n}(x)`. Returns exactly zero when `p > n`.
    pub fn derivative(&self, p: usize, i: usize, x: f64) -> Result<f64> {
        self.check_index(i)?;
        let (t, s) = self.interval.unit_coords(x)?;
        let n = self.degree;
        if p == 0 {
            return Ok(self.binomials[i] * pow(t, i) * pow(s, n - i));
        }
        if p > n {
            return Ok(0.0);
        }
        let lower = n - p;
        let k_lo = (i + p).saturating_sub(n);
        let k_hi = i.min(p);
        let mut sum = 0.0;
        for k in k_lo..=k_hi {
            let j = i - k;
            let b = binomial_unchecked(lower, j) * pow(t, j) * pow(s, lower - j);
            let term = binomial_unchecked(p, k) * b;
            if (p - k).is_multiple_of(2) {
                sum += term;
            } else {
                sum -= term;
            }
        }
        Ok(self.derivative_scale(p) * sum)
    }

    /// `n! / ((n-p)! (b-a)^p)`.
    fn derivative_scale(&self, p: usize) -> f64 {
        falling_product(self.degree, p) / self.interval.width().powi(p as i32)
    }

    /// All `B_{i,n}(x)` for `i = 0..=n`.
    pub fn eval_all(&self, x: f64) -> Result<Vec<f64>> {
        let (t, s) = self.interval.unit_coords(x)?;
        Ok(self.values_from_unit(t, s))
    }

    fn values_from_unit(&self, t: f64, s: f64) -> Vec<f64> {
        let n = self.degree;
        (0..=n).map(|i| self.binomials[i] * pow(t, i) * pow(s, n - i)).collect()
    }

    /// All `D^p B_{i,n}(x)` for `i = 0..=n`. The degree `n - p` family is
    /// evaluated once and shared across the members.
    pub fn derivative_all(&self, p: usize, x: f64) -> Result<Vec<f64>> {
        let (t, s) = self.interval.unit_coords(x)?;
        let n = self.degree;
        if p == 0 {
            return Ok(self.values_from_unit(t, s));
        }
        if p > n {
            return Ok(vec![0.0; n + 1]);
        }
        let lower = n - p;
        let low: Vec<f64> = (0..=lower)
            .map(|j| binomial_unchecked(lower, j) * pow(t, j) * pow(s, lower - j))
            .collect();
        let weights: Vec<f64> = (0..=p)
            .map(|k| {
                let c = binomial_unchecked(p, k);
                if (p - k).is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            })
            .collect();
        let scale = self.derivative_scale(p);
        Ok((0..=n)
            .map(|i| {
                let k_lo = (i + p).saturating_sub(n);
                let k_hi = i.min(p);
                scale * (k_lo..=k_hi).map(|k| weights[k] * low[i - k]).sum::<f64>()
            })
            .collect())
    }

    /// Location and value of the unique maximum of an interior member
    /// (`0 < i < n`). The location is `a + (i/n)(b - a)`; the value is
    /// `i^i n^-n (n-i)^(n-i) C(n,i)`, formed in log space.
    pub fn local_maximum(&self, i: usize) -> Result<(f64, f64)> {
        self.check_index(i)?;
        let n = self.degree;
        if i == 0 || i == n {
            return Err(Error::Domain(format!(
                "B_{{{i},{n}}} is monotone on the interval; only 0 < i < n have an interior maximum"
            )));
        }
        let (nf, fi) = (n as f64, i as f64);
        let ln_binom: f64 = {
            let k = i.min(n - i);
            (1..=k).map(|r| ((n - (k - r)) as f64).ln() - (r as f64).ln()).sum()
        };
        let ln_value = ln_binom + fi * fi.ln() - nf * nf.ln() + (nf - fi) * (nf - fi).ln();
        let x = self.interval.lower() + (fi / nf) * self.interval.width();
        Ok((x, ln_value.exp()))
    }
}

#[inline]
fn pow(base: f64, exp: usize) -> f64 {
    base.powi(exp as i32)
}
