//! Fast invariant checks run by `selftest`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::{solve_detailed, solve_problem, CollocationGrid, Distribution};
use crate::basis::{binomial, BernsteinBasis, Interval};
use crate::linalg::{condition_estimate, lu_factor, DenseMatrix};
use crate::problem::{example, BoundarySpec, EdgeData, ExampleId};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelfTestOptions {
    /// Negates every derivative value fed to the finite-difference check.
    pub flip_derivative_sign: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub tolerance: f64,
    pub seconds: f64,
}

fn intervals() -> [Interval; 3] {
    [
        Interval::new(0.0, 1.0).expect("valid"),
        Interval::new(-std::f64::consts::PI, std::f64::consts::PI).expect("valid"),
        Interval::new(-1.0, 3.0).expect("valid"),
    ]
}

fn samples(iv: Interval, count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |k| {
        if k + 1 == count {
            iv.upper()
        } else {
            iv.lower() + iv.width() * k as f64 / (count - 1) as f64
        }
    })
}

pub fn partition_of_unity() -> (f64, f64) {
    let mut worst = 0.0f64;
    for iv in intervals() {
        for n in 0..=60 {
            let b = BernsteinBasis::new(n, iv);
            for x in samples(iv, 101) {
                let s: f64 = b.eval_all(x).expect("inside").iter().sum();
                worst = worst.max((s - 1.0).abs());
            }
        }
    }
    (worst, 1e-10)
}

pub fn endpoint_kronecker() -> (f64, f64) {
    let mut worst = 0.0f64;
    for iv in intervals() {
        for n in 0..=60 {
            let b = BernsteinBasis::new(n, iv);
            for i in 0..=n {
                let at_a = b.eval(i, iv.lower()).expect("inside");
                let at_b = b.eval(i, iv.upper()).expect("inside");
                worst = worst
                    .max((at_a - if i == 0 { 1.0 } else { 0.0 }).abs())
                    .max((at_b - if i == n { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    (worst, 1e-14)
}

/// Compares `D^p B` with central differences of `D^(p-1) B` (steps
/// `1e-4 (b - a)` and half that, Richardson-extrapolated), for `p = 1..=4`
/// and `n <= 20`, at 11 interior points. `p = 1` differentiates the basis
/// definition itself. Returns the worst
/// ratio of the observed error to its allowance: `1e-5` relative, or `1e-6`
/// of the largest derivative magnitude at that point where the value is tiny.
pub fn derivative_vs_finite_differences(options: SelfTestOptions) -> (f64, f64) {
    let sign = if options.flip_derivative_sign { -1.0 } else { 1.0 };
    let mut worst = 0.0f64;
    for iv in intervals() {
        let h = 1e-4 * iv.width();
        for n in 1..=20 {
            let b = BernsteinBasis::new(n, iv);
            for p in 1..=4usize {
                for k in 1..=11 {
                    let x = iv.lower() + iv.width() * k as f64 / 12.0;
                    let formula = b.derivative_all(p, x).expect("inside");
                    let scale = formula.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    let central = |step: f64| -> Vec<f64> {
                        let plus = b.derivative_all(p - 1, x + step).expect("inside");
                        let minus = b.derivative_all(p - 1, x - step).expect("inside");
                        plus.iter().zip(&minus).map(|(a, c)| (a - c) / (2.0 * step)).collect()
                    };
                    let (coarse, fine) = (central(h), central(0.5 * h));
                    for i in 0..=n {
                        // Richardson extrapolation of the two central differences.
                        let fd = (4.0 * fine[i] - coarse[i]) / 3.0;
                        let value = sign * formula[i];
                        let err = (fd - value).abs();
                        let allowance = (1e-5 * value.abs()).max(1e-6 * scale);
                        if allowance > 0.0 {
                            worst = worst.max(err / allowance);
                        } else if err > 0.0 {
                            worst = f64::INFINITY;
                        }
                    }
                }
            }
        }
    }
    (worst, 1.0)
}

/// Exact `C(n, k)` in 128-bit integers.
fn exact_binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c * u128::from(n - k + i) / u128::from(i);
    }
    c
}

pub fn binomial_against_integers() -> (f64, f64) {
    let mut worst = 0.0f64;
    for n in 0..=60u32 {
        for k in 0..=n {
            let exact = exact_binomial(n, k) as f64;
            let got = binomial(n as usize, k as usize).expect("k <= n");
            worst = worst.max((got - exact).abs() / exact);
        }
    }
    (worst, 1e-12)
}

/// Residual of LU solves on random systems with entries in `[-1, 1]`,
/// normalized by `‖A‖∞ ‖b‖∞ + ‖c‖∞`.
pub fn lu_residuals() -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED1);
    let mut worst = 0.0f64;
    for &size in &[5usize, 20, 80, 100] {
        for _ in 0..5 {
            let a = loop {
                let data: Vec<f64> = (0..size * size).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                let a = DenseMatrix::from_row_major(size, size, data).expect("finite");
                if condition_estimate(&a).expect("square") <= 1e8 {
                    break a;
                }
            };
            let c: Vec<f64> = (0..size).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let b = lu_factor(&a).and_then(|f| f.solve(&c)).expect("well conditioned");
            let ab = a.mul_vec(&b).expect("dims");
            let r = ab.iter().zip(&c).map(|(l, r)| (l - r).abs()).fold(0.0, f64::max);
            let bn = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let cn = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            worst = worst.max(r / (a.norm_inf() * bn + cn));
        }
    }
    (worst, 1e-9)
}

/// Example 1 at `n = m = 10`: eliminating boundary unknowns against full
/// assembly with zero Dirichlet data, compared on an 11×11 probe grid.
pub fn regime_equivalence() -> (f64, f64) {
    let reduced = example(ExampleId::Poisson);
    let mut full = reduced.clone();
    full.boundary = BoundarySpec::Dirichlet(EdgeData::zero());
    let grid = CollocationGrid::for_problem(&reduced, 10, 10, Distribution::Uniform).expect("valid degree");
    let a = solve_problem(&reduced, &grid).expect("solvable");
    let b = solve_problem(&full, &grid).expect("solvable");
    let (ix, iy) = reduced.domain;
    let mut worst = 0.0f64;
    for x in samples(ix, 11) {
        for y in samples(iy, 11) {
            worst = worst.max((a.eval(x, y).expect("inside") - b.eval(x, y).expect("inside")).abs());
        }
    }
    (worst, 1e-8)
}

/// `‖A b - c‖∞ / (1 + ‖c‖∞)` for every catalog problem at `n = m = 12`.
pub fn collocation_residuals() -> (f64, f64) {
    let mut worst = 0.0f64;
    for id in ExampleId::ALL {
        let p = example(id);
        let grid = CollocationGrid::for_problem(&p, 12, 12, Distribution::Uniform).expect("valid degree");
        let s = solve_detailed(&p, &grid).expect("solvable");
        for sys in &s.systems {
            worst = worst.max(sys.residual_inf / (1.0 + sys.rhs_inf));
        }
    }
    (worst, 1e-8)
}

/// A named check returning `(worst, tolerance)`.
type Check = (&'static str, Box<dyn Fn() -> (f64, f64)>);

pub fn run(options: SelfTestOptions) -> Vec<PropertyResult> {
    let checks: Vec<Check> = vec![
        ("partition of unity (n <= 60)", Box::new(partition_of_unity)),
        ("endpoint Kronecker property", Box::new(endpoint_kronecker)),
        (
            "derivative formula vs central differences (p <= 4, n <= 20)",
            Box::new(move || derivative_vs_finite_differences(options)),
        ),
        (
            "binomial vs exact integers (n <= 60)",
            Box::new(binomial_against_integers),
        ),
        ("LU residual on random systems (<= 100x100)", Box::new(lu_residuals)),
        (
            "homogeneous elimination vs full assembly (Example 1, n = 10)",
            Box::new(regime_equivalence),
        ),
        (
            "collocation residual, all examples at n = 12",
            Box::new(collocation_residuals),
        ),
    ];
    checks
        .into_iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let (worst, tolerance) = check();
            PropertyResult {
                name,
                passed: worst <= tolerance,
                worst,
                tolerance,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}
