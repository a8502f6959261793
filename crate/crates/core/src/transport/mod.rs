//! Parallel transport over `[0, 1]`: path-ordered exponentials by Picard
//! iteration or RK4, trivialization of connections `d + κ`, horizontal
//! frames, and logarithms of one-parameter groups.

mod job;
mod log;
mod path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use job::{
    from_matrix, run_job, to_matrix, EntryRepr, MatrixRepr, OmegaSpec, Tolerances, TransportJob,
    TransportOutput,
};
pub use log::{half_step_consistency, log_representation, matrix_log};
pub use path::{op_norm, uniform_grid, CMat, MatrixPath};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Picard,
    Rk4,
}

#[derive(Clone, Debug)]
pub struct TransportOptions {
    pub method: Method,
    pub steps: usize,
    /// Upper limit on Picard terms.
    pub max_terms: usize,
    /// Allowed slack of the quadrature over the factorial term bound.
    pub bound_slack: f64,
    /// Residual above `divergence_tol·sup‖α‖·(1 + sup‖ω‖)` is reported as
    /// divergence.
    pub divergence_tol: f64,
}

impl Default for TransportOptions {
    fn default() -> Self {
        Self {
            method: Method::Picard,
            steps: 1 << 10,
            max_terms: 200,
            bound_slack: 0.05,
            divergence_tol: 1e-3,
        }
    }
}

impl TransportOptions {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermBound {
    pub n: usize,
    /// Largest `‖αₙ(t)‖ / (tⁿ sup‖ω‖ⁿ / n!)` over the sampled points.
    pub ratio: f64,
    /// `‖αₙ(1)‖`.
    pub observed_at_1: f64,
    pub bound_at_1: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub sup_omega: f64,
    pub slack: f64,
    pub terms: Vec<TermBound>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvertibilityReport {
    pub min_abs_det: f64,
    pub max_condition: f64,
    /// No jump in `det α` between neighbouring grid points.
    pub continuous: bool,
}

#[derive(Clone, Debug)]
pub struct TransportResult {
    pub grid: Vec<f64>,
    pub values: Vec<CMat>,
    /// `max ‖α′(t) − F(t, α(t))‖` with `α′` from finite differences.
    pub residual: f64,
    pub invertibility: InvertibilityReport,
    pub bounds: Option<BoundReport>,
    pub terms_used: Option<usize>,
}

impl TransportResult {
    pub fn alpha_at_1(&self) -> &CMat {
        self.values.last().unwrap()
    }

    pub fn path(&self) -> MatrixPath {
        MatrixPath::Grid {
            knots: self.grid.clone(),
            values: self.values.clone(),
        }
    }
}

/// Which equation is solved with initial value `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    /// `X′ = Xω`
    Right,
    /// `X′ = −ωX`
    LeftNeg,
}

fn rhs(side: Side, x: &CMat, w: &CMat) -> CMat {
    match side {
        Side::Right => x * w,
        Side::LeftNeg => -(w * x),
    }
}

fn check_steps(steps: usize) -> Result<()> {
    if steps < 2 {
        return Err(Error::InvalidInput("need at least two steps".into()));
    }
    Ok(())
}

/// Indices of at most 17 evenly spread grid points, including both ends.
fn sample_points(steps: usize) -> Vec<usize> {
    let k = steps.min(16);
    let mut v: Vec<usize> = (0..=k).map(|i| i * steps / k).collect();
    v.dedup();
    v
}

fn factorial_bound(t: f64, w: f64, n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * t * w / i as f64)
}

fn picard(
    omega: &[CMat],
    grid: &[f64],
    side: Side,
    opts: &TransportOptions,
) -> Result<(Vec<CMat>, BoundReport, usize)> {
    let k = omega[0].nrows();
    let h = grid[1] - grid[0];
    let sup_omega = omega.iter().map(op_norm).fold(0.0, f64::max);
    let samples = sample_points(grid.len() - 1);
    let mut term: Vec<CMat> = vec![CMat::identity(k, k); grid.len()];
    let mut sum = term.clone();
    let mut terms = Vec::new();
    let mut used = 0;
    let mut pass = true;
    for n in 1..=opts.max_terms {
        let integrand: Vec<CMat> = term
            .iter()
            .zip(omega)
            .map(|(x, w)| rhs(side, x, w))
            .collect();
        let mut next = Vec::with_capacity(grid.len());
        next.push(CMat::zeros(k, k));
        for i in 1..grid.len() {
            let step = (&integrand[i - 1] + &integrand[i]) * Complex64::new(h / 2.0, 0.0);
            let v = &next[i - 1] + step;
            next.push(v);
        }
        let mut ratio: f64 = 0.0;
        for &i in &samples {
            let b = factorial_bound(grid[i], sup_omega, n);
            let o = op_norm(&next[i]);
            if b > f64::MIN_POSITIVE {
                ratio = ratio.max(o / b);
            } else if o > 0.0 {
                ratio = f64::INFINITY;
            }
        }
        let last = next.len() - 1;
        let observed_at_1 = op_norm(&next[last]);
        let bound_at_1 = factorial_bound(1.0, sup_omega, n);
        pass &= ratio <= 1.0 + opts.bound_slack;
        terms.push(TermBound {
            n,
            ratio,
            observed_at_1,
            bound_at_1,
        });
        for (s, v) in sum.iter_mut().zip(&next) {
            *s += v;
        }
        used = n;
        let term_size = next.iter().map(|m| m.norm()).fold(0.0, f64::max);
        let sum_size = sum.iter().map(|m| m.norm()).fold(0.0, f64::max);
        term = next;
        if term_size <= 1e-16 * sum_size {
            break;
        }
        if n == opts.max_terms {
            return Err(Error::DivergenceDetected(format!(
                "Picard series not converged after {n} terms (last term {term_size:e})"
            )));
        }
    }
    Ok((
        sum,
        BoundReport {
            sup_omega,
            slack: opts.bound_slack,
            terms,
            pass,
        },
        used,
    ))
}

fn rk4(path: &MatrixPath, grid: &[f64], side: Side) -> Vec<CMat> {
    let k = path.dim();
    let mut x = CMat::identity(k, k);
    let mut out = vec![x.clone()];
    for w in grid.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let (w0, wm, w1) = (path.at(t), path.at(t + h / 2.0), path.at(t + h));
        let half = Complex64::new(h / 2.0, 0.0);
        let k1 = rhs(side, &x, &w0);
        let k2 = rhs(side, &(&x + &k1 * half), &wm);
        let k3 = rhs(side, &(&x + &k2 * half), &wm);
        let k4 = rhs(side, &(&x + &k3 * Complex64::new(h, 0.0)), &w1);
        x += (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * Complex64::new(h / 6.0, 0.0);
        out.push(x.clone());
    }
    out
}

/// Finite-difference derivative on a uniform grid: fourth order when at
/// least five points are available, second order otherwise.
fn derivative(values: &[CMat], h: f64) -> Vec<CMat> {
    let n = values.len() - 1;
    let lin = |w: &[(usize, f64)], scale: f64| {
        let mut acc = CMat::zeros(values[0].nrows(), values[0].ncols());
        for &(i, c) in w {
            acc += &values[i] * Complex64::new(c * scale, 0.0);
        }
        acc
    };
    if n < 4 {
        let s = 1.0 / (2.0 * h);
        return (0..=n)
            .map(|i| match i {
                0 => lin(&[(0, -3.0), (1, 4.0), (2, -1.0)], s),
                i if i == n => lin(&[(n, 3.0), (n - 1, -4.0), (n - 2, 1.0)], s),
                i => lin(&[(i + 1, 1.0), (i - 1, -1.0)], s),
            })
            .collect();
    }
    let s = 1.0 / (12.0 * h);
    (0..=n)
        .map(|i| match i {
            0 => lin(
                &[(0, -25.0), (1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)],
                s,
            ),
            1 => lin(&[(0, -3.0), (1, -10.0), (2, 18.0), (3, -6.0), (4, 1.0)], s),
            i if i == n => lin(
                &[
                    (n, 25.0),
                    (n - 1, -48.0),
                    (n - 2, 36.0),
                    (n - 3, -16.0),
                    (n - 4, 3.0),
                ],
                s,
            ),
            i if i == n - 1 => lin(
                &[
                    (n, 3.0),
                    (n - 1, 10.0),
                    (n - 2, -18.0),
                    (n - 3, 6.0),
                    (n - 4, -1.0),
                ],
                s,
            ),
            i => lin(
                &[(i - 2, 1.0), (i - 1, -8.0), (i + 1, 8.0), (i + 2, -1.0)],
                s,
            ),
        })
        .collect()
}

fn invertibility(values: &[CMat], samples: &[usize]) -> InvertibilityReport {
    let dets: Vec<Complex64> = values.iter().map(|v| v.determinant()).collect();
    let min_abs_det = dets.iter().map(|d| d.norm()).fold(f64::INFINITY, f64::min);
    let continuous = dets
        .windows(2)
        .all(|w| w[0].norm() > 0.0 && (w[1] / w[0] - 1.0).norm() < 0.5);
    let max_condition = samples
        .iter()
        .map(|&i| {
            let s = values[i].singular_values();
            s.max() / s.min()
        })
        .fold(0.0, f64::max);
    InvertibilityReport {
        min_abs_det,
        max_condition,
        continuous,
    }
}

fn solve(path: &MatrixPath, side: Side, opts: &TransportOptions) -> Result<TransportResult> {
    check_steps(opts.steps)?;
    let grid = uniform_grid(opts.steps);
    let omega: Vec<CMat> = grid.iter().map(|&t| path.at(t)).collect();
    let (values, bounds, terms_used) = match opts.method {
        Method::Picard => {
            let (v, b, n) = picard(&omega, &grid, side, opts)?;
            (v, Some(b), Some(n))
        }
        Method::Rk4 => (rk4(path, &grid, side), None, None),
    };
    let h = grid[1] - grid[0];
    let deriv = derivative(&values, h);
    let residual = deriv
        .iter()
        .zip(values.iter().zip(&omega))
        .map(|(d, (x, w))| (d - rhs(side, x, w)).norm())
        .fold(0.0, f64::max);
    let sup_alpha = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let sup_omega = omega.iter().map(|w| w.norm()).fold(0.0, f64::max);
    if !residual.is_finite() || residual > opts.divergence_tol * sup_alpha * (1.0 + sup_omega) {
        return Err(Error::DivergenceDetected(format!(
            "residual {residual:e} on {} steps",
            opts.steps
        )));
    }
    let invertibility = invertibility(&values, &sample_points(opts.steps));
    Ok(TransportResult {
        grid,
        values,
        residual,
        invertibility,
        bounds,
        terms_used,
    })
}

/// `α` with `dα = αω`, `α(0) = I`.
pub fn path_ordered_exp(omega: &MatrixPath, opts: &TransportOptions) -> Result<TransportResult> {
    solve(omega, Side::Right, opts)
}

#[derive(Clone, Debug)]
pub struct InverseTransport {
    pub inverse: TransportResult,
    pub forward: TransportResult,
    /// `max ‖α(t)α′(t) − I‖`.
    pub product_residual: f64,
}

/// `α′` with `dα′ = −ωα′`, `α′(0) = I`, checked against the forward solution.
pub fn inverse_transport(omega: &MatrixPath, opts: &TransportOptions) -> Result<InverseTransport> {
    let inverse = solve(omega, Side::LeftNeg, opts)?;
    let forward = solve(omega, Side::Right, opts)?;
    let k = omega.dim();
    let product_residual = forward
        .values
        .iter()
        .zip(&inverse.values)
        .map(|(a, b)| (a * b - CMat::identity(k, k)).norm())
        .fold(0.0, f64::max);
    Ok(InverseTransport {
        inverse,
        forward,
        product_residual,
    })
}

#[derive(Clone, Debug)]
pub struct Trivialization {
    pub alpha: TransportResult,
    /// `max ‖α(s′ + κs) − (αs)′‖` over test sections `tᵖ·e_j`, `p ≤ 2`.
    pub certificate: f64,
}

/// Gauge `α` with `α∘(d + κ) = d∘α`.
pub fn trivialize_flat(kappa: &MatrixPath, opts: &TransportOptions) -> Result<Trivialization> {
    let alpha = path_ordered_exp(kappa, opts)?;
    let k = kappa.dim();
    let grid = &alpha.grid;
    let h = grid[1] - grid[0];
    let mut certificate: f64 = 0.0;
    for j in 0..k {
        for p in 0..3i32 {
            let section = |t: f64| {
                let mut v = CMat::zeros(k, 1);
                v[(j, 0)] = Complex64::new(t.powi(p), 0.0);
                v
            };
            let section_d = |t: f64| {
                let mut v = CMat::zeros(k, 1);
                if p > 0 {
                    v[(j, 0)] = Complex64::new(p as f64 * t.powi(p - 1), 0.0);
                }
                v
            };
            let moved: Vec<CMat> = grid
                .iter()
                .zip(&alpha.values)
                .map(|(&t, a)| a * section(t))
                .collect();
            let d_moved = derivative(&moved, h);
            for (i, &t) in grid.iter().enumerate() {
                let lhs = &alpha.values[i] * (section_d(t) + kappa.at(t) * section(t));
                certificate = certificate.max((lhs - &d_moved[i]).norm());
            }
        }
    }
    Ok(Trivialization { alpha, certificate })
}

#[derive(Clone, Debug)]
pub struct HorizontalFrame {
    /// Columns of `α(t)⁻¹` solve `s′ + κs = 0`.
    pub frame: TransportResult,
    pub basis_at_0: CMat,
    /// Smallest singular value of the frame over the grid.
    pub min_singular: f64,
    pub full_rank: bool,
}

/// Horizontal sections of `d + κ` over the interval, evaluated at `t = 0`.
pub fn kernel_of_interval_part(
    kappa: &MatrixPath,
    opts: &TransportOptions,
) -> Result<HorizontalFrame> {
    let frame = solve(kappa, Side::LeftNeg, opts)?;
    let min_singular = frame
        .values
        .iter()
        .map(|v| v.singular_values().min())
        .fold(f64::INFINITY, f64::min);
    let basis_at_0 = frame.values[0].clone();
    Ok(HorizontalFrame {
        frame,
        basis_at_0,
        min_singular,
        full_rank: min_singular > 1e-12,
    })
}
