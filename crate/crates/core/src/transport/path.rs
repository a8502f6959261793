//! Matrix-valued paths on `[0, 1]`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

type Sampler = Arc<dyn Fn(f64) -> CMat + Send + Sync>;

#[derive(Clone)]
pub enum MatrixPath {
    Constant(CMat),
    /// `Σ_k t^k C_k`.
    Polynomial(Vec<CMat>),
    /// Piecewise-linear interpolation between monotone knots covering `[0, 1]`.
    Grid {
        knots: Vec<f64>,
        values: Vec<CMat>,
    },
    Closure {
        dim: usize,
        f: Sampler,
    },
}

impl fmt::Debug for MatrixPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(m) => write!(f, "Constant({m})"),
            Self::Polynomial(c) => write!(f, "Polynomial({} terms)", c.len()),
            Self::Grid { knots, .. } => write!(f, "Grid({} knots)", knots.len()),
            Self::Closure { dim, .. } => write!(f, "Closure({dim}×{dim})"),
        }
    }
}

impl MatrixPath {
    pub fn closure(dim: usize, f: impl Fn(f64) -> CMat + Send + Sync + 'static) -> Self {
        Self::Closure {
            dim,
            f: Arc::new(f),
        }
    }

    pub fn polynomial(coeffs: Vec<CMat>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidInput(
                "polynomial path needs at least one coefficient".into(),
            ));
        };
        let k = first.nrows();
        if coeffs.iter().any(|c| c.nrows() != k || c.ncols() != k) {
            return Err(Error::ShapeMismatch(
                "polynomial coefficients must share one square shape".into(),
            ));
        }
        Ok(Self::Polynomial(coeffs))
    }

    pub fn grid(knots: Vec<f64>, values: Vec<CMat>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::InvalidInput(
                "grid path needs matching knots and values, at least two".into(),
            ));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(
                "grid knots must be strictly increasing".into(),
            ));
        }
        if knots[0] > 0.0 || *knots.last().unwrap() < 1.0 {
            return Err(Error::InvalidInput("grid knots must cover [0, 1]".into()));
        }
        let k = values[0].nrows();
        if values.iter().any(|v| v.nrows() != k || v.ncols() != k) {
            return Err(Error::ShapeMismatch(
                "grid values must share one square shape".into(),
            ));
        }
        Ok(Self::Grid { knots, values })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Constant(m) => m.nrows(),
            Self::Polynomial(c) => c[0].nrows(),
            Self::Grid { values, .. } => values[0].nrows(),
            Self::Closure { dim, .. } => *dim,
        }
    }

    pub fn at(&self, t: f64) -> CMat {
        match self {
            Self::Constant(m) => m.clone(),
            Self::Polynomial(c) => {
                let mut acc = c.last().unwrap().clone();
                for coeff in c.iter().rev().skip(1) {
                    acc = acc * Complex64::new(t, 0.0) + coeff;
                }
                acc
            }
            Self::Grid { knots, values } => {
                let i = knots.partition_point(|&k| k <= t).clamp(1, knots.len() - 1);
                let (t0, t1) = (knots[i - 1], knots[i]);
                let s = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
                &values[i - 1] * Complex64::new(1.0 - s, 0.0) + &values[i] * Complex64::new(s, 0.0)
            }
            Self::Closure { f, .. } => f(t),
        }
    }
}

/// Uniform grid `t_i = i/steps`.
pub fn uniform_grid(steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}
