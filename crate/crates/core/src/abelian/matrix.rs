//! Dense matrices over a [`Ring`].

use num_complex::Complex64;

use super::ring::Ring;
use crate::connection::AlgMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> E) -> Self {
        let data = (0..rows * cols)
            .map(|k| f(k / cols.max(1), k % cols.max(1)))
            .collect();
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

impl<S: Scalar> Mat<SparseVec<S>> {
    pub fn from_alg(m: &AlgMatrix<S>) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).clone())
    }

    pub fn to_alg(&self) -> AlgMatrix<S> {
        AlgMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone())
    }
}

impl Mat<Complex64> {
    pub fn from_nalgebra(m: &nalgebra::DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| *self.get(i, j))
    }
}

/// Ring-aware arithmetic on [`Mat`].
pub struct MatOps<'r, R: Ring>(pub &'r R);

impl<R: Ring> MatOps<'_, R> {
    pub fn zeros(&self, rows: usize, cols: usize) -> Mat<R::E> {
        Mat::from_fn(rows, cols, |_, _| self.0.zero())
    }

    pub fn identity(&self, n: usize) -> Mat<R::E> {
        Mat::from_fn(
            n,
            n,
            |i, j| if i == j { self.0.one() } else { self.0.zero() },
        )
    }

    pub fn add(&self, a: &Mat<R::E>, b: &Mat<R::E>) -> Result<Mat<R::E>> {
        shape(a, b)?;
        Ok(Mat::from_fn(a.rows, a.cols, |i, j| {
            self.0.add(a.get(i, j), b.get(i, j))
        }))
    }

    pub fn sub(&self, a: &Mat<R::E>, b: &Mat<R::E>) -> Result<Mat<R::E>> {
        shape(a, b)?;
        Ok(Mat::from_fn(a.rows, a.cols, |i, j| {
            self.0.sub(a.get(i, j), b.get(i, j))
        }))
    }

    pub fn scale(&self, a: &Mat<R::E>, s: &R::E) -> Result<Mat<R::E>> {
        let data = a
            .data
            .iter()
            .map(|x| self.0.mul(s, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat {
            rows: a.rows,
            cols: a.cols,
            data,
        })
    }

    pub fn scale_real(&self, a: &Mat<R::E>, f: f64) -> Mat<R::E> {
        Mat {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().map(|x| self.0.scale_real(x, f)).collect(),
        }
    }

    pub fn mul(&self, a: &Mat<R::E>, b: &Mat<R::E>) -> Result<Mat<R::E>> {
        if a.cols != b.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}×{} · {}×{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        let mut out = self.zeros(a.rows, b.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(i, k);
                if self.0.is_zero(x) {
                    continue;
                }
                for j in 0..b.cols {
                    let y = b.get(k, j);
                    if self.0.is_zero(y) {
                        continue;
                    }
                    let p = self.0.mul(x, y)?;
                    let idx = i * b.cols + j;
                    out.data[idx] = self.0.add(&out.data[idx], &p);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self, a: &Mat<R::E>) -> Result<Mat<R::E>> {
        let mut out = self.zeros(a.cols, a.rows);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(j, i, self.0.star(a.get(i, j))?);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self, a: &Mat<R::E>) -> bool {
        a.data.iter().all(|x| self.0.is_zero(x))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self, a: &Mat<R::E>) -> f64 {
        a.data
            .iter()
            .map(|x| self.0.magnitude(x))
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of entry magnitudes.
    pub fn norm(&self, a: &Mat<R::E>) -> f64 {
        a.data
            .iter()
            .map(|x| self.0.magnitude(x).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

fn shape<E>(a: &Mat<E>, b: &Mat<E>) -> Result<()> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::ShapeMismatch(format!(
            "{}×{} vs {}×{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(())
}
