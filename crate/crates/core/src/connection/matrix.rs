//! Matrices with entries in a graded basis algebra.

use crate::algebra::GradedBasisAlgebra;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

/// Row-major matrix of algebra coordinates. Columns of an `N×1` matrix are
/// the module elements of `A^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<SparseVec<S>>,
}

impl<S: Scalar> AlgMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![SparseVec::new(); rows * cols],
        }
    }

    pub fn identity(a: &GradedBasisAlgebra<S>, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, a.unit_coords().clone());
        }
        m
    }

    /// Matrix of scalars times the unit.
    pub fn from_scalars(
        a: &GradedBasisAlgebra<S>,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> S,
    ) -> Self {
        Self::from_fn(rows, cols, |i, j| a.unit_coords().scaled(&f(i, j)))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> SparseVec<S>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &SparseVec<S> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: SparseVec<S>) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &SparseVec<S>)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn column(&self, j: usize) -> Self {
        Self::from_fn(self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&SparseVec<S>) -> SparseVec<S>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&SparseVec<S>) -> Option<SparseVec<S>>) -> Option<Self> {
        let entries = self.entries.iter().map(f).collect::<Option<Vec<_>>>()?;
        Some(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    fn same_shape(&self, o: &Self, what: &str) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::ShapeMismatch(format!(
                "{what}: {}×{} vs {}×{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o, "add")?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).add(o.get(i, j))
        }))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_shape(o, "sub")?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).sub(o.get(i, j))
        }))
    }

    pub fn neg(&self) -> Self {
        self.map(|e| e.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|e| e.scaled(s))
    }

    /// Product with in-window structure constants; `None` if some needed
    /// product is out of window.
    pub fn try_mul(&self, a: &GradedBasisAlgebra<S>, o: &Self) -> Option<Self> {
        if self.cols != o.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let y = o.get(k, j);
                    if y.is_zero() {
                        continue;
                    }
                    let p = a.try_mul(x, y)?;
                    out.entries[i * o.cols + j].add_scaled(&p, &S::one());
                }
            }
        }
        Some(out)
    }

    /// Product honoring the algebra's truncation policy.
    pub fn mul(&self, a: &GradedBasisAlgebra<S>, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::ShapeMismatch(format!(
                "mul: {}×{} · {}×{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let y = o.get(k, j);
                    if y.is_zero() {
                        continue;
                    }
                    let p = a.mul_coords(x, y)?;
                    out.entries[i * o.cols + j].add_scaled(&p, &S::one());
                }
            }
        }
        Ok(out)
    }

    /// Entrywise differential.
    pub fn d(&self, a: &GradedBasisAlgebra<S>) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| a.d_coords(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn try_d(&self, a: &GradedBasisAlgebra<S>) -> Option<Self> {
        self.try_map(|e| a.try_d(e))
    }

    /// Kronecker product `(X⊗Y)_{(i,k),(j,l)} = X_ij·Y_kl`.
    pub fn kron(&self, a: &GradedBasisAlgebra<S>, o: &Self) -> Result<Self> {
        let mut out = Self::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let y = o.get(k, l);
                        if !y.is_zero() {
                            out.set(i * o.rows + k, j * o.cols + l, a.mul_coords(x, y)?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn block_diag(&self, o: &Self) -> Self {
        let mut out = Self::zeros(self.rows + o.rows, self.cols + o.cols);
        for (i, j, e) in self.entries() {
            out.set(i, j, e.clone());
        }
        for (i, j, e) in o.entries() {
            out.set(self.rows + i, self.cols + j, e.clone());
        }
        out
    }

    /// All entries homogeneous of degree `k` (zero entries allowed).
    pub fn has_degree(&self, a: &GradedBasisAlgebra<S>, k: usize) -> bool {
        self.entries
            .iter()
            .all(|e| e.indices().all(|i| a.degree_of(i) == k))
    }

    /// Largest entry coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|e| e.iter().map(|(_, c)| c.magnitude()))
            .fold(0.0, f64::max)
    }

    pub fn format(&self, a: &GradedBasisAlgebra<S>) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = (0..self.cols)
                    .map(|j| a.format_coords(self.get(i, j)))
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}
