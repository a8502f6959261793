//! Sparse row-echelon machinery over a `Scalar` ring.
//!
//! Exact scalars are not always a field (phase polynomials with several
//! irrational monomials have no inverse), so elimination is fraction-free
//! whenever a pivot is not a unit and normalizes pivots to one otherwise.

use std::collections::BTreeMap;

use crate::scalar::Scalar;
use crate::sparse::SparseVec;

/// Incrementally built row space in echelon form.
#[derive(Clone, Debug)]
pub struct Echelon<S: Scalar> {
    ncols: usize,
    rows: Vec<SparseVec<S>>,
    pivots: BTreeMap<usize, usize>,
}

impl<S: Scalar> Echelon<S> {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Eliminates every pivot column from `v`.
    pub fn reduce(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut v = v.clone();
        let mut cursor = 0usize;
        loop {
            let next = v
                .iter()
                .map(|(i, _)| i)
                .find(|&i| i >= cursor && self.pivots.contains_key(&i));
            let Some(col) = next else { break };
            let row = &self.rows[self.pivots[&col]];
            let coeff = v.get(col).unwrap().clone();
            let pivot = row.get(col).unwrap();
            if pivot.is_one() {
                v.add_scaled(row, &coeff.neg());
            } else {
                let mut scaled = v.scaled(pivot);
                scaled.add_scaled(row, &coeff.neg());
                v = scaled;
            }
            cursor = col + 1;
        }
        v
    }

    /// Adds a row; returns true when it enlarged the row space.
    pub fn insert(&mut self, v: &SparseVec<S>) -> bool {
        let mut r = self.reduce(v);
        let Some((col, lead)) = r.leading().map(|(c, s)| (c, s.clone())) else {
            return false;
        };
        if let Some(inv) = lead.inv() {
            r = r.scaled(&inv);
        }
        self.pivots.insert(col, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn contains(&self, v: &SparseVec<S>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Rows in fully reduced form, ordered by pivot column. Each row has its
    /// pivot as the only nonzero entry among pivot columns.
    pub fn reduced_rows(&self) -> Vec<(usize, SparseVec<S>)> {
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        let mut rows: Vec<SparseVec<S>> = cols
            .iter()
            .map(|c| self.rows[self.pivots[c]].clone())
            .collect();
        // back-substitution, last pivot first
        for k in (0..cols.len()).rev() {
            let (pc, prow) = (cols[k], rows[k].clone());
            let pivot = prow.get(pc).unwrap().clone();
            for row in rows.iter_mut().take(k) {
                if let Some(c) = row.get(pc).cloned() {
                    if pivot.is_one() {
                        row.add_scaled(&prow, &c.neg());
                    } else {
                        let mut s = row.scaled(&pivot);
                        s.add_scaled(&prow, &c.neg());
                        *row = s;
                    }
                }
            }
        }
        for (k, row) in rows.iter_mut().enumerate() {
            if let Some(inv) = row.get(cols[k]).and_then(|p| p.inv()) {
                *row = row.scaled(&inv);
            }
        }
        cols.into_iter().zip(rows).collect()
    }

    /// Basis of `{x : row·x = 0 for every row}`; one vector per free column,
    /// normalized to have coefficient one at its free column when possible.
    pub fn kernel(&self) -> Vec<SparseVec<S>> {
        let reduced = self.reduced_rows();
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let involved: Vec<&(usize, SparseVec<S>)> = reduced
                .iter()
                .filter(|(_, row)| row.get(f).is_some())
                .collect();
            // x_f = Π p_i, x_{c_i} = -a_{i,f} · Π_{j≠i} p_j
            let pivots: Vec<S> = involved
                .iter()
                .map(|(c, row)| row.get(*c).unwrap().clone())
                .collect();
            let mut v = SparseVec::new();
            let prod_all = pivots.iter().fold(S::one(), |acc, p| acc.mul(p));
            v.add_term(f, &prod_all);
            for (k, (c, row)) in involved.iter().enumerate() {
                let others = pivots
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .fold(S::one(), |acc, (_, p)| acc.mul(p));
                v.add_term(*c, &row.get(f).unwrap().mul(&others).neg());
            }
            if let Some(inv) = v.get(f).and_then(|x| x.inv()) {
                v = v.scaled(&inv);
            }
            out.push(v);
        }
        out
    }
}

/// Rank of a family of sparse vectors.
pub fn rank_of<S: Scalar>(ncols: usize, vectors: &[SparseVec<S>]) -> usize {
    let mut e = Echelon::new(ncols);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// True when both families span the same subspace.
pub fn same_span<S: Scalar>(ncols: usize, a: &[SparseVec<S>], b: &[SparseVec<S>]) -> bool {
    let ra = rank_of(ncols, a);
    let rb = rank_of(ncols, b);
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    ra == rb && rank_of(ncols, &all) == ra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn v(pairs: &[(usize, i64)]) -> SparseVec<Exact> {
        SparseVec::from_pairs(pairs.iter().map(|&(i, c)| (i, Exact::from_integer(c))))
    }

    #[test]
    fn kernel_of_small_system() {
        let mut e = Echelon::new(3);
        e.insert(&v(&[(0, 1), (1, 1), (2, 1)]));
        e.insert(&v(&[(1, 1), (2, -1)]));
        e.insert(&v(&[(0, 2), (1, 3), (2, 1)]));
        assert_eq!(e.rank(), 2);
        let k = e.kernel();
        assert_eq!(k.len(), 1);
        // (-2, 1, 1)
        assert_eq!(k[0], v(&[(0, -2), (1, 1), (2, 1)]));
    }

    #[test]
    fn span_comparison() {
        let a = vec![v(&[(0, 1), (1, 1)]), v(&[(0, 1), (1, -1)])];
        let b = vec![v(&[(0, 1)]), v(&[(1, 3)])];
        assert!(same_span(2, &a, &b));
        assert!(!same_span(2, &a, &b[..1]));
    }
}
