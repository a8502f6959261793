//! Graded tensor product of two truncated dgas.

use super::{koszul, signed, Algebra, AlgebraBuilder};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

/// `A ⊗ B` with Koszul-signed product, `d(a⊗b) = da⊗b + (−1)^{|a|} a⊗db`
/// and `(a⊗b)* = a*⊗b*`. The window is `D_A + D_B`; a product or
/// differential is out of window exactly when a factor's is.
pub fn tensor_dga<S: Scalar>(a: &Algebra<S>, b: &Algebra<S>) -> Result<Algebra<S>> {
    if a.irrational_generators() != b.irrational_generators()
        && !a.irrational_generators().is_empty()
        && !b.irrational_generators().is_empty()
    {
        return Err(Error::InvalidInput(
            "tensor factors declare different irrational generators".into(),
        ));
    }
    let max_degree = a.max_degree() + b.max_degree();
    let mut out = AlgebraBuilder::<S>::new(max_degree);
    out.set_truncation(if a.truncation() == b.truncation() {
        a.truncation()
    } else {
        super::Truncation::Strict
    });
    let (gens, binds) = if a.irrational_generators().is_empty() {
        (b.irrational_generators(), b.bindings())
    } else {
        (a.irrational_generators(), a.bindings())
    };
    out.set_irrational_generators(gens.to_vec(), binds.to_vec());

    let mut pairs: Vec<(usize, usize)> = (0..a.dim())
        .flat_map(|i| (0..b.dim()).map(move |j| (i, j)))
        .collect();
    pairs.sort_by_key(|&(i, j)| (a.degree_of(i) + b.degree_of(j), i, j));
    let mut index = vec![vec![0usize; b.dim()]; a.dim()];
    for &(i, j) in &pairs {
        index[i][j] = out.add_basis(
            format!("{}⊗{}", a.name_of(i), b.name_of(j)),
            a.degree_of(i) + b.degree_of(j),
        )?;
    }
    let tensor = |x: &SparseVec<S>, y: &SparseVec<S>| -> SparseVec<S> {
        let mut v = SparseVec::new();
        for (i, c) in x.iter() {
            for (j, e) in y.iter() {
                v.add_term(index[i][j], &c.mul(e));
            }
        }
        v
    };

    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            let left = a.product_entry(i, k);
            let right = b.product_entry(j, l);
            let (Some(lp), Some(rp)) = (left, right) else {
                continue;
            }; // a factor is zero
            match (lp, rp) {
                (Some(x), Some(y)) => {
                    let sign = signed::<S>(koszul(b.degree_of(j), a.degree_of(k)));
                    out.set_product(index[i][j], index[k][l], tensor(x, y).scaled(&sign));
                }
                _ => out.set_product_out_of_window(index[i][j], index[k][l]),
            }
        }
        let d = match (a.basis_differential(i), b.basis_differential(j)) {
            (Some(da), Some(db)) => {
                let mut v = tensor(da, &SparseVec::unit(j));
                v.add_scaled(
                    &tensor(&SparseVec::unit(i), db),
                    &signed::<S>(a.degree_of(i) % 2 == 1),
                );
                Some(v)
            }
            _ => None,
        };
        out.set_differential(index[i][j], d);
    }
    if let (Some(sa), Some(sb)) = (a.star_table(), b.star_table()) {
        let mut table = vec![(0usize, S::zero()); pairs.len()];
        for &(i, j) in &pairs {
            let (ti, ci) = &sa[i];
            let (tj, cj) = &sb[j];
            table[index[i][j]] = (index[*ti][*tj], ci.mul(cj));
        }
        out.set_star(Some(table));
    }
    out.set_unit(tensor(a.unit_coords(), b.unit_coords()));
    out.build()
}
