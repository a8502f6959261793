//! Graded center by a per-degree commutant solve.

use rayon::prelude::*;
use std::collections::BTreeMap;

use super::{Algebra, AlgebraBuilder, AlgebraElement, AlgebraHandle};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Clone, Debug)]
pub struct CenterBasis<S: Scalar> {
    /// Spanning, linearly independent central elements per degree.
    pub per_degree: Vec<Vec<AlgebraElement<S>>>,
    /// Whether every product of a degree-k candidate with a generator of
    /// degree ≤ 1 lies in the window. When false the degree-k answer may
    /// contain elements that fail to commute with something just outside.
    pub complete: Vec<bool>,
}

impl<S: Scalar> CenterBasis<S> {
    pub fn dims(&self) -> Vec<usize> {
        self.per_degree.iter().map(|v| v.len()).collect()
    }

    pub fn all(&self) -> impl Iterator<Item = &AlgebraElement<S>> {
        self.per_degree.iter().flatten()
    }
}

/// Graded center using every basis element as a commutation test.
pub fn graded_center<S: Scalar>(a: &Algebra<S>) -> CenterBasis<S> {
    graded_center_with(a, None, None)
}

/// Graded center commuting against `generators` (all basis elements when
/// `None`), optionally restricted to candidate basis elements.
pub fn graded_center_with<S: Scalar>(
    a: &Algebra<S>,
    generators: Option<&[usize]>,
    candidates: Option<&[usize]>,
) -> CenterBasis<S> {
    let all: Vec<usize> = (0..a.dim()).collect();
    let gens = generators.unwrap_or(&all);
    let mut per_degree = Vec::new();
    let mut complete = Vec::new();
    for k in 0..=a.max_degree() {
        let cand: Vec<usize> = a
            .basis_in_degree(k)
            .iter()
            .copied()
            .filter(|i| candidates.is_none_or(|c| c.contains(i)))
            .collect();
        let (basis, full) = center_in_degree(a, &cand, gens);
        per_degree.push(basis);
        complete.push(full);
    }
    CenterBasis {
        per_degree,
        complete,
    }
}

fn center_in_degree<S: Scalar>(
    a: &Algebra<S>,
    cand: &[usize],
    gens: &[usize],
) -> (Vec<AlgebraElement<S>>, bool) {
    let mut full = true;
    // rows[(g, target)] = Σ_local coefficient·x_local
    let blocks: Vec<(BTreeMap<usize, SparseVec<S>>, bool)> = gens
        .par_iter()
        .map(|&g| {
            let mut rows: BTreeMap<usize, SparseVec<S>> = BTreeMap::new();
            let mut ok = true;
            let dg = a.degree_of(g);
            for (local, &i) in cand.iter().enumerate() {
                let neg = super::koszul(a.degree_of(i), dg);
                let left = a.basis_product(i, g);
                let right = a.basis_product(g, i);
                if left.is_none() || right.is_none() {
                    ok &= dg > 1;
                }
                if let Some(l) = left {
                    for (t, c) in l.iter() {
                        rows.entry(t).or_default().add_term(local, c);
                    }
                }
                if let Some(r) = right {
                    let s = super::signed::<S>(!neg);
                    for (t, c) in r.iter() {
                        rows.entry(t).or_default().add_term(local, &c.mul(&s));
                    }
                }
            }
            (rows, ok)
        })
        .collect();
    let mut ech = Echelon::new(cand.len());
    for (rows, ok) in blocks {
        full &= ok;
        for row in rows.values() {
            if !row.is_zero() {
                ech.insert(row);
            }
        }
    }
    let basis = ech
        .kernel()
        .into_iter()
        .map(|v| a.element(v.map_indices(|l| cand[l])))
        .collect();
    (basis, full)
}

/// The graded center as an algebra in its own right, together with the
/// embedding of its basis into the ambient algebra.
#[derive(Clone, Debug)]
pub struct CenterAlgebra<S: Scalar> {
    pub algebra: Algebra<S>,
    pub ambient: Algebra<S>,
    /// Ambient coordinates of each center basis element.
    pub embedding: Vec<SparseVec<S>>,
    /// Ambient index carrying the pivot of each center basis element.
    lead: Vec<usize>,
}

impl<S: Scalar> CenterAlgebra<S> {
    /// Center coordinates of an ambient vector, or `None` if it is not in
    /// the span of the center basis.
    pub fn project(&self, v: &SparseVec<S>) -> Option<SparseVec<S>> {
        project(&self.embedding, &self.lead, v)
    }

    pub fn embed(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut out = SparseVec::new();
        for (k, c) in v.iter() {
            out.add_scaled(&self.embedding[k], c);
        }
        out
    }
}

fn project<S: Scalar>(
    embedding: &[SparseVec<S>],
    lead: &[usize],
    v: &SparseVec<S>,
) -> Option<SparseVec<S>> {
    let mut out = SparseVec::new();
    let mut rest = v.clone();
    for (k, (emb, &l)) in embedding.iter().zip(lead).enumerate() {
        if let Some(c) = rest.get(l).cloned() {
            let coeff = c.mul(&emb.get(l)?.inv()?);
            rest.add_scaled(emb, &coeff.neg());
            out.add_term(k, &coeff);
        }
    }
    rest.is_zero().then_some(out)
}

/// Builds the center algebra; fails if a product or differential of center
/// elements leaves the center span (possible only at the window edge).
pub fn center_algebra<S: Scalar>(a: &Algebra<S>, z: &CenterBasis<S>) -> Result<CenterAlgebra<S>> {
    let mut b = AlgebraBuilder::<S>::new(a.max_degree());
    b.set_truncation(a.truncation());
    b.set_irrational_generators(a.irrational_generators().to_vec(), a.bindings().to_vec());
    let mut embedding = Vec::new();
    let mut lead = Vec::new();
    for (k, elems) in z.per_degree.iter().enumerate() {
        for (j, e) in elems.iter().enumerate() {
            b.add_basis(format!("z{k}_{j}"), k)?;
            // the kernel solve leaves each vector with a private free column;
            // the largest index is untouched by the other vectors
            let l = e
                .coords()
                .indices()
                .last()
                .ok_or_else(|| Error::InvalidInput("zero center element".into()))?;
            embedding.push(e.coords().clone());
            lead.push(l);
        }
    }
    let proj = |v: &SparseVec<S>| project(&embedding, &lead, v);
    for (k, e) in embedding.iter().enumerate() {
        if proj(e) != Some(SparseVec::unit(k)) {
            return Err(Error::InvalidInput(
                "center basis is not in echelon form".into(),
            ));
        }
    }
    let m = embedding.len();
    for i in 0..m {
        for j in 0..m {
            match a.try_mul(&embedding[i], &embedding[j]) {
                None => b.set_product_out_of_window(i, j),
                Some(p) => {
                    let c = proj(&p).ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "product of center elements z{i}·z{j} leaves the center"
                        ))
                    })?;
                    b.set_product(i, j, c);
                }
            }
        }
        let d = match a.try_d(&embedding[i]) {
            None => None,
            Some(d) => Some(proj(&d).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "differential of center element {i} leaves the center"
                ))
            })?),
        };
        b.set_differential(i, d);
    }
    let unit =
        proj(a.unit_coords()).ok_or_else(|| Error::InvalidInput("unit is not central".into()))?;
    b.set_unit(unit);
    if a.has_star() {
        let mut star = Vec::new();
        for e in &embedding {
            match a.try_star(e).and_then(|s| proj(&s)) {
                Some(p) if p.len() == 1 => {
                    let (t, c) = p.leading().unwrap();
                    star.push((t, c.clone()));
                }
                _ => {
                    star.clear();
                    break;
                }
            }
        }
        if star.len() == m {
            b.set_star(Some(star));
        }
    }
    Ok(CenterAlgebra {
        algebra: b.build()?,
        ambient: a.clone(),
        embedding,
        lead,
    })
}
