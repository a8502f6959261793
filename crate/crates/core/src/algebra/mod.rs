//! Truncated graded algebras with differential and star, given by a graded
//! basis and structure constants.
//!
//! Products, differentials and stars whose result would leave the truncation
//! window are recorded as *out of window* rather than silently dropped; the
//! algebra's [`Truncation`] policy decides whether touching them is an error.

mod axioms;
mod builders;
mod center;
pub mod io;
mod tensor;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

pub use axioms::{check_dga_axioms, is_graded_commutative, AxiomCheck, AxiomReport};
pub use builders::{
    build_exterior_algebra, build_identified_points, build_truncated_polynomial,
    build_two_point_space,
};
pub use center::{center_algebra, graded_center, graded_center_with, CenterAlgebra, CenterBasis};
pub use tensor::tensor_dga;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Truncation {
    /// Touching an out-of-window result is an error.
    #[default]
    Strict,
    /// Out-of-window results are projected away.
    Drop,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisSymbol {
    pub name: String,
    pub degree: usize,
}

/// Sign `(-1)^{p·q}`.
pub(crate) fn koszul(p: usize, q: usize) -> bool {
    (p * q) % 2 == 1
}

pub(crate) fn signed<S: Scalar>(negative: bool) -> S {
    if negative {
        S::one().neg()
    } else {
        S::one()
    }
}

#[derive(Clone, Debug)]
pub struct GradedBasisAlgebra<S: Scalar> {
    max_degree: usize,
    basis: Vec<BasisSymbol>,
    by_degree: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    /// Missing key: product is zero. `None`: product leaves the window.
    products: HashMap<(usize, usize), Option<SparseVec<S>>>,
    differential: Vec<Option<SparseVec<S>>>,
    star: Option<Vec<(usize, S)>>,
    unit: SparseVec<S>,
    truncation: Truncation,
    irrational_generators: Vec<String>,
    bindings: Vec<f64>,
}

/// Mutable staging area for a [`GradedBasisAlgebra`]; `build` validates.
#[derive(Clone, Debug)]
pub struct AlgebraBuilder<S: Scalar> {
    inner: GradedBasisAlgebra<S>,
}

impl<S: Scalar> AlgebraBuilder<S> {
    pub fn new(max_degree: usize) -> Self {
        Self {
            inner: GradedBasisAlgebra {
                max_degree,
                basis: Vec::new(),
                by_degree: vec![Vec::new(); max_degree + 1],
                index: HashMap::new(),
                products: HashMap::new(),
                differential: Vec::new(),
                star: None,
                unit: SparseVec::new(),
                truncation: Truncation::Strict,
                irrational_generators: Vec::new(),
                bindings: Vec::new(),
            },
        }
    }

    pub fn add_basis(&mut self, name: impl Into<String>, degree: usize) -> Result<usize> {
        let name = name.into();
        if degree > self.inner.max_degree {
            return Err(Error::InvalidInput(format!(
                "basis element {name} has degree {degree} above max_degree"
            )));
        }
        if self.inner.index.contains_key(&name) {
            return Err(Error::InvalidInput(format!("duplicate basis name {name}")));
        }
        let i = self.inner.basis.len();
        self.inner.index.insert(name.clone(), i);
        self.inner.basis.push(BasisSymbol { name, degree });
        self.inner.by_degree[degree].push(i);
        self.inner.differential.push(Some(SparseVec::new()));
        Ok(i)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.inner.index.get(name).copied()
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.inner.basis[i].degree
    }

    pub fn set_product(&mut self, i: usize, j: usize, result: SparseVec<S>) {
        if result.is_zero() {
            self.inner.products.remove(&(i, j));
        } else {
            self.inner.products.insert((i, j), Some(result));
        }
    }

    pub fn set_product_out_of_window(&mut self, i: usize, j: usize) {
        self.inner.products.insert((i, j), None);
    }

    pub fn set_differential(&mut self, i: usize, result: Option<SparseVec<S>>) {
        self.inner.differential[i] = result;
    }

    pub fn set_star(&mut self, star: Option<Vec<(usize, S)>>) {
        self.inner.star = star;
    }

    pub fn set_unit(&mut self, unit: SparseVec<S>) {
        self.inner.unit = unit;
    }

    pub fn set_truncation(&mut self, t: Truncation) {
        self.inner.truncation = t;
    }

    pub fn set_irrational_generators(&mut self, names: Vec<String>, bindings: Vec<f64>) {
        self.inner.irrational_generators = names;
        self.inner.bindings = bindings;
    }

    pub fn build(self) -> Result<Arc<GradedBasisAlgebra<S>>> {
        let a = self.inner;
        if a.basis.is_empty() {
            return Err(Error::InvalidInput("algebra has an empty basis".into()));
        }
        let deg = |i: usize| a.basis[i].degree;
        for (&(i, j), r) in &a.products {
            if let Some(r) = r {
                if let Some(bad) = r.indices().find(|&t| deg(t) != deg(i) + deg(j)) {
                    return Err(Error::InvalidInput(format!(
                        "product {}·{} has a term {} of the wrong degree",
                        a.basis[i].name, a.basis[j].name, a.basis[bad].name
                    )));
                }
            }
        }
        for (i, d) in a.differential.iter().enumerate() {
            if let Some(d) = d {
                if let Some(bad) = d.indices().find(|&t| deg(t) != deg(i) + 1) {
                    return Err(Error::InvalidInput(format!(
                        "d({}) has a term {} of the wrong degree",
                        a.basis[i].name, a.basis[bad].name
                    )));
                }
            }
        }
        if let Some(star) = &a.star {
            if star.len() != a.basis.len() {
                return Err(Error::InvalidInput(
                    "star table must cover every basis element".into(),
                ));
            }
            for (i, (j, _)) in star.iter().enumerate() {
                if *j >= a.basis.len() || deg(*j) != deg(i) {
                    return Err(Error::InvalidInput(format!(
                        "star of {} changes degree",
                        a.basis[i].name
                    )));
                }
            }
        }
        if a.unit.is_zero() || a.unit.indices().any(|t| deg(t) != 0) {
            return Err(Error::InvalidInput(
                "unit must be a nonzero degree-0 element".into(),
            ));
        }
        Ok(Arc::new(a))
    }
}

impl<S: Scalar> GradedBasisAlgebra<S> {
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisSymbol] {
        &self.basis
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.basis[i].degree
    }

    pub fn name_of(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Basis indices of the given degree (empty above the window).
    pub fn basis_in_degree(&self, k: usize) -> &[usize] {
        self.by_degree.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn dims(&self) -> Vec<usize> {
        self.by_degree.iter().map(|v| v.len()).collect()
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn has_star(&self) -> bool {
        self.star.is_some()
    }

    pub fn star_table(&self) -> Option<&[(usize, S)]> {
        self.star.as_deref()
    }

    pub fn unit_coords(&self) -> &SparseVec<S> {
        &self.unit
    }

    pub fn irrational_generators(&self) -> &[String] {
        &self.irrational_generators
    }

    pub fn bindings(&self) -> &[f64] {
        &self.bindings
    }

    /// Raw structure constant: `Some(None)` marks an out-of-window product.
    pub fn product_entry(&self, i: usize, j: usize) -> Option<&Option<SparseVec<S>>> {
        self.products.get(&(i, j))
    }

    /// Known product of two basis elements, `None` when out of window.
    pub fn basis_product(&self, i: usize, j: usize) -> Option<SparseVec<S>> {
        match self.products.get(&(i, j)) {
            None => Some(SparseVec::new()),
            Some(r) => r.clone(),
        }
    }

    pub(crate) fn basis_product_ref(
        &self,
        i: usize,
        j: usize,
    ) -> std::result::Result<Option<&SparseVec<S>>, ()> {
        match self.products.get(&(i, j)) {
            None => Ok(None),
            Some(Some(r)) => Ok(Some(r)),
            Some(None) => Err(()),
        }
    }

    pub fn basis_differential(&self, i: usize) -> Option<&SparseVec<S>> {
        self.differential[i].as_ref()
    }

    pub fn nonzero_products(
        &self,
    ) -> impl Iterator<Item = (&(usize, usize), &Option<SparseVec<S>>)> {
        self.products.iter()
    }

    /// Product of coordinate vectors using only in-window structure
    /// constants; `None` if a needed constant is out of window.
    pub fn try_mul(&self, a: &SparseVec<S>, b: &SparseVec<S>) -> Option<SparseVec<S>> {
        let mut out = SparseVec::new();
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                match self.basis_product_ref(i, j) {
                    Ok(None) => {}
                    Ok(Some(r)) => out.add_scaled(r, &ca.mul(cb)),
                    Err(()) => return None,
                }
            }
        }
        Some(out)
    }

    pub fn try_d(&self, a: &SparseVec<S>) -> Option<SparseVec<S>> {
        let mut out = SparseVec::new();
        for (i, c) in a.iter() {
            out.add_scaled(self.differential[i].as_ref()?, c);
        }
        Some(out)
    }

    pub fn try_star(&self, a: &SparseVec<S>) -> Option<SparseVec<S>> {
        let star = self.star.as_ref()?;
        let mut out = SparseVec::new();
        for (i, c) in a.iter() {
            let (j, s) = &star[i];
            out.add_term(*j, &c.conj().mul(s));
        }
        Some(out)
    }

    /// In-window part of a product, honoring the truncation policy.
    pub fn mul_coords(&self, a: &SparseVec<S>, b: &SparseVec<S>) -> Result<SparseVec<S>> {
        let mut out = SparseVec::new();
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                match self.basis_product_ref(i, j) {
                    Ok(None) => {}
                    Ok(Some(r)) => out.add_scaled(r, &ca.mul(cb)),
                    Err(()) => {
                        if self.truncation == Truncation::Strict {
                            return Err(Error::OutOfWindow(format!(
                                "{}·{}",
                                self.basis[i].name, self.basis[j].name
                            )));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn d_coords(&self, a: &SparseVec<S>) -> Result<SparseVec<S>> {
        let mut out = SparseVec::new();
        for (i, c) in a.iter() {
            match &self.differential[i] {
                Some(r) => out.add_scaled(r, c),
                None => {
                    if self.truncation == Truncation::Strict {
                        return Err(Error::OutOfWindow(format!("d({})", self.basis[i].name)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Graded commutator of coordinate vectors, `None` if out of window.
    pub fn try_commutator(&self, a: &SparseVec<S>, b: &SparseVec<S>) -> Option<SparseVec<S>> {
        let mut out = SparseVec::new();
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                let c = ca.mul(cb);
                let neg = koszul(self.degree_of(i), self.degree_of(j));
                match self.basis_product_ref(i, j) {
                    Ok(None) => {}
                    Ok(Some(r)) => out.add_scaled(r, &c),
                    Err(()) => return None,
                }
                match self.basis_product_ref(j, i) {
                    Ok(None) => {}
                    Ok(Some(r)) => out.add_scaled(r, &c.mul(&signed::<S>(!neg))),
                    Err(()) => return None,
                }
            }
        }
        Some(out)
    }

    pub fn format_coords(&self, v: &SparseVec<S>) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.iter()
            .map(|(i, c)| format!("{}·{}", c, self.basis[i].name))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// An element of a graded basis algebra: sparse coordinates plus a shared
/// reference to the owner.
#[derive(Clone)]
pub struct AlgebraElement<S: Scalar> {
    owner: Arc<GradedBasisAlgebra<S>>,
    coords: SparseVec<S>,
}

impl<S: Scalar> fmt::Debug for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.owner.format_coords(&self.coords))
    }
}

impl<S: Scalar> fmt::Display for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.owner.format_coords(&self.coords))
    }
}

impl<S: Scalar> PartialEq for AlgebraElement<S> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.owner, &other.owner) && self.coords.sub(&other.coords).is_zero()
    }
}

pub type Algebra<S> = Arc<GradedBasisAlgebra<S>>;

/// Constructors that need the shared handle.
pub trait AlgebraHandle<S: Scalar> {
    fn element(&self, coords: SparseVec<S>) -> AlgebraElement<S>;
    fn zero_element(&self) -> AlgebraElement<S>;
    fn one(&self) -> AlgebraElement<S>;
    fn basis_element(&self, i: usize) -> AlgebraElement<S>;
    fn named(&self, name: &str) -> Result<AlgebraElement<S>>;
    fn scalar(&self, s: S) -> AlgebraElement<S>;
}

impl<S: Scalar> AlgebraHandle<S> for Algebra<S> {
    fn element(&self, coords: SparseVec<S>) -> AlgebraElement<S> {
        AlgebraElement {
            owner: self.clone(),
            coords,
        }
    }
    fn zero_element(&self) -> AlgebraElement<S> {
        self.element(SparseVec::new())
    }
    fn one(&self) -> AlgebraElement<S> {
        self.element(self.unit.clone())
    }
    fn basis_element(&self, i: usize) -> AlgebraElement<S> {
        self.element(SparseVec::unit(i))
    }
    fn named(&self, name: &str) -> Result<AlgebraElement<S>> {
        let i = self
            .index_of(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown basis element {name}")))?;
        Ok(self.basis_element(i))
    }
    fn scalar(&self, s: S) -> AlgebraElement<S> {
        self.element(self.unit.scaled(&s))
    }
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn owner(&self) -> &Algebra<S> {
        &self.owner
    }

    pub fn coords(&self) -> &SparseVec<S> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    fn same_owner(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.owner, &other.owner) {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    fn with(&self, coords: SparseVec<S>) -> Self {
        Self {
            owner: self.owner.clone(),
            coords,
        }
    }

    /// Degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.coords.indices().map(|i| self.owner.degree_of(i));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous(&self, k: usize) -> Self {
        let mut c = self.coords.clone();
        c.retain(|i| self.owner.degree_of(i) == k);
        self.with(c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(self.with(self.coords.add(&other.coords)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(self.with(self.coords.sub(&other.coords)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.coords.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.with(self.coords.scaled(s))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(self.with(self.owner.mul_coords(&self.coords, &other.coords)?))
    }

    pub fn d(&self) -> Result<Self> {
        Ok(self.with(self.owner.d_coords(&self.coords)?))
    }

    pub fn star(&self) -> Result<Self> {
        self.owner
            .try_star(&self.coords)
            .map(|c| self.with(c))
            .ok_or(Error::NoStar)
    }

    /// `[α, ε] = αε − (−1)^{|α||ε|} εα`, extended bilinearly.
    pub fn graded_commutator(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        let mut out = SparseVec::new();
        for (i, ca) in self.coords.iter() {
            for (j, cb) in other.coords.iter() {
                let a = self.owner.basis_element(i);
                let b = self.owner.basis_element(j);
                let ab = a.mul(&b)?;
                let ba = b.mul(&a)?;
                let neg = koszul(self.owner.degree_of(i), self.owner.degree_of(j));
                let term = ab.coords.add(&ba.coords.scaled(&signed::<S>(!neg)));
                out.add_scaled(&term, &ca.mul(cb));
            }
        }
        Ok(self.with(out))
    }

    /// Multiplicative inverse inside the degree-0 part, found by solving the
    /// linear system `x·self = 1`.
    pub fn inverse(&self) -> Result<Self> {
        if self.degree() != Some(0) {
            return Err(Error::NotInvertible(format!(
                "{self} is not a homogeneous degree-0 element"
            )));
        }
        let a = &self.owner;
        let zero_basis = a.basis_in_degree(0);
        let local: HashMap<usize, usize> = zero_basis
            .iter()
            .enumerate()
            .map(|(k, &i)| (i, k))
            .collect();
        let n = zero_basis.len();
        // columns: coefficients of x; rows: degree-0 targets; augmented column n holds -1.
        let mut rows: HashMap<usize, SparseVec<S>> = HashMap::new();
        for (k, &i) in zero_basis.iter().enumerate() {
            let prod = a.mul_coords(&SparseVec::unit(i), &self.coords)?;
            for (t, c) in prod.iter() {
                rows.entry(local[&t]).or_default().add_term(k, c);
            }
        }
        for (t, c) in a.unit.iter() {
            rows.entry(local[&t]).or_default().add_term(n, &c.neg());
        }
        let mut ech = crate::linalg::Echelon::new(n + 1);
        let mut keys: Vec<_> = rows.keys().copied().collect();
        keys.sort_unstable();
        for k in keys {
            ech.insert(&rows[&k]);
        }
        let kernel = ech.kernel();
        let sol = kernel
            .iter()
            .find(|v| v.get(n).is_some_and(|c| c.is_one()))
            .ok_or_else(|| Error::NotInvertible(format!("{self}")))?;
        let mut coords = SparseVec::new();
        for (k, c) in sol.iter() {
            if k < n {
                coords.add_term(zero_basis[k], c);
            }
        }
        let x = self.with(coords);
        // unique only up to the kernel of left multiplication; verify both sides
        if x.mul(self)? == self.owner.one() && self.mul(&x)? == self.owner.one() {
            Ok(x)
        } else {
            Err(Error::NotInvertible(format!("{self}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn exterior_products_and_commutator() {
        let a = build_exterior_algebra::<Exact>(2).unwrap();
        let e1 = a.named("η1").unwrap();
        let e2 = a.named("η2").unwrap();
        let e12 = a.named("η1η2").unwrap();
        assert_eq!(e1.mul(&e2).unwrap(), e12);
        assert_eq!(e2.mul(&e1).unwrap(), e12.neg());
        assert!(e1.graded_commutator(&e2).unwrap().is_zero());
        let one = a.one();
        assert_eq!(one.mul(&e12).unwrap(), e12);
        assert!(one.graded_commutator(&e1).unwrap().is_zero());
    }

    #[test]
    fn owner_mismatch() {
        let a = build_exterior_algebra::<Exact>(1).unwrap();
        let b = build_exterior_algebra::<Exact>(1).unwrap();
        assert_eq!(a.one().mul(&b.one()).unwrap_err(), Error::OwnerMismatch);
    }

    #[test]
    fn strict_window_errors_and_drop_projects() {
        let a = build_two_point_space::<Exact>(1).unwrap();
        let b = a.named("E12_1").unwrap();
        let c = a.named("E21_1").unwrap();
        assert!(matches!(b.mul(&c), Err(Error::OutOfWindow(_))));
        assert!(matches!(b.d(), Err(Error::OutOfWindow(_))));
        let mut bld = io::to_builder(&a);
        bld.set_truncation(Truncation::Drop);
        let a2 = bld.build().unwrap();
        let b2 = a2.named("E12_1").unwrap();
        let c2 = a2.named("E21_1").unwrap();
        assert!(b2.mul(&c2).unwrap().is_zero());
    }

    #[test]
    fn inverse_in_truncated_polynomials() {
        let a = build_truncated_polynomial::<Exact>(3).unwrap();
        let x = a.named("x").unwrap();
        let u = a.one().add(&x).unwrap();
        let inv = u.inverse().unwrap();
        assert_eq!(inv.mul(&u).unwrap(), a.one());
        assert!(x.inverse().is_err());
    }
}
