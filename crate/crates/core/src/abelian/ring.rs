//! Entry rings for dense matrices: plain scalars, or degree-0 elements of a
//! commutative algebra.

use std::fmt::Debug;
use std::marker::PhantomData;

use num_complex::Complex64;

use crate::algebra::{Algebra, AlgebraHandle};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarMode};
use crate::sparse::SparseVec;

pub trait Ring: Sync {
    type E: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn from_i64(&self, v: i64) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Result<Self::E>;
    fn star(&self, a: &Self::E) -> Result<Self::E>;
    fn inverse(&self, a: &Self::E) -> Result<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// Size of an entry; for algebra entries the largest coefficient.
    fn magnitude(&self, a: &Self::E) -> f64;
    fn scale_real(&self, a: &Self::E, f: f64) -> Self::E;
    fn mode(&self) -> ScalarMode;
    /// The entry as a complex number, when entries are plain scalars.
    fn to_complex(&self, _a: &Self::E) -> Option<Complex64> {
        None
    }
}

/// Scalars of type `S`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScalarRing<S>(PhantomData<S>);

impl<S> ScalarRing<S> {
    pub fn new() -> Self {
        Self(PhantomData)
    }
}

impl<S: Scalar> Ring for ScalarRing<S> {
    type E = S;

    fn zero(&self) -> S {
        S::zero()
    }
    fn one(&self) -> S {
        S::one()
    }
    fn from_i64(&self, v: i64) -> S {
        S::from_i64(v)
    }
    fn add(&self, a: &S, b: &S) -> S {
        a.add(b)
    }
    fn sub(&self, a: &S, b: &S) -> S {
        a.sub(b)
    }
    fn neg(&self, a: &S) -> S {
        a.neg()
    }
    fn mul(&self, a: &S, b: &S) -> Result<S> {
        Ok(a.mul(b))
    }
    fn star(&self, a: &S) -> Result<S> {
        Ok(a.conj())
    }
    fn inverse(&self, a: &S) -> Result<S> {
        a.inv().ok_or_else(|| Error::NotInvertible(format!("{a}")))
    }
    fn is_zero(&self, a: &S) -> bool {
        a.is_zero()
    }
    fn magnitude(&self, a: &S) -> f64 {
        a.magnitude()
    }
    fn scale_real(&self, a: &S, f: f64) -> S {
        a.mul(&S::from_gaussian(
            &num_rational::BigRational::from_float(f).unwrap_or_default(),
            &num_rational::BigRational::default(),
        ))
    }
    fn mode(&self) -> ScalarMode {
        S::MODE
    }
    fn to_complex(&self, a: &S) -> Option<Complex64> {
        Some(a.to_complex(&[]))
    }
}

/// Degree-0 elements of an algebra whose degree-0 part commutes.
#[derive(Clone, Debug)]
pub struct DegreeZeroRing<S: Scalar> {
    algebra: Algebra<S>,
}

impl<S: Scalar> DegreeZeroRing<S> {
    pub fn new(algebra: &Algebra<S>) -> Result<Self> {
        let zero = algebra.basis_in_degree(0);
        for &i in zero {
            for &j in zero {
                let (Some(ab), Some(ba)) =
                    (algebra.basis_product(i, j), algebra.basis_product(j, i))
                else {
                    continue;
                };
                if ab != ba {
                    return Err(Error::NonCommutativeEntries(format!(
                        "{}·{} ≠ {}·{}",
                        algebra.name_of(i),
                        algebra.name_of(j),
                        algebra.name_of(j),
                        algebra.name_of(i)
                    )));
                }
            }
        }
        Ok(Self {
            algebra: algebra.clone(),
        })
    }

    pub fn algebra(&self) -> &Algebra<S> {
        &self.algebra
    }
}

impl<S: Scalar> Ring for DegreeZeroRing<S> {
    type E = SparseVec<S>;

    fn zero(&self) -> Self::E {
        SparseVec::new()
    }
    fn one(&self) -> Self::E {
        self.algebra.unit_coords().clone()
    }
    fn from_i64(&self, v: i64) -> Self::E {
        self.algebra.unit_coords().scaled(&S::from_i64(v))
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a.add(b)
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a.sub(b)
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        a.neg()
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Result<Self::E> {
        self.algebra.mul_coords(a, b)
    }
    fn star(&self, a: &Self::E) -> Result<Self::E> {
        self.algebra.try_star(a).ok_or(Error::NoStar)
    }
    fn inverse(&self, a: &Self::E) -> Result<Self::E> {
        Ok(self.algebra.element(a.clone()).inverse()?.coords().clone())
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        a.is_zero()
    }
    fn magnitude(&self, a: &Self::E) -> f64 {
        a.iter().map(|(_, c)| c.magnitude()).fold(0.0, f64::max)
    }
    fn scale_real(&self, a: &Self::E, f: f64) -> Self::E {
        let s = ScalarRing::<S>::new().scale_real(&S::one(), f);
        a.scaled(&s)
    }
    fn mode(&self) -> ScalarMode {
        S::MODE
    }
}
