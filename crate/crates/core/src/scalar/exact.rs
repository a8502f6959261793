//! Exact scalars: finite sums `Σ c_v · exp(iπ·⟨v, θ⟩)` with `c_v` in a
//! cyclotomic field and `v` a rational coefficient vector over the declared
//! irrational generators. The phases `exp(iπθ_j)` are treated as
//! multiplicatively independent, so zero testing is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::cyclotomic::Cyclotomic;
use super::phase::{format_rational, trim, PhaseExponent, QExt};

#[derive(Clone, Debug, Default)]
pub struct Exact {
    terms: BTreeMap<Vec<BigRational>, Cyclotomic>,
}

impl Exact {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::gaussian(BigRational::one(), BigRational::zero())
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        let c = Cyclotomic::from_gaussian(re, im);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self { terms }
    }

    pub fn from_integer(k: i64) -> Self {
        Self::gaussian(
            BigRational::from_integer(BigInt::from(k)),
            BigRational::zero(),
        )
    }

    pub fn rational(r: BigRational) -> Self {
        Self::gaussian(r, BigRational::zero())
    }

    /// `exp(iπ·phase)`.
    pub fn phase(p: &PhaseExponent) -> Self {
        let r = p.rational_part();
        // exp(iπ a/b) = ζ_{2b}^a
        let b = r.denom().clone() * BigInt::from(2);
        let a = r.numer().clone();
        let n: u32 = b.try_into().expect("phase denominator too large");
        let k: i64 = a.try_into().expect("phase numerator too large");
        let c = Cyclotomic::root_power(n, k);
        let mut terms = BTreeMap::new();
        terms.insert(p.irrational_coeffs().to_vec(), c);
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Vec::new()).is_some_and(|c| c.is_one())
    }

    fn insert_term(
        terms: &mut BTreeMap<Vec<BigRational>, Cyclotomic>,
        v: Vec<BigRational>,
        c: Cyclotomic,
    ) {
        match terms.entry(v) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (v, c) in &other.terms {
            Self::insert_term(&mut terms, v.clone(), c.clone());
        }
        Self { terms }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(v, c)| (v.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (va, ca) in &self.terms {
            for (vb, cb) in &other.terms {
                let v = add_vec(va, vb);
                Self::insert_term(&mut terms, v, ca.mul(cb));
            }
        }
        Self { terms }
    }

    pub fn conj(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (v, c) in &self.terms {
            let nv: Vec<BigRational> = v.iter().map(|x| -x).collect();
            Self::insert_term(&mut terms, nv, c.conj());
        }
        Self { terms }
    }

    /// Inverse when the element is a unit: a single phase monomial with a
    /// nonzero cyclotomic coefficient.
    pub fn inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (v, c) = self.terms.iter().next().unwrap();
        let nv: Vec<BigRational> = v.iter().map(|x| -x).collect();
        let mut terms = BTreeMap::new();
        terms.insert(nv, c.inv()?);
        Some(Self { terms })
    }

    pub fn to_complex(&self, bindings: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(v, c)| {
                let ph = QExt::new(BigRational::zero(), v.clone()).to_f64(bindings);
                c.to_complex() * Complex64::from_polar(1.0, std::f64::consts::PI * ph)
            })
            .sum()
    }

    /// Real and imaginary parts when the element lies in `Q(i)`.
    pub fn as_gaussian(&self) -> Option<(BigRational, BigRational)> {
        if self.terms.is_empty() {
            return Some((BigRational::zero(), BigRational::zero()));
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (v, c) = self.terms.iter().next().unwrap();
        if !v.is_empty() {
            return None;
        }
        let c = c.canonical();
        if c.order() == 4 {
            Some((c.coeffs()[0].clone(), c.coeffs()[1].clone()))
        } else {
            None
        }
    }

    /// Canonical decomposition into `(re, im, phase)` terms whose sum of
    /// `(re + i·im)·exp(iπ·phase)` is this element.
    pub fn to_terms(&self) -> Vec<(BigRational, BigRational, PhaseExponent)> {
        let mut out = Vec::new();
        for (v, c) in &self.terms {
            let c = &c.canonical();
            let base = QExt::new(BigRational::zero(), v.clone());
            if c.order() == 4 {
                out.push((
                    c.coeffs()[0].clone(),
                    c.coeffs()[1].clone(),
                    PhaseExponent::new(base),
                ));
                continue;
            }
            let n = c.order() as i64;
            for (k, ck) in c.coeffs().iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                let r = BigRational::new(BigInt::from(2 * k as i64), BigInt::from(n));
                let ph = PhaseExponent::new(base.add(&QExt::rational(r)));
                out.push((ck.clone(), BigRational::zero(), ph));
            }
        }
        out
    }

    pub fn from_terms(terms: &[(BigRational, BigRational, PhaseExponent)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, (re, im, ph)| {
            acc.add(&Self::gaussian(re.clone(), im.clone()).mul(&Self::phase(ph)))
        })
    }

    /// Largest cyclotomic order among the terms (4 for Gaussian rationals).
    pub fn order(&self) -> u32 {
        self.terms.values().map(|c| c.order()).max().unwrap_or(4)
    }
}

fn add_vec(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    let mut out: Vec<_> = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
        .collect();
    trim(&mut out);
    out
}

impl PartialEq for Exact {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some((re, im)) = self.as_gaussian() {
            return match (re.is_zero(), im.is_zero()) {
                (_, true) => write!(f, "{}", format_rational(&re)),
                (true, false) => write!(f, "{}i", format_rational(&im)),
                _ => write!(f, "({}+{}i)", format_rational(&re), format_rational(&im)),
            };
        }
        let parts: Vec<String> = self
            .to_terms()
            .into_iter()
            .map(|(re, im, ph)| {
                let c = if im.is_zero() {
                    format_rational(&re)
                } else {
                    format!("({}+{}i)", format_rational(&re), format_rational(&im))
                };
                if ph.is_zero() {
                    c
                } else {
                    format!("{}·{}", c, ph)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
