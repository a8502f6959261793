//! Scalar fields used as coefficients: exact (cyclotomic phases over the
//! Gaussian rationals) and numeric (double-precision complex).

pub mod cyclotomic;
pub mod exact;
pub mod phase;

use std::fmt::{Debug, Display};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub use exact::Exact;
pub use phase::{format_rational, parse_rational, PhaseExponent, QExt};

/// Global zero tolerance for numeric mode.
pub const NUMERIC_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Numeric,
}

impl Display for ScalarMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarMode::Exact => write!(f, "exact"),
            ScalarMode::Numeric => write!(f, "numeric"),
        }
    }
}

/// A real number as it appears in description files: rational text in exact
/// mode, a JSON number in numeric mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumRepr {
    Number(f64),
    Text(String),
}

/// One serialized summand `(re + i·im)·exp(iπ·phase)`.
pub type EncodedTerm = (NumRepr, NumRepr, PhaseExponent);

/// Coefficient arithmetic. The mode is a type-level property, so exact and
/// numeric operands can never be mixed inside one algebra.
pub trait Scalar: Clone + Debug + Display + PartialEq + Send + Sync + 'static {
    const MODE: ScalarMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_gaussian(re: &BigRational, im: &BigRational) -> Self;
    /// `exp(iπ·phase)`; numeric mode binds irrational generators to `bindings`.
    fn from_phase(phase: &PhaseExponent, bindings: &[f64]) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;

    fn to_complex(&self, bindings: &[f64]) -> Complex64;

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    /// Canonical serialization; decoding the terms and summing reproduces
    /// the value exactly in exact mode.
    fn encode(&self) -> Vec<EncodedTerm>;
    fn decode_term(
        re: &NumRepr,
        im: &NumRepr,
        phase: &PhaseExponent,
        bindings: &[f64],
    ) -> Result<Self, String>;

    /// Approximate modulus, for diagnostics and numeric thresholds.
    fn magnitude(&self) -> f64 {
        self.to_complex(&[]).norm()
    }
}

impl Scalar for Exact {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn zero() -> Self {
        Exact::zero()
    }
    fn one() -> Self {
        Exact::one()
    }
    fn from_i64(v: i64) -> Self {
        Exact::from_integer(v)
    }
    fn from_gaussian(re: &BigRational, im: &BigRational) -> Self {
        Exact::gaussian(re.clone(), im.clone())
    }
    fn from_phase(phase: &PhaseExponent, _bindings: &[f64]) -> Self {
        Exact::phase(phase)
    }
    fn add(&self, rhs: &Self) -> Self {
        Exact::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Exact::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Exact::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        Exact::neg(self)
    }
    fn conj(&self) -> Self {
        Exact::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        Exact::inv(self)
    }
    fn is_zero(&self) -> bool {
        Exact::is_zero(self)
    }
    fn to_complex(&self, bindings: &[f64]) -> Complex64 {
        Exact::to_complex(self, bindings)
    }
    fn is_one(&self) -> bool {
        Exact::is_one(self)
    }
    fn encode(&self) -> Vec<EncodedTerm> {
        self.to_terms()
            .into_iter()
            .map(|(re, im, ph)| {
                (
                    NumRepr::Text(format_rational(&re)),
                    NumRepr::Text(format_rational(&im)),
                    ph,
                )
            })
            .collect()
    }
    fn decode_term(
        re: &NumRepr,
        im: &NumRepr,
        phase: &PhaseExponent,
        _bindings: &[f64],
    ) -> Result<Self, String> {
        let r = exact_part(re)?;
        let i = exact_part(im)?;
        Ok(Exact::from_terms(&[(r, i, phase.clone())]))
    }
}

fn exact_part(x: &NumRepr) -> Result<BigRational, String> {
    match x {
        NumRepr::Text(s) => parse_rational(s).ok_or_else(|| format!("cannot parse rational {s:?}")),
        NumRepr::Number(v) if v.fract() == 0.0 && v.abs() < 9.0e15 => Ok(
            BigRational::from_integer(num_bigint::BigInt::from(*v as i64)),
        ),
        NumRepr::Number(v) => Err(format!(
            "exact mode needs rational strings, found number {v}"
        )),
    }
}

fn numeric_part(x: &NumRepr) -> Result<f64, String> {
    match x {
        NumRepr::Number(v) => Ok(*v),
        NumRepr::Text(s) => parse_rational(s)
            .and_then(|r| r.to_f64())
            .ok_or_else(|| format!("cannot parse number {s:?}")),
    }
}

impl Scalar for Complex64 {
    const MODE: ScalarMode = ScalarMode::Numeric;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_gaussian(re: &BigRational, im: &BigRational) -> Self {
        Complex64::new(
            re.to_f64().unwrap_or(f64::NAN),
            im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn from_phase(phase: &PhaseExponent, bindings: &[f64]) -> Self {
        phase.to_complex(bindings)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn is_zero(&self) -> bool {
        self.norm() <= NUMERIC_EPS
    }
    fn to_complex(&self, _bindings: &[f64]) -> Complex64 {
        *self
    }
    fn encode(&self) -> Vec<EncodedTerm> {
        if Scalar::is_zero(self) {
            return Vec::new();
        }
        vec![(
            NumRepr::Number(self.re),
            NumRepr::Number(self.im),
            PhaseExponent::zero(),
        )]
    }
    fn decode_term(
        re: &NumRepr,
        im: &NumRepr,
        phase: &PhaseExponent,
        bindings: &[f64],
    ) -> Result<Self, String> {
        if phase.value().irrational.len() > bindings.len() {
            return Err("numeric mode needs a value for every irrational generator".into());
        }
        Ok(Complex64::new(numeric_part(re)?, numeric_part(im)?) * phase.to_complex(bindings))
    }
}

/// Numeric equality in the sense `|a-b| ≤ eps·max(1, |a|, |b|)`.
pub fn approx_eq(a: Complex64, b: Complex64, eps: f64) -> bool {
    (a - b).norm() <= eps * 1f64.max(a.norm()).max(b.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_equality_is_scale_aware() {
        assert!(approx_eq(
            Complex64::new(1e6, 0.0),
            Complex64::new(1e6 + 1e-7, 0.0),
            1e-12
        ));
        assert!(!approx_eq(
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0 + 1e-6, 0.0),
            1e-12
        ));
    }

    #[test]
    fn exact_from_phase_matches_numeric() {
        let p = PhaseExponent::new(QExt::new(
            BigRational::new(1.into(), 3.into()),
            vec![BigRational::from_integer(1.into())],
        ));
        let theta = [0.5f64.sqrt()];
        let e = <Exact as Scalar>::from_phase(&p, &theta).to_complex(&theta);
        let n = <Complex64 as Scalar>::from_phase(&p, &theta);
        assert!((e - n).norm() < 1e-12);
    }
}
