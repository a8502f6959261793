use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A number in `Q ⊕ Qθ₁ ⊕ … ⊕ Qθ_k` for declared, rationally independent
/// irrationals `θ_j`. Trailing zero irrational coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QExt {
    pub rational: BigRational,
    pub irrational: Vec<BigRational>,
}

pub(crate) fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn zip_with(
    a: &[BigRational],
    b: &[BigRational],
    f: impl Fn(&BigRational, &BigRational) -> BigRational,
) -> Vec<BigRational> {
    let zero = BigRational::zero();
    let n = a.len().max(b.len());
    let mut out: Vec<_> = (0..n)
        .map(|i| f(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(&mut out);
    out
}

impl QExt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(r: BigRational) -> Self {
        Self {
            rational: r,
            irrational: Vec::new(),
        }
    }

    pub fn new(rational: BigRational, mut irrational: Vec<BigRational>) -> Self {
        trim(&mut irrational);
        Self {
            rational,
            irrational,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_empty()
    }

    pub fn is_integer(&self) -> bool {
        self.irrational.is_empty() && self.rational.is_integer()
    }

    pub fn has_irrational(&self) -> bool {
        !self.irrational.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            rational: &self.rational + &other.rational,
            irrational: zip_with(&self.irrational, &other.irrational, |a, b| a + b),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            rational: -&self.rational,
            irrational: self.irrational.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = BigRational::from_integer(BigInt::from(k));
        let mut irrational: Vec<_> = self.irrational.iter().map(|c| c * &k).collect();
        trim(&mut irrational);
        Self {
            rational: &self.rational * &k,
            irrational,
        }
    }

    /// Numeric value with the irrational generators bound to `bindings`.
    pub fn to_f64(&self, bindings: &[f64]) -> f64 {
        let mut v = self.rational.to_f64().unwrap_or(f64::NAN);
        for (j, c) in self.irrational.iter().enumerate() {
            let theta = bindings.get(j).copied().unwrap_or(f64::NAN);
            v += c.to_f64().unwrap_or(f64::NAN) * theta;
        }
        v
    }
}

impl fmt::Display for QExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        for (j, c) in self.irrational.iter().enumerate() {
            if !c.is_zero() {
                write!(f, " + {}·θ{}", c, j + 1)?;
            }
        }
        Ok(())
    }
}

/// The exponent of a unimodular phase `exp(iπ·value)`; the rational part is
/// kept reduced into `[0, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PhaseExponent {
    value: QExt,
}

fn reduce_mod_two(r: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let q = (r / &two).floor();
    r - q * two
}

impl PhaseExponent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(value: QExt) -> Self {
        let QExt {
            rational,
            irrational,
        } = value;
        Self {
            value: QExt::new(reduce_mod_two(&rational), irrational),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new(QExt::rational(r))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.value.rational
    }

    pub fn irrational_coeffs(&self) -> &[BigRational] {
        &self.value.irrational
    }

    pub fn value(&self) -> &QExt {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// True when `exp(iπ·value)` is a real sign (value is an integer).
    pub fn is_sign(&self) -> bool {
        self.value.is_integer()
    }

    /// True when the phase is exactly a root of unity inside `Q(i)`.
    pub fn is_gaussian(&self) -> bool {
        self.value.irrational.is_empty()
            && (&self.value.rational * BigRational::from_integer(2.into())).is_integer()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.value.add(&other.value))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.value.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn to_complex(&self, bindings: &[f64]) -> num_complex::Complex64 {
        let ang = std::f64::consts::PI * self.value.to_f64(bindings);
        num_complex::Complex64::from_polar(1.0, ang)
    }

    pub fn is_one(&self) -> bool {
        self.value.is_zero()
    }
}

impl fmt::Display for PhaseExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(iπ·({}))", self.value)
    }
}

/// Parses `"p/q"`, `"p"` or a decimal-free integer into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_part_reduced_mod_two() {
        let p = PhaseExponent::from_rational(q(7, 3));
        assert_eq!(p.rational_part(), &q(1, 3));
        let n = PhaseExponent::from_rational(q(-1, 2));
        assert_eq!(n.rational_part(), &q(3, 2));
        assert!(PhaseExponent::from_rational(q(4, 1)).is_zero());
    }

    #[test]
    fn equality_is_componentwise() {
        let a = PhaseExponent::new(QExt::new(q(1, 3), vec![q(1, 1)]));
        let b = PhaseExponent::new(QExt::new(q(7, 3), vec![q(1, 1), q(0, 1)]));
        assert_eq!(a, b);
        let c = PhaseExponent::new(QExt::new(q(1, 3), vec![q(2, 1)]));
        assert_ne!(a, c);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational("5"), Some(q(5, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&q(-1, 2)), "-1/2");
        assert_eq!(format_rational(&q(4, 2)), "2");
    }
}
