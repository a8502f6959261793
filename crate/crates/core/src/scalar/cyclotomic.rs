//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` reduced
//! modulo the cyclotomic polynomial `Φ_N`, which makes the representation
//! canonical for a fixed order. The order is always a multiple of 4 so that
//! `i = ζ_N^{N/4}` is available.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

thread_local! {
    static PHI_CACHE: RefCell<HashMap<u32, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Coefficients (lowest degree first) of the cyclotomic polynomial `Φ_n`.
pub fn cyclotomic_polynomial(n: u32) -> Rc<Vec<i64>> {
    if let Some(p) = PHI_CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &div);
        }
    }
    let rc = Rc::new(num);
    PHI_CACHE.with(|c| c.borrow_mut().insert(n, rc.clone()));
    rc
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

fn lcm_order(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// An element of `Q(ζ_order)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        assert!(order % 4 == 0, "cyclotomic order must be a multiple of 4");
        Self {
            order,
            coeffs: vec![BigRational::zero(); euler_phi(order)],
        }
    }

    pub fn from_gaussian(re: BigRational, im: BigRational) -> Self {
        Self {
            order: 4,
            coeffs: vec![re, im],
        }
    }

    /// `ζ_n^k`, lifted to an order divisible by 4.
    pub fn root_power(n: u32, k: i64) -> Self {
        let order = lcm_order(n, 4);
        let scale = (order / n) as i64;
        let e = (k * scale).rem_euclid(order as i64) as usize;
        let mut raw = vec![BigRational::zero(); order as usize];
        raw[e] = BigRational::one();
        Self::reduce(order, raw)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn reduce(order: u32, mut raw: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        while raw.len() > deg {
            let top = raw.len() - 1;
            let c = raw.pop().unwrap();
            if !c.is_zero() {
                let shift = top - deg;
                for (j, &pj) in phi.iter().enumerate().take(deg) {
                    if pj != 0 {
                        raw[shift + j] -= &c * BigRational::from_integer(BigInt::from(pj));
                    }
                }
            }
        }
        raw.resize(deg, BigRational::zero());
        Self { order, coeffs: raw }
    }

    /// Re-expresses the element in `Q(ζ_target)`; `target` must be a multiple of the order.
    pub fn lift(&self, target: u32) -> Self {
        if target == self.order {
            return self.clone();
        }
        assert!(target % self.order == 0);
        let scale = (target / self.order) as usize;
        let mut raw = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * scale + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[k * scale] = c.clone();
            }
        }
        Self::reduce(target, raw)
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        let o = lcm_order(self.order, other.order);
        (self.lift(o), other.lift(o))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.order == other.order {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect();
            return Self {
                order: self.order,
                coeffs,
            };
        }
        let (a, b) = self.align(other);
        a.add(&b)
    }

    pub fn neg(&self) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.order != other.order {
            let (a, b) = self.align(other);
            return a.mul(&b);
        }
        let n = self.coeffs.len();
        let mut raw = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Self::reduce(self.order, raw)
    }

    /// Applies the Galois automorphism `ζ ↦ ζ^k` (k coprime to the order).
    pub fn galois(&self, k: u32) -> Self {
        let n = self.order as usize;
        let mut raw = vec![BigRational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(j * k as usize) % n] += c;
            }
        }
        Self::reduce(self.order, raw)
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(self.order - 1)
    }

    /// Field inverse via the norm: `a^{-1} = Π_{σ≠id} σ(a) / N(a)`.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut others = Self::one_of(self.order);
        for k in 2..self.order {
            if k.gcd(&self.order) == 1 {
                others = others.mul(&self.galois(k));
            }
        }
        let norm = self.mul(&others);
        debug_assert!(norm.coeffs.iter().skip(1).all(|c| c.is_zero()));
        let n = norm.coeffs[0].clone();
        Some(others.scale(&n.recip()))
    }

    pub fn one_of(order: u32) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = BigRational::one();
        z
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let ang = 2.0 * std::f64::consts::PI * k as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), ang)
            })
            .sum()
    }

    /// Smallest-order representation of the same field element. Used to make
    /// serialized forms independent of the arithmetic history.
    pub fn canonical(&self) -> Self {
        let n = self.order;
        for m in (4..n).step_by(4) {
            if n % m != 0 {
                continue;
            }
            if let Some(c) = self.restrict(m) {
                return c;
            }
        }
        self.clone()
    }

    fn restrict(&self, m: u32) -> Option<Self> {
        // Solve lift(b) = self for b in Q(ζ_m); columns are lifts of ζ_m^j.
        let k = euler_phi(m);
        let rows = self.coeffs.len();
        let cols: Vec<Vec<BigRational>> = (0..k)
            .map(|j| Cyclotomic::root_power(m, j as i64).lift(self.order).coeffs)
            .collect();
        let mut aug: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c[r].clone()).collect();
                row.push(self.coeffs[r].clone());
                row
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for c in 0..k {
            let Some(p) = (pivot_row..rows).find(|&r| !aug[r][c].is_zero()) else {
                continue;
            };
            aug.swap(pivot_row, p);
            let inv = aug[pivot_row][c].recip();
            for x in aug[pivot_row].iter_mut() {
                *x *= &inv;
            }
            for r in 0..rows {
                if r != pivot_row && !aug[r][c].is_zero() {
                    let f = aug[r][c].clone();
                    for cc in 0..=k {
                        let v = &aug[pivot_row][cc] * &f;
                        aug[r][cc] -= v;
                    }
                }
            }
            pivots.push(c);
            pivot_row += 1;
        }
        if aug[pivot_row..].iter().any(|row| !row[k].is_zero()) {
            return None;
        }
        let mut b = vec![BigRational::zero(); k];
        for (r, &c) in pivots.iter().enumerate() {
            b[c] = aug[r][k].clone();
        }
        Some(Self {
            order: m,
            coeffs: b,
        })
    }

    /// Largest absolute coefficient, used only for diagnostics.
    pub fn height(&self) -> BigRational {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.align(other);
        a.coeffs == b.coeffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_multiply() {
        let z = Cyclotomic::root_power(12, 1);
        let mut acc = Cyclotomic::one_of(12);
        for _ in 0..12 {
            acc = acc.mul(&z);
        }
        assert!(acc.is_one());
        // ζ_12^3 = i
        let i = Cyclotomic::from_gaussian(q(0, 1), q(1, 1));
        assert_eq!(Cyclotomic::root_power(12, 3), i);
    }

    #[test]
    fn sum_of_cube_roots_vanishes() {
        let s = Cyclotomic::root_power(3, 0)
            .add(&Cyclotomic::root_power(3, 1))
            .add(&Cyclotomic::root_power(3, 2));
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_and_conjugate() {
        let a = Cyclotomic::root_power(12, 1).add(&Cyclotomic::from_gaussian(q(2, 3), q(-1, 2)));
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one());
        let c = a.to_complex();
        let cc = a.conj().to_complex();
        assert!((c.conj() - cc).norm() < 1e-12);
    }
}
