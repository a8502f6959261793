//! Noncommutative tori: Weyl elements with exact cocycle phases, truncated
//! differential forms, the lattice `Λ = {r ∈ Zⁿ : Θr ∈ Zⁿ}`, its dual `Γ`,
//! fundamental-group descriptors, and flat connections from commuting
//! endomorphisms.

mod endos;
mod forms;
pub mod lattice;
mod pi1;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::io::{check_format_version, PhaseRepr, FORMAT_VERSION};
use crate::algebra::Truncation;
use crate::error::{Error, Result};
use crate::scalar::{PhaseExponent, QExt, Scalar};

pub use endos::{connection_from_endos, endos_from_connection, kappa_from_endos};
pub use forms::{torus_forms, TorusForms};
pub use pi1::{
    center_crosscheck, gamma_subgroup, lattice_lambda, pi1_descriptor, CenterCrosscheck,
    DegreeComparison, Gamma, LatticeData, Pi1Descriptor,
};

/// Values bound to undeclared-value irrational generators: fractional parts
/// of `√2, √3, √5, …`.
fn default_binding(k: usize) -> f64 {
    const PRIMES: [f64; 8] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];
    let p = PRIMES[k % PRIMES.len()] + (k / PRIMES.len()) as f64 * 20.0;
    p.sqrt().fract()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusPresentation {
    pub n: usize,
    pub theta: Vec<Vec<QExt>>,
    pub irrational_generators: Vec<String>,
    /// Numeric values of the generators, used only when evaluating phases.
    pub bindings: Vec<f64>,
    pub radius: i64,
    pub truncation: Truncation,
}

impl TorusPresentation {
    pub fn new(
        theta: Vec<Vec<QExt>>,
        irrational_generators: Vec<String>,
        radius: i64,
    ) -> Result<Self> {
        let n = theta.len();
        if theta.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("Θ must be square".into()));
        }
        if radius < 0 {
            return Err(Error::InvalidInput("radius must be nonnegative".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if theta[i][j].add(&theta[j][i]) != QExt::zero() {
                    return Err(Error::InvalidInput(format!(
                        "Θ is not skew-symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                if theta[i][j].irrational.len() > irrational_generators.len() {
                    return Err(Error::InvalidInput(
                        "Θ uses an undeclared irrational generator".into(),
                    ));
                }
            }
        }
        let bindings = (0..irrational_generators.len())
            .map(default_binding)
            .collect();
        Ok(Self {
            n,
            theta,
            irrational_generators,
            bindings,
            radius,
            truncation: Truncation::Strict,
        })
    }

    /// Two-dimensional torus with `Θ₁₂ = θ`.
    pub fn two_dim(theta: QExt, generators: Vec<String>, radius: i64) -> Result<Self> {
        let z = QExt::zero();
        Self::new(
            vec![vec![z.clone(), theta.clone()], vec![theta.neg(), z]],
            generators,
            radius,
        )
    }

    /// `θ = p/q` in two dimensions.
    pub fn rational_2d(p: i64, q: i64, radius: i64) -> Result<Self> {
        Self::two_dim(
            QExt::rational(BigRational::new(p.into(), q.into())),
            Vec::new(),
            radius,
        )
    }

    /// `θ` a single declared irrational generator in two dimensions.
    pub fn irrational_2d(radius: i64) -> Result<Self> {
        Self::two_dim(
            QExt::new(BigRational::zero(), vec![BigRational::one()]),
            vec!["theta1".into()],
            radius,
        )
    }

    pub fn with_bindings(mut self, bindings: Vec<f64>) -> Result<Self> {
        if bindings.len() != self.irrational_generators.len() {
            return Err(Error::InvalidInput(
                "one value per irrational generator is required".into(),
            ));
        }
        self.bindings = bindings;
        Ok(self)
    }

    pub fn with_radius(mut self, radius: i64) -> Self {
        self.radius = radius;
        self
    }

    pub fn with_truncation(mut self, t: Truncation) -> Self {
        self.truncation = t;
        self
    }

    /// `rᵀΘs` exactly.
    pub fn bilinear(&self, r: &[i64], s: &[i64]) -> QExt {
        let mut acc = QExt::zero();
        for i in 0..self.n {
            if r[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                if s[j] != 0 {
                    acc = acc.add(&self.theta[i][j].scale_int(r[i] * s[j]));
                }
            }
        }
        acc
    }

    /// `τ(r, s) = exp(iπ rᵀΘs)` as a phase exponent.
    pub fn cocycle(&self, r: &[i64], s: &[i64]) -> PhaseExponent {
        PhaseExponent::new(self.bilinear(r, s))
    }

    /// `Θr` exactly.
    pub fn apply(&self, r: &[i64]) -> Vec<QExt> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(QExt::zero(), |acc, j| {
                    acc.add(&self.theta[i][j].scale_int(r[j]))
                })
            })
            .collect()
    }

    /// `UᵀΘU`.
    pub fn conjugate(&self, u: &[Vec<i64>]) -> Result<Self> {
        let n = self.n;
        let theta = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let ci: Vec<i64> = (0..n).map(|k| u[k][i]).collect();
                        let cj: Vec<i64> = (0..n).map(|k| u[k][j]).collect();
                        self.bilinear(&ci, &cj)
                    })
                    .collect()
            })
            .collect();
        let mut out = Self::new(theta, self.irrational_generators.clone(), self.radius)?;
        out.bindings = self.bindings.clone();
        Ok(out)
    }
}

/// `coefficient · exp(iπ·phase) · u^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylElement<S> {
    pub exponent: Vec<i64>,
    pub coeff: S,
    pub phase: PhaseExponent,
}

impl<S: Scalar> WeylElement<S> {
    pub fn new(exponent: Vec<i64>) -> Self {
        Self {
            exponent,
            coeff: S::one(),
            phase: PhaseExponent::zero(),
        }
    }

    /// Folds the phase into the coefficient.
    pub fn canonical(&self, bindings: &[f64]) -> Self {
        Self {
            exponent: self.exponent.clone(),
            coeff: self.coeff.mul(&S::from_phase(&self.phase, bindings)),
            phase: PhaseExponent::zero(),
        }
    }
}

fn sup_norm(r: &[i64]) -> i64 {
    r.iter().map(|x| x.abs()).max().unwrap_or(0)
}

/// `u^r u^s = τ(r, s) u^{r+s}`. `Ok(None)` when the product leaves the
/// window under the drop policy.
pub fn weyl_mul<S: Scalar>(
    a: &WeylElement<S>,
    b: &WeylElement<S>,
    t: &TorusPresentation,
) -> Result<Option<WeylElement<S>>> {
    if a.exponent.len() != t.n || b.exponent.len() != t.n {
        return Err(Error::ShapeMismatch(format!(
            "exponents must have length {}",
            t.n
        )));
    }
    let exponent: Vec<i64> = a
        .exponent
        .iter()
        .zip(&b.exponent)
        .map(|(x, y)| x + y)
        .collect();
    if sup_norm(&exponent) > t.radius {
        return match t.truncation {
            Truncation::Strict => Err(Error::OutOfWindow(format!(
                "|r + s| = {} > {}",
                sup_norm(&exponent),
                t.radius
            ))),
            Truncation::Drop => Ok(None),
        };
    }
    let phase = a
        .phase
        .add(&b.phase)
        .add(&t.cocycle(&a.exponent, &b.exponent));
    Ok(Some(WeylElement {
        exponent,
        coeff: a.coeff.mul(&b.coeff),
        phase,
    }))
}

/// Torus description file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusSpecFile {
    #[serde(default = "default_version")]
    pub format_version: String,
    pub n: usize,
    pub theta: Vec<Vec<PhaseRepr>>,
    pub radius: i64,
    #[serde(default)]
    pub irrational_generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub irrational_values: Vec<f64>,
    #[serde(default)]
    pub truncation: Truncation,
}

fn default_version() -> String {
    FORMAT_VERSION.to_string()
}

impl TorusSpecFile {
    pub fn to_presentation(&self) -> Result<TorusPresentation> {
        check_format_version(&self.format_version)?;
        if self.theta.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "theta has {} rows, expected n = {}",
                self.theta.len(),
                self.n
            )));
        }
        let theta = self
            .theta
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.decode(&self.irrational_generators))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut t = TorusPresentation::new(theta, self.irrational_generators.clone(), self.radius)?;
        if !self.irrational_values.is_empty() {
            t = t.with_bindings(self.irrational_values.clone())?;
        }
        Ok(t.with_truncation(self.truncation))
    }

    pub fn from_presentation(t: &TorusPresentation) -> Self {
        Self {
            format_version: FORMAT_VERSION.into(),
            n: t.n,
            theta: t
                .theta
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| PhaseRepr::encode(e, &t.irrational_generators))
                        .collect()
                })
                .collect(),
            radius: t.radius,
            irrational_generators: t.irrational_generators.clone(),
            irrational_values: t.bindings.clone(),
            truncation: t.truncation,
        }
    }
}

pub(crate) fn to_big(r: &[i64]) -> Vec<BigInt> {
    r.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests;
