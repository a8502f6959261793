//! The lattice `Λ`, its dual `Γ`, fundamental-group descriptors and the
//! center cross-check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::lattice::{hnf, integer_kernel, smith_invariants, IntMatrix};
use super::{sup_norm, torus_forms, TorusPresentation};
use crate::algebra::graded_center_with;
use crate::error::{Error, Result};
use crate::linalg::same_span;
use crate::scalar::Exact;
use crate::sparse::SparseVec;

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeData {
    /// Hermite-normal-form rows spanning `Λ`.
    pub basis: IntMatrix,
    pub m: usize,
    /// Unit vectors completing the basis to `n` linearly independent rows.
    pub completion: IntMatrix,
}

impl LatticeData {
    pub fn basis_i64(&self) -> Vec<Vec<i64>> {
        to_i64(&self.basis)
    }

    pub fn completion_i64(&self) -> Vec<Vec<i64>> {
        to_i64(&self.completion)
    }

    pub fn contains(&self, r: &[i64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(super::to_big(r));
        hnf(&rows) == self.basis
    }
}

pub(crate) fn to_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().expect("lattice entry exceeds i64"))
                .collect()
        })
        .collect()
}

fn lcm_denominators(t: &TorusPresentation) -> BigInt {
    let mut l = BigInt::one();
    for row in &t.theta {
        for e in row {
            l = l.lcm(e.rational.denom());
            for c in &e.irrational {
                l = l.lcm(c.denom());
            }
        }
    }
    l
}

fn scaled(x: &BigRational, l: &BigInt) -> BigInt {
    (x * BigRational::from_integer(l.clone())).to_integer()
}

/// `Λ = {r ∈ Zⁿ : Θr ∈ Zⁿ}`: the irrational parts of `Θr` must vanish and
/// the rational parts be integral. With `L` clearing all denominators this
/// is the integer kernel of `[[C, 0], [P, −L·I]]` in `(r, z)`.
pub fn lattice_lambda(t: &TorusPresentation) -> LatticeData {
    let n = t.n;
    let l = lcm_denominators(t);
    let k = t.irrational_generators.len();
    let mut system: IntMatrix = Vec::new();
    for g in 0..k {
        for i in 0..n {
            let mut row: Vec<BigInt> = (0..n)
                .map(|j| {
                    t.theta[i][j]
                        .irrational
                        .get(g)
                        .map_or_else(BigInt::zero, |c| scaled(c, &l))
                })
                .collect();
            row.extend((0..n).map(|_| BigInt::zero()));
            system.push(row);
        }
    }
    for i in 0..n {
        let mut row: Vec<BigInt> = (0..n)
            .map(|j| scaled(&t.theta[i][j].rational, &l))
            .collect();
        row.extend((0..n).map(|j| if i == j { -l.clone() } else { BigInt::zero() }));
        system.push(row);
    }
    let kernel = integer_kernel(&system, 2 * n);
    let projected: IntMatrix = kernel.into_iter().map(|v| v[..n].to_vec()).collect();
    let basis = hnf(&projected);
    let m = basis.len();
    let mut completion = Vec::new();
    let mut span = basis.clone();
    for j in 0..n {
        if span.len() == n {
            break;
        }
        let e: Vec<BigInt> = (0..n).map(|i| BigInt::from((i == j) as i64)).collect();
        let mut trial = span.clone();
        trial.push(e.clone());
        if hnf(&trial).len() > span.len() {
            span.push(e.clone());
            completion.push(e);
        }
    }
    LatticeData {
        basis,
        m,
        completion,
    }
}

/// `Γ = {t ∈ Tⁿ : t·r ∈ Z for r ∈ Λ} ≅ ⊕ Z/d_i × T^{n−m}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Gamma {
    pub invariant_factors: Vec<u64>,
    pub torus_rank: usize,
    pub description: String,
}

pub fn gamma_subgroup(l: &LatticeData, n: usize) -> Gamma {
    let invariant_factors: Vec<u64> = smith_invariants(&l.basis)
        .iter()
        .map(|d| d.to_u64().expect("invariant factor exceeds u64"))
        .collect();
    let torus_rank = n - l.m;
    let mut parts: Vec<String> = invariant_factors
        .iter()
        .filter(|&&d| d > 1)
        .map(|d| format!("Z/{d}"))
        .collect();
    if torus_rank > 0 {
        parts.push(format!("T^{torus_rank}"));
    }
    let description = if parts.is_empty() {
        "trivial".into()
    } else {
        parts.join(" × ")
    };
    Gamma {
        invariant_factors,
        torus_rank,
        description,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pi1Descriptor {
    pub m: usize,
    pub n_minus_m: usize,
    /// `"algebraic hull of Z^m × R^(n−m)"`, omitting a trivial factor.
    pub descriptor_text: String,
    /// `"algebraic hull of Z^n + ΘZ^n"`.
    pub generator_text: String,
    pub lattice: LatticeData,
    pub gamma: Gamma,
}

pub fn pi1_descriptor(t: &TorusPresentation) -> Pi1Descriptor {
    let lattice = lattice_lambda(t);
    let (m, rest) = (lattice.m, t.n - lattice.m);
    let group = match (m, rest) {
        (0, 0) => "0".to_string(),
        (m, 0) => format!("Z^{m}"),
        (0, r) => format!("R^{r}"),
        (m, r) => format!("Z^{m} × R^{r}"),
    };
    let gamma = gamma_subgroup(&lattice, t.n);
    Pi1Descriptor {
        m,
        n_minus_m: rest,
        descriptor_text: format!("algebraic hull of {group}"),
        generator_text: format!("algebraic hull of Z^{0} + ΘZ^{0}", t.n),
        lattice,
        gamma,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub brute_force_dim: usize,
    pub predicted_dim: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterCrosscheck {
    pub m: usize,
    pub interior_radius: i64,
    pub degrees: Vec<DegreeComparison>,
    pub pass: bool,
}

/// Compares the commutant of the generators `u_k^{±1}, η_k` on the interior
/// window `|r|_∞ ≤ R − 1` with the lattice prediction: degree 0 spanned by
/// `u^r`, degree 1 by `u^r η_k`, for `r ∈ Λ` in the window.
pub fn center_crosscheck(
    t: &TorusPresentation,
    radius: i64,
    max_degree: usize,
) -> Result<CenterCrosscheck> {
    let t = t.clone().with_radius(radius);
    let interior = radius - 1;
    let lattice = lattice_lambda(&t);
    if interior < 0 || lattice.basis_i64().iter().any(|r| sup_norm(r) > interior) {
        return Err(Error::Inconclusive(format!(
            "radius {radius} leaves no interior window containing a Λ-basis"
        )));
    }
    if max_degree < 2 {
        return Err(Error::Inconclusive(
            "degree-1 comparison needs two-forms in the window".into(),
        ));
    }
    let forms = torus_forms::<Exact>(&t, max_degree)?;
    let a = &forms.algebra;
    let n = t.n;
    let mut generators = Vec::new();
    for k in 0..n {
        for s in [-1, 1] {
            let mut e = vec![0; n];
            e[k] = s;
            generators.push(forms.weyl(&e).expect("generator in window"));
        }
        generators.push(forms.eta(k).expect("η in window"));
    }
    let interior_basis = |degree: usize| -> Vec<usize> {
        a.basis_in_degree(degree)
            .iter()
            .copied()
            .filter(|&i| sup_norm(forms.label(i).0) <= interior)
            .collect()
    };
    let mut degrees = Vec::new();
    for degree in 0..=1usize {
        let candidates = interior_basis(degree);
        let center = graded_center_with(a, Some(&generators), Some(&candidates));
        let brute: Vec<SparseVec<Exact>> = center.per_degree[degree]
            .iter()
            .map(|e| e.coords().clone())
            .collect();
        let predicted: Vec<SparseVec<Exact>> = candidates
            .iter()
            .copied()
            .filter(|&i| lattice.contains(forms.label(i).0))
            .map(SparseVec::unit)
            .collect();
        let equal = brute.len() == predicted.len() && same_span(a.dim(), &brute, &predicted);
        degrees.push(DegreeComparison {
            degree,
            brute_force_dim: brute.len(),
            predicted_dim: predicted.len(),
            equal,
        });
    }
    let pass = degrees.iter().all(|d| d.equal);
    Ok(CenterCrosscheck {
        m: lattice.m,
        interior_radius: interior,
        degrees,
        pass,
    })
}
