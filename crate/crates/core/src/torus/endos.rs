//! Flat connections `d + Σ_k E_k η_k` on free modules over torus forms and
//! their commuting endomorphisms `E_k`.

use super::TorusForms;
use crate::connection::{is_flat, AlgMatrix, FgpConnection, FgpModule};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarMode};
use crate::sparse::SparseVec;

type Endo<S> = Vec<Vec<S>>;

fn mat_mul<S: Scalar>(a: &Endo<S>, b: &Endo<S>) -> Endo<S> {
    let k = a.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..k).fold(S::zero(), |acc, l| acc.add(&a[i][l].mul(&b[l][j]))))
                .collect()
        })
        .collect()
}

/// `κ = Σ_k E_k ⊗ η_k` without any commutation check.
pub fn kappa_from_endos<S: Scalar>(
    forms: &TorusForms<S>,
    endos: &[Endo<S>],
) -> Result<AlgMatrix<S>> {
    let n = forms.presentation.n;
    if endos.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "expected {n} endomorphisms, got {}",
            endos.len()
        )));
    }
    let k = endos[0].len();
    if endos
        .iter()
        .any(|e| e.len() != k || e.iter().any(|r| r.len() != k))
    {
        return Err(Error::ShapeMismatch(
            "endomorphisms must share one square shape".into(),
        ));
    }
    let etas: Vec<usize> = (0..n)
        .map(|l| {
            forms
                .eta(l)
                .ok_or_else(|| Error::OutOfWindow("one-forms need max_degree ≥ 1".into()))
        })
        .collect::<Result<_>>()?;
    Ok(AlgMatrix::from_fn(k, k, |i, j| {
        SparseVec::from_pairs((0..n).map(|l| (etas[l], endos[l][i][j].clone())))
    }))
}

/// The free module `W ⊗ ΩA_Θ` with `∇ = d + Σ_k E_k η_k`. Pairwise
/// commutators must vanish (exactly, or below `tol` in numeric mode).
pub fn connection_from_endos<S: Scalar>(
    forms: &TorusForms<S>,
    endos: &[Endo<S>],
    tol: f64,
) -> Result<FgpConnection<S>> {
    for a in 0..endos.len() {
        for b in a + 1..endos.len() {
            let ab = mat_mul(&endos[a], &endos[b]);
            let ba = mat_mul(&endos[b], &endos[a]);
            let size = ab
                .iter()
                .flatten()
                .zip(ba.iter().flatten())
                .map(|(x, y)| x.sub(y).magnitude())
                .fold(0.0, f64::max);
            let nonzero = ab
                .iter()
                .flatten()
                .zip(ba.iter().flatten())
                .any(|(x, y)| !x.sub(y).is_zero());
            if nonzero && (S::MODE == ScalarMode::Exact || size > tol) {
                return Err(Error::NonCommutingEndos(format!(
                    "[E{}, E{}] has entries up to {size:e}",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    let kappa = kappa_from_endos(forms, endos)?;
    let module = FgpModule::free(&forms.algebra, kappa.rows());
    let conn = FgpConnection::new(module, kappa)?;
    if forms.algebra.max_degree() >= 2 && !is_flat(&conn, tol)? {
        return Err(Error::NotFlat(
            "commuting endomorphisms gave a curved connection".into(),
        ));
    }
    Ok(conn)
}

/// Reads `E_k` off `κ = Σ_k E_k η_k`.
pub fn endos_from_connection<S: Scalar>(
    forms: &TorusForms<S>,
    c: &FgpConnection<S>,
    tol: f64,
) -> Result<Vec<Endo<S>>> {
    let n = forms.presentation.n;
    if !c.module().is_free() {
        return Err(Error::NotInNormalForm("module is not free".into()));
    }
    let etas: Vec<Option<usize>> = (0..n).map(|l| forms.eta(l)).collect();
    let k = c.rank_ambient();
    let mut endos = vec![vec![vec![S::zero(); k]; k]; n];
    for (i, j, e) in c.kappa().entries() {
        for (idx, coeff) in e.iter() {
            let Some(l) = etas.iter().position(|&x| x == Some(idx)) else {
                return Err(Error::NotInNormalForm(format!(
                    "κ[{i}][{j}] has a component along {}",
                    forms.algebra.name_of(idx)
                )));
            };
            endos[l][i][j] = coeff.clone();
        }
    }
    if forms.algebra.max_degree() >= 2 && !is_flat(c, tol)? {
        return Err(Error::NotFlat("connection has nonzero curvature".into()));
    }
    Ok(endos)
}
