//! Kernel, image and cokernel of a morphism of connections, with the
//! connections they inherit.

use super::{pseudoinverse, DegreeZeroRing, Mat, SplitData};
use crate::connection::{check_morphism, AlgMatrix, FgpConnection, FgpModule};
use crate::error::{Error, Result};
use crate::report::{CheckRecord, CheckReport};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Clone, Debug)]
pub struct SplitConnections<S: Scalar> {
    pub data: SplitData<SparseVec<S>>,
    /// On `(p₁ − φ⁺φ)·A^{N₁}`.
    pub ker: FgpConnection<S>,
    /// On `φ⁺φ·A^{N₁}`.
    pub coim: FgpConnection<S>,
    /// On `φφ⁺·A^{N₂}`.
    pub im: FgpConnection<S>,
    /// On `(p₂ − φφ⁺)·A^{N₂}`.
    pub coker: FgpConnection<S>,
    pub checks: CheckReport,
}

/// Compression `e·κ·e` of a connection to the summand cut out by `e`.
fn compress<S: Scalar>(c: &FgpConnection<S>, e: &AlgMatrix<S>) -> Result<FgpConnection<S>> {
    let a = c.owner();
    let module = FgpModule::new(a, e.clone())?;
    let kappa = e.mul(a, c.kappa())?.mul(a, e)?;
    FgpConnection::new(module, kappa)
}

/// `∇(q·A^N) ⊂ q·ΩA^N` on the generators `q·e_j`.
fn preserved<S: Scalar>(name: &str, c: &FgpConnection<S>, q: &AlgMatrix<S>) -> Result<CheckRecord> {
    let a = c.owner();
    let mut witness = None;
    for j in 0..q.cols() {
        let v = c.apply(&q.column(j))?;
        if q.mul(a, &v)? != v {
            witness = Some(format!("∇(q·e_{j}) leaves the summand"));
            break;
        }
    }
    Ok(CheckRecord::new(name, q.cols(), witness))
}

pub fn split_with_connections<S: Scalar>(
    phi: &AlgMatrix<S>,
    c1: &FgpConnection<S>,
    c2: &FgpConnection<S>,
    eps_rank: f64,
) -> Result<SplitConnections<S>> {
    let gate = check_morphism(phi, c1, c2)?;
    if !gate.all_pass() {
        let why: Vec<String> = gate
            .failures()
            .map(|f| f.witness.clone().unwrap_or_else(|| f.name.clone()))
            .collect();
        return Err(Error::NotAMorphism(why.join("; ")));
    }
    let a = c1.owner();
    let ring = DegreeZeroRing::new(a)?;
    let data = pseudoinverse(&ring, &Mat::from_alg(phi), eps_rank)?;
    let plus = data.phi_plus.to_alg();
    let coim_e = plus.mul(a, phi)?;
    let im_e = phi.mul(a, &plus)?;
    let ker_e = c1.projection().sub(&coim_e)?;
    let coker_e = c2.projection().sub(&im_e)?;

    let ker = compress(c1, &ker_e)?;
    let coim = compress(c1, &coim_e)?;
    let im = compress(c2, &im_e)?;
    let coker = compress(c2, &coker_e)?;

    let mut checks = CheckReport::default();
    checks.push(preserved("ker_preserved", c1, &ker_e)?);
    checks.push(preserved("im_preserved", c2, &im_e)?);
    let cmp = check_morphism(phi, &coim, &im)?;
    let witness = (!cmp.all_pass()).then(|| "φ: coim → im does not intertwine".to_string());
    checks.push(CheckRecord::new("coim_im_compatible", 1, witness));
    Ok(SplitConnections {
        data,
        ker,
        coim,
        im,
        coker,
        checks,
    })
}
