//! Projection-presented modules with connections, their curvature, and the
//! tensor/dual/direct-sum constructions.
//!
//! A module is `E = p·A^N` for an idempotent matrix `p` of degree-0
//! elements; module elements are columns. A connection is stored by its
//! coefficient matrix `κ` of one-forms and acts as `∇(ε) = p·dε + κ·ε`.
//! The Grassmannian connection is `κ = 0`.

pub mod io;
mod matrix;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{
    center_algebra, graded_center, is_graded_commutative, Algebra, CenterAlgebra,
    GradedBasisAlgebra,
};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::report::{CheckRecord, CheckReport};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

pub use matrix::AlgMatrix;

#[derive(Clone, Debug)]
pub struct FgpModule<S: Scalar> {
    owner: Algebra<S>,
    projection: AlgMatrix<S>,
}

impl<S: Scalar> FgpModule<S> {
    /// Validates that `p` is a square idempotent of degree-0 elements.
    pub fn new(owner: &Algebra<S>, projection: AlgMatrix<S>) -> Result<Self> {
        if !projection.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "projection must be square, got {}×{}",
                projection.rows(),
                projection.cols()
            )));
        }
        if !projection.has_degree(owner, 0) {
            return Err(Error::InvalidInput(
                "projection entries must have degree 0".into(),
            ));
        }
        let sq = projection.mul(owner, &projection)?;
        let diff = sq.sub(&projection)?;
        if !diff.is_zero() {
            return Err(Error::NotIdempotent(format!(
                "p² − p = {}",
                diff.format(owner)
            )));
        }
        Ok(Self {
            owner: owner.clone(),
            projection,
        })
    }

    pub fn free(owner: &Algebra<S>, n: usize) -> Self {
        Self {
            owner: owner.clone(),
            projection: AlgMatrix::identity(owner, n),
        }
    }

    pub fn owner(&self) -> &Algebra<S> {
        &self.owner
    }

    pub fn projection(&self) -> &AlgMatrix<S> {
        &self.projection
    }

    pub fn rank_ambient(&self) -> usize {
        self.projection.rows()
    }

    pub fn is_free(&self) -> bool {
        self.projection == AlgMatrix::identity(&self.owner, self.rank_ambient())
    }

    /// The generator `p·e_j` as a column.
    pub fn generator(&self, j: usize) -> AlgMatrix<S> {
        self.projection.column(j)
    }

    /// Checks `p* = p` entrywise with the transpose (needs a star).
    pub fn is_self_adjoint(&self) -> Result<bool> {
        let a = &self.owner;
        if !a.has_star() {
            return Err(Error::NoStar);
        }
        let n = self.rank_ambient();
        Ok((0..n).all(|i| {
            (0..n).all(|j| {
                a.try_star(self.projection.get(j, i)).unwrap() == *self.projection.get(i, j)
            })
        }))
    }
}

#[derive(Clone, Debug)]
pub struct FgpConnection<S: Scalar> {
    module: FgpModule<S>,
    kappa: AlgMatrix<S>,
}

impl<S: Scalar> FgpConnection<S> {
    /// Accepts any `N×N` matrix of one-forms; whether `κ = pκp` holds is
    /// reported by [`check_connection`], not enforced here.
    pub fn new(module: FgpModule<S>, kappa: AlgMatrix<S>) -> Result<Self> {
        let n = module.rank_ambient();
        if kappa.rows() != n || kappa.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "κ must be {n}×{n}, got {}×{}",
                kappa.rows(),
                kappa.cols()
            )));
        }
        if !kappa.has_degree(&module.owner, 1) {
            return Err(Error::InvalidInput(
                "connection coefficients must be one-forms".into(),
            ));
        }
        Ok(Self { module, kappa })
    }

    /// `∇ = p·d` on `p·A^N`.
    pub fn grassmannian(module: FgpModule<S>) -> Self {
        let n = module.rank_ambient();
        Self {
            module,
            kappa: AlgMatrix::zeros(n, n),
        }
    }

    pub fn module(&self) -> &FgpModule<S> {
        &self.module
    }

    pub fn owner(&self) -> &Algebra<S> {
        &self.module.owner
    }

    pub fn kappa(&self) -> &AlgMatrix<S> {
        &self.kappa
    }

    pub fn projection(&self) -> &AlgMatrix<S> {
        &self.module.projection
    }

    pub fn rank_ambient(&self) -> usize {
        self.module.rank_ambient()
    }

    /// `∇(v) = p·dv + κ·v` for a column `v`.
    pub fn apply(&self, v: &AlgMatrix<S>) -> Result<AlgMatrix<S>> {
        let a = self.owner();
        let pd = self.projection().mul(a, &v.d(a)?)?;
        pd.add(&self.kappa.mul(a, v)?)
    }

    pub fn try_apply(&self, v: &AlgMatrix<S>) -> Option<AlgMatrix<S>> {
        let a = self.owner();
        let pd = self.projection().try_mul(a, &v.try_d(a)?)?;
        pd.add(&self.kappa.try_mul(a, v)?).ok()
    }
}

/// Curvature matrix: column `j` is `∇²(p·e_j)`.
#[derive(Clone, Debug)]
pub struct CurvatureForm<S: Scalar> {
    pub matrix: AlgMatrix<S>,
    /// `∇²(εa) = ∇²(ε)a` on generators `ε` and degree-0 basis elements `a`.
    pub bilinearity: CheckRecord,
}

fn right_act<S: Scalar>(
    a: &GradedBasisAlgebra<S>,
    v: &AlgMatrix<S>,
    x: &SparseVec<S>,
) -> Option<AlgMatrix<S>> {
    v.try_map(|e| a.try_mul(e, x))
}

fn left_act<S: Scalar>(
    a: &GradedBasisAlgebra<S>,
    x: &SparseVec<S>,
    v: &AlgMatrix<S>,
) -> Option<AlgMatrix<S>> {
    v.try_map(|e| a.try_mul(x, e))
}

/// Curvature by applying `∇` twice to every generator.
pub fn curvature<S: Scalar>(c: &FgpConnection<S>) -> Result<CurvatureForm<S>> {
    let a = c.owner();
    if a.max_degree() < 2 {
        return Err(Error::OutOfWindow(
            "curvature needs two-forms in the window".into(),
        ));
    }
    let n = c.rank_ambient();
    let mut m = AlgMatrix::zeros(n, n);
    for j in 0..n {
        let twice = c.apply(&c.apply(&c.module.generator(j))?)?;
        for i in 0..n {
            m.set(i, j, twice.get(i, 0).clone());
        }
    }
    let mut checked = 0;
    let mut witness = None;
    'outer: for j in 0..n {
        let g = c.module.generator(j);
        let rg = m.column(j);
        for &b in a.basis_in_degree(0) {
            let e = SparseVec::unit(b);
            let Some(ga) = right_act(a, &g, &e) else {
                continue;
            };
            let Some(lhs) = c.try_apply(&ga).and_then(|x| c.try_apply(&x)) else {
                continue;
            };
            let Some(rhs) = right_act(a, &rg, &e) else {
                continue;
            };
            checked += 1;
            if lhs != rhs {
                witness = Some(format!("generator {j}, a = {}", a.name_of(b)));
                break 'outer;
            }
        }
    }
    Ok(CurvatureForm {
        matrix: m,
        bilinearity: CheckRecord::new("curvature_bilinear", checked, witness),
    })
}

/// Closed-form cross-check `p(dp·dp + dκ + κκ)p`.
pub fn curvature_oracle<S: Scalar>(c: &FgpConnection<S>) -> Result<AlgMatrix<S>> {
    let a = c.owner();
    let p = c.projection();
    let k = c.kappa();
    let dp = p.d(a)?;
    let inner = dp.mul(a, &dp)?.add(&k.d(a)?)?.add(&k.mul(a, k)?)?;
    p.mul(a, &inner)?.mul(a, p)
}

/// Exact zero in exact mode; every coefficient at most `tol` otherwise.
pub fn is_flat<S: Scalar>(c: &FgpConnection<S>, tol: f64) -> Result<bool> {
    let r = curvature(c)?;
    Ok(r.matrix.is_zero()
        || (S::MODE == crate::scalar::ScalarMode::Numeric && r.matrix.max_abs() <= tol))
}

/// Leibniz rules, compression `κ = pκp`, and `∇(E) ⊂ ΩE` on generators.
pub fn check_connection<S: Scalar>(c: &FgpConnection<S>) -> CheckReport {
    let a = c.owner();
    let p = c.projection();
    let n = c.rank_ambient();
    let mut report = CheckReport::default();

    let compressed = p.try_mul(a, c.kappa()).and_then(|x| x.try_mul(a, p));
    report.push(match compressed {
        Some(pkp) => {
            let diff = pkp.sub(c.kappa()).unwrap();
            let w = (!diff.is_zero()).then(|| format!("pκp − κ = {}", diff.format(a)));
            CheckRecord::new("kappa_compressed", 1, w)
        }
        None => CheckRecord::new("kappa_compressed", 0, None),
    });

    let mut checked = 0;
    let mut witness = None;
    for j in 0..n {
        let Some(v) = c.try_apply(&c.module.generator(j)) else {
            continue;
        };
        let Some(pv) = p.try_mul(a, &v) else { continue };
        checked += 1;
        if pv != v {
            witness = Some(format!("∇(p·e_{j}) = {} is not in the module", v.format(a)));
            break;
        }
    }
    report.push(CheckRecord::new("image", checked, witness));

    // ∇(εα) = ∇(ε)α + (−1)^{|ε|} ε dα with ε = p·e_j of degree 0
    let mut checked = 0;
    let mut witness = None;
    'right: for j in 0..n {
        let g = c.module.generator(j);
        let Some(ng) = c.try_apply(&g) else { continue };
        for b in 0..a.dim() {
            let e = SparseVec::unit(b);
            let Some(db) = a.try_d(&e) else { continue };
            let (Some(ga), Some(nga), Some(gda)) = (
                right_act(a, &g, &e),
                right_act(a, &ng, &e),
                right_act(a, &g, &db),
            ) else {
                continue;
            };
            let Some(lhs) = c.try_apply(&ga) else {
                continue;
            };
            let rhs = nga.add(&gda).unwrap();
            checked += 1;
            if lhs != rhs {
                witness = Some(format!("ε = p·e_{j}, α = {}", a.name_of(b)));
                break 'right;
            }
        }
    }
    report.push(CheckRecord::new("right_leibniz", checked, witness));

    // ∇(αε) = dα·ε + (−1)^{|α|} α∇(ε)
    let mut checked = 0;
    let mut witness = None;
    'left: for j in 0..n {
        let g = c.module.generator(j);
        let Some(ng) = c.try_apply(&g) else { continue };
        for b in 0..a.dim() {
            let e = SparseVec::unit(b);
            let Some(db) = a.try_d(&e) else { continue };
            let (Some(ag), Some(dag), Some(ang)) = (
                left_act(a, &e, &g),
                left_act(a, &db, &g),
                left_act(a, &e, &ng),
            ) else {
                continue;
            };
            let Some(lhs) = c.try_apply(&ag) else {
                continue;
            };
            let sign = crate::algebra::signed::<S>(a.degree_of(b) % 2 == 1);
            let rhs = dag.add(&ang.scale(&sign)).unwrap();
            checked += 1;
            if lhs != rhs {
                witness = Some(format!("α = {}, ε = p·e_{j}", a.name_of(b)));
                break 'left;
            }
        }
    }
    report.push(CheckRecord::new("left_leibniz", checked, witness));
    report
}

fn same_owner<S: Scalar>(c1: &FgpConnection<S>, c2: &FgpConnection<S>) -> Result<()> {
    if Arc::ptr_eq(c1.owner(), c2.owner()) {
        Ok(())
    } else {
        Err(Error::OwnerMismatch)
    }
}

fn require_commutative<S: Scalar>(a: &Algebra<S>, what: &str) -> Result<()> {
    if is_graded_commutative(a) {
        Ok(())
    } else {
        Err(Error::NotGradedCommutative(format!(
            "{what} needs a graded-commutative owner; reduce to the center first"
        )))
    }
}

/// Module `p₁⊗p₂` with `κ_G = κ₁⊗p₂ + p₁⊗κ₂`.
pub fn tensor_connection<S: Scalar>(
    c1: &FgpConnection<S>,
    c2: &FgpConnection<S>,
) -> Result<FgpConnection<S>> {
    same_owner(c1, c2)?;
    let a = c1.owner();
    require_commutative(a, "tensor_connection")?;
    let (p1, p2) = (c1.projection(), c2.projection());
    let p = p1.kron(a, p2)?;
    let kappa = c1.kappa().kron(a, p2)?.add(&p1.kron(a, c2.kappa())?)?;
    Ok(FgpConnection {
        module: FgpModule {
            owner: a.clone(),
            projection: p,
        },
        kappa,
    })
}

/// Module `pᵀ` with `κ∨ = −κᵀ`, so that
/// `⟨∇∨θ, ε⟩ = d⟨θ, ε⟩ − (−1)^{|θ|}⟨θ, ∇ε⟩` under `⟨θ, ε⟩ = Σ θ_k ε_k`.
pub fn dual_connection<S: Scalar>(c: &FgpConnection<S>) -> Result<FgpConnection<S>> {
    let a = c.owner();
    require_commutative(a, "dual_connection")?;
    Ok(FgpConnection {
        module: FgpModule {
            owner: a.clone(),
            projection: c.projection().transpose(),
        },
        kappa: c.kappa().transpose().neg(),
    })
}

pub fn direct_sum_connection<S: Scalar>(
    c1: &FgpConnection<S>,
    c2: &FgpConnection<S>,
) -> Result<FgpConnection<S>> {
    same_owner(c1, c2)?;
    Ok(FgpConnection {
        module: FgpModule {
            owner: c1.owner().clone(),
            projection: c1.projection().block_diag(c2.projection()),
        },
        kappa: c1.kappa().block_diag(c2.kappa()),
    })
}

/// `∇₂(φ·p₁e_j) − φ·∇₁(p₁e_j)` as a matrix; for free modules this is
/// `dφ + κ₂φ − φκ₁`.
pub fn morphism_residual<S: Scalar>(
    phi: &AlgMatrix<S>,
    c1: &FgpConnection<S>,
    c2: &FgpConnection<S>,
) -> Result<AlgMatrix<S>> {
    same_owner(c1, c2)?;
    let (n1, n2) = (c1.rank_ambient(), c2.rank_ambient());
    if phi.rows() != n2 || phi.cols() != n1 {
        return Err(Error::ShapeMismatch(format!(
            "φ must be {n2}×{n1}, got {}×{}",
            phi.rows(),
            phi.cols()
        )));
    }
    let a = c1.owner();
    if !phi.has_degree(a, 0) {
        return Err(Error::InvalidInput(
            "morphism entries must have degree 0".into(),
        ));
    }
    let mut out = AlgMatrix::zeros(n2, n1);
    for j in 0..n1 {
        let g = c1.module.generator(j);
        let lhs = c2.apply(&phi.mul(a, &g)?)?;
        let rhs = phi.mul(a, &c1.apply(&g)?)?;
        let diff = lhs.sub(&rhs)?;
        for i in 0..n2 {
            out.set(i, j, diff.get(i, 0).clone());
        }
    }
    Ok(out)
}

pub fn check_morphism<S: Scalar>(
    phi: &AlgMatrix<S>,
    c1: &FgpConnection<S>,
    c2: &FgpConnection<S>,
) -> Result<CheckReport> {
    let residual = morphism_residual(phi, c1, c2)?;
    let a = c1.owner();
    let compressed = c2.projection().mul(a, phi)?.mul(a, c1.projection())?;
    let mut report = CheckReport::default();
    let w = (compressed != *phi)
        .then(|| format!("p₂φp₁ − φ = {}", compressed.sub(phi).unwrap().format(a)));
    report.push(CheckRecord::new("maps_into_image", 1, w));
    let w = (!residual.is_zero()).then(|| format!("∇₂φ − φ∇₁ = {}", residual.format(a)));
    report.push(
        CheckRecord::new("intertwines", c1.rank_ambient(), w).with_margin(residual.max_abs()),
    );
    Ok(report)
}

/// `R_G − (R₁⊗p₂ + p₁⊗R₂)`; zero when the tensor curvature law holds.
pub fn tensor_curvature_residual<S: Scalar>(
    c1: &FgpConnection<S>,
    c2: &FgpConnection<S>,
) -> Result<AlgMatrix<S>> {
    let a = c1.owner();
    let g = tensor_connection(c1, c2)?;
    let rg = curvature(&g)?.matrix;
    let r1 = curvature(c1)?.matrix;
    let r2 = curvature(c2)?.matrix;
    let expected = r1
        .kron(a, c2.projection())?
        .add(&c1.projection().kron(a, &r2)?)?;
    rg.sub(&expected)
}

/// `⟨R∨θ_i, ε_j⟩ + ⟨θ_i, Rε_j⟩` over dual generators `θ_i = pᵀe_i` and
/// generators `ε_j = p·e_j`; zero when the dual curvature law holds.
pub fn dual_curvature_residual<S: Scalar>(c: &FgpConnection<S>) -> Result<AlgMatrix<S>> {
    let a = c.owner();
    let dual = dual_connection(c)?;
    let rd = curvature(&dual)?.matrix;
    let r = curvature(c)?.matrix;
    let p = c.projection();
    rd.transpose().mul(a, p)?.add(&p.mul(a, &r)?)
}

/// Restriction of a connection to the graded center. Over a graded
/// commutative owner this returns the connection unchanged.
pub fn center_connection<S: Scalar>(
    c: &FgpConnection<S>,
) -> Result<(FgpConnection<S>, Option<CenterAlgebra<S>>)> {
    let a = c.owner();
    if is_graded_commutative(a) {
        return Ok((c.clone(), None));
    }
    let z = graded_center(a);
    let ca = center_algebra(a, &z)?;
    let conn = restrict_to_center(c, &ca)?;
    Ok((conn, Some(ca)))
}

pub fn restrict_to_center<S: Scalar>(
    c: &FgpConnection<S>,
    ca: &CenterAlgebra<S>,
) -> Result<FgpConnection<S>> {
    if !Arc::ptr_eq(&ca.ambient, c.owner()) {
        return Err(Error::OwnerMismatch);
    }
    let a = c.owner();
    let project = |m: &AlgMatrix<S>, what: &str| -> Result<AlgMatrix<S>> {
        m.try_map(|e| ca.project(e)).ok_or_else(|| {
            Error::RestrictionEscapesCenter(format!(
                "{what} has entries outside the graded center: {}",
                m.format(a)
            ))
        })
    };
    let p = project(c.projection(), "projection")?;
    let kappa = project(c.kappa(), "κ")?;
    for j in 0..c.rank_ambient() {
        if let Some(v) = c.try_apply(&c.module.generator(j)) {
            project(&v, &format!("∇(p·e_{j})"))?;
        }
    }
    let zm = FgpModule::new(&ca.algebra, p)?;
    FgpConnection::new(zm, kappa)
}

/// A point of a commutative owner, given by its values on degree-0 basis
/// elements.
#[derive(Clone, Debug)]
pub struct Character<S: Scalar> {
    owner: Algebra<S>,
    values: BTreeMap<usize, S>,
    pub witness: CheckRecord,
}

impl<S: Scalar> Character<S> {
    pub fn new(owner: &Algebra<S>, values: BTreeMap<usize, S>) -> Result<Self> {
        if let Some(&bad) = values
            .keys()
            .find(|&&i| i >= owner.dim() || owner.degree_of(i) != 0)
        {
            return Err(Error::InvalidInput(format!(
                "character value given for a non-degree-0 index {bad}"
            )));
        }
        let chi = Self {
            owner: owner.clone(),
            values,
            witness: CheckRecord::new("multiplicative", 0, None),
        };
        let mut checked = 1;
        if !chi.evaluate(owner.unit_coords()).is_one() {
            return Err(Error::NotMultiplicative("χ(1) ≠ 1".into()));
        }
        let zero = owner.basis_in_degree(0);
        for &i in zero {
            for &j in zero {
                let Some(prod) = owner.basis_product(i, j) else {
                    continue;
                };
                checked += 1;
                let lhs = chi.evaluate(&prod);
                let rhs = chi.value(i).mul(&chi.value(j));
                if lhs != rhs && !lhs.sub(&rhs).is_zero() {
                    return Err(Error::NotMultiplicative(format!(
                        "χ({}·{}) = {lhs} but χ({})χ({}) = {rhs}",
                        owner.name_of(i),
                        owner.name_of(j),
                        owner.name_of(i),
                        owner.name_of(j)
                    )));
                }
            }
        }
        Ok(Self {
            witness: CheckRecord::new("multiplicative", checked, None),
            ..chi
        })
    }

    pub fn value(&self, i: usize) -> S {
        self.values.get(&i).cloned().unwrap_or_else(S::zero)
    }

    /// Evaluates the degree-0 part of an element.
    pub fn evaluate(&self, v: &SparseVec<S>) -> S {
        v.iter()
            .filter(|(i, _)| self.owner.degree_of(*i) == 0)
            .fold(S::zero(), |acc, (i, c)| acc.add(&c.mul(&self.value(i))))
    }
}

/// Fibre at a point: the image of the evaluated projection.
pub fn fibre_functor<S: Scalar>(
    c: &FgpConnection<S>,
    chi: &Character<S>,
) -> Result<(usize, Vec<Vec<S>>)> {
    if !Arc::ptr_eq(c.owner(), &chi.owner) {
        return Err(Error::OwnerMismatch);
    }
    require_commutative(c.owner(), "fibre_functor")?;
    let n = c.rank_ambient();
    let p: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| chi.evaluate(c.projection().get(i, j)))
                .collect()
        })
        .collect();
    let mut ech = Echelon::new(n);
    for row in &p {
        ech.insert(&SparseVec::from_pairs(row.iter().cloned().enumerate()));
    }
    Ok((ech.rank(), p))
}

#[cfg(test)]
mod tests;
