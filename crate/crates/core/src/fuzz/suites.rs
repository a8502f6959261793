use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Outcome;
use crate::abelian::{
    cayley_hamilton_residual, pseudoinverse, Mat, MatOps, ScalarRing, DEFAULT_EPS_RANK,
};
use crate::abelian::{char_coefficients, dm_derivative_check};
use crate::algebra::{
    build_exterior_algebra, build_identified_points, build_truncated_polynomial,
    build_two_point_space, center_algebra, check_dga_axioms, graded_center, is_graded_commutative,
    tensor_dga, Algebra,
};
use crate::connection::{
    curvature, curvature_oracle, dual_curvature_residual, tensor_curvature_residual, AlgMatrix,
    FgpConnection, FgpModule,
};
use crate::error::Result;
use crate::scalar::{Exact, PhaseExponent, QExt, Scalar};
use crate::sparse::SparseVec;
use crate::torus::{
    gamma_subgroup, lattice_lambda, torus_forms, weyl_mul, TorusPresentation, WeylElement,
};
use crate::transport::{
    half_step_consistency, log_representation, op_norm, path_ordered_exp, CMat, MatrixPath, Method,
    TransportOptions,
};

fn cx(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_cmat(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMat {
    DMatrix::from_fn(r, c, |_, _| cx(rng))
}

fn run(f: impl FnOnce() -> Result<Outcome>) -> Outcome {
    f().unwrap_or_else(Outcome::fail)
}

// ---------------------------------------------------------------- axioms

fn random_algebra(rng: &mut ChaCha8Rng, n: usize) -> Result<(String, Algebra<Exact>)> {
    Ok(match rng.gen_range(0..6) {
        0 => (format!("exterior({n})"), build_exterior_algebra(n)?),
        1 => (
            format!("truncated_polynomial({})", n + 1),
            build_truncated_polynomial(n + 1)?,
        ),
        2 => (
            format!("two_point({})", n + 1),
            build_two_point_space(n + 1)?,
        ),
        3 => (
            format!("identified_points({})", n + 1),
            build_identified_points(n + 1)?,
        ),
        4 => {
            let k = rng.gen_range(1..=2);
            let a = build_exterior_algebra(k)?;
            let b = build_truncated_polynomial(n.min(3) + 1)?;
            (
                format!("exterior({k}) ⊗ truncated_polynomial({})", n.min(3) + 1),
                tensor_dga(&a, &b)?,
            )
        }
        _ => {
            let q = rng.gen_range(2..=6);
            let p = rng.gen_range(1..q);
            let t = TorusPresentation::rational_2d(p, q, 1)?;
            (
                format!("torus_forms(θ = {p}/{q}, R = 1)"),
                torus_forms::<Exact>(&t, 2)?.algebra,
            )
        }
    })
}

fn random_homogeneous(rng: &mut ChaCha8Rng, a: &Algebra<Exact>, k: usize) -> SparseVec<Exact> {
    let basis = a.basis_in_degree(k);
    let mut v = SparseVec::new();
    if basis.is_empty() {
        return v;
    }
    for _ in 0..3 {
        let i = basis[rng.gen_range(0..basis.len())];
        v.add_term(i, &Exact::from_integer(rng.gen_range(-3..=3)));
    }
    v
}

pub(super) fn axioms(rng: &mut ChaCha8Rng, n: usize) -> Outcome {
    run(|| {
        let (label, a) = random_algebra(rng, n)?;
        let mut o = Outcome::new();
        let report = check_dga_axioms(&a);
        let tuples: usize = report.checks.iter().map(|c| c.checked).sum();
        o.margin("axiom_tuples", tuples as f64);
        if let Some(f) = report.failures().next() {
            o.require(false, || {
                format!(
                    "{label}: {} fails at {}",
                    f.name,
                    f.witness.clone().unwrap_or_default()
                )
            });
        }
        let z = graded_center(&a);
        let ca = center_algebra(&a, &z)?;
        o.require(is_graded_commutative(&ca.algebra), || {
            format!("{label}: center is not graded commutative")
        });
        let mut leibniz = 0usize;
        for _ in 0..8 {
            let (kx, ky) = (
                rng.gen_range(0..=a.max_degree()),
                rng.gen_range(0..=a.max_degree()),
            );
            let x = random_homogeneous(rng, &a, kx);
            let y = random_homogeneous(rng, &a, ky);
            let lhs = a.try_mul(&x, &y).and_then(|p| a.try_d(&p));
            let right = a.try_d(&y).and_then(|dy| a.try_mul(&x, &dy));
            let left = a.try_d(&x).and_then(|dx| a.try_mul(&dx, &y));
            if let (Some(lhs), Some(l), Some(r)) = (lhs, left, right) {
                leibniz += 1;
                let r = if kx % 2 == 1 { r.neg() } else { r };
                let diff = lhs.sub(&l.add(&r));
                o.require(diff.is_zero(), || {
                    format!("{label}: Leibniz fails on random elements of degrees {kx}, {ky}")
                });
            }
        }
        o.margin("random_leibniz", leibniz as f64);
        Ok(o)
    })
}

// -------------------------------------------------------- curvature laws

fn one_form(rng: &mut ChaCha8Rng, a: &Algebra<Complex64>) -> SparseVec<Complex64> {
    SparseVec::from_pairs(a.basis_in_degree(1).iter().map(|&i| (i, cx(rng))))
}

/// A free module, or `σ[[I, A], [0, 0]]σ⁻¹` for a random permutation `σ`;
/// the latter is idempotent in floating point without rounding.
fn random_connection(
    rng: &mut ChaCha8Rng,
    a: &Algebra<Complex64>,
    k: usize,
) -> Result<FgpConnection<Complex64>> {
    let module = if k == 1 || rng.gen_bool(0.4) {
        FgpModule::free(a, k)
    } else {
        let r = rng.gen_range(1..k);
        let mut perm: Vec<usize> = (0..k).collect();
        perm.shuffle(rng);
        let mut p = AlgMatrix::zeros(k, k);
        for i in 0..r {
            p.set(perm[i], perm[i], a.unit_coords().clone());
            for j in r..k {
                p.set(perm[i], perm[j], a.unit_coords().scaled(&cx(rng)));
            }
        }
        FgpModule::new(a, p)?
    };
    let forms: Vec<SparseVec<Complex64>> = (0..k * k).map(|_| one_form(rng, a)).collect();
    let raw = AlgMatrix::from_fn(k, k, |i, j| forms[i * k + j].clone());
    let p = module.projection().clone();
    let kappa = p.mul(a, &raw)?.mul(a, &p)?;
    FgpConnection::new(module, kappa)
}

pub(super) fn curvature_laws(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Outcome {
    run(|| {
        let a = build_exterior_algebra::<Complex64>(n)?;
        let (k1, k2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let c1 = random_connection(rng, &a, k1)?;
        let c2 = random_connection(rng, &a, k2)?;
        let tensor = tensor_curvature_residual(&c1, &c2)?.max_abs();
        let dual = dual_curvature_residual(&c1)?.max_abs();
        let oracle = curvature(&c1)?
            .matrix
            .sub(&curvature_oracle(&c1)?)?
            .max_abs();
        let mut o = Outcome::new();
        o.margin("tensor_residual", tensor);
        o.margin("dual_residual", dual);
        o.margin("oracle_residual", oracle);
        o.require(tensor <= tol, || {
            format!("tensor curvature residual {tensor:e} (ranks {k1}, {k2})")
        });
        o.require(dual <= tol, || {
            format!("dual curvature residual {dual:e} (rank {k1})")
        });
        o.require(oracle <= tol, || {
            format!("curvature differs from p(dp·dp + dκ + κκ)p by {oracle:e}")
        });
        Ok(o)
    })
}

// --------------------------------------------------------- pseudoinverse

/// `Σ_{i ≤ rank} v_i v_i* φ* / λ_i` from the Hermitian eigensystem of
/// `φ*φ`, keeping the `rank` largest eigenvalues.
fn spectral_pseudoinverse(phi: &CMat, rank: usize) -> CMat {
    let eig = (phi.adjoint() * phi).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let n = phi.ncols();
    let mut acc = CMat::zeros(n, n);
    for &i in order.iter().take(rank) {
        let v = eig.eigenvectors.column(i);
        acc += (&v * v.adjoint()) / Complex64::new(eig.eigenvalues[i], 0.0);
    }
    acc * phi.adjoint()
}

pub(super) fn pseudoinverse_trial(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Outcome {
    run(|| {
        let n2 = rng.gen_range(1..=6);
        let full = n.min(n2);
        let rank = if rng.gen_bool(0.5) {
            full
        } else {
            rng.gen_range(0..=full)
        };
        let phi = random_cmat(rng, n2, rank) * random_cmat(rng, rank, n);
        let ring = ScalarRing::<Complex64>::new();
        let ops = MatOps(&ring);
        let s = pseudoinverse(&ring, &Mat::from_nalgebra(&phi), DEFAULT_EPS_RANK)?;
        let mut o = Outcome::new();
        let inner = (&phi * s.phi_plus.to_nalgebra() * &phi - &phi).norm();
        let bound = tol * phi.norm().max(1.0);
        o.margin("inner_ratio", inner / bound);
        o.require(inner <= bound, || {
            format!("‖φφ⁺φ − φ‖ = {inner:e} for a {n2}×{n} matrix of rank {rank}")
        });

        let sigma = phi.singular_values().max();
        let unit = if sigma > 0.0 {
            &phi / Complex64::new(sigma, 0.0)
        } else {
            phi.clone()
        };
        let psi = Mat::from_nalgebra(&(unit.adjoint() * &unit));
        let c = char_coefficients(&ring, &psi)?;
        let ch = ops.norm(&cayley_hamilton_residual(&ring, &psi, &c)?);
        o.margin("cayley_hamilton", ch);
        o.require(ch <= 1e-9, || format!("Cayley–Hamilton residual {ch:e}"));

        let margin = s.decision.margin.unwrap_or(f64::INFINITY);
        o.margin("decision_margin_inv", 1.0 / margin);
        if margin > 1e3 {
            let oracle = spectral_pseudoinverse(&phi, s.decision.rank);
            let diff = (s.phi_plus.to_nalgebra() - &oracle).norm() / oracle.norm().max(1.0);
            o.margin("svd_difference", diff);
            o.require(diff <= 1e-6, || {
                format!("differs from the SVD pseudoinverse by {diff:e}")
            });
            o.require(s.decision.rank == rank, || {
                format!("rank decided {} but constructed {rank}", s.decision.rank)
            });
        }
        Ok(o)
    })
}

// --------------------------------------------------------- dm inequality

pub(super) fn dm_inequality(rng: &mut ChaCha8Rng, n: usize, slack: f64) -> Outcome {
    let mm = random_cmat(rng, n, n);
    let k = random_cmat(rng, n, n);
    let mut o = Outcome::new();
    let mut worst: f64 = 0.0;
    let mut min_dm = f64::INFINITY;
    for m in 1..=n {
        let mut r = dm_derivative_check(&mm, &k, m, None);
        // the slack is relative; the recorded tolerance uses 1e-4
        r.tolerance += (slack - 1e-4).max(0.0) * r.rhs.abs();
        let pass = r.lhs <= r.rhs + r.tolerance;
        worst = worst.max(r.lhs / (r.rhs + r.tolerance));
        min_dm = min_dm.min(r.dm_value);
        o.require(pass, || {
            format!(
                "m = {m}: lhs {:e} > rhs {:e} + {:e}",
                r.lhs, r.rhs, r.tolerance
            )
        });
        let floor = -1e-12 * (1.0 + mm.norm_squared()).powi(m as i32);
        o.require(r.dm_value >= floor, || {
            format!("D_{m}(M*M) = {:e} is negative", r.dm_value)
        });
    }
    o.margin("lhs_over_rhs", worst);
    o.margin("neg_min_dm", -min_dm);
    o
}

// ---------------------------------------------------------- torus phases

fn random_theta(rng: &mut ChaCha8Rng, n: usize) -> Result<TorusPresentation> {
    let irrational = rng.gen_bool(0.5);
    let mut theta = vec![vec![QExt::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let q = rng.gen_range(1..=8i64);
            let p = rng.gen_range(-q..=q);
            let mut e = QExt::rational(BigRational::new(p.into(), q.into()));
            if irrational && rng.gen_bool(0.5) {
                let c = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
                e = e.add(&QExt::new(
                    BigRational::zero(),
                    vec![BigRational::from_integer(c.into())],
                ));
            }
            theta[j][i] = e.neg();
            theta[i][j] = e;
        }
    }
    let gens = if irrational {
        vec!["theta1".to_string()]
    } else {
        Vec::new()
    };
    TorusPresentation::new(theta, gens, 6)
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, b: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-b..=b)).collect()
}

fn box_vectors(n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| (-b..=b).map(move |x| [v.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    for _ in 0..6 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        if rng.gen_bool(0.3) {
            u.swap(i, j);
        } else {
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            for k in 0..n {
                u[i][k] += s * u[j][k];
            }
        }
    }
    u
}

pub(super) fn torus_phases(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Outcome {
    run(|| {
        let t = random_theta(rng, n)?;
        let mut o = Outcome::new();
        let (r, s, u) = (
            random_vec(rng, n, 2),
            random_vec(rng, n, 2),
            random_vec(rng, n, 2),
        );
        let add =
            |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        let lhs = t.cocycle(&r, &s).add(&t.cocycle(&add(&r, &s), &u));
        let rhs = t.cocycle(&r, &add(&s, &u)).add(&t.cocycle(&s, &u));
        o.require(lhs == rhs, || {
            format!("cocycle identity fails at r = {r:?}, s = {s:?}, t = {u:?}")
        });

        let wr = WeylElement::<Exact>::new(r.clone());
        let ws = WeylElement::<Exact>::new(s.clone());
        let rs = weyl_mul(&wr, &ws, &t)?.expect("strict window");
        let sr = weyl_mul(&ws, &wr, &t)?.expect("strict window");
        let expected = PhaseExponent::new(t.bilinear(&r, &s).scale_int(2));
        o.require(rs.phase.sub(&sr.phase) == expected, || {
            format!("commutation phase wrong for r = {r:?}, s = {s:?}")
        });
        let neg: Vec<i64> = r.iter().map(|x| -x).collect();
        let one = weyl_mul(&wr, &WeylElement::new(neg), &t)?.expect("strict window");
        o.require(one.phase.is_zero(), || {
            format!("u^r u^(−r) ≠ 1 for r = {r:?}")
        });

        let numeric = Exact::phase(&rs.phase).to_complex(&t.bindings);
        let direct = <Complex64 as Scalar>::from_phase(&rs.phase, &t.bindings);
        let dphase = (numeric - direct).norm();
        o.margin("phase_evaluation", dphase);
        o.require(dphase <= tol, || {
            format!("exact and numeric phases differ by {dphase:e}")
        });

        let l = lattice_lambda(&t);
        for b in l.basis_i64() {
            o.require(t.apply(&b).iter().all(QExt::is_integer), || {
                format!("Λ basis vector {b:?} has Θb ∉ Zⁿ")
            });
        }
        let bound = if n <= 3 { 3 } else { 2 };
        for v in box_vectors(n, bound) {
            let brute = t.apply(&v).iter().all(QExt::is_integer);
            o.require(brute == l.contains(&v), || {
                format!("membership of {v:?} disagrees with brute force")
            });
        }

        let um = random_unimodular(rng, n);
        let tu = t.conjugate(&um)?;
        let lu = lattice_lambda(&tu);
        o.require(lu.m == l.m, || {
            format!("rank of Λ changed under U = {um:?}")
        });
        o.require(gamma_subgroup(&lu, n) == gamma_subgroup(&l, n), || {
            format!("Γ changed under U = {um:?}")
        });
        for v in box_vectors(n, 1) {
            if tu.apply(&v).iter().all(QExt::is_integer) {
                let w: Vec<i64> = (0..n)
                    .map(|i| (0..n).map(|j| um[i][j] * v[j]).sum())
                    .collect();
                o.require(l.contains(&w), || {
                    format!("U·{v:?} ∉ Λ although {v:?} ∈ Λ(UᵀΘU)")
                });
            }
        }
        o.margin("lambda_rank", l.m as f64);
        Ok(o)
    })
}

// ------------------------------------------------------------- transport

/// `ω(t) = A + tB + t²C`, scaled to `sup‖ω‖ ≤ 1` over a coarse grid.
pub fn random_path(rng: &mut ChaCha8Rng, n: usize) -> MatrixPath {
    let mut coeffs = vec![
        random_cmat(rng, n, n),
        random_cmat(rng, n, n),
        random_cmat(rng, n, n) * Complex64::new(0.5, 0.0),
    ];
    let at = |c: &[CMat], t: f64| {
        c.iter()
            .rev()
            .fold(CMat::zeros(n, n), |acc, m| acc * Complex64::new(t, 0.0) + m)
    };
    let sup = (0..=16)
        .map(|i| op_norm(&at(&coeffs, i as f64 / 16.0)))
        .fold(0.0, f64::max);
    let target = rng.gen_range(0.5..1.0);
    for c in &mut coeffs {
        *c *= Complex64::new(target / sup, 0.0);
    }
    MatrixPath::polynomial(coeffs).expect("nonempty coefficients")
}

pub(super) fn transport(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Outcome {
    run(|| {
        let path = random_path(rng, n);
        let opts = TransportOptions::default().with_steps(10_000);
        let picard = path_ordered_exp(&path, &opts)?;
        let rk4 = path_ordered_exp(&path, &opts.clone().with_method(Method::Rk4))?;
        let diff = (picard.alpha_at_1() - rk4.alpha_at_1()).norm();
        let mut o = Outcome::new();
        o.margin("picard_rk4", diff);
        o.require(diff <= tol, || format!("Picard and RK4 differ by {diff:e}"));
        if let Some(b) = &picard.bounds {
            let worst = b.terms.iter().map(|t| t.ratio).fold(0.0, f64::max);
            o.margin("bound_ratio", worst);
            o.require(b.pass, || {
                format!("factorial bound exceeded: ratio {worst}")
            });
        }
        let w0 = path.at(0.0);
        let w1 = path.at(1.0);
        o.margin("noncommutativity", (&w0 * &w1 - &w1 * &w0).norm());
        Ok(o)
    })
}

// ---------------------------------------------------- log representation

pub(super) fn log_representation_trial(rng: &mut ChaCha8Rng, n: usize, tol: f64) -> Outcome {
    run(|| {
        let raw = random_cmat(rng, n, n);
        let size = rng.gen_range(0.01..0.5);
        let alpha = &raw * Complex64::new(size / op_norm(&raw), 0.0);
        let t0 = rng.gen_range(0.25..=1.0);
        let sample = (&alpha * Complex64::new(t0, 0.0)).exp();
        let half = (&alpha * Complex64::new(t0 / 2.0, 0.0)).exp();
        let back = log_representation(&sample, t0)?;
        let round = (&back - &alpha).norm();
        let consistency = half_step_consistency(&sample, &half, t0)?;
        let mut o = Outcome::new();
        o.margin("round_trip", round);
        o.margin("half_step", consistency);
        o.require(round <= tol, || {
            format!("‖log(exp(t₀α))/t₀ − α‖ = {round:e}")
        });
        o.require(consistency <= 10.0 * tol, || {
            format!("half-step inconsistency {consistency:e}")
        });
        Ok(o)
    })
}
