use num_rational::BigRational;
use num_traits::Zero;

use super::*;
use crate::algebra::check_dga_axioms;
use crate::connection::{curvature, is_flat};
use crate::scalar::Exact;
use crate::sparse::SparseVec;

fn q(n: i64, d: i64) -> QExt {
    QExt::rational(BigRational::new(n.into(), d.into()))
}

fn irr(c: i64) -> QExt {
    QExt::new(
        BigRational::zero(),
        vec![BigRational::from_integer(c.into())],
    )
}

fn brute_lambda(t: &TorusPresentation, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let n = t.n;
    let total = (2 * bound + 1).pow(n as u32);
    for idx in 0..total {
        let mut k = idx;
        let r: Vec<i64> = (0..n)
            .map(|_| {
                let x = k % (2 * bound + 1) - bound;
                k /= 2 * bound + 1;
                x
            })
            .collect();
        if t.apply(&r).iter().all(|x| x.is_integer()) {
            out.push(r);
        }
    }
    out
}

#[test]
fn cocycle_identity_and_commutation_phase() {
    let t = TorusPresentation::rational_2d(1, 5, 4).unwrap();
    let vs = [vec![1, 0], vec![0, 1], vec![-1, 2], vec![2, -1]];
    for a in &vs {
        for b in &vs {
            for c in &vs {
                // τ(a,b)τ(a+b,c) = τ(a,b+c)τ(b,c)
                let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let bc: Vec<i64> = b.iter().zip(c).map(|(x, y)| x + y).collect();
                let lhs = t.cocycle(a, b).add(&t.cocycle(&ab, c));
                let rhs = t.cocycle(a, &bc).add(&t.cocycle(b, c));
                assert_eq!(lhs, rhs);
            }
        }
    }
    let u1 = WeylElement::<Exact>::new(vec![1, 0]);
    let u2 = WeylElement::<Exact>::new(vec![0, 1]);
    let p = weyl_mul(&u1, &u2, &t).unwrap().unwrap();
    let r = weyl_mul(&u2, &u1, &t).unwrap().unwrap();
    assert_eq!(p.exponent, r.exponent);
    assert_eq!(p.phase.sub(&r.phase), PhaseExponent::new(q(2, 5)));
    let inv = WeylElement::<Exact>::new(vec![-1, 0]);
    let one = weyl_mul(&u1, &inv, &t).unwrap().unwrap();
    assert_eq!(one.exponent, vec![0, 0]);
    assert!(one.phase.is_zero());
}

#[test]
fn weyl_window_policies() {
    let t = TorusPresentation::rational_2d(1, 3, 1).unwrap();
    let a = WeylElement::<Exact>::new(vec![1, 0]);
    assert!(matches!(weyl_mul(&a, &a, &t), Err(Error::OutOfWindow(_))));
    let t = t.with_truncation(Truncation::Drop);
    assert!(weyl_mul(&a, &a, &t).unwrap().is_none());
}

#[test]
fn differential_of_uv() {
    let t = TorusPresentation::rational_2d(1, 3, 2).unwrap();
    let f = torus_forms::<Exact>(&t, 2).unwrap();
    let a = &f.algebra;
    let u = SparseVec::unit(f.weyl(&[1, 0]).unwrap());
    let v = SparseVec::unit(f.weyl(&[0, 1]).unwrap());
    let uv = a.mul_coords(&u, &v).unwrap();
    let lhs = a.d_coords(&uv).unwrap();
    let eta = SparseVec::unit(f.eta(0).unwrap()).add(&SparseVec::unit(f.eta(1).unwrap()));
    let rhs = a.mul_coords(&uv, &eta).unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(
        f.algebra.name_of(f.index_of(&[1, -2], 3).unwrap()),
        "u(1,-2)·η1η2"
    );
}

#[test]
fn forms_satisfy_axioms() {
    let t = TorusPresentation::rational_2d(1, 3, 3).unwrap();
    let f = torus_forms::<Exact>(&t, 2).unwrap();
    assert_eq!(f.algebra.dims(), vec![49, 98, 49]);
    assert!(check_dga_axioms(&f.algebra).all_pass());
    let ti = TorusPresentation::irrational_2d(2).unwrap();
    let fi = torus_forms::<Exact>(&ti, 2).unwrap();
    assert!(check_dga_axioms(&fi.algebra).all_pass());
}

#[test]
fn lambda_examples() {
    let t = TorusPresentation::rational_2d(2, 7, 3).unwrap();
    let l = lattice_lambda(&t);
    assert_eq!(l.basis_i64(), vec![vec![7, 0], vec![0, 7]]);
    let g = gamma_subgroup(&l, 2);
    assert_eq!(g.invariant_factors, vec![7, 7]);
    assert_eq!(g.torus_rank, 0);
    let d = pi1_descriptor(&t);
    assert_eq!(d.descriptor_text, "algebraic hull of Z^2");

    let ti = TorusPresentation::irrational_2d(3).unwrap();
    let li = lattice_lambda(&ti);
    assert_eq!(li.m, 0);
    assert_eq!(pi1_descriptor(&ti).descriptor_text, "algebraic hull of R^2");

    let zero = TorusPresentation::rational_2d(0, 1, 1).unwrap();
    assert_eq!(
        lattice_lambda(&zero).basis_i64(),
        vec![vec![1, 0], vec![0, 1]]
    );
    assert_eq!(
        gamma_subgroup(&lattice_lambda(&zero), 2).description,
        "trivial"
    );
}

fn mixed() -> TorusPresentation {
    let z = QExt::zero();
    let theta = vec![
        vec![z.clone(), q(1, 2), irr(1)],
        vec![q(-1, 2), z.clone(), irr(2).add(&q(1, 3))],
        vec![irr(-1), irr(-2).add(&q(-1, 3)), z],
    ];
    TorusPresentation::new(theta, vec!["theta1".into()], 2).unwrap()
}

#[test]
fn mixed_lattice_matches_brute_force() {
    let t = mixed();
    let l = lattice_lambda(&t);
    assert_eq!(l.m, 1);
    assert_eq!(
        pi1_descriptor(&t).descriptor_text,
        "algebraic hull of Z^1 × R^2"
    );
    for r in brute_lambda(&t, 20) {
        assert!(l.contains(&r), "{r:?}");
    }
    for b in l.basis_i64() {
        assert!(t.apply(&b).iter().all(|x| x.is_integer()));
    }
    assert_eq!(l.completion.len(), 2);
}

#[test]
fn unimodular_invariance() {
    let t = mixed();
    let u = vec![vec![1, 2, 0], vec![0, 1, 0], vec![1, 1, 1]];
    let tu = t.conjugate(&u).unwrap();
    let l = lattice_lambda(&t);
    let lu = lattice_lambda(&tu);
    assert_eq!(l.m, lu.m);
    assert_eq!(gamma_subgroup(&l, 3), gamma_subgroup(&lu, 3));
    // r ∈ Λ(UᵀΘU) iff Ur ∈ Λ(Θ)
    for r in brute_lambda(&tu, 6) {
        let ur: Vec<i64> = (0..3)
            .map(|i| (0..3).map(|j| u[i][j] * r[j]).sum())
            .collect();
        assert!(l.contains(&ur));
    }
    let rat = TorusPresentation::rational_2d(3, 8, 2).unwrap();
    let ru = rat.conjugate(&[vec![2, 1], vec![1, 1]]).unwrap();
    assert_eq!(
        gamma_subgroup(&lattice_lambda(&ru), 2).invariant_factors,
        vec![8, 8]
    );
}

#[test]
fn center_crosscheck_examples() {
    let t = TorusPresentation::rational_2d(1, 2, 3).unwrap();
    let c = center_crosscheck(&t, 3, 2).unwrap();
    assert!(c.pass, "{c:?}");
    assert_eq!(c.degrees[0].predicted_dim, 9);
    let ti = TorusPresentation::irrational_2d(2).unwrap();
    let ci = center_crosscheck(&ti, 2, 2).unwrap();
    assert!(ci.pass);
    assert_eq!(ci.degrees[0].brute_force_dim, 1);
    assert_eq!(ci.degrees[1].brute_force_dim, 2);
    let small = TorusPresentation::rational_2d(1, 3, 2).unwrap();
    assert!(matches!(
        center_crosscheck(&small, 2, 2),
        Err(Error::Inconclusive(_))
    ));
    assert!(matches!(
        center_crosscheck(&t, 3, 1),
        Err(Error::Inconclusive(_))
    ));
}

fn ex(rows: &[&[i64]]) -> Vec<Vec<Exact>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| Exact::from_integer(x)).collect())
        .collect()
}

#[test]
fn flat_connections_from_endomorphisms() {
    let t = TorusPresentation::rational_2d(1, 3, 1).unwrap();
    let f = torus_forms::<Exact>(&t, 2).unwrap();
    let e1 = ex(&[&[1, 2], &[0, 1]]);
    let e2 = ex(&[&[3, -1], &[0, 3]]);
    let c = connection_from_endos(&f, &[e1.clone(), e2.clone()], 0.0).unwrap();
    assert!(is_flat(&c, 0.0).unwrap());
    let back = endos_from_connection(&f, &c, 0.0).unwrap();
    assert_eq!(back, vec![e1.clone(), e2]);

    let bad = ex(&[&[0, 1], &[1, 0]]);
    assert!(matches!(
        connection_from_endos(&f, &[e1.clone(), bad.clone()], 0.0),
        Err(Error::NonCommutingEndos(_))
    ));
    let kappa = kappa_from_endos(&f, &[e1, bad]).unwrap();
    let module = crate::connection::FgpModule::free(&f.algebra, 2);
    let curved = crate::connection::FgpConnection::new(module, kappa).unwrap();
    let r = curvature(&curved).unwrap();
    assert!(!r.matrix.is_zero());
    assert!(matches!(
        endos_from_connection(&f, &curved, 0.0),
        Err(Error::NotFlat(_))
    ));
}

#[test]
fn spec_file_round_trip() {
    let t = mixed();
    let file = TorusSpecFile::from_presentation(&t);
    let json = serde_json::to_string(&file).unwrap();
    let back: TorusSpecFile = serde_json::from_str(&json).unwrap();
    assert_eq!(back.to_presentation().unwrap(), t);
}
