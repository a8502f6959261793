use super::*;
use crate::algebra::{
    build_exterior_algebra, build_truncated_polynomial, build_two_point_space, tensor_dga,
    AlgebraHandle,
};
use crate::scalar::Exact;

fn int(k: i64) -> Exact {
    Exact::from_integer(k)
}

fn one_form(a: &Algebra<Exact>, terms: &[(&str, i64)]) -> SparseVec<Exact> {
    SparseVec::from_pairs(terms.iter().map(|&(n, c)| (a.index_of(n).unwrap(), int(c))))
}

#[test]
fn trivial_connections_are_flat() {
    let a = build_exterior_algebra::<Exact>(2).unwrap();
    let free = FgpModule::free(&a, 2);
    let d = FgpConnection::grassmannian(free.clone());
    assert!(is_flat(&d, 0.0).unwrap());
    let m1 = FgpModule::free(&a, 1);
    let mut k = AlgMatrix::zeros(1, 1);
    k.set(0, 0, one_form(&a, &[("η1", 3)]));
    let c = FgpConnection::new(m1, k).unwrap();
    assert!(is_flat(&c, 0.0).unwrap());
    assert!(check_connection(&c).all_pass());
}

#[test]
fn noncommuting_coefficients_curve() {
    // κ = η1·A + η2·B with A = [[0,1],[0,0]], B = [[0,0],[1,0]]
    let a = build_exterior_algebra::<Exact>(2).unwrap();
    let mut k = AlgMatrix::zeros(2, 2);
    k.set(0, 1, one_form(&a, &[("η1", 1)]));
    k.set(1, 0, one_form(&a, &[("η2", 1)]));
    let c = FgpConnection::new(FgpModule::free(&a, 2), k).unwrap();
    let r = curvature(&c).unwrap();
    // expanding κκ by hand: η1η2·(AB − BA) = η1η2·diag(1, −1)
    let top = a.index_of("η1η2").unwrap();
    let mut expected = AlgMatrix::zeros(2, 2);
    expected.set(0, 0, SparseVec::single(top, int(1)));
    expected.set(1, 1, SparseVec::single(top, int(-1)));
    assert_eq!(r.matrix, expected);
    assert_eq!(curvature_oracle(&c).unwrap(), expected);
    assert!(r.bilinearity.pass);
    assert!(!is_flat(&c, 1e-9).unwrap());
}

#[test]
fn grassmannian_on_nonconstant_projection() {
    let a = build_truncated_polynomial::<Exact>(3).unwrap();
    let x = a.index_of("x").unwrap();
    let mut p = AlgMatrix::identity(&a, 2);
    p.set(0, 1, SparseVec::unit(x));
    p.set(1, 1, SparseVec::new());
    let m = FgpModule::new(&a, p).unwrap();
    let g = FgpConnection::grassmannian(m);
    let r = check_connection(&g);
    assert!(r.all_pass(), "{r:?}");
    assert!(r.get("right_leibniz").unwrap().checked > 0);
    assert_eq!(curvature(&g).unwrap().matrix, curvature_oracle(&g).unwrap());
}

#[test]
fn curvature_matches_oracle_in_two_variables() {
    let p1 = build_truncated_polynomial::<Exact>(3).unwrap();
    let a = tensor_dga(&p1, &p1).unwrap();
    let x = a.index_of("x⊗1").unwrap();
    let y = a.index_of("1⊗x").unwrap();
    let mut p = AlgMatrix::identity(&a, 2);
    p.set(0, 1, SparseVec::unit(x));
    p.set(1, 1, SparseVec::new());
    let m = FgpModule::new(&a, p.clone()).unwrap();
    // κ = p K p for K with polynomial one-form entries
    let dx = a.index_of("dx⊗1").unwrap();
    let dy = a.index_of("1⊗dx").unwrap();
    let mut k = AlgMatrix::zeros(2, 2);
    k.set(0, 0, SparseVec::from_pairs([(dy, int(2))]));
    k.set(0, 1, SparseVec::from_pairs([(dx, int(1))]));
    k.set(
        1,
        0,
        a.try_mul(&SparseVec::unit(y), &SparseVec::unit(dx))
            .unwrap(),
    );
    let kappa = p.mul(&a, &k).unwrap().mul(&a, &p).unwrap();
    let c = FgpConnection::new(m, kappa).unwrap();
    assert!(check_connection(&c).all_pass());
    let r = curvature(&c).unwrap();
    assert_eq!(r.matrix, curvature_oracle(&c).unwrap());
    assert!(r.bilinearity.pass && r.bilinearity.checked > 0);
}

#[test]
fn corrupted_kappa_is_reported() {
    let a = build_exterior_algebra::<Exact>(2).unwrap();
    let p = AlgMatrix::from_scalars(
        &a,
        2,
        2,
        |i, j| if i == 0 && j == 0 { int(1) } else { int(0) },
    );
    let m = FgpModule::new(&a, p).unwrap();
    let mut k = AlgMatrix::zeros(2, 2);
    k.set(1, 0, one_form(&a, &[("η1", 1)]));
    let c = FgpConnection::new(m, k).unwrap();
    let r = check_connection(&c);
    assert!(!r.get("kappa_compressed").unwrap().pass);
    assert!(r.get("kappa_compressed").unwrap().witness.is_some());
    assert!(!r.get("image").unwrap().pass);
}

#[test]
fn tensor_of_rank_one_adds_coefficients() {
    let a = build_exterior_algebra::<Exact>(2).unwrap();
    let rank1 = |c: i64| {
        let mut k = AlgMatrix::zeros(1, 1);
        k.set(0, 0, one_form(&a, &[("η1", c)]));
        FgpConnection::new(FgpModule::free(&a, 1), k).unwrap()
    };
    let t = tensor_connection(&rank1(2), &rank1(5)).unwrap();
    assert_eq!(t.kappa().get(0, 0), &one_form(&a, &[("η1", 7)]));
    let dd = tensor_connection(
        &FgpConnection::grassmannian(FgpModule::free(&a, 2)),
        &FgpConnection::grassmannian(FgpModule::free(&a, 3)),
    )
    .unwrap();
    assert!(dd.kappa().is_zero());
    assert!(dd.module().is_free());
}

#[test]
fn dual_of_free_connection() {
    let a = build_exterior_algebra::<Exact>(2).unwrap();
    let mut k = AlgMatrix::zeros(2, 2);
    k.set(0, 1, one_form(&a, &[("η1", 1), ("η2", 3)]));
    k.set(1, 1, one_form(&a, &[("η2", -2)]));
    let c = FgpConnection::new(FgpModule::free(&a, 2), k.clone()).unwrap();
    let dual = dual_connection(&c).unwrap();
    assert_eq!(dual.kappa(), &k.transpose().neg());
    assert_eq!(dual_connection(&dual).unwrap().kappa(), &k);
    assert!(dual_curvature_residual(&c).unwrap().is_zero());
}

#[test]
fn direct_sum_is_block_diagonal() {
    let a = build_exterior_algebra::<Exact>(2).unwrap();
    let mut k = AlgMatrix::zeros(1, 1);
    k.set(0, 0, one_form(&a, &[("η2", 1)]));
    let c1 = FgpConnection::new(FgpModule::free(&a, 1), k).unwrap();
    let c2 = FgpConnection::grassmannian(FgpModule::free(&a, 2));
    let s = direct_sum_connection(&c1, &c2).unwrap();
    assert_eq!(s.rank_ambient(), 3);
    assert!(s.kappa().get(1, 1).is_zero() && !s.kappa().get(0, 0).is_zero());
    assert!(is_flat(&s, 0.0).unwrap());
}

#[test]
fn multiplication_by_a_is_a_morphism() {
    let alg = build_truncated_polynomial::<Exact>(4).unwrap();
    let a = alg.one().add(&alg.named("x").unwrap()).unwrap();
    let omega = a.inverse().unwrap().mul(&a.d().unwrap()).unwrap();
    // da = a·ω
    assert_eq!(a.mul(&omega).unwrap(), a.d().unwrap());
    let mut k = AlgMatrix::zeros(1, 1);
    k.set(0, 0, omega.coords().clone());
    let c1 = FgpConnection::new(FgpModule::free(&alg, 1), k).unwrap();
    let c2 = FgpConnection::grassmannian(FgpModule::free(&alg, 1));
    let mut phi = AlgMatrix::zeros(1, 1);
    phi.set(0, 0, a.coords().clone());
    assert!(check_morphism(&phi, &c1, &c2).unwrap().all_pass());
    // a non-intertwining map
    let mut psi = AlgMatrix::zeros(1, 1);
    psi.set(0, 0, alg.named("x").unwrap().coords().clone());
    let r = check_morphism(&psi, &c1, &c2).unwrap();
    assert!(!r.get("intertwines").unwrap().pass);
    // identity always passes
    assert!(check_morphism(&AlgMatrix::identity(&alg, 1), &c1, &c1)
        .unwrap()
        .all_pass());
    assert!(matches!(
        check_morphism(&AlgMatrix::identity(&alg, 2), &c1, &c2),
        Err(Error::ShapeMismatch(_))
    ));
}

#[test]
fn two_point_reduces_to_scalars() {
    let a = build_two_point_space::<Exact>(4).unwrap();
    let g = FgpConnection::grassmannian(FgpModule::free(&a, 1));
    let (z, ca) = center_connection(&g).unwrap();
    let ca = ca.unwrap();
    assert_eq!(ca.algebra.dims()[..2], [1, 0]);
    assert!(z.kappa().is_zero());
    let mut k = AlgMatrix::zeros(1, 1);
    k.set(0, 0, SparseVec::unit(a.index_of("E12_1").unwrap()));
    let bad = FgpConnection::new(FgpModule::free(&a, 1), k).unwrap();
    assert!(matches!(
        restrict_to_center(&bad, &ca),
        Err(Error::RestrictionEscapesCenter(_))
    ));
}

#[test]
fn commutative_owner_is_untouched_by_center_reduction() {
    let a = build_exterior_algebra::<Exact>(2).unwrap();
    let mut k = AlgMatrix::zeros(1, 1);
    k.set(0, 0, one_form(&a, &[("η1", 1)]));
    let c = FgpConnection::new(FgpModule::free(&a, 1), k).unwrap();
    let (z, ca) = center_connection(&c).unwrap();
    assert!(ca.is_none());
    assert_eq!(z.kappa(), c.kappa());
}

#[test]
fn fibre_dimensions() {
    let a = build_exterior_algebra::<Exact>(2).unwrap();
    let unit = a.index_of("1").unwrap();
    let chi = Character::new(&a, [(unit, int(1))].into_iter().collect()).unwrap();
    let free = FgpConnection::grassmannian(FgpModule::free(&a, 3));
    assert_eq!(fibre_functor(&free, &chi).unwrap().0, 3);
    let p = AlgMatrix::from_scalars(
        &a,
        2,
        2,
        |i, j| if i == 0 && j == 0 { int(1) } else { int(0) },
    );
    let c = FgpConnection::grassmannian(FgpModule::new(&a, p).unwrap());
    assert_eq!(fibre_functor(&c, &chi).unwrap().0, 1);
    assert!(matches!(
        Character::new(&a, [(unit, int(2))].into_iter().collect()),
        Err(Error::NotMultiplicative(_))
    ));
}

#[test]
fn polynomial_character_at_origin() {
    let a = build_truncated_polynomial::<Exact>(3).unwrap();
    let one = a.index_of("1").unwrap();
    let chi = Character::new(&a, [(one, int(1))].into_iter().collect()).unwrap();
    assert!(chi.witness.pass && chi.witness.checked > 1);
    // x ↦ 1 is not a point: x² = x³·… vanishes but χ(x)² = 1
    let x = a.index_of("x").unwrap();
    let bad = Character::new(&a, [(one, int(1)), (x, int(1))].into_iter().collect());
    assert!(matches!(bad, Err(Error::NotMultiplicative(_))));
}

#[test]
fn non_idempotent_projection_rejected() {
    let a = build_exterior_algebra::<Exact>(1).unwrap();
    let p = AlgMatrix::from_scalars(&a, 1, 1, |_, _| int(2));
    assert!(matches!(
        FgpModule::new(&a, p),
        Err(Error::NotIdempotent(_))
    ));
}

#[test]
fn connection_file_round_trip_shares_owner() {
    let a = build_truncated_polynomial::<Exact>(3).unwrap();
    let x = a.index_of("x").unwrap();
    let p = AlgMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => a.unit_coords().clone(),
        (0, 1) => SparseVec::unit(x),
        _ => SparseVec::new(),
    });
    let c = FgpConnection::grassmannian(FgpModule::new(&a, p).unwrap());
    let text = serde_json::to_string(&io::ConnectionFile::from_connection(&c)).unwrap();
    let both = io::load_connections(&[(text.clone(), None), (text, None)]).unwrap();
    let (io::AnyConnection::Exact(c1), io::AnyConnection::Exact(c2)) = (&both[0], &both[1]) else {
        panic!("scalar mode changed");
    };
    assert_eq!(c1.projection(), c.projection());
    assert!(tensor_connection(c1, c2).is_ok());
}

#[test]
fn connection_file_names_and_errors() {
    let a = build_exterior_algebra::<Exact>(2).unwrap();
    let alg = crate::algebra::io::save_algebra(&a);
    let text =
        format!(r#"{{"algebra": {alg}, "module": {{"ambient_rank": 1}}, "kappa": [["η1"]]}}"#);
    let io::AnyConnection::Exact(c) = io::load_connection(&text, None).unwrap() else {
        panic!()
    };
    assert!(is_flat(&c, 0.0).unwrap());
    let bad =
        format!(r#"{{"algebra": {alg}, "module": {{"ambient_rank": 1}}, "kappa": [["η9"]]}}"#);
    assert!(matches!(
        io::load_connection(&bad, None),
        Err(Error::InvalidInput(_))
    ));
    let extra = format!(r#"{{"algebra": {alg}, "module": {{"ambient_rank": 1}}, "colour": 1}}"#);
    assert!(io::load_connection(&extra, None).is_err());
}
