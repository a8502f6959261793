use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use ncg_core::abelian::{
    char_coefficients, pseudoinverse, Mat, MatOps, ScalarRing, DEFAULT_EPS_RANK,
};
use ncg_core::algebra::{build_exterior_algebra, build_two_point_space, graded_center, Algebra};
use ncg_core::torus::lattice::{hnf, smith_invariants};
use ncg_core::torus::{lattice_lambda, TorusPresentation};
use ncg_core::transport::{
    log_representation, path_ordered_exp, MatrixPath, Method, TransportOptions,
};
use ncg_core::{AlgebraElement, AlgebraHandle, Exact, QExt, Scalar, SparseVec};

fn int_matrix(n: usize, m: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-range..=range, m), n)
}

fn exact_mat(rows: &[Vec<i64>]) -> Mat<Exact> {
    Mat::from_fn(rows.len(), rows[0].len(), |i, j| {
        Exact::from_i64(rows[i][j])
    })
}

fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Fraction-free elimination on i128.
fn det_bareiss(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn homogeneous_element(a: &Algebra<Exact>, degree: usize, coeffs: &[i64]) -> AlgebraElement<Exact> {
    let basis = a.basis_in_degree(degree);
    a.element(SparseVec::from_pairs(
        basis
            .iter()
            .zip(coeffs.iter().cycle())
            .map(|(&i, &c)| (i, Exact::from_i64(c))),
    ))
}

fn koszul(p: usize, q: usize) -> Exact {
    Exact::from_i64(if p * q % 2 == 1 { -1 } else { 1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exterior_graded_commutative_and_star(p in 0usize..=3, q in 0usize..=3,
                                            ca in prop::collection::vec(-3i64..=3, 1..4),
                                            cb in prop::collection::vec(-3i64..=3, 1..4)) {
        let a = build_exterior_algebra::<Exact>(3).unwrap();
        let x = homogeneous_element(&a, p, &ca);
        let y = homogeneous_element(&a, q, &cb);
        let xy = x.mul(&y).unwrap();
        let yx = y.mul(&x).unwrap();
        prop_assert_eq!(xy.clone(), yx.scale(&koszul(p, q)));
        let lhs = xy.star().unwrap();
        let rhs = y.star().unwrap().mul(&x.star().unwrap()).unwrap().scale(&koszul(p, q));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn two_point_leibniz(p in 0usize..=2, q in 0usize..=2,
                         ca in prop::collection::vec(-3i64..=3, 2), cb in prop::collection::vec(-3i64..=3, 2)) {
        let a = build_two_point_space::<Exact>(5).unwrap();
        let x = homogeneous_element(&a, p, &ca);
        let y = homogeneous_element(&a, q, &cb);
        let lhs = x.mul(&y).unwrap().d().unwrap();
        let sign = Exact::from_i64(if p % 2 == 1 { -1 } else { 1 });
        let rhs = x.d().unwrap().mul(&y).unwrap().add(&x.mul(&y.d().unwrap()).unwrap().scale(&sign)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(x.d().unwrap().d().unwrap().is_zero());
    }

    #[test]
    fn char_poly_matches_determinant(rows in int_matrix(3, 3, 4), x in -5i64..=5) {
        // χ(x) = Σ (−1)^{n−m} a_m x^m must equal det(xI − M)
        let ring = ScalarRing::<Exact>::new();
        let c = char_coefficients(&ring, &exact_mat(&rows)).unwrap();
        let n = rows.len();
        let mut chi = Exact::zero();
        let mut power = Exact::one();
        for m in 0..=n {
            let term = c.a(m).mul(&power);
            chi = if (n - m) % 2 == 1 { chi.sub(&term) } else { chi.add(&term) };
            power = power.mul(&Exact::from_i64(x));
        }
        let shifted: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| (if i == j { x } else { 0 } - rows[i][j]) as i128).collect())
            .collect();
        prop_assert_eq!(chi, Exact::from_i64(det_bareiss(&shifted) as i64));
    }

    #[test]
    fn exact_pseudoinverse_identities(b in int_matrix(3, 2, 3), c in int_matrix(2, 4, 3)) {
        // rank ≤ 2 by construction
        let ring = ScalarRing::<Exact>::new();
        let ops = MatOps(&ring);
        let phi = ops.mul(&exact_mat(&b), &exact_mat(&c)).unwrap();
        let s = pseudoinverse(&ring, &phi, DEFAULT_EPS_RANK).unwrap();
        let x = &s.phi_plus;
        prop_assert_eq!(ops.mul(&ops.mul(&phi, x).unwrap(), &phi).unwrap(), phi.clone());
        prop_assert_eq!(ops.mul(&ops.mul(x, &phi).unwrap(), x).unwrap(), x.clone());
        let id = ops.identity(phi.cols());
        prop_assert_eq!(ops.add(&s.e_ker, &ops.mul(x, &phi).unwrap()).unwrap(), id);
        prop_assert!(s.decision.rank <= 2);
    }

    #[test]
    fn smith_product_is_abs_det(rows in int_matrix(3, 3, 6)) {
        let det = det_bareiss(&rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect::<Vec<_>>());
        prop_assume!(det != 0);
        let inv = smith_invariants(&big_rows(&rows));
        prop_assert_eq!(inv.len(), 3);
        let prod: BigInt = inv.iter().product();
        prop_assert_eq!(prod, BigInt::from(det.abs()));
        for w in inv.windows(2) {
            prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
        }
    }

    #[test]
    fn hnf_is_canonical_under_row_operations(rows in int_matrix(2, 3, 9), k in -4i64..=4) {
        let h = hnf(&big_rows(&rows));
        prop_assert_eq!(hnf(&h), h.clone());
        let mut mixed = rows.clone();
        for j in 0..3 {
            mixed[0][j] += k * rows[1][j];
        }
        mixed.swap(0, 1);
        prop_assert_eq!(hnf(&big_rows(&mixed)), h);
    }

    #[test]
    fn torus_cocycle_identity(num in prop::collection::vec(-6i64..=6, 3), den in 1i64..=7,
                              r in prop::collection::vec(-3i64..=3, 3),
                              s in prop::collection::vec(-3i64..=3, 3),
                              t in prop::collection::vec(-3i64..=3, 3)) {
        let q = |k: i64| QExt::rational(BigRational::new(k.into(), den.into()));
        let z = QExt::zero();
        let theta = vec![
            vec![z.clone(), q(num[0]), q(num[1])],
            vec![q(-num[0]), z.clone(), q(num[2])],
            vec![q(-num[1]), q(-num[2]), z],
        ];
        let tp = TorusPresentation::new(theta, Vec::new(), 9).unwrap();
        let add = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        let lhs = tp.cocycle(&r, &s).add(&tp.cocycle(&add(&r, &s), &t));
        let rhs = tp.cocycle(&s, &t).add(&tp.cocycle(&r, &add(&s, &t)));
        prop_assert_eq!(lhs, rhs);
        // lattice membership agrees with integrality of Θr
        let l = lattice_lambda(&tp);
        prop_assert_eq!(l.contains(&r), tp.apply(&r).iter().all(|x| x.is_integer()));
    }

    #[test]
    fn rational_torus_lattice_is_q_z2(p in 1i64..=12, q in 2i64..=12) {
        let g = num_integer::gcd(p, q);
        let (p, q) = (p / g, q / g);
        prop_assume!(q > 1);
        let l = lattice_lambda(&TorusPresentation::rational_2d(p, q, 2).unwrap());
        prop_assert_eq!(l.basis_i64(), vec![vec![q, 0], vec![0, q]]);
    }

    #[test]
    fn liouville_determinant(a in prop::collection::vec(-0.5f64..0.5, 4), b in prop::collection::vec(-0.5f64..0.5, 4)) {
        // det α(1) = exp(∫ tr ω) for ω(t) = A + tB
        let m = |v: &[f64]| DMatrix::from_fn(2, 2, |i, j| Complex64::new(v[2 * i + j], 0.0));
        let (am, bm) = (m(&a), m(&b));
        let omega = MatrixPath::polynomial(vec![am.clone(), bm.clone()]).unwrap();
        let res = path_ordered_exp(&omega, &TransportOptions::default().with_method(Method::Rk4).with_steps(512)).unwrap();
        let expected = (am.trace() + bm.trace() * 0.5).exp();
        prop_assert!((res.alpha_at_1().determinant() - expected).norm() < 1e-9);
    }

    #[test]
    fn log_inverts_diagonal_exponential(c in prop::collection::vec(-0.4f64..0.4, 3), t0 in 0.25f64..1.0) {
        let alpha = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(3, c.iter().map(|&x| Complex64::new(x, 0.0))));
        let sample = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(3, c.iter().map(|&x| Complex64::new((t0 * x).exp(), 0.0))));
        let back = log_representation(&sample, t0).unwrap();
        prop_assert!((back - alpha).camax() < 1e-12);
    }
}

#[test]
fn exterior_center_is_everything() {
    // ΛV is graded commutative, so its graded center is the whole algebra
    let a = build_exterior_algebra::<Exact>(3).unwrap();
    let c = graded_center(&a);
    let dims: Vec<usize> = c.per_degree.iter().map(|v| v.len()).collect();
    assert_eq!(dims, a.dims());
}
