//! Axiom evaluation on basis tuples. Only tuples whose every intermediate
//! result stays in the window are checked ("interior window").

use rayon::prelude::*;

use super::{koszul, signed, GradedBasisAlgebra};
use crate::report::{CheckRecord, CheckReport};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

pub type AxiomCheck = CheckRecord;
pub type AxiomReport = CheckReport;

type Outcome = (usize, Option<String>);

fn finish(name: &str, (checked, witness): Outcome) -> AxiomCheck {
    CheckRecord::new(name, checked, witness)
}

/// Runs `f` over `0..n` in parallel; keeps the total count and the first
/// witness by index so reports are deterministic.
fn scan(n: usize, f: impl Fn(usize) -> Outcome + Sync + Send) -> Outcome {
    let results: Vec<Outcome> = (0..n).into_par_iter().map(f).collect();
    let checked = results.iter().map(|r| r.0).sum();
    let witness = results.into_iter().find_map(|r| r.1);
    (checked, witness)
}

fn differ<S: Scalar>(
    a: &GradedBasisAlgebra<S>,
    lhs: &SparseVec<S>,
    rhs: &SparseVec<S>,
    what: String,
) -> Option<String> {
    if lhs.sub(rhs).is_zero() {
        None
    } else {
        Some(format!(
            "{what}: {} ≠ {}",
            a.format_coords(lhs),
            a.format_coords(rhs)
        ))
    }
}

pub fn check_dga_axioms<S: Scalar>(a: &GradedBasisAlgebra<S>) -> AxiomReport {
    let n = a.dim();
    let e = |i: usize| SparseVec::<S>::unit(i);
    let name = |i: usize| a.name_of(i).to_string();
    let mut checks = Vec::new();

    checks.push(finish("degree", {
        let mut checked = 0;
        let mut witness = None;
        for (&(i, j), r) in a.nonzero_products() {
            checked += 1;
            if let Some(r) = r {
                if r.indices()
                    .any(|t| a.degree_of(t) != a.degree_of(i) + a.degree_of(j))
                    && witness.is_none()
                {
                    witness = Some(format!("{}·{}", name(i), name(j)));
                }
            }
        }
        for i in 0..n {
            checked += 1;
            if let Some(d) = a.basis_differential(i) {
                if d.indices().any(|t| a.degree_of(t) != a.degree_of(i) + 1) && witness.is_none() {
                    witness = Some(format!("d({})", name(i)));
                }
            }
        }
        (checked, witness)
    }));

    checks.push(finish(
        "unit",
        scan(n, |i| {
            let mut checked = 0;
            for (lhs, side) in [
                (a.try_mul(a.unit_coords(), &e(i)), "1·"),
                (a.try_mul(&e(i), a.unit_coords()), "·1"),
            ] {
                if let Some(lhs) = lhs {
                    checked += 1;
                    if let Some(w) = differ(a, &lhs, &e(i), format!("{side}{}", name(i))) {
                        return (checked, Some(w));
                    }
                }
            }
            (checked, None)
        }),
    ));

    checks.push(finish(
        "associativity",
        scan(n, |i| {
            let mut checked = 0;
            let di = a.degree_of(i);
            for j in 0..n {
                let dj = a.degree_of(j);
                if di + dj > a.max_degree() {
                    continue;
                }
                let Some(ij) = a.basis_product(i, j) else {
                    continue;
                };
                for k in 0..n {
                    if di + dj + a.degree_of(k) > a.max_degree() {
                        continue;
                    }
                    let Some(jk) = a.basis_product(j, k) else {
                        continue;
                    };
                    let (Some(l), Some(r)) = (a.try_mul(&ij, &e(k)), a.try_mul(&e(i), &jk)) else {
                        continue;
                    };
                    checked += 1;
                    if let Some(w) =
                        differ(a, &l, &r, format!("({}·{})·{}", name(i), name(j), name(k)))
                    {
                        return (checked, Some(w));
                    }
                }
            }
            (checked, None)
        }),
    ));

    checks.push(finish(
        "d_squared",
        scan(n, |i| {
            let Some(dd) = a.basis_differential(i).and_then(|d| a.try_d(d)) else {
                return (0, None);
            };
            (
                1,
                differ(a, &dd, &SparseVec::new(), format!("d²({})", name(i))),
            )
        }),
    ));

    checks.push(finish(
        "leibniz",
        scan(n, |i| {
            let mut checked = 0;
            for j in 0..n {
                let Some(prod) = a.basis_product(i, j) else {
                    continue;
                };
                let Some(lhs) = a.try_d(&prod) else { continue };
                let (Some(di), Some(dj)) = (a.basis_differential(i), a.basis_differential(j))
                else {
                    continue;
                };
                let (Some(x), Some(y)) = (a.try_mul(di, &e(j)), a.try_mul(&e(i), dj)) else {
                    continue;
                };
                let mut rhs = x;
                rhs.add_scaled(&y, &signed::<S>(a.degree_of(i) % 2 == 1));
                checked += 1;
                if let Some(w) = differ(a, &lhs, &rhs, format!("d({}·{})", name(i), name(j))) {
                    return (checked, Some(w));
                }
            }
            (checked, None)
        }),
    ));

    if a.has_star() {
        checks.push(finish(
            "star_involution",
            scan(n, |i| {
                let ss = a.try_star(&a.try_star(&e(i)).unwrap()).unwrap();
                (1, differ(a, &ss, &e(i), format!("({}*)*", name(i))))
            }),
        ));
        checks.push(finish(
            "star_antimultiplicative",
            scan(n, |i| {
                let mut checked = 0;
                let si = a.try_star(&e(i)).unwrap();
                for j in 0..n {
                    let Some(prod) = a.basis_product(i, j) else {
                        continue;
                    };
                    let lhs = a.try_star(&prod).unwrap();
                    let sj = a.try_star(&e(j)).unwrap();
                    let Some(r) = a.try_mul(&sj, &si) else {
                        continue;
                    };
                    let rhs = r.scaled(&signed(koszul(a.degree_of(i), a.degree_of(j))));
                    checked += 1;
                    if let Some(w) = differ(a, &lhs, &rhs, format!("({}·{})*", name(i), name(j))) {
                        return (checked, Some(w));
                    }
                }
                (checked, None)
            }),
        ));
        checks.push(finish(
            "star_differential",
            scan(n, |i| {
                let s = a.try_star(&e(i)).unwrap();
                let (Some(lhs), Some(d)) = (a.try_d(&s), a.basis_differential(i)) else {
                    return (0, None);
                };
                let rhs = a.try_star(d).unwrap();
                (1, differ(a, &lhs, &rhs, format!("d({}*)", name(i))))
            }),
        ));
    }
    AxiomReport { checks }
}

/// True iff every in-window pair of basis elements graded-commutes.
pub fn is_graded_commutative<S: Scalar>(a: &GradedBasisAlgebra<S>) -> bool {
    let n = a.dim();
    (0..n).into_par_iter().all(|i| {
        (i..n).all(|j| {
            a.try_commutator(&SparseVec::unit(i), &SparseVec::unit(j))
                .is_none_or(|c| c.is_zero())
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_exterior_algebra, build_two_point_space, io};
    use crate::scalar::Exact;

    #[test]
    fn mutated_two_point_fails() {
        let a = build_two_point_space::<Exact>(3).unwrap();
        let mut b = io::to_builder(&a);
        // d(diag(α,δ)) = [[0,δ−α],[δ−α,0]]
        let e11 = a.index_of("E11_0").unwrap();
        let e22 = a.index_of("E22_0").unwrap();
        let b12 = a.index_of("E12_1").unwrap();
        let b21 = a.index_of("E21_1").unwrap();
        let m1 = Exact::from_integer(-1);
        b.set_differential(
            e11,
            Some(SparseVec::from_pairs([(b12, m1.clone()), (b21, m1)])),
        );
        b.set_differential(
            e22,
            Some(SparseVec::from_pairs([
                (b12, Exact::one()),
                (b21, Exact::one()),
            ])),
        );
        let bad = b.build().unwrap();
        let r = check_dga_axioms(&bad);
        assert!(!r.all_pass());
        let failed: Vec<_> = r
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        assert!(
            failed.contains(&"leibniz") || failed.contains(&"d_squared"),
            "{failed:?}"
        );
        assert!(r
            .checks
            .iter()
            .filter(|c| !c.pass)
            .all(|c| c.witness.is_some()));
    }

    #[test]
    fn commutativity_gate() {
        assert!(is_graded_commutative(
            &build_exterior_algebra::<Exact>(3).unwrap()
        ));
        assert!(!is_graded_commutative(
            &build_two_point_space::<Exact>(2).unwrap()
        ));
    }
}
