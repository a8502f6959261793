//! The example algebras: exterior algebras, the two-point space, two
//! identified points, and truncated polynomials.

use super::{signed, Algebra, AlgebraBuilder};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseVec;

/// Wedge monomials are bitmasks over the generators; the sign of
/// `η_I · η_J` counts transpositions needed to sort the concatenation.
fn wedge_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    for j in 0..32 {
        if b >> j & 1 == 1 {
            // generators of `a` with larger index must pass over η_j
            swaps += (a >> (j + 1)).count_ones();
        }
    }
    Some(swaps % 2 == 1)
}

fn wedge_name(mask: u32, n: usize) -> String {
    if mask == 0 {
        return "1".into();
    }
    (0..n)
        .filter(|k| mask >> k & 1 == 1)
        .map(|k| format!("η{}", k + 1))
        .collect()
}

/// `ΛV` with `dim V = n`, `d = 0` and the star fixing every monomial.
pub fn build_exterior_algebra<S: Scalar>(n: usize) -> Result<Algebra<S>> {
    if n == 0 || n > 16 {
        return Err(Error::InvalidInput(format!(
            "exterior algebra needs 1 ≤ n ≤ 16, got {n}"
        )));
    }
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
    let mut b = AlgebraBuilder::<S>::new(n);
    let mut index = vec![0usize; 1 << n];
    for &m in &masks {
        index[m as usize] = b.add_basis(wedge_name(m, n), m.count_ones() as usize)?;
    }
    for &x in &masks {
        for &y in &masks {
            if let Some(neg) = wedge_sign(x, y) {
                b.set_product(
                    index[x as usize],
                    index[y as usize],
                    SparseVec::single(index[(x | y) as usize], signed(neg)),
                );
            }
        }
    }
    b.set_star(Some((0..masks.len()).map(|i| (i, S::one())).collect()));
    b.set_unit(SparseVec::unit(index[0]));
    b.build()
}

type Mat2 = [[i64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn elementary(r: usize, c: usize) -> Mat2 {
    let mut m = [[0; 2]; 2];
    m[r][c] = 1;
    m
}

/// Algebra whose degree-k part is spanned by elementary 2×2 matrices
/// `allowed(k)`, with matrix multiplication and `d(x) = Fx − (−1)^{|x|}xF`.
/// The star is `x ↦ (−1)^{k(k+1)/2} x†`, which makes `F` self-adjoint
/// compatible with the Koszul-signed antimultiplicativity.
fn matrix_model<S: Scalar>(
    max_degree: usize,
    prefix: &str,
    allowed: impl Fn(usize) -> Vec<(usize, usize)>,
    f: Mat2,
) -> Result<Algebra<S>> {
    let mut b = AlgebraBuilder::<S>::new(max_degree);
    let mut cells = Vec::new();
    for k in 0..=max_degree {
        for (r, c) in allowed(k) {
            let i = b.add_basis(format!("{prefix}{}{}_{k}", r + 1, c + 1), k)?;
            cells.push((i, k, r, c));
        }
    }
    let lookup = |k: usize, r: usize, c: usize| -> Option<usize> {
        cells
            .iter()
            .find(|&&(_, kk, rr, cc)| kk == k && rr == r && cc == c)
            .map(|t| t.0)
    };
    let expand = |k: usize, m: &Mat2| -> SparseVec<S> {
        let mut v = SparseVec::new();
        for r in 0..2 {
            for c in 0..2 {
                if m[r][c] != 0 {
                    let i =
                        lookup(k, r, c).expect("matrix model entry outside the allowed pattern");
                    v.add_term(i, &S::from_i64(m[r][c]));
                }
            }
        }
        v
    };
    for &(i, p, r1, c1) in &cells {
        for &(j, q, r2, c2) in &cells {
            if c1 != r2 {
                continue;
            }
            if p + q > max_degree {
                b.set_product_out_of_window(i, j);
            } else {
                b.set_product(i, j, expand(p + q, &elementary(r1, c2)));
            }
        }
        let x = elementary(r1, c1);
        if p == max_degree {
            b.set_differential(i, None);
        } else {
            let fx = mat_mul(&f, &x);
            let xf = mat_mul(&x, &f);
            let sign = if p % 2 == 0 { 1 } else { -1 };
            let mut m = [[0; 2]; 2];
            for r in 0..2 {
                for c in 0..2 {
                    m[r][c] = fx[r][c] - sign * xf[r][c];
                }
            }
            b.set_differential(i, Some(expand(p + 1, &m)));
        }
    }
    let star = cells
        .iter()
        .map(|&(_, k, r, c)| {
            let neg = (k * (k + 1) / 2) % 2 == 1;
            (lookup(k, c, r).unwrap(), signed::<S>(neg))
        })
        .collect();
    b.set_star(Some(star));
    let mut unit = SparseVec::new();
    for (r, c) in [(0, 0), (1, 1)] {
        unit.add_term(lookup(0, r, c).unwrap(), &S::one());
    }
    b.set_unit(unit);
    b.build()
}

/// Two points at finite distance: diagonal matrices in even degrees,
/// off-diagonal ones in odd degrees, `d` the graded commutator with the
/// off-diagonal matrix of ones. Basis names `E{r}{c}_{k}`.
pub fn build_two_point_space<S: Scalar>(max_degree: usize) -> Result<Algebra<S>> {
    matrix_model(
        max_degree,
        "E",
        |k| {
            if k % 2 == 0 {
                vec![(0, 0), (1, 1)]
            } else {
                vec![(0, 1), (1, 0)]
            }
        },
        [[0, 1], [1, 0]],
    )
}

/// Two identified points: `M₂(ℂ)` in every degree, `d` the graded
/// commutator with `diag(1, −1)`. Basis names `e{r}{c}_{k}`.
pub fn build_identified_points<S: Scalar>(max_degree: usize) -> Result<Algebra<S>> {
    matrix_model(
        max_degree,
        "e",
        |_| vec![(0, 0), (0, 1), (1, 0), (1, 1)],
        [[1, 0], [0, -1]],
    )
}

/// `ℂ[x]/(x^order)` with one-forms `ℂ[x]/(x^{order−1})·dx` and
/// `d(x^k) = k·x^{k−1}dx`. Two-forms vanish identically.
pub fn build_truncated_polynomial<S: Scalar>(order: usize) -> Result<Algebra<S>> {
    if order < 2 {
        return Err(Error::InvalidInput(
            "truncated polynomial order must be at least 2".into(),
        ));
    }
    let mut b = AlgebraBuilder::<S>::new(2);
    let pow_name = |k: usize| match k {
        0 => "1".to_string(),
        1 => "x".to_string(),
        _ => format!("x^{k}"),
    };
    let zero: Vec<usize> = (0..order)
        .map(|k| b.add_basis(pow_name(k), 0))
        .collect::<Result<_>>()?;
    let one: Vec<usize> = (0..order - 1)
        .map(|k| {
            b.add_basis(
                if k == 0 {
                    "dx".to_string()
                } else {
                    format!("{} dx", pow_name(k))
                },
                1,
            )
        })
        .collect::<Result<_>>()?;
    for i in 0..order {
        for j in 0..order {
            if i + j < order {
                b.set_product(zero[i], zero[j], SparseVec::unit(zero[i + j]));
            }
        }
        for j in 0..order - 1 {
            if i + j < order - 1 {
                b.set_product(zero[i], one[j], SparseVec::unit(one[i + j]));
                b.set_product(one[j], zero[i], SparseVec::unit(one[i + j]));
            }
        }
        if i > 0 {
            b.set_differential(
                zero[i],
                Some(SparseVec::single(one[i - 1], S::from_i64(i as i64))),
            );
        }
    }
    let n = b.index_of("1").unwrap();
    b.set_unit(SparseVec::unit(n));
    let total = zero.len() + one.len();
    b.set_star(Some((0..total).map(|i| (i, S::one())).collect()));
    b.build()
}
