//! Integer row reduction: Hermite normal form, integer kernels and Smith
//! invariant factors, all over `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

fn sub_multiple(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Unimodular row operations bringing the first `pivot_cols` columns to
/// echelon form. Returns the rank; rows from the rank on vanish in those
/// columns. Pivots are positive and entries above them reduced into
/// `[0, pivot)`.
fn echelonize(rows: &mut [Vec<BigInt>], pivot_cols: usize) -> usize {
    let mut r = 0;
    for col in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by_key(|&i| rows[i][col].abs());
            let Some(p) = pivot else { break };
            rows.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[r], &q);
                clean &= rows[i][col].is_zero();
            }
            if clean {
                break;
            }
        }
        if rows[r][col].is_zero() {
            continue;
        }
        if rows[r][col].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = rows[i][col].div_floor(&rows[r][col]);
            let (head, tail) = rows.split_at_mut(r);
            sub_multiple(&mut head[i], &tail[0], &q);
        }
        r += 1;
    }
    r
}

/// Row Hermite normal form of the lattice spanned by `rows`, zero rows
/// removed.
pub fn hnf(rows: &[Vec<BigInt>]) -> IntMatrix {
    let Some(ncols) = rows.first().map(|r| r.len()) else {
        return Vec::new();
    };
    let mut a = rows.to_vec();
    let r = echelonize(&mut a, ncols);
    a.truncate(r);
    a
}

/// A basis of `{x ∈ Zᵏ : Mx = 0}` for an `m×k` matrix `M`.
pub fn integer_kernel(m: &[Vec<BigInt>], k: usize) -> IntMatrix {
    let rows_m = m.len();
    // [Mᵀ | I]: row j is column j of M followed by e_j
    let mut a: IntMatrix = (0..k)
        .map(|j| {
            let mut row: Vec<BigInt> = m.iter().map(|r| r[j].clone()).collect();
            row.extend((0..k).map(|i| BigInt::from((i == j) as i64)));
            row
        })
        .collect();
    let r = echelonize(&mut a, rows_m);
    a[r..].iter().map(|row| row[rows_m..].to_vec()).collect()
}

/// Nonzero Smith invariant factors `d₁ | d₂ | …`.
pub fn smith_invariants(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a = rows.to_vec();
    let nr = a.len();
    let nc = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for t in 0..nr.min(nc) {
        let smallest = (t..nr)
            .flat_map(|i| (t..nc).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = smallest else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let (head, tail) = a.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[t], &q);
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let v = row[t].clone();
                    row[j] -= &q * v;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            let bad = (t + 1..nr)
                .flat_map(|i| (t + 1..nc).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
            match bad {
                Some((i, _)) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
    }
    out
}
