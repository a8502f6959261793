//! Characteristic coefficients, the pseudoinverse built from them, kernel /
//! image / cokernel splitting with induced connections, and the principal
//! minor derivative inequality.
//!
//! Coefficients follow `χ_M(x) = det(xI − M) = Σ_m (−1)^{n−m} a_m x^m`, so
//! `a_n = 1`, `a_{n−1} = Tr M` and `a_0 = det M`. The sum of `k×k` principal
//! minors is then `D_k = a_{n−k}`.

mod dm;
mod matrix;
mod ring;
mod split;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{CheckRecord, CheckReport};
use crate::scalar::ScalarMode;

pub use dm::{dm_derivative_check, dm_directional_derivative, principal_minor_sums, DmRecord};
pub use matrix::{Mat, MatOps};
pub use ring::{DegreeZeroRing, Ring, ScalarRing};
pub use split::{split_with_connections, SplitConnections};

pub const DEFAULT_EPS_RANK: f64 = 1e-10;

/// `a_0..a_n` with `a_n = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharCoefficients<E> {
    pub coeffs: Vec<E>,
}

impl<E> CharCoefficients<E> {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn a(&self, m: usize) -> &E {
        &self.coeffs[m]
    }
}

/// Berkowitz's division-free recursion over the leading principal
/// submatrices. Works over any commutative ring.
pub fn char_coefficients<R: Ring>(ring: &R, m: &Mat<R::E>) -> Result<CharCoefficients<R::E>> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "characteristic polynomial of a {}×{} matrix",
            n,
            m.cols()
        )));
    }
    let ops = MatOps(ring);
    // p holds det(xI − M_k) from x^k down to x^0
    let mut p = vec![ring.one()];
    for k in 1..=n {
        let a = m.get(k - 1, k - 1);
        let row = Mat::from_fn(1, k - 1, |_, j| m.get(k - 1, j).clone());
        let mut col = Mat::from_fn(k - 1, 1, |i, _| m.get(i, k - 1).clone());
        let lead = Mat::from_fn(k - 1, k - 1, |i, j| m.get(i, j).clone());
        let mut t = vec![ring.one(), ring.neg(a)];
        for _ in 0..k.saturating_sub(1) {
            let v = ops.mul(&row, &col)?;
            t.push(ring.neg(v.get(0, 0)));
            col = ops.mul(&lead, &col)?;
        }
        let mut next = vec![ring.zero(); k + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            for j in 0..p.len().min(i + 1) {
                let term = ring.mul(&t[i - j], &p[j])?;
                *slot = ring.add(slot, &term);
            }
        }
        p = next;
    }
    // p[i] is the coefficient of x^{n−i} = (−1)^i a_{n−i}
    let coeffs = (0..=n)
        .map(|mm| {
            let c = &p[n - mm];
            if (n - mm) % 2 == 1 {
                ring.neg(c)
            } else {
                c.clone()
            }
        })
        .collect();
    Ok(CharCoefficients { coeffs })
}

/// `Σ (−1)^{n−m} a_m M^m`, which vanishes by Cayley–Hamilton.
pub fn cayley_hamilton_residual<R: Ring>(
    ring: &R,
    m: &Mat<R::E>,
    c: &CharCoefficients<R::E>,
) -> Result<Mat<R::E>> {
    let ops = MatOps(ring);
    let n = c.degree();
    let mut acc = ops.identity(n);
    for k in (0..n).rev() {
        acc = ops.mul(&acc, m)?;
        let s = if (n - k) % 2 == 1 {
            ring.neg(c.a(k))
        } else {
            c.a(k).clone()
        };
        for i in 0..n {
            let v = ring.add(acc.get(i, i), &s);
            acc.set(i, i, v);
        }
    }
    Ok(acc)
}

/// Residual norms for [`SplitData`].
#[derive(Clone, Debug, Serialize)]
pub struct RankDecision {
    /// Smallest `m` with `a_m(φ*φ)` nonzero.
    pub m: usize,
    pub rank: usize,
    pub sigma_max: f64,
    /// `min` over the decision of `|a_m|/threshold_m` (chosen index) and
    /// `threshold_k/|a_k|` (skipped indices); `None` in exact mode.
    pub margin: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SplitData<E> {
    pub phi_plus: Mat<E>,
    /// `1 − φ⁺φ`
    pub e_ker: Mat<E>,
    /// `φφ⁺`
    pub e_im: Mat<E>,
    /// `1 − φφ⁺`
    pub e_coker: Mat<E>,
    pub coefficients: CharCoefficients<E>,
    pub decision: RankDecision,
    pub checks: CheckReport,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn sigma_max<R: Ring>(ring: &R, phi: &Mat<R::E>) -> f64 {
    let entries: Option<Vec<Complex64>> = (0..phi.rows())
        .flat_map(|i| (0..phi.cols()).map(move |j| (i, j)))
        .map(|(i, j)| ring.to_complex(phi.get(i, j)))
        .collect();
    match entries {
        Some(v) if !v.is_empty() => {
            let m = nalgebra::DMatrix::from_row_slice(phi.rows(), phi.cols(), &v);
            m.singular_values().max()
        }
        _ => MatOps(ring).norm(phi),
    }
}

/// Newton–Schulz steps `X ← 2X − XφX`, kept while `‖φXφ − φ‖` shrinks.
/// The polynomial formula loses accuracy like `cond(φ)²`; a couple of
/// steps restore the inner identity to round-off.
fn refine<R: Ring>(ring: &R, phi: &Mat<R::E>, mut x: Mat<R::E>) -> Result<Mat<R::E>> {
    let ops = MatOps(ring);
    let inner = |x: &Mat<R::E>| -> Result<f64> {
        Ok(ops.norm(&ops.sub(&ops.mul(&ops.mul(phi, x)?, phi)?, phi)?))
    };
    let mut best = inner(&x)?;
    for _ in 0..4 {
        let next = ops.sub(&ops.scale_real(&x, 2.0), &ops.mul(&ops.mul(&x, phi)?, &x)?)?;
        let r = inner(&next)?;
        if !(r < best) {
            break;
        }
        x = next;
        best = r;
    }
    Ok(x)
}

/// `φ⁺ = q(φ*φ)φ*` with `q(x) = (1 + (−1)^{n−m−1} a_m^{−1} p(x))/x`,
/// `p(x) = x^{−m}χ_{φ*φ}(x)` and `m` the smallest index with `a_m ≠ 0`.
///
/// Numeric input is first scaled to `σ_max = 1`; `a_m` then counts as zero
/// when `|a_m| ≤ ε_rank·C(n, n−m)`. Numeric results are polished by
/// Newton–Schulz iteration.
pub fn pseudoinverse<R: Ring>(ring: &R, phi: &Mat<R::E>, eps_rank: f64) -> Result<SplitData<R::E>> {
    let ops = MatOps(ring);
    let numeric = ring.mode() == ScalarMode::Numeric;
    let (n2, n) = (phi.rows(), phi.cols());
    let sigma = if numeric { sigma_max(ring, phi) } else { 0.0 };
    let scaled = if numeric && sigma > 0.0 {
        ops.scale_real(phi, 1.0 / sigma)
    } else {
        phi.clone()
    };
    let adj = ops.adjoint(&scaled)?;
    let psi = ops.mul(&adj, &scaled)?;
    let coefficients = char_coefficients(ring, &psi)?;

    let threshold = |k: usize| eps_rank * binomial(n, n - k);
    let negligible = |k: usize| {
        let a = coefficients.a(k);
        if numeric {
            ring.magnitude(a) <= threshold(k)
        } else {
            ring.is_zero(a)
        }
    };
    let m = (0..=n).find(|&k| !negligible(k)).unwrap_or(n);
    let margin = numeric.then(|| {
        let chosen = if m < n {
            ring.magnitude(coefficients.a(m)) / threshold(m)
        } else {
            f64::INFINITY
        };
        (0..m)
            .map(|k| threshold(k) / ring.magnitude(coefficients.a(k)))
            .fold(chosen, f64::min)
    });
    let phi_is_zero = if numeric {
        sigma == 0.0
    } else {
        ops.is_zero(phi)
    };
    if m == n && !phi_is_zero {
        return Err(Error::ZeroMatrix(format!(
            "all characteristic coefficients of φ*φ below threshold (σ_max = {sigma:e}, margin = {:?})",
            margin
        )));
    }

    let mut plus = ops.zeros(n, n2);
    if m < n {
        let inv = ring.inverse(coefficients.a(m))?;
        let c = |k: usize| -> Result<R::E> {
            let v = ring.mul(coefficients.a(k), &inv)?;
            Ok(if (k - m - 1) % 2 == 1 {
                ring.neg(&v)
            } else {
                v
            })
        };
        let mut q = ops.scale(&ops.identity(n), &c(n)?)?;
        for k in (m + 1..n).rev() {
            q = ops.mul(&q, &psi)?;
            let ck = c(k)?;
            for i in 0..n {
                let v = ring.add(q.get(i, i), &ck);
                q.set(i, i, v);
            }
        }
        plus = ops.mul(&q, &adj)?;
        if numeric && sigma > 0.0 {
            plus = refine(ring, &scaled, plus)?;
            plus = ops.scale_real(&plus, 1.0 / sigma);
        }
    }

    let pp = ops.mul(&plus, phi)?;
    let qq = ops.mul(phi, &plus)?;
    let e_ker = ops.sub(&ops.identity(n), &pp)?;
    let e_im = qq.clone();
    let e_coker = ops.sub(&ops.identity(n2), &qq)?;

    let mut checks = CheckReport::default();
    let scale = ops.norm(phi).max(1.0);
    let record = |name: &str, residual: Mat<R::E>, scale: f64| {
        let r = ops.norm(&residual);
        let ok = if numeric {
            r <= 1e-8 * scale
        } else {
            ops.is_zero(&residual)
        };
        CheckRecord::new(name, 1, (!ok).then(|| format!("residual norm {r:e}"))).with_margin(r)
    };
    checks.push(record(
        "phi_plus_inner",
        ops.sub(&ops.mul(&qq, phi)?, phi)?,
        scale,
    ));
    let plus_scale = ops.norm(&plus).max(1.0);
    checks.push(record(
        "phi_plus_outer",
        ops.sub(&ops.mul(&pp, &plus)?, &plus)?,
        plus_scale,
    ));
    for (name, e) in [
        ("e_ker_idempotent", &e_ker),
        ("e_im_idempotent", &e_im),
        ("e_coker_idempotent", &e_coker),
    ] {
        checks.push(record(name, ops.sub(&ops.mul(e, e)?, e)?, 1.0));
    }

    Ok(SplitData {
        phi_plus: plus,
        e_ker,
        e_im,
        e_coker,
        coefficients,
        decision: RankDecision {
            m,
            rank: n - m,
            sigma_max: sigma,
            margin,
        },
        checks,
    })
}
