//! `D_m` as sums of principal minors and the derivative inequality
//! `|d/dt D_m(M*M + t·2Re(M*[M,K]))| ≤ 4n‖K‖_HS·D_m(M*M)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{char_coefficients, Mat, ScalarRing};

type CMat = DMatrix<Complex64>;

/// `D_0..D_n`, where `D_k` is the sum of the `k×k` principal minors.
pub fn principal_minor_sums(x: &CMat) -> Vec<Complex64> {
    let c = char_coefficients(&ScalarRing::<Complex64>::new(), &Mat::from_nalgebra(x))
        .expect("square matrix over a field");
    let n = x.nrows();
    (0..=n).map(|k| c.coeffs[n - k]).collect()
}

fn principal(x: &CMat, idx: &[usize]) -> CMat {
    CMat::from_fn(idx.len(), idx.len(), |i, j| x[(idx[i], idx[j])])
}

/// `d/dt D_m(X + tG)` at `t = 0`, summing Jacobi's formula over the
/// `m`-subsets. Exponential in `n`; intended for small matrices.
pub fn dm_directional_derivative(x: &CMat, g: &CMat, m: usize) -> Complex64 {
    let n = x.nrows();
    let mut total = Complex64::new(0.0, 0.0);
    if m == 0 {
        return total;
    }
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let xs = principal(x, &idx);
        let gs = principal(g, &idx);
        for j in 0..m {
            let mut y = xs.clone();
            y.set_column(j, &gs.column(j));
            total += y.determinant();
        }
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct DmRecord {
    pub n: usize,
    pub m: usize,
    pub h: f64,
    /// Central finite difference of `D_m(M*M + tG)`.
    pub lhs: f64,
    /// `4n‖K‖_HS·D_m(M*M)`.
    pub rhs: f64,
    pub tolerance: f64,
    pub dm_value: f64,
    /// Jacobi-formula derivative, for `n ≤ 4`.
    pub exact_derivative: Option<f64>,
    pub pass: bool,
}

/// Checks the inequality with a central difference of step `h` (default
/// `1e−6·(1 + ‖M‖²)`). The tolerance is `1e−4·rhs` plus a round-off
/// estimate for the difference quotient.
pub fn dm_derivative_check(mm: &CMat, k: &CMat, m: usize, h: Option<f64>) -> DmRecord {
    let n = mm.nrows();
    let norm_m = mm.norm();
    let h = h.unwrap_or(1e-6 * (1.0 + norm_m * norm_m));
    let base = mm.adjoint() * mm;
    let comm = mm * k - k * mm;
    let half = mm.adjoint() * comm;
    let g = &half + half.adjoint();
    let dm = |t: f64| principal_minor_sums(&(&base + &g * Complex64::new(t, 0.0)))[m].re;
    let (fp, fm) = (dm(h), dm(-h));
    let lhs = ((fp - fm) / (2.0 * h)).abs();
    let dm_value = principal_minor_sums(&base)[m].re;
    let rhs = 4.0 * n as f64 * k.norm() * dm_value;
    let roundoff = 1e3 * f64::EPSILON * (fp.abs() + fm.abs()) / (2.0 * h);
    let tolerance = 1e-4 * rhs.abs() + roundoff;
    let exact_derivative = (n <= 4).then(|| dm_directional_derivative(&base, &g, m).re.abs());
    DmRecord {
        n,
        m,
        h,
        lhs,
        rhs,
        tolerance,
        dm_value,
        exact_derivative,
        pass: lhs <= rhs + tolerance,
    }
}
