//! Logarithm of a sample of a one-parameter group by the plain power series.

use num_complex::Complex64;

use super::path::{op_norm, CMat};
use crate::error::{Error, Result};

/// `log(I + X) = Σ (−1)^{k+1} X^k / k`, requiring `‖X‖ < 1` in operator norm.
pub fn matrix_log(sample: &CMat) -> Result<CMat> {
    let k = sample.nrows();
    if sample.ncols() != k {
        return Err(Error::ShapeMismatch(
            "logarithm of a non-square matrix".into(),
        ));
    }
    let x = sample - CMat::identity(k, k);
    let r = op_norm(&x);
    if r >= 1.0 {
        return Err(Error::OutsideConvergenceRadius(format!(
            "‖sample − I‖ = {r}"
        )));
    }
    let mut out = CMat::zeros(k, k);
    let mut power = x.clone();
    for n in 1..=100_000usize {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let term = &power * Complex64::new(sign / n as f64, 0.0);
        out += &term;
        if term.norm() <= 1e-17 * (1.0 + out.norm()) || power.norm() == 0.0 {
            return Ok(out);
        }
        power *= &x;
    }
    Err(Error::DivergenceDetected(format!(
        "log series too slow at ‖X‖ = {r}"
    )))
}

/// `α = log(sample)/t₀` for `sample = exp(t₀α)`.
pub fn log_representation(sample: &CMat, t0: f64) -> Result<CMat> {
    if t0 <= 0.0 {
        return Err(Error::InvalidInput("t₀ must be positive".into()));
    }
    Ok(matrix_log(sample)? * Complex64::new(1.0 / t0, 0.0))
}

/// `‖α(t₀) − α(t₀/2)‖` for generators recovered from samples at `t₀` and
/// `t₀/2`.
pub fn half_step_consistency(sample: &CMat, half_sample: &CMat, t0: f64) -> Result<f64> {
    let a = log_representation(sample, t0)?;
    let b = log_representation(half_sample, t0 / 2.0)?;
    Ok((a - b).norm())
}
