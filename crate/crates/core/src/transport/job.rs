//! Transport job files.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    inverse_transport, path_ordered_exp, CMat, MatrixPath, Method, TransportOptions,
    TransportResult,
};
use crate::algebra::io::{check_format_version, FORMAT_VERSION};
use crate::error::{Error, Result};

/// A complex entry as a bare real number or `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryRepr {
    Real(f64),
    Complex([f64; 2]),
}

pub type MatrixRepr = Vec<Vec<EntryRepr>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    content = "data",
    rename_all = "lowercase",
    deny_unknown_fields
)]
pub enum OmegaSpec {
    Constant(MatrixRepr),
    /// Coefficients of `t^0, t^1, …`.
    Polynomial(Vec<MatrixRepr>),
    Grid {
        knots: Vec<f64>,
        values: Vec<MatrixRepr>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_slack")]
    pub bound_slack: f64,
    #[serde(default = "default_divergence")]
    pub divergence: f64,
}

fn default_slack() -> f64 {
    0.05
}

fn default_divergence() -> f64 {
    1e-3
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            bound_slack: default_slack(),
            divergence: default_divergence(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportJob {
    #[serde(default = "default_version")]
    pub format_version: String,
    pub dimension: usize,
    pub omega: OmegaSpec,
    #[serde(default)]
    pub method: Method,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_terms")]
    pub terms: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_version() -> String {
    FORMAT_VERSION.to_string()
}

fn default_steps() -> usize {
    1 << 10
}

fn default_terms() -> usize {
    200
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportOutput {
    pub alpha_at_1: MatrixRepr,
    pub residual: f64,
    pub invertibility_margin: f64,
    pub bound_report: Option<super::BoundReport>,
    /// `max ‖α(t)α′(t) − I‖` against the inverse transport.
    pub inverse_residual: f64,
}

pub fn to_matrix(m: &MatrixRepr, k: usize) -> Result<CMat> {
    if m.len() != k || m.iter().any(|r| r.len() != k) {
        return Err(Error::ShapeMismatch(format!("expected a {k}×{k} matrix")));
    }
    Ok(CMat::from_fn(k, k, |i, j| match m[i][j] {
        EntryRepr::Real(x) => Complex64::new(x, 0.0),
        EntryRepr::Complex([re, im]) => Complex64::new(re, im),
    }))
}

pub fn from_matrix(m: &CMat) -> MatrixRepr {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| {
                    let z = m[(i, j)];
                    if z.im == 0.0 {
                        EntryRepr::Real(z.re)
                    } else {
                        EntryRepr::Complex([z.re, z.im])
                    }
                })
                .collect()
        })
        .collect()
}

impl OmegaSpec {
    pub fn to_path(&self, k: usize) -> Result<MatrixPath> {
        Ok(match self {
            Self::Constant(m) => MatrixPath::Constant(to_matrix(m, k)?),
            Self::Polynomial(c) => {
                MatrixPath::polynomial(c.iter().map(|m| to_matrix(m, k)).collect::<Result<_>>()?)?
            }
            Self::Grid { knots, values } => MatrixPath::grid(
                knots.clone(),
                values
                    .iter()
                    .map(|m| to_matrix(m, k))
                    .collect::<Result<_>>()?,
            )?,
        })
    }
}

impl TransportJob {
    pub fn options(&self) -> TransportOptions {
        TransportOptions {
            method: self.method,
            steps: self.steps,
            max_terms: self.terms,
            bound_slack: self.tolerances.bound_slack,
            divergence_tol: self.tolerances.divergence,
        }
    }
}

pub fn run_job(job: &TransportJob) -> Result<(TransportResult, TransportOutput)> {
    check_format_version(&job.format_version)?;
    let path = job.omega.to_path(job.dimension)?;
    let opts = job.options();
    let result = path_ordered_exp(&path, &opts)?;
    let inv = inverse_transport(&path, &opts)?;
    let margin = result
        .values
        .iter()
        .map(|v| v.singular_values().min())
        .fold(f64::INFINITY, f64::min);
    let out = TransportOutput {
        alpha_at_1: from_matrix(result.alpha_at_1()),
        residual: result.residual,
        invertibility_margin: margin,
        bound_report: result.bounds.clone(),
        inverse_residual: inv.product_residual,
    };
    Ok((result, out))
}
