//! Connection description files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{AlgMatrix, FgpConnection, FgpModule};
use crate::algebra::io::{
    check_format_version, decode_coords, encode_coords, from_file, parse_json, to_file,
    AlgebraFile, AnyAlgebra, TermRepr, FORMAT_VERSION,
};
use crate::algebra::{Algebra, GradedBasisAlgebra};
use crate::error::{Error, Result};
use num_complex::Complex64;

use crate::scalar::{Exact, Scalar, ScalarMode};
use crate::sparse::SparseVec;

/// A matrix entry: a basis name (coefficient 1), `"0"`, or explicit terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRepr {
    Name(String),
    Terms(Vec<TermRepr>),
}

/// An algebra given inline or by a path relative to the connection file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(String),
    Inline(Box<AlgebraFile>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleRepr {
    pub ambient_rank: usize,
    /// Omitted for the free module.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<Vec<Vec<ElementRepr>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionFile {
    #[serde(default = "default_version")]
    pub format_version: String,
    pub algebra: AlgebraRef,
    pub module: ModuleRepr,
    /// Omitted for the Grassmannian connection.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<Vec<ElementRepr>>>,
}

fn default_version() -> String {
    FORMAT_VERSION.to_string()
}

fn decode_element<S: Scalar>(a: &GradedBasisAlgebra<S>, e: &ElementRepr) -> Result<SparseVec<S>> {
    match e {
        ElementRepr::Name(n) if n == "0" => Ok(SparseVec::new()),
        ElementRepr::Name(n) => a
            .index_of(n)
            .map(SparseVec::unit)
            .ok_or_else(|| Error::InvalidInput(format!("unknown basis element {n:?}"))),
        ElementRepr::Terms(t) => decode_coords(a, t),
    }
}

fn decode_matrix<S: Scalar>(
    a: &GradedBasisAlgebra<S>,
    m: &[Vec<ElementRepr>],
    k: usize,
    what: &str,
) -> Result<AlgMatrix<S>> {
    if m.len() != k || m.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidInput(format!("{what} must be {k}×{k}")));
    }
    let mut out = AlgMatrix::zeros(k, k);
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out.set(
                i,
                j,
                decode_element(a, e)
                    .map_err(|e| Error::InvalidInput(format!("{what}[{i}][{j}]: {e}")))?,
            );
        }
    }
    Ok(out)
}

fn encode_matrix<S: Scalar>(a: &GradedBasisAlgebra<S>, m: &AlgMatrix<S>) -> Vec<Vec<ElementRepr>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| ElementRepr::Terms(encode_coords(a, m.get(i, j))))
                .collect()
        })
        .collect()
}

impl ConnectionFile {
    pub fn build<S: Scalar>(&self, a: &Algebra<S>) -> Result<FgpConnection<S>> {
        check_format_version(&self.format_version)?;
        let k = self.module.ambient_rank;
        let module = match &self.module.projection {
            None => FgpModule::free(a, k),
            Some(p) => FgpModule::new(a, decode_matrix(a, p, k, "projection")?)?,
        };
        match &self.kappa {
            None => Ok(FgpConnection::grassmannian(module)),
            Some(m) => FgpConnection::new(module, decode_matrix(a, m, k, "kappa")?),
        }
    }

    /// Inline-algebra file describing `c`.
    pub fn from_connection<S: Scalar>(c: &FgpConnection<S>) -> Self {
        let a = c.owner();
        Self {
            format_version: FORMAT_VERSION.into(),
            algebra: AlgebraRef::Inline(Box::new(to_file(a))),
            module: ModuleRepr {
                ambient_rank: c.rank_ambient(),
                projection: (!c.module().is_free()).then(|| encode_matrix(a, c.projection())),
            },
            kappa: Some(encode_matrix(a, c.kappa())),
        }
    }

    /// The referenced algebra file, resolving paths against `base`.
    pub fn algebra_file(&self, base: Option<&Path>) -> Result<AlgebraFile> {
        match &self.algebra {
            AlgebraRef::Inline(f) => Ok((**f).clone()),
            AlgebraRef::Path(p) => {
                let path = match base {
                    Some(b) if Path::new(p).is_relative() => b.join(p),
                    _ => PathBuf::from(p),
                };
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    Error::InvalidInput(format!("cannot read algebra {}: {e}", path.display()))
                })?;
                parse_json(&text)
            }
        }
    }
}

/// A connection whose scalar mode is only known at run time.
#[derive(Clone, Debug)]
pub enum AnyConnection {
    Exact(FgpConnection<Exact>),
    Numeric(FgpConnection<Complex64>),
}

pub fn load_connection(text: &str, base: Option<&Path>) -> Result<AnyConnection> {
    let mut v = load_connections(&[(text.to_string(), base.map(Path::to_path_buf))])?;
    Ok(v.remove(0))
}

/// Loads several connections; files describing the same algebra share one
/// owner, so the results can be combined.
pub fn load_connections(inputs: &[(String, Option<PathBuf>)]) -> Result<Vec<AnyConnection>> {
    let mut cache: Vec<(AlgebraFile, AnyAlgebra)> = Vec::new();
    let mut out = Vec::new();
    for (text, base) in inputs {
        let f: ConnectionFile = parse_json(text)?;
        let af = f.algebra_file(base.as_deref())?;
        let algebra = match cache.iter().find(|(k, _)| *k == af) {
            Some((_, a)) => a.clone(),
            None => {
                let a = match af.scalar_mode {
                    ScalarMode::Exact => AnyAlgebra::Exact(from_file(&af)?),
                    ScalarMode::Numeric => AnyAlgebra::Numeric(from_file(&af)?),
                };
                cache.push((af, a.clone()));
                a
            }
        };
        out.push(match algebra {
            AnyAlgebra::Exact(a) => AnyConnection::Exact(f.build(&a)?),
            AnyAlgebra::Numeric(a) => AnyConnection::Numeric(f.build(&a)?),
        });
    }
    Ok(out)
}
