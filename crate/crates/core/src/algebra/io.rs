//! JSON description files for algebras and elements.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Algebra, AlgebraBuilder, GradedBasisAlgebra, Truncation};
use crate::error::{Error, Result};
use crate::scalar::{
    format_rational, parse_rational, Exact, NumRepr, PhaseExponent, QExt, Scalar, ScalarMode,
};
use crate::sparse::SparseVec;

pub const FORMAT_VERSION: &str = "1.0";

/// Accepts any `1.x` version; rejects newer majors and garbage.
pub fn check_format_version(v: &str) -> Result<()> {
    let major = v
        .split('.')
        .next()
        .and_then(|m| m.parse::<u32>().ok())
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "format_version {v:?} is not of the form MAJOR.MINOR"
            ))
        })?;
    if major > 1 {
        return Err(Error::InvalidInput(format!(
            "format_version {v} is newer than supported {FORMAT_VERSION}"
        )));
    }
    if major == 0 {
        return Err(Error::InvalidInput(format!(
            "format_version {v} is not supported"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseRepr {
    pub rational: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub irrational: BTreeMap<String, String>,
}

impl PhaseRepr {
    pub fn encode(value: &QExt, generators: &[String]) -> Self {
        let irrational = value
            .irrational
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                (
                    generators
                        .get(k)
                        .cloned()
                        .unwrap_or_else(|| format!("theta{}", k + 1)),
                    format_rational(c),
                )
            })
            .collect();
        Self {
            rational: format_rational(&value.rational),
            irrational,
        }
    }

    pub fn decode(&self, generators: &[String]) -> Result<QExt> {
        let rational = parse_rational(&self.rational).ok_or_else(|| {
            Error::InvalidInput(format!("cannot parse rational {:?}", self.rational))
        })?;
        let mut irr = vec![BigRational::zero(); generators.len()];
        for (name, c) in &self.irrational {
            let k = generators.iter().position(|g| g == name).ok_or_else(|| {
                Error::InvalidInput(format!("undeclared irrational generator {name:?}"))
            })?;
            irr[k] = parse_rational(c)
                .ok_or_else(|| Error::InvalidInput(format!("cannot parse rational {c:?}")))?;
        }
        Ok(QExt::new(rational, irr))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRepr {
    pub basis: String,
    pub re: NumRepr,
    pub im: NumRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<PhaseRepr>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisRepr {
    pub name: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductRepr {
    pub left: String,
    pub right: String,
    /// `null` marks a product outside the truncation window.
    pub result: Option<Vec<TermRepr>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialRepr {
    pub basis: String,
    pub result: Option<Vec<TermRepr>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarRepr {
    pub basis: String,
    pub image: String,
    pub re: NumRepr,
    pub im: NumRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<PhaseRepr>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub format_version: String,
    pub scalar_mode: ScalarMode,
    #[serde(default)]
    pub truncation: Truncation,
    pub max_degree: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub irrational_generators: Vec<String>,
    /// Numeric values bound to the irrational generators (numeric export only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub irrational_values: Vec<f64>,
    pub basis: Vec<BasisRepr>,
    pub unit: Vec<TermRepr>,
    #[serde(default)]
    pub products: Vec<ProductRepr>,
    #[serde(default)]
    pub differential: Vec<DifferentialRepr>,
    #[serde(default)]
    pub star: Option<Vec<StarRepr>>,
}

pub fn encode_coords<S: Scalar>(a: &GradedBasisAlgebra<S>, v: &SparseVec<S>) -> Vec<TermRepr> {
    let mut out = Vec::new();
    for (i, c) in v.iter() {
        for (re, im, ph) in c.encode() {
            out.push(TermRepr {
                basis: a.name_of(i).to_string(),
                re,
                im,
                phase: (!ph.is_zero())
                    .then(|| PhaseRepr::encode(ph.value(), a.irrational_generators())),
            });
        }
    }
    out
}

fn decode_scalar<S: Scalar>(
    a: &GradedBasisAlgebra<S>,
    re: &NumRepr,
    im: &NumRepr,
    phase: Option<&PhaseRepr>,
) -> Result<S> {
    let ph = match phase {
        Some(p) => PhaseExponent::new(p.decode(a.irrational_generators())?),
        None => PhaseExponent::zero(),
    };
    S::decode_term(re, im, &ph, a.bindings()).map_err(Error::InvalidInput)
}

pub fn decode_coords<S: Scalar>(
    a: &GradedBasisAlgebra<S>,
    terms: &[TermRepr],
) -> Result<SparseVec<S>> {
    let mut v = SparseVec::new();
    for t in terms {
        let i = a
            .index_of(&t.basis)
            .ok_or_else(|| Error::InvalidInput(format!("unknown basis element {:?}", t.basis)))?;
        v.add_term(i, &decode_scalar(a, &t.re, &t.im, t.phase.as_ref())?);
    }
    Ok(v)
}

pub fn to_file<S: Scalar>(a: &GradedBasisAlgebra<S>) -> AlgebraFile {
    let mut keys: Vec<(usize, usize)> = a.products.keys().copied().collect();
    keys.sort_unstable();
    let products = keys
        .into_iter()
        .map(|(i, j)| ProductRepr {
            left: a.name_of(i).into(),
            right: a.name_of(j).into(),
            result: a.products[&(i, j)].as_ref().map(|r| encode_coords(a, r)),
        })
        .collect();
    let differential = (0..a.dim())
        .filter(|&i| a.differential[i].as_ref().is_none_or(|d| !d.is_zero()))
        .map(|i| DifferentialRepr {
            basis: a.name_of(i).into(),
            result: a.differential[i].as_ref().map(|d| encode_coords(a, d)),
        })
        .collect();
    let star = a.star.as_ref().map(|table| {
        table
            .iter()
            .enumerate()
            .flat_map(|(i, (j, c))| {
                // a star coefficient is a single phase monomial; encode each summand
                c.encode()
                    .into_iter()
                    .map(move |(re, im, ph)| (i, *j, re, im, ph))
            })
            .map(|(i, j, re, im, ph)| StarRepr {
                basis: a.name_of(i).into(),
                image: a.name_of(j).into(),
                re,
                im,
                phase: (!ph.is_zero())
                    .then(|| PhaseRepr::encode(ph.value(), a.irrational_generators())),
            })
            .collect()
    });
    AlgebraFile {
        format_version: FORMAT_VERSION.into(),
        scalar_mode: S::MODE,
        truncation: a.truncation,
        max_degree: a.max_degree,
        irrational_generators: a.irrational_generators.clone(),
        irrational_values: if S::MODE == ScalarMode::Numeric {
            a.bindings.clone()
        } else {
            Vec::new()
        },
        basis: a
            .basis
            .iter()
            .map(|b| BasisRepr {
                name: b.name.clone(),
                degree: b.degree,
            })
            .collect(),
        unit: encode_coords(a, &a.unit),
        products,
        differential,
        star,
    }
}

pub fn from_file<S: Scalar>(f: &AlgebraFile) -> Result<Algebra<S>> {
    check_format_version(&f.format_version)?;
    if f.scalar_mode != S::MODE {
        return Err(Error::ScalarModeMismatch {
            expected: S::MODE.to_string(),
            found: f.scalar_mode.to_string(),
        });
    }
    let mut b = AlgebraBuilder::<S>::new(f.max_degree);
    b.set_truncation(f.truncation);
    b.set_irrational_generators(f.irrational_generators.clone(), f.irrational_values.clone());
    for (k, br) in f.basis.iter().enumerate() {
        b.add_basis(br.name.clone(), br.degree)
            .map_err(|e| Error::InvalidInput(format!("basis[{k}]: {e}")))?;
    }
    let idx = |b: &AlgebraBuilder<S>, name: &str, at: &str| {
        b.index_of(name)
            .ok_or_else(|| Error::InvalidInput(format!("{at}: unknown basis element {name:?}")))
    };
    for (k, p) in f.products.iter().enumerate() {
        let at = format!("products[{k}]");
        let (i, j) = (idx(&b, &p.left, &at)?, idx(&b, &p.right, &at)?);
        match &p.result {
            None => b.set_product_out_of_window(i, j),
            Some(terms) => {
                let v = decode_coords(&b.inner, terms)
                    .map_err(|e| Error::InvalidInput(format!("{at}: {e}")))?;
                b.set_product(i, j, v);
            }
        }
    }
    for (k, d) in f.differential.iter().enumerate() {
        let at = format!("differential[{k}]");
        let i = idx(&b, &d.basis, &at)?;
        let v = match &d.result {
            None => None,
            Some(terms) => Some(
                decode_coords(&b.inner, terms)
                    .map_err(|e| Error::InvalidInput(format!("{at}: {e}")))?,
            ),
        };
        b.set_differential(i, v);
    }
    if let Some(star) = &f.star {
        let mut table: Vec<Option<(usize, S)>> = vec![None; f.basis.len()];
        for (k, s) in star.iter().enumerate() {
            let at = format!("star[{k}]");
            let (i, j) = (idx(&b, &s.basis, &at)?, idx(&b, &s.image, &at)?);
            let c = decode_scalar(&b.inner, &s.re, &s.im, s.phase.as_ref())
                .map_err(|e| Error::InvalidInput(format!("{at}: {e}")))?;
            match &mut table[i] {
                Some((j0, c0)) if *j0 == j => *c0 = c0.add(&c),
                Some(_) => {
                    return Err(Error::InvalidInput(format!(
                        "{at}: conflicting star images for {}",
                        s.basis
                    )))
                }
                slot @ None => *slot = Some((j, c)),
            }
        }
        let table: Option<Vec<(usize, S)>> = table.into_iter().collect();
        b.set_star(Some(table.ok_or_else(|| {
            Error::InvalidInput("star table must cover every basis element".into())
        })?));
    }
    let unit =
        decode_coords(&b.inner, &f.unit).map_err(|e| Error::InvalidInput(format!("unit: {e}")))?;
    b.set_unit(unit);
    b.build()
}

pub fn to_builder<S: Scalar>(a: &GradedBasisAlgebra<S>) -> AlgebraBuilder<S> {
    AlgebraBuilder { inner: a.clone() }
}

pub fn save_algebra<S: Scalar>(a: &GradedBasisAlgebra<S>) -> String {
    serde_json::to_string_pretty(&to_file(a)).expect("algebra files always serialize")
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("line {} column {}: {e}", e.line(), e.column())))
}

pub fn load_algebra<S: Scalar>(text: &str) -> Result<Algebra<S>> {
    from_file(&parse_json::<AlgebraFile>(text)?)
}

/// An algebra whose scalar mode is only known at run time.
#[derive(Clone, Debug)]
pub enum AnyAlgebra {
    Exact(Algebra<Exact>),
    Numeric(Algebra<Complex64>),
}

pub fn load_any_algebra(text: &str) -> Result<AnyAlgebra> {
    let f = parse_json::<AlgebraFile>(text)?;
    match f.scalar_mode {
        ScalarMode::Exact => Ok(AnyAlgebra::Exact(from_file(&f)?)),
        ScalarMode::Numeric => Ok(AnyAlgebra::Numeric(from_file(&f)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_exterior_algebra, build_two_point_space, check_dga_axioms};

    #[test]
    fn exact_round_trip_is_bit_exact() {
        let a = build_two_point_space::<Exact>(3).unwrap();
        let text = save_algebra(&a);
        let b = load_algebra::<Exact>(&text).unwrap();
        assert_eq!(save_algebra(&b), text);
        assert!(check_dga_axioms(&b).all_pass());
    }

    #[test]
    fn numeric_round_trip() {
        let a = build_exterior_algebra::<Complex64>(2).unwrap();
        let text = save_algebra(&a);
        assert_eq!(
            save_algebra(&load_algebra::<Complex64>(&text).unwrap()),
            text
        );
    }

    #[test]
    fn mode_mismatch_and_versions() {
        let a = build_exterior_algebra::<Exact>(1).unwrap();
        let text = save_algebra(&a);
        assert!(matches!(
            load_algebra::<Complex64>(&text),
            Err(Error::ScalarModeMismatch { .. })
        ));
        assert!(check_format_version("1.3").is_ok());
        assert!(check_format_version("2.0").is_err());
        let bumped = text.replace("\"1.0\"", "\"2.0\"");
        assert!(load_algebra::<Exact>(&bumped).is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        let a = build_exterior_algebra::<Exact>(1).unwrap();
        let text = save_algebra(&a).replacen('{', "{\"bogus\": 1,", 1);
        assert!(matches!(
            load_algebra::<Exact>(&text),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn empty_basis_is_invalid() {
        let text =
            r#"{"format_version":"1.0","scalar_mode":"exact","max_degree":0,"basis":[],"unit":[]}"#;
        assert!(matches!(
            load_algebra::<Exact>(text),
            Err(Error::InvalidInput(_))
        ));
    }
}
