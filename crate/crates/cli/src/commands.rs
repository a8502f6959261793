use ncg_core::abelian::{pseudoinverse as pinv, Mat, ScalarRing, DEFAULT_EPS_RANK};
use ncg_core::algebra::io::{check_format_version, load_any_algebra, parse_json, AnyAlgebra};
use ncg_core::algebra::{
    center_algebra, check_dga_axioms, graded_center, is_graded_commutative, GradedBasisAlgebra,
};
use ncg_core::connection::io::{load_connections, AnyConnection};
use ncg_core::connection::{
    check_connection, curvature, curvature_oracle, dual_connection, dual_curvature_residual,
    is_flat, tensor_connection, tensor_curvature_residual, AlgMatrix, FgpConnection,
};
use ncg_core::fuzz::{run_suite, FuzzConfig, FuzzReport, FuzzSettings, Suite};
use ncg_core::report::{CheckRecord, CheckReport};
use ncg_core::torus::{center_crosscheck, pi1_descriptor, TorusSpecFile};
use ncg_core::transport::{run_job, EntryRepr, MatrixRepr, TransportJob};
use ncg_core::{Error, Scalar, ScalarMode};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::{Echo, Report};
use crate::{CliError, Input};

pub struct Context<'a> {
    pub inputs: &'a [Input],
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

const DEFAULT_TOL: f64 = 1e-10;

impl Context<'_> {
    fn echo(&self, command: &str) -> Echo {
        Echo {
            command: command.into(),
            inputs: self.inputs.iter().map(|i| i.label.clone()).collect(),
            seed: self.seed,
            tol: self.tol,
        }
    }

    fn expect_inputs(&self, command: &str, n: usize) -> Result<(), CliError> {
        if self.inputs.len() != n {
            return Err(Error::InvalidInput(format!(
                "{command} takes {n} --input file(s), got {}",
                self.inputs.len()
            ))
            .into());
        }
        Ok(())
    }

    fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    fn connections(&self, command: &str, n: usize) -> Result<Vec<AnyConnection>, CliError> {
        self.expect_inputs(command, n)?;
        let items: Vec<_> = self
            .inputs
            .iter()
            .map(|i| (i.text.clone(), i.dir.clone()))
            .collect();
        Ok(load_connections(&items)?)
    }
}

fn with_label(e: Error, label: &str) -> CliError {
    match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("{label}: {m}")).into(),
        other => other.into(),
    }
}

fn fmt_matrix<S: Scalar>(a: &GradedBasisAlgebra<S>, m: &AlgMatrix<S>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| a.format_coords(m.get(i, j)))
                .collect()
        })
        .collect()
}

/// Exact zero, or at most `tol` in numeric mode.
fn negligible<S: Scalar>(m: &AlgMatrix<S>, tol: f64) -> bool {
    m.is_zero() || (S::MODE == ScalarMode::Numeric && m.max_abs() <= tol)
}

fn residual_record<S: Scalar>(
    name: &str,
    a: &GradedBasisAlgebra<S>,
    m: &AlgMatrix<S>,
    tol: f64,
) -> CheckRecord {
    let ok = negligible(m, tol);
    let w = (!ok).then(|| format!("residual {}", m.format(a)));
    let r = CheckRecord::new(name, m.rows() * m.cols(), w);
    if S::MODE == ScalarMode::Numeric {
        r.with_margin(m.max_abs())
    } else {
        r
    }
}

pub fn check(ctx: &Context) -> Result<Report, CliError> {
    ctx.expect_inputs("check", 1)?;
    let input = &ctx.inputs[0];
    let any = load_any_algebra(&input.text).map_err(|e| with_label(e, &input.label))?;
    let (checks, result) = match &any {
        AnyAlgebra::Exact(a) => (
            check_dga_axioms(a),
            json!({"dims": a.dims(), "scalar_mode": "exact"}),
        ),
        AnyAlgebra::Numeric(a) => (
            check_dga_axioms(a),
            json!({"dims": a.dims(), "scalar_mode": "numeric"}),
        ),
    };
    Ok(Report::new(ctx.echo("check"), &checks, result))
}

fn algebra_center<S: Scalar>(a: &ncg_core::algebra::Algebra<S>) -> (CheckReport, Value) {
    let z = graded_center(a);
    let basis: Vec<Vec<String>> = z
        .per_degree
        .iter()
        .map(|v| v.iter().map(|e| e.to_string()).collect())
        .collect();
    let mut checks = CheckReport::default();
    let mut result = json!({"dims": z.dims(), "complete": z.complete, "basis": basis});
    match center_algebra(a, &z) {
        Ok(ca) => {
            let ok = is_graded_commutative(&ca.algebra);
            let w = (!ok).then(|| "center algebra has a nonzero graded commutator".to_string());
            checks.push(CheckRecord::new(
                "center_graded_commutative",
                ca.algebra.dim(),
                w,
            ));
        }
        Err(e) => result["center_algebra"] = Value::String(e.to_string()),
    }
    (checks, result)
}

pub fn center(ctx: &Context) -> Result<Report, CliError> {
    ctx.expect_inputs("center", 1)?;
    let input = &ctx.inputs[0];
    let value: Value = parse_json(&input.text).map_err(|e| with_label(e, &input.label))?;
    if value.get("theta").is_some() {
        let spec: TorusSpecFile =
            parse_json(&input.text).map_err(|e| with_label(e, &input.label))?;
        let t = spec.to_presentation()?;
        let c = center_crosscheck(&t, t.radius, 2)?;
        let mut checks = CheckReport::default();
        for d in &c.degrees {
            let w = (!d.equal).then(|| {
                format!(
                    "brute-force dimension {} vs lattice prediction {}",
                    d.brute_force_dim, d.predicted_dim
                )
            });
            checks.push(CheckRecord::new(
                format!("degree{}_matches_lattice", d.degree),
                1,
                w,
            ));
        }
        let dims: Vec<usize> = c.degrees.iter().map(|d| d.brute_force_dim).collect();
        let result = json!({"m": c.m, "interior_radius": c.interior_radius, "dims": dims, "degrees": c.degrees});
        return Ok(Report::new(ctx.echo("center"), &checks, result));
    }
    let any = load_any_algebra(&input.text).map_err(|e| with_label(e, &input.label))?;
    let (checks, result) = match &any {
        AnyAlgebra::Exact(a) => algebra_center(a),
        AnyAlgebra::Numeric(a) => algebra_center(a),
    };
    Ok(Report::new(ctx.echo("center"), &checks, result))
}

fn curvature_of<S: Scalar>(c: &FgpConnection<S>, tol: f64) -> Result<(CheckReport, Value), Error> {
    let a = c.owner();
    let r = curvature(c)?;
    let oracle = curvature_oracle(c)?;
    let mut checks = check_connection(c);
    checks.push(r.bilinearity.clone());
    checks.push(residual_record(
        "matches_closed_form",
        a,
        &r.matrix.sub(&oracle)?,
        tol,
    ));
    let result = json!({
        "curvature": fmt_matrix(a, &r.matrix),
        "flat": negligible(&r.matrix, tol),
        "max_abs": r.matrix.max_abs(),
    });
    Ok((checks, result))
}

pub fn curvature_cmd(ctx: &Context) -> Result<Report, CliError> {
    let c = ctx.connections("curvature", 1)?.remove(0);
    let (checks, result) = match &c {
        AnyConnection::Exact(c) => curvature_of(c, ctx.tol())?,
        AnyConnection::Numeric(c) => curvature_of(c, ctx.tol())?,
    };
    Ok(Report::new(ctx.echo("curvature"), &checks, result))
}

fn flat_of<S: Scalar>(c: &FgpConnection<S>, tol: f64) -> Result<(CheckReport, Value), Error> {
    let flat = is_flat(c, tol)?;
    let r = curvature(c)?.matrix;
    let mut checks = CheckReport::default();
    let w = (!flat).then(|| format!("curvature {}", r.format(c.owner())));
    checks.push(CheckRecord::new("flat", 1, w).with_margin(r.max_abs()));
    Ok((checks, json!({"flat": flat})))
}

pub fn flat(ctx: &Context) -> Result<Report, CliError> {
    let c = ctx.connections("flat", 1)?.remove(0);
    let (checks, result) = match &c {
        AnyConnection::Exact(c) => flat_of(c, ctx.tol())?,
        AnyConnection::Numeric(c) => flat_of(c, ctx.tol())?,
    };
    Ok(Report::new(ctx.echo("flat"), &checks, result))
}

fn tensor_of<S: Scalar>(
    c1: &FgpConnection<S>,
    c2: &FgpConnection<S>,
    tol: f64,
) -> Result<(CheckReport, Value), Error> {
    let a = c1.owner();
    let g = tensor_connection(c1, c2)?;
    let mut checks = check_connection(&g);
    checks.push(residual_record(
        "curvature_additive",
        a,
        &tensor_curvature_residual(c1, c2)?,
        tol,
    ));
    let flat_inputs =
        negligible(&curvature(c1)?.matrix, tol) && negligible(&curvature(c2)?.matrix, tol);
    let result = json!({
        "ambient_rank": g.rank_ambient(),
        "kappa": fmt_matrix(a, g.kappa()),
        "inputs_flat": flat_inputs,
        "tensor_flat": negligible(&curvature(&g)?.matrix, tol),
    });
    Ok((checks, result))
}

pub fn tensor(ctx: &Context) -> Result<Report, CliError> {
    let mut cs = ctx.connections("tensor", 2)?;
    let (c1, c2) = (cs.remove(0), cs.remove(0));
    let (checks, result) = match (&c1, &c2) {
        (AnyConnection::Exact(a), AnyConnection::Exact(b)) => tensor_of(a, b, ctx.tol())?,
        (AnyConnection::Numeric(a), AnyConnection::Numeric(b)) => tensor_of(a, b, ctx.tol())?,
        _ => {
            return Err(Error::ScalarModeMismatch {
                expected: "matching scalar modes".into(),
                found: "exact and numeric".into(),
            }
            .into())
        }
    };
    Ok(Report::new(ctx.echo("tensor"), &checks, result))
}

fn dual_of<S: Scalar>(c: &FgpConnection<S>, tol: f64) -> Result<(CheckReport, Value), Error> {
    let a = c.owner();
    let d = dual_connection(c)?;
    let mut checks = check_connection(&d);
    checks.push(residual_record(
        "curvature_antisymmetric",
        a,
        &dual_curvature_residual(c)?,
        tol,
    ));
    let result = json!({
        "projection": fmt_matrix(a, d.projection()),
        "kappa": fmt_matrix(a, d.kappa()),
        "curvature": fmt_matrix(a, &curvature(&d)?.matrix),
    });
    Ok((checks, result))
}

pub fn dual(ctx: &Context) -> Result<Report, CliError> {
    let c = ctx.connections("dual", 1)?.remove(0);
    let (checks, result) = match &c {
        AnyConnection::Exact(c) => dual_of(c, ctx.tol())?,
        AnyConnection::Numeric(c) => dual_of(c, ctx.tol())?,
    };
    Ok(Report::new(ctx.echo("dual"), &checks, result))
}

/// Numeric matrix file for the pseudoinverse command.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    #[serde(default)]
    format_version: Option<String>,
    matrix: MatrixRepr,
    #[serde(default)]
    eps_rank: Option<f64>,
}

fn to_repr(m: &Mat<Complex64>) -> MatrixRepr {
    m.to_rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|z| {
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

pub fn pseudoinverse(ctx: &Context) -> Result<Report, CliError> {
    ctx.expect_inputs("pseudoinverse", 1)?;
    let input = &ctx.inputs[0];
    let f: MatrixFile = parse_json(&input.text).map_err(|e| with_label(e, &input.label))?;
    if let Some(v) = &f.format_version {
        check_format_version(v)?;
    }
    let cols = f.matrix.first().map_or(0, |r| r.len());
    if f.matrix.is_empty() || cols == 0 || f.matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput(format!(
            "{}: matrix must be a nonempty rectangle",
            input.label
        ))
        .into());
    }
    let rows: Vec<Vec<Complex64>> = f
        .matrix
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| match *e {
                    EntryRepr::Real(x) => Complex64::new(x, 0.0),
                    EntryRepr::Complex([re, im]) => Complex64::new(re, im),
                })
                .collect()
        })
        .collect();
    let phi = Mat::from_rows(rows)?;
    let ring = ScalarRing::<Complex64>::new();
    let s = pinv(&ring, &phi, f.eps_rank.unwrap_or(DEFAULT_EPS_RANK))?;
    let result = json!({
        "decision": s.decision,
        "phi_plus": to_repr(&s.phi_plus),
        "e_ker": to_repr(&s.e_ker),
        "e_im": to_repr(&s.e_im),
        "e_coker": to_repr(&s.e_coker),
    });
    Ok(Report::new(ctx.echo("pseudoinverse"), &s.checks, result))
}

pub fn transport(ctx: &Context) -> Result<Report, CliError> {
    ctx.expect_inputs("transport", 1)?;
    let input = &ctx.inputs[0];
    let job: TransportJob = parse_json(&input.text).map_err(|e| with_label(e, &input.label))?;
    let (result, out) = run_job(&job)?;
    let mut checks = CheckReport::default();
    if let Some(b) = &out.bound_report {
        let worst = b.terms.iter().map(|t| t.ratio).fold(0.0, f64::max);
        let w = (!b.pass).then(|| format!("term ratio {worst} exceeds 1 + {}", b.slack));
        checks.push(CheckRecord::new("factorial_bound", b.terms.len(), w).with_margin(worst));
    }
    let inv = &result.invertibility;
    let w = (!(inv.min_abs_det > 0.0 && inv.continuous))
        .then(|| format!("min |det α| = {:e}", inv.min_abs_det));
    checks
        .push(CheckRecord::new("invertible", result.values.len(), w).with_margin(inv.min_abs_det));
    let tol = ctx.tol.unwrap_or(1e-6);
    let w =
        (out.inverse_residual > tol).then(|| format!("‖α·α⁻¹ − I‖ = {:e}", out.inverse_residual));
    checks.push(
        CheckRecord::new("inverse_consistent", result.values.len(), w)
            .with_margin(out.inverse_residual),
    );
    let mut value = serde_json::to_value(&out).expect("transport output serializes");
    value["invertibility"] = serde_json::to_value(inv).expect("serializes");
    value["terms_used"] = json!(result.terms_used);
    Ok(Report::new(ctx.echo("transport"), &checks, value))
}

pub fn pi1(ctx: &Context) -> Result<Report, CliError> {
    ctx.expect_inputs("pi1", 1)?;
    let input = &ctx.inputs[0];
    let spec: TorusSpecFile = parse_json(&input.text).map_err(|e| with_label(e, &input.label))?;
    let t = spec.to_presentation()?;
    let d = pi1_descriptor(&t);
    let basis = d.lattice.basis_i64();
    let mut checks = CheckReport::default();
    let bad = basis
        .iter()
        .find(|b| !t.apply(b).iter().all(|x| x.is_integer()));
    checks.push(CheckRecord::new(
        "lattice_basis_integral",
        basis.len(),
        bad.map(|b| format!("Θ·{b:?} is not integral")),
    ));
    let result = json!({
        "m": d.m,
        "n_minus_m": d.n_minus_m,
        "lattice_basis": basis,
        "completion": d.lattice.completion_i64(),
        "gamma_invariant_factors": d.gamma.invariant_factors,
        "gamma": d.gamma.description,
        "descriptor_text": d.descriptor_text,
        "generator_text": d.generator_text,
    });
    Ok(Report::new(ctx.echo("pi1"), &checks, result))
}

pub fn fuzz(
    suite: Suite,
    inputs: &[Input],
    seed: Option<u64>,
    tol: Option<f64>,
) -> Result<FuzzReport, CliError> {
    let cfg = match inputs {
        [] => FuzzConfig::default(),
        [one] => parse_json::<FuzzConfig>(&one.text).map_err(|e| with_label(e, &one.label))?,
        _ => {
            return Err(
                Error::InvalidInput("fuzz takes at most one configuration file".into()).into(),
            )
        }
    };
    let mut s = FuzzSettings::from_config(suite, &cfg, seed)?;
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidInput(format!("--tol must be positive, got {t}")).into());
        }
        s.tolerance = Some(t);
    }
    Ok(run_suite(&s))
}

pub fn fuzz_text(r: &FuzzReport) -> String {
    let mut out = String::new();
    for rec in r.records.iter().filter(|x| !x.pass) {
        out.push_str(&format!(
            "trial {} (n = {}): FAIL {}\n",
            rec.trial,
            rec.n,
            rec.witness.clone().unwrap_or_default()
        ));
    }
    let s = &r.summary;
    out.push_str(&format!(
        "{}: {}/{} passed (seed {})\n",
        s.suite, s.passed, s.trials, s.seed
    ));
    for (k, v) in &s.max_margins {
        out.push_str(&format!("  max {k} = {v:e}\n"));
    }
    out
}
