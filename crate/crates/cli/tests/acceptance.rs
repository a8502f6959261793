//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when any
//! criterion fails.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::Value;

use ncg_core::algebra::graded_center;
use ncg_core::algebra::Algebra;
use ncg_core::algebra::{
    build_identified_points, build_truncated_polynomial, build_two_point_space,
};
use ncg_core::connection::{check_morphism, AlgMatrix, FgpConnection, FgpModule};
use ncg_core::fuzz::Suite;
use ncg_core::torus::{center_crosscheck, lattice_lambda, TorusPresentation, TorusSpecFile};
use ncg_core::transport::{path_ordered_exp, MatrixPath, Method, TransportOptions};
use ncg_core::{AlgebraElement, AlgebraHandle, Exact, Scalar, SparseVec};

const FUZZ_SEED: &str = "1";

struct Outcome {
    pass: bool,
    detail: String,
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncgpi1"))
        .args(args)
        .output()
        .expect("failed to spawn ncgpi1")
}

fn run_json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "ncgpi1 {args:?}: bad JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (v, out.status.code().unwrap_or(-1))
}

fn dims_of(v: &Value) -> (Vec<u64>, Vec<bool>) {
    let dims = v["result"]["dims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d.as_u64().unwrap())
        .collect();
    let complete = v["result"]["complete"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d.as_bool().unwrap())
        .collect();
    (dims, complete)
}

fn alternating(k: usize) -> u64 {
    k.is_multiple_of(2) as u64
}

/// Complete degrees of the command output must follow 1, 0, 1, 0, … through
/// degree 5; degree 6 is settled on the same algebra built one degree higher.
fn center_criterion(file: &str, build: fn(usize) -> ncg_core::Result<Algebra<Exact>>) -> Outcome {
    let start = Instant::now();
    let (v, code) = run_json(&["center", "--input", fixture(file).to_str().unwrap()]);
    let (dims, complete) = dims_of(&v);
    let mut ok = code == 0 && dims.len() == 7;
    for k in 0..dims.len() {
        if complete[k] {
            ok &= dims[k] == alternating(k);
        }
    }
    ok &= complete[..6].iter().all(|&c| c);
    let a7 = build(7).unwrap();
    let c7 = graded_center(&a7);
    let top = c7.per_degree[6].len();
    ok &= c7.complete[6] && top == 1;
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    Outcome {
        pass: ok,
        detail: format!(
            "dims {dims:?} complete {complete:?}, degree 6 at D=7: {top}, {elapsed:.2?}"
        ),
    }
}

fn criterion_1() -> Outcome {
    center_criterion("two_point_d6.json", build_two_point_space::<Exact>)
}

fn criterion_2() -> Outcome {
    center_criterion(
        "identified_points_d6.json",
        build_identified_points::<Exact>,
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut seen = Vec::new();
    for (file, q) in [
        ("torus_1_2.json", 2u64),
        ("torus_1_3.json", 3),
        ("torus_2_5.json", 5),
    ] {
        let (v, code) = run_json(&["pi1", "--input", fixture(file).to_str().unwrap()]);
        let r = &v["result"];
        let basis: Vec<Vec<i64>> = serde_json::from_value(r["lattice_basis"].clone()).unwrap();
        let gamma: Vec<u64> = serde_json::from_value(r["gamma_invariant_factors"].clone()).unwrap();
        let q_i = q as i64;
        ok &= code == 0
            && basis == vec![vec![q_i, 0], vec![0, q_i]]
            && r["m"] == 2
            && r["descriptor_text"]
                .as_str()
                .unwrap()
                .contains("hull of Z^2")
            && gamma == vec![q, q];
        seen.push(format!("q={q}: Λ={basis:?} Γ={gamma:?}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    Outcome {
        pass: ok,
        detail: format!("{}, {elapsed:.2?}", seen.join("; ")),
    }
}

fn criterion_4() -> Outcome {
    let (v, code) = run_json(&[
        "pi1",
        "--input",
        fixture("torus_irrational.json").to_str().unwrap(),
    ]);
    let r = &v["result"];
    let mut ok = code == 0
        && r["m"] == 0
        && r["descriptor_text"]
            .as_str()
            .unwrap()
            .contains("hull of R^2");

    let text = std::fs::read_to_string(fixture("torus_mixed3.json")).unwrap();
    let spec: TorusSpecFile = serde_json::from_str(&text).unwrap();
    let t = spec.to_presentation().unwrap();
    let l = lattice_lambda(&t);
    let (mut brute, mut agree) = (0usize, true);
    for a in -20..=20i64 {
        for b in -20..=20i64 {
            for c in -20..=20i64 {
                let r = [a, b, c];
                let integral = t.apply(&r).iter().all(|x| x.is_integer());
                brute += integral as usize;
                if integral != l.contains(&r) {
                    agree = false;
                }
            }
        }
    }
    ok &= agree && brute > 1;
    Outcome {
        pass: ok,
        detail: format!(
            "irrational m={}, mixed 3×3 Λ={:?}, {brute} lattice points in |r|≤20, agree={agree}",
            r["m"],
            l.basis_i64()
        ),
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cases = [
        ("1/2", TorusPresentation::rational_2d(1, 2, 3).unwrap(), 3),
        ("1/3", TorusPresentation::rational_2d(1, 3, 4).unwrap(), 4),
        (
            "irrational",
            TorusPresentation::irrational_2d(3).unwrap(),
            3,
        ),
    ];
    let mut ok = true;
    let mut seen = Vec::new();
    for (label, t, radius) in cases {
        match center_crosscheck(&t, radius, 2) {
            Ok(c) => {
                ok &= c.pass && c.degrees.len() == 2 && c.degrees.iter().all(|d| d.equal);
                let dims: Vec<(usize, usize)> = c
                    .degrees
                    .iter()
                    .map(|d| (d.brute_force_dim, d.predicted_dim))
                    .collect();
                seen.push(format!("{label} R={radius}: {dims:?}"));
            }
            Err(e) => {
                ok = false;
                seen.push(format!("{label} R={radius}: {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    Outcome {
        pass: ok,
        detail: format!("{}, {elapsed:.2?}", seen.join("; ")),
    }
}

struct FuzzRun {
    stdout: Vec<u8>,
    summary: Value,
    settings: Value,
    code: i32,
    elapsed: Duration,
}

fn fuzz(suite: Suite) -> FuzzRun {
    let start = Instant::now();
    let out = run(&["fuzz", suite.name(), "--seed", FUZZ_SEED]);
    let elapsed = start.elapsed();
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let last: Value =
        serde_json::from_str(text.lines().last().expect("empty fuzz output")).unwrap();
    FuzzRun {
        stdout: out.stdout,
        summary: last["summary"].clone(),
        settings: last["settings"].clone(),
        code: out.status.code().unwrap_or(-1),
        elapsed,
    }
}

fn fuzz_outcome(r: &FuzzRun, trials: u64, limit: Duration, margin_keys: &[&str]) -> Outcome {
    let s = &r.summary;
    let pass = r.code == 0 && s["trials"] == trials && s["failed"] == 0 && r.elapsed < limit;
    let margins: Vec<String> = margin_keys
        .iter()
        .map(|k| {
            format!(
                "{k}={}",
                s["max_margins"][*k]
                    .as_f64()
                    .map_or("-".into(), |x| format!("{x:.2e}"))
            )
        })
        .collect();
    Outcome {
        pass,
        detail: format!(
            "{} trials (n {}..{}), {} failed, {}, {:.2?}",
            s["trials"],
            r.settings["n_min"],
            r.settings["n_max"],
            s["failed"],
            margins.join(" "),
            r.elapsed
        ),
    }
}

fn criterion_9(transport: &FuzzRun) -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut bounds = true;
    for c in [-1.0, -0.5, 0.25, 0.5, 1.0] {
        let omega = MatrixPath::Constant(DMatrix::identity(2, 2) * Complex64::new(c, 0.0));
        let opts = TransportOptions::default()
            .with_method(Method::Picard)
            .with_steps(10_000);
        let res = path_ordered_exp(&omega, &opts).unwrap();
        let err =
            (res.alpha_at_1() - DMatrix::identity(2, 2) * Complex64::new(c.exp(), 0.0)).camax();
        worst = worst.max(err);
        let b = res
            .bounds
            .as_ref()
            .is_some_and(|b| b.pass && b.slack <= 0.05);
        bounds &= b;
    }
    ok &= worst <= 1e-8 && bounds;
    let rk = fuzz_outcome(
        transport,
        100,
        Duration::from_secs(60),
        &["picard_rk4", "bound_ratio"],
    );
    ok &= rk.pass;
    let elapsed = start.elapsed() + transport.elapsed;
    ok &= elapsed < Duration::from_secs(60);
    Outcome {
        pass: ok,
        detail: format!(
            "max |α(1) − e^c| = {worst:.2e}, bounds within 5%: {bounds}; random paths: {}",
            rk.detail
        ),
    }
}

/// `ω = a⁻¹da` so that `da = aω`; multiplication by `a` must intertwine
/// `d + ω` and `d`, and must fail to intertwine `d + 2ω`.
fn morphism_gate(a: &Algebra<Exact>, elem: AlgebraElement<Exact>) -> (bool, bool) {
    let omega = elem.inverse().unwrap().mul(&elem.d().unwrap()).unwrap();
    assert!(!omega.is_zero());
    let da = elem.d().unwrap();
    assert!(da.sub(&elem.mul(&omega).unwrap()).unwrap().is_zero());
    let m1 = |v: &AlgebraElement<Exact>| AlgMatrix::from_fn(1, 1, |_, _| v.coords().clone());
    let source = FgpConnection::new(FgpModule::free(a, 1), m1(&omega)).unwrap();
    let target = FgpConnection::grassmannian(FgpModule::free(a, 1));
    let phi = m1(&elem);
    let good = check_morphism(&phi, &source, &target).unwrap().all_pass();
    let twice = omega.scale(&Exact::from_i64(2));
    let wrong = FgpConnection::new(FgpModule::free(a, 1), m1(&twice)).unwrap();
    let rejected = !check_morphism(&phi, &wrong, &target).unwrap().all_pass();
    (good, rejected)
}

fn criterion_11() -> Outcome {
    let poly = build_truncated_polynomial::<Exact>(5).unwrap();
    let mut a = SparseVec::unit(poly.index_of("1").unwrap());
    a.add_term(poly.index_of("x").unwrap(), &Exact::from_i64(1));
    a.add_term(poly.index_of("x^2").unwrap(), &Exact::from_i64(2));
    let (g1, r1) = morphism_gate(&poly, poly.element(a));

    let two = build_two_point_space::<Exact>(3).unwrap();
    let mut b = SparseVec::unit(two.index_of("E11_0").unwrap());
    b.add_term(two.index_of("E22_0").unwrap(), &Exact::from_i64(3));
    let (g2, r2) = morphism_gate(&two, two.element(b));
    Outcome {
        pass: g1 && r1 && g2 && r2,
        detail: format!(
            "ℂ[x]/(x^5), a = 1 + x + 2x²: passes {g1}, perturbed ω rejected {r1}; two-point, a = diag(1, 3): passes {g2}, perturbed ω rejected {r2}"
        ),
    }
}

fn main() {
    let total = Instant::now();
    let mut outcomes: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut report = |n: usize, name: &'static str, o: Outcome| {
        println!(
            "criterion {n:>2} [{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        outcomes.push((n, name, o));
    };

    report(1, "two-point graded center", criterion_1());
    report(2, "identified-points graded center", criterion_2());
    report(3, "rational torus lattice", criterion_3());
    report(4, "irrational and mixed torus lattice", criterion_4());
    report(5, "torus center crosscheck", criterion_5());

    let mut first_runs = Vec::new();
    let curv = fuzz(Suite::CurvatureLaws);
    report(
        6,
        "curvature laws",
        fuzz_outcome(
            &curv,
            500,
            Duration::from_secs(60),
            &["tensor_residual", "dual_residual", "oracle_residual"],
        ),
    );
    let pinv = fuzz(Suite::Pseudoinverse);
    report(
        7,
        "pseudoinverse",
        fuzz_outcome(
            &pinv,
            1000,
            Duration::from_secs(30),
            &["inner_ratio", "cayley_hamilton", "svd_difference"],
        ),
    );
    let dm = fuzz(Suite::DmInequality);
    report(
        8,
        "D_m inequality",
        fuzz_outcome(
            &dm,
            1000,
            Duration::from_secs(60),
            &["lhs_over_rhs", "neg_min_dm"],
        ),
    );
    let transport = fuzz(Suite::Transport);
    report(9, "parallel transport", criterion_9(&transport));
    let log = fuzz(Suite::LogRepresentation);
    report(
        10,
        "representation recovery",
        fuzz_outcome(
            &log,
            200,
            Duration::from_secs(10),
            &["round_trip", "half_step"],
        ),
    );
    report(11, "morphism gate", criterion_11());

    first_runs.extend([
        (Suite::CurvatureLaws, curv),
        (Suite::Pseudoinverse, pinv),
        (Suite::DmInequality, dm),
    ]);
    first_runs.extend([
        (Suite::Transport, transport),
        (Suite::LogRepresentation, log),
    ]);
    first_runs.push((Suite::Axioms, fuzz(Suite::Axioms)));
    first_runs.push((Suite::TorusPhases, fuzz(Suite::TorusPhases)));
    let mut same = Vec::new();
    let mut ok = true;
    for kind in Suite::ALL {
        let first = &first_runs.iter().find(|(k, _)| *k == kind).unwrap().1;
        let second = fuzz(kind);
        let eq = first.stdout == second.stdout && !first.stdout.is_empty();
        ok &= eq;
        same.push(format!(
            "{}={}",
            kind.name(),
            if eq { "identical" } else { "DIFFERENT" }
        ));
    }
    report(
        12,
        "determinism",
        Outcome {
            pass: ok,
            detail: same.join(" "),
        },
    );

    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.2.pass).map(|o| o.0).collect();
    println!(
        "{} of {} criteria passed in {:.1?}",
        outcomes.len() - failed.len(),
        outcomes.len(),
        total.elapsed()
    );
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}
