//! Seeded property suites. Each trial draws its randomness from
//! `(seed, trial)` alone, so reports do not depend on scheduling.

mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::io::check_format_version;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Axioms,
    CurvatureLaws,
    Pseudoinverse,
    DmInequality,
    TorusPhases,
    Transport,
    LogRepresentation,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Axioms,
        Suite::CurvatureLaws,
        Suite::Pseudoinverse,
        Suite::DmInequality,
        Suite::TorusPhases,
        Suite::Transport,
        Suite::LogRepresentation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::CurvatureLaws => "curvature-laws",
            Suite::Pseudoinverse => "pseudoinverse",
            Suite::DmInequality => "dm-inequality",
            Suite::TorusPhases => "torus-phases",
            Suite::Transport => "transport",
            Suite::LogRepresentation => "log-representation",
        }
    }

    /// `(trials, n_min, n_max)` when the configuration leaves them out.
    pub fn defaults(self) -> (usize, usize, usize) {
        match self {
            Suite::Axioms => (50, 1, 3),
            Suite::CurvatureLaws => (500, 2, 3),
            Suite::Pseudoinverse => (1000, 1, 6),
            Suite::DmInequality => (1000, 2, 5),
            Suite::TorusPhases => (200, 2, 4),
            Suite::Transport => (100, 2, 4),
            Suite::LogRepresentation => (200, 1, 4),
        }
    }

    /// Hard limits on the size parameter.
    fn n_range(self) -> (usize, usize) {
        match self {
            Suite::Axioms => (1, 4),
            Suite::CurvatureLaws => (2, 3),
            Suite::Pseudoinverse => (1, 6),
            Suite::DmInequality => (2, 5),
            Suite::TorusPhases => (2, 4),
            Suite::Transport => (1, 6),
            Suite::LogRepresentation => (1, 6),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown fuzz suite {s:?}")))
    }
}

/// Fuzz configuration file; every field is optional except that a seed must
/// come from here or from the caller.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_min: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzSettings {
    pub suite: String,
    #[serde(skip)]
    pub kind: Suite,
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl FuzzSettings {
    pub fn new(kind: Suite, seed: u64) -> Self {
        let (trials, n_min, n_max) = kind.defaults();
        Self {
            suite: kind.name().into(),
            kind,
            trials,
            n_min,
            n_max,
            seed,
            tolerance: None,
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    /// `seed` overrides the configuration's seed; one of them is required.
    pub fn from_config(kind: Suite, cfg: &FuzzConfig, seed: Option<u64>) -> Result<Self> {
        if let Some(v) = &cfg.format_version {
            check_format_version(v)?;
        }
        let seed = seed.or(cfg.seed).ok_or_else(|| {
            Error::InvalidInput("fuzz suites need a seed (--seed or \"seed\" in the config)".into())
        })?;
        let mut s = Self::new(kind, seed);
        let (lo, hi) = kind.n_range();
        s.trials = cfg.trials.unwrap_or(s.trials);
        s.n_min = cfg.n_min.unwrap_or(s.n_min);
        s.n_max = cfg.n_max.unwrap_or(s.n_max);
        if s.n_min > s.n_max || s.n_max < lo || s.n_min > hi {
            return Err(Error::InvalidInput(format!(
                "n range [{}, {}] is empty or outside [{lo}, {hi}] for suite {kind}",
                s.n_min, s.n_max
            )));
        }
        s.n_min = s.n_min.max(lo);
        s.n_max = s.n_max.min(hi);
        if let Some(t) = cfg.tolerance {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "tolerance must be positive, got {t}"
                )));
            }
            s.tolerance = Some(t);
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub n: usize,
    pub pass: bool,
    pub margins: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<usize>,
    /// Largest value of each margin over all trials.
    pub max_margins: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuzzReport {
    pub settings: FuzzSettings,
    pub records: Vec<TrialRecord>,
    pub summary: FuzzSummary,
}

impl FuzzReport {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    /// One JSON object per trial, then `{"summary": …}`.
    pub fn json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("trial record serializes"));
            out.push('\n');
        }
        let s = serde_json::json!({ "summary": &self.summary, "settings": &self.settings });
        out.push_str(&s.to_string());
        out.push('\n');
        out
    }
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(trial as u64);
    r
}

pub(crate) struct Outcome {
    pub margins: BTreeMap<String, f64>,
    pub witness: Option<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            margins: BTreeMap::new(),
            witness: None,
        }
    }

    fn margin(&mut self, name: &str, v: f64) {
        self.margins.insert(name.into(), v);
    }

    /// Records the first failed condition only.
    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok && self.witness.is_none() {
            self.witness = Some(msg());
        }
    }

    fn fail(err: Error) -> Self {
        let mut o = Self::new();
        o.witness = Some(format!("error: {err}"));
        o
    }
}

pub fn run_trial(s: &FuzzSettings, trial: usize) -> TrialRecord {
    use rand::Rng;
    let mut rng = trial_rng(s.seed, trial);
    let n = rng.gen_range(s.n_min..=s.n_max);
    let out = match s.kind {
        Suite::Axioms => suites::axioms(&mut rng, n),
        Suite::CurvatureLaws => suites::curvature_laws(&mut rng, n, s.tolerance.unwrap_or(1e-10)),
        Suite::Pseudoinverse => {
            suites::pseudoinverse_trial(&mut rng, n, s.tolerance.unwrap_or(1e-8))
        }
        Suite::DmInequality => suites::dm_inequality(&mut rng, n, s.tolerance.unwrap_or(1e-4)),
        Suite::TorusPhases => suites::torus_phases(&mut rng, n, s.tolerance.unwrap_or(1e-12)),
        Suite::Transport => suites::transport(&mut rng, n, s.tolerance.unwrap_or(1e-7)),
        Suite::LogRepresentation => {
            suites::log_representation_trial(&mut rng, n, s.tolerance.unwrap_or(1e-10))
        }
    };
    TrialRecord {
        trial,
        n,
        pass: out.witness.is_none(),
        margins: out.margins,
        witness: out.witness,
    }
}

pub fn run_suite(s: &FuzzSettings) -> FuzzReport {
    let records: Vec<TrialRecord> = (0..s.trials)
        .into_par_iter()
        .map(|t| run_trial(s, t))
        .collect();
    let failed = records.iter().filter(|r| !r.pass).count();
    let mut max_margins: BTreeMap<String, f64> = BTreeMap::new();
    for r in &records {
        for (k, &v) in &r.margins {
            let e = max_margins.entry(k.clone()).or_insert(f64::NEG_INFINITY);
            *e = e.max(v);
        }
    }
    let summary = FuzzSummary {
        suite: s.suite.clone(),
        seed: s.seed,
        trials: s.trials,
        passed: records.len() - failed,
        failed,
        first_failure: records.iter().find(|r| !r.pass).map(|r| r.trial),
        max_margins,
    };
    FuzzReport {
        settings: s.clone(),
        records,
        summary,
    }
}
