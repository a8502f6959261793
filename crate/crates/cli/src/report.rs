use std::time::Duration;

use ncg_core::report::{CheckRecord, CheckReport};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct CheckOut {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    pub witnesses: Vec<String>,
    pub margins: Vec<f64>,
}

impl From<&CheckRecord> for CheckOut {
    fn from(c: &CheckRecord) -> Self {
        Self {
            name: c.name.clone(),
            pass: c.pass,
            checked: c.checked,
            witnesses: c.witness.iter().cloned().collect(),
            margins: c.margin.iter().copied().collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Echo {
    pub command: String,
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub echo: Echo,
    pub version: &'static str,
    pub pass: bool,
    pub checks: Vec<CheckOut>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

impl Report {
    pub fn new(echo: Echo, checks: &CheckReport, result: Value) -> Self {
        Self {
            echo,
            version: env!("CARGO_PKG_VERSION"),
            pass: checks.all_pass(),
            checks: checks.checks.iter().map(CheckOut::from).collect(),
            result,
            wall_clock_ms: None,
        }
    }

    pub fn with_timing(mut self, d: Option<Duration>) -> Self {
        self.wall_clock_ms = d.map(|d| d.as_secs_f64() * 1e3);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {}\n",
            self.echo.command,
            if self.pass { "PASS" } else { "FAIL" }
        );
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {} ({} checked)",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.checked
            ));
            if let Some(m) = c.margins.first() {
                out.push_str(&format!(" margin {m:e}"));
            }
            for w in &c.witnesses {
                out.push_str(&format!("\n      witness: {w}"));
            }
            out.push('\n');
        }
        if let Value::Object(map) = &self.result {
            for (k, v) in map {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("  {k} = {v}\n"));
            }
        }
        if let Some(ms) = self.wall_clock_ms {
            out.push_str(&format!("  wall_clock_ms = {ms:.3}\n"));
        }
        out
    }
}
