//! Pass/fail records shared by every checking operation.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    /// Number of tuples or instances actually evaluated.
    pub checked: usize,
    /// First violation found, in a deterministic order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Largest observed violation (numeric checks only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, checked: usize, witness: Option<String>) -> Self {
        Self {
            name: name.into(),
            pass: witness.is_none(),
            checked,
            witness,
            margin: None,
        }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = Some(margin);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn push(&mut self, c: CheckRecord) {
        self.checks.push(c);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
