//! Named residual checks shared by all validators.
//!
//! Reports serialize as `{check_name: {residual, tolerance, pass}}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One named residual compared against its pinned tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(residual: f64, tolerance: f64) -> Self {
        Self {
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    /// A check that does not apply to these inputs; always passes.
    pub fn vacuous() -> Self {
        Self {
            residual: 0.0,
            tolerance: 0.0,
            pass: true,
        }
    }
}

/// Ordered map of named checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckSet {
    #[serde(flatten)]
    pub checks: BTreeMap<String, CheckResult>,
}

impl CheckSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.checks
            .insert(name.to_string(), CheckResult::new(residual, tolerance));
    }

    pub fn record_vacuous(&mut self, name: &str) {
        self.checks.insert(name.to_string(), CheckResult::vacuous());
    }

    pub fn merge_prefixed(&mut self, prefix: &str, other: &CheckSet) {
        for (name, result) in &other.checks {
            self.checks
                .insert(format!("{prefix}{name}"), result.clone());
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&String, &CheckResult)> {
        self.checks.iter().filter(|(_, c)| !c.pass)
    }

    pub fn worst_ratio(&self) -> Option<(&String, f64)> {
        self.checks
            .iter()
            .filter(|(_, c)| c.tolerance > 0.0)
            .map(|(name, c)| (name, c.residual / c.tolerance))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}
