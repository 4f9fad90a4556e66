use std::fmt;

use serde::{Deserialize, Serialize};

/// One verified statement: what was checked, which identity it instantiates,
/// whether it held, and the concrete witness or counterexample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        anchor: impl Into<String>,
        pass: bool,
        detail: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            pass,
            detail: detail.into(),
        }
    }

    pub fn from_result<T>(
        name: impl Into<String>,
        anchor: impl Into<String>,
        result: &crate::Result<T>,
        ok_detail: impl FnOnce(&T) -> String,
    ) -> Self {
        match result {
            Ok(v) => Check::new(name, anchor, true, ok_detail(v)),
            Err(e) => Check::new(name, anchor, false, e.to_string()),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {} ({})", self.name, self.anchor)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// An ordered list of checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.warnings.extend(other.warnings);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.failures().next()
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        write!(f, "{}/{} checks passed", self.passed(), self.checks.len())
    }
}
