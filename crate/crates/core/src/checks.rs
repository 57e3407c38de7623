//! Outcomes of the theorem and corollary checks run against computed values.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    /// The computed numbers contradict a statement that is a theorem. Always a bug.
    Fail,
    /// The hypothesis does not hold for this input.
    Skipped,
    /// The literal published statement disagrees with the computed numbers in a
    /// case where the statement itself is known to be imprecise.
    Discrepant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckOutcome {
    pub fn new(name: &str, status: CheckStatus, detail: impl Into<String>) -> Self {
        CheckOutcome { name: name.to_string(), status, detail: detail.into() }
    }

    /// `Pass` when `holds`, `Fail` otherwise.
    pub fn verdict(name: &str, holds: bool, detail: impl Into<String>) -> Self {
        let status = if holds { CheckStatus::Pass } else { CheckStatus::Fail };
        Self::new(name, status, detail)
    }

    pub fn skipped(name: &str, why: impl Into<String>) -> Self {
        Self::new(name, CheckStatus::Skipped, why)
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "skip",
            CheckStatus::Discrepant => "discrepant",
        };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

/// Number of `Fail` outcomes.
pub fn violations(checks: &[CheckOutcome]) -> usize {
    checks.iter().filter(|c| c.status == CheckStatus::Fail).count()
}
