//! Pass/fail reports produced by the checking operations.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub label: String,
    pub passed: bool,
    /// Exact difference or counterexample on failure; optional note on success.
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Report {
    pub title: String,
    /// Set when the checks test unproven identities, so that a failure is a
    /// finding about the mathematics rather than a defect in the engine.
    pub conjectural: bool,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            conjectural: false,
            checks: Vec::new(),
        }
    }

    pub fn conjectural(title: impl Into<String>) -> Self {
        Report {
            conjectural: true,
            ..Report::new(title)
        }
    }

    pub fn pass(&mut self, label: impl Into<String>) {
        self.checks.push(CheckResult {
            label: label.into(),
            passed: true,
            detail: None,
        });
    }

    pub fn fail(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            label: label.into(),
            passed: false,
            detail: Some(detail.into()),
        });
    }

    /// Records `label` as passed iff `ok`; `detail` is only evaluated on failure.
    pub fn check<F: FnOnce() -> String>(&mut self, label: impl Into<String>, ok: bool, detail: F) {
        if ok {
            self.pass(label);
        } else {
            self.fail(label, detail());
        }
    }

    pub fn note(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            label: label.into(),
            passed,
            detail: Some(detail.into()),
        });
    }

    pub fn merge(&mut self, other: Report) {
        self.conjectural |= other.conjectural;
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.title)?;
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            match &c.detail {
                Some(d) => writeln!(f, "{tag} {}: {d}", c.label)?,
                None => writeln!(f, "{tag} {}", c.label)?,
            }
        }
        write!(
            f,
            "{}: {}/{} checks passed",
            self.title,
            self.passed_count(),
            self.checks.len()
        )
    }
}
