//! Report-style verdicts shared by every `check_*` operation.

use serde::Serialize;

/// Outcome of one named check: passes iff no failure was recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report { check: check.into(), passed: true, failures: Vec::new() }
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.passed = false;
        self.failures.push(message.into());
    }

    pub fn require(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.fail(message());
        }
    }

    /// Folds a sub-report in, prefixing its failures with its name.
    pub fn absorb(&mut self, other: Report) {
        for f in other.failures {
            self.fail(format!("{}: {f}", other.check));
        }
    }

    pub fn with(mut self, other: Report) -> Self {
        self.absorb(other);
        self
    }
}
