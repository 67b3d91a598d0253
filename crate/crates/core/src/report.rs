//! Pass/fail bookkeeping for the verification routines.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// One family of checks: how many instances ran and which failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub total: usize,
    pub failures: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The outcome of a verification run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    /// Free-form facts about the run (dimensions, seeds, gates).
    pub notes: Vec<String>,
}

/// Failures kept per check; the rest are only counted.
const KEPT_FAILURES: usize = 8;

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new(), notes: Vec::new() }
    }

    /// Records one instance of the named check. `locate` is only called on
    /// failure.
    pub fn record(&mut self, name: &str, ok: bool, locate: impl FnOnce() -> String) {
        let idx = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(Check { name: name.into(), total: 0, failures: Vec::new() });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[idx];
        c.total += 1;
        if !ok {
            if c.failures.len() < KEPT_FAILURES {
                c.failures.push(locate());
            } else if c.failures.len() == KEPT_FAILURES {
                c.failures.push("further failures omitted".into());
            }
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Appends the checks of another report, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = alloc::format!("{prefix}: {}", c.name);
            self.checks.push(c);
        }
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failure_count(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.title, if self.passed() { "pass" } else { "FAIL" })?;
        for c in &self.checks {
            writeln!(f, "  [{}] {} ({} run)", if c.passed() { "ok" } else { "FAIL" }, c.name, c.total)?;
            for m in &c.failures {
                writeln!(f, "      {m}")?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
