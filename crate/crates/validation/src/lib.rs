//! Pass/fail bookkeeping for the acceptance suite in `tests/acceptance.rs`.

use std::fmt;
use std::io::Write;
use std::panic::{catch_unwind, UnwindSafe};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] AC-{} {}: {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// Runs one criterion, turning a panic into a failure, and prints its line
/// straight to stderr so it shows even when test output is captured.
pub fn run_criterion<F>(id: u8, name: &'static str, check: F) -> Outcome
where
    F: FnOnce() -> (bool, String) + UnwindSafe,
{
    let start = Instant::now();
    let (passed, detail) = match catch_unwind(check) {
        Ok(r) => r,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            (false, format!("panicked: {msg}"))
        }
    };
    let outcome = Outcome {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    };
    let _ = writeln!(std::io::stderr(), "{outcome}");
    outcome
}

/// Fails a time-bounded criterion that ran too long.
pub fn within(outcome: (bool, String), seconds: f64, limit: f64) -> (bool, String) {
    if seconds <= limit {
        outcome
    } else {
        (
            false,
            format!("{}; took {seconds:.1}s, limit {limit}s", outcome.1),
        )
    }
}
