//! Bookkeeping for the acceptance run: every check reports one line and the
//! process exits non-zero if any check failed.
//!
//! This crate sorts after `cluster-chain`, so `cargo test --workspace` runs
//! the library and integration suites before it.

use std::io::Write;
use std::time::Instant;

pub struct Check {
    pub id: &'static str,
    pub title: &'static str,
    pub run: fn() -> Outcome,
}

/// Result of one check: pass/fail plus a one-line summary of the evidence.
#[derive(Debug)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }

    /// Fails with the error text if the check could not even be evaluated.
    pub fn from_result(r: cluster_chain::Result<Outcome>) -> Self {
        r.unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")))
    }
}

/// Runs the checks in order, printing `PASS`/`FAIL` lines. Returns the number of failures.
pub fn run_all(checks: &[Check]) -> usize {
    let mut failed = 0;
    let mut out = std::io::stdout().lock();
    for c in checks {
        let start = Instant::now();
        let o = (c.run)();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        let _ = writeln!(
            out,
            "{tag} criterion {:<3} {} [{:.1?}]: {}",
            c.id,
            c.title,
            start.elapsed(),
            o.detail
        );
        let _ = out.flush();
    }
    let _ = writeln!(out, "{} of {} criteria passed", checks.len() - failed, checks.len());
    failed
}
