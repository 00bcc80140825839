//! Structured text reports, one record per check.
//!
//! ```text
//! rarita-report 1
//! summary = 2 pass, 0 fail, 1 skipped
//!
//! [check lemma6]
//! status = pass
//! residual = exact-zero
//! time_ms = 3
//! params = n=3 k=2 quad_order=24 seed=1 mode=exact
//! anchor = ...
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::checks::{CheckResult, Status};
use crate::error::{Error, Result};

pub fn summary(results: &[CheckResult]) -> (usize, usize, usize) {
    let count = |s| results.iter().filter(|r| r.status == s).count();
    (count(Status::Pass), count(Status::Fail), count(Status::Skipped))
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(CheckResult::passed)
}

pub fn render(results: &[CheckResult]) -> String {
    let (pass, fail, skip) = summary(results);
    let mut out = String::new();
    let _ = writeln!(out, "rarita-report 1\nsummary = {pass} pass, {fail} fail, {skip} skipped");
    for r in results {
        let _ = writeln!(out, "\n[check {}]", r.name);
        let _ = writeln!(out, "status = {}", r.status);
        let _ = writeln!(out, "residual = {}", r.residual);
        if let Some(t) = r.tolerance {
            let _ = writeln!(out, "tolerance = {t:e}");
        }
        let _ = writeln!(out, "time_ms = {}", r.time_ms);
        let _ = writeln!(out, "params = {}", r.params);
        let _ = writeln!(out, "anchor = {}", r.anchor);
        if let Some(note) = &r.note {
            let key = if r.status == Status::Skipped { "reason" } else { "note" };
            let _ = writeln!(out, "{key} = {}", note.replace('\n', " "));
        }
    }
    out
}

/// One line per check for terminal output.
pub fn line(r: &CheckResult) -> String {
    let mut s = format!("{:<26} {:<7} residual={} time_ms={}", r.name, r.status, r.residual, r.time_ms);
    if let Some(t) = r.tolerance {
        let _ = write!(s, " tol={t:e}");
    }
    if let Some(note) = &r.note {
        if r.status != Status::Pass {
            let _ = write!(s, " ({note})");
        }
    }
    s
}

pub fn write(results: &[CheckResult], path: &Path) -> Result<()> {
    std::fs::write(path, render(results)).map_err(|e| Error::Other(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::{run_check, CheckConfig};

    #[test]
    fn skipped_and_failed_records() {
        let small = CheckConfig { n: 2, k: 1, ..Default::default() };
        let skipped = run_check("ek-left", &small).unwrap();
        let tight = CheckConfig { n: 3, k: 1, tol: Some(1e-300), ..Default::default() };
        let failed = run_check("stokes", &tight).unwrap();
        let text = render(&[skipped, failed.clone()]);
        assert!(text.contains("[check ek-left]\nstatus = skipped"));
        assert!(text.contains("reason = kernel checks need n >= 3"));
        assert_eq!(failed.status, Status::Fail);
        assert!(text.contains("[check stokes]\nstatus = fail\nresidual = "));
        assert!(!all_passed(&[failed]));
    }
}
