//! Runner for timed acceptance criteria. Each criterion prints exactly one
//! line; the process fails if any criterion fails or overruns its bound.

use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// `Ok` carries a summary of what was checked, `Err` the first violation.
pub type Outcome = Result<String, String>;

pub struct Criterion {
    pub name: &'static str,
    pub bound: Duration,
    pub run: fn() -> Outcome,
}

pub trait Context<T> {
    fn ctx(self, what: &str) -> Result<T, String>;
}

impl<T, E: Display> Context<T> for Result<T, E> {
    fn ctx(self, what: &str) -> Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs every criterion whose name contains one of `filters` (all when
/// empty) and returns the number of failures.
pub fn run_all(criteria: &[Criterion], filters: &[String]) -> usize {
    let selected: Vec<&Criterion> = criteria
        .iter()
        .filter(|c| filters.is_empty() || filters.iter().any(|f| c.name.contains(f.as_str())))
        .collect();
    let mut failed = 0;
    for c in &selected {
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let verdict = match out {
            Ok(d) if elapsed <= c.bound => Ok(d),
            Ok(d) => Err(format!("{d}; over the time bound")),
            Err(e) => Err(e),
        };
        let (tag, detail) = match verdict {
            Ok(d) => ("PASS", d),
            Err(e) => {
                failed += 1;
                ("FAIL", e)
            }
        };
        println!(
            "{tag} {:<32} {:>7.2}s / {:>3}s  {detail}",
            c.name,
            elapsed.as_secs_f64(),
            c.bound.as_secs()
        );
    }
    println!("{} of {} criteria passed", selected.len() - failed, selected.len());
    failed
}
