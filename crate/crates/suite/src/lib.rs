//! Bookkeeping for the acceptance suite in `tests/acceptance.rs`.

use std::time::Instant;

pub type Outcome = Result<String, Vec<String>>;

/// Collects failed checks of one criterion.
#[derive(Default)]
pub struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    pub fn that(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn near(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        self.that((got - want).abs() <= tol, || format!("{label}: got {got:.10}, want {want} +- {tol:e}"));
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn finish(self, summary: impl Into<String>) -> Outcome {
        if self.failures.is_empty() {
            Ok(format!("{} ({} checks)", summary.into(), self.count))
        } else {
            Err(self.failures)
        }
    }
}

/// Prints the criterion's line and any failed checks below it.
pub fn report(number: usize, title: &str, started: Instant, outcome: Outcome) -> bool {
    let secs = started.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("PASS  criterion {number:>2}  {title}: {detail} [{secs:.1}s]");
            true
        }
        Err(failures) => {
            println!("FAIL  criterion {number:>2}  {title} [{secs:.1}s]");
            for f in failures {
                println!("        {f}");
            }
            false
        }
    }
}
