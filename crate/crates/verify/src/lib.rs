//! Bookkeeping for the acceptance run in `tests/acceptance.rs`.

use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct Line {
    pub id: &'static str,
    pub title: &'static str,
    pub pass: bool,
    pub elapsed: Duration,
    pub detail: String,
}

impl Line {
    pub fn render(&self) -> String {
        format!(
            "{} {:<3} {:<30} {:>7.2}s  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Runs `check`, which returns the verdict and a one-line detail.
pub fn criterion(id: &'static str, title: &'static str, check: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (pass, detail) = check();
    Line { id, title, pass, elapsed: start.elapsed(), detail }
}

/// Prints the lines and a summary; returns whether all passed.
pub fn report(lines: &[Line]) -> bool {
    for line in lines {
        println!("{}", line.render());
    }
    let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    println!("acceptance: {} passed, {} failed {:?}", lines.len() - failed.len(), failed.len(), failed);
    failed.is_empty()
}
