//! Runs the seeded property suites that back `bellkron verify`.

use bellkron::suites::{run_suite, Suite, SuiteOptions};

fn main() -> bellkron::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let report = run_suite(Suite::All, SuiteOptions { seed, ..Default::default() })?;
    for c in &report.checks {
        println!(
            "{} {:<12} {:<45} {:.2e} <= {:.0e} ({} instances)",
            if c.passed { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            c.residual,
            c.tolerance,
            c.instances
        );
    }
    println!("seed {seed}: {}", if report.passed { "all passed" } else { "failures" });
    Ok(())
}
