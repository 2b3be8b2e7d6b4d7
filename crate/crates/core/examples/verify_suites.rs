//! The built-in verification suites, summarized.

use contextuality::cli::{run_suite, Suite};

fn main() -> contextuality::Result<()> {
    for suite in [Suite::Golden, Suite::Equivalence, Suite::Properties] {
        let checks = run_suite(suite, 42, 50)?;
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        println!("{suite}: {} checks, {} failed", checks.len(), failed.len());
        for c in failed {
            println!("  {}: {}", c.name, c.detail);
        }
    }
    Ok(())
}
