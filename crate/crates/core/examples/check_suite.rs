//! Runs a handful of the seeded property checks from library code.

use centralizer_lab::suite::{run, SuiteConfig};

fn main() -> centralizer_lab::Result<()> {
    let mut cfg = SuiteConfig::new(3, 42, 25);
    cfg.only = vec!["kostant_maps".into(), "conservation".into()];
    let report = run(&cfg)?;
    for c in &report.checks {
        println!(
            "{:<24} {:>9.2e} <= {:<7.0e} {}",
            c.name,
            c.max_deviation.unwrap_or(f64::NAN),
            c.tolerance,
            if c.pass { "ok" } else { "FAIL" }
        );
    }
    println!("overall: {}", if report.pass { "pass" } else { "fail" });
    Ok(())
}
