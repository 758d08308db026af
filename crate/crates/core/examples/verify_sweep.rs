// Runs the property checks over a small sweep and prints the summary.

use cmcbar::report::{run_verification, SweepConfig};

pub fn run_example() -> cmcbar::Result<()> {
    let cfg = SweepConfig {
        h_grid: vec![0.1, 0.3],
        r_grid: vec![0.0, 1.0],
        rho_grid: vec![0.5, 2.0],
        l_grid: vec![1.0],
        ..SweepConfig::default()
    };
    let report = run_verification(&cfg)?;
    for e in report.entries.iter().take(5) {
        println!("{:<40} {:?} margin {:?} pass {}", e.property_id, e.params, e.margin, e.pass);
    }
    println!("...");
    println!("{} checks, {} failed", report.summary.total, report.summary.failed);
    Ok(())
}

fn main() -> cmcbar::Result<()> {
    run_example()
}
