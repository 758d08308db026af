// Newton solve of the Dirichlet problem on a Fermi rectangle whose exact
// solution is the strip barrier.

use cmcbar::pde::{convergence_study, NewtonOptions, Scenario};

pub fn run_example() -> cmcbar::Result<()> {
    let scenario = Scenario::strip(0.25, 1.0)?;
    let study = convergence_study(&scenario, 2, &NewtonOptions::default())?;
    for row in &study.rows {
        println!(
            "n={:<4} max error {:.3e}  newton {}  residual {:.2e}  max|grad| flux {:.4}",
            row.n, row.max_error, row.report.newton_iters, row.report.residual_norm, row.report.max_flux
        );
    }
    println!("observed order {:.3}", study.observed_order().unwrap_or(f64::NAN));
    Ok(())
}

fn main() -> cmcbar::Result<()> {
    run_example()
}
