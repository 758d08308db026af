// Grid refinement on a polar sector carrying the nodoid barrier.
// Pass a level count as the first argument for finer grids.

use cmcbar::pde::{convergence_study, NewtonOptions, Scenario};

fn study(levels: usize) -> cmcbar::Result<()> {
    let scenario = Scenario::annulus(0.25, 1.0, 0.25, 2.5)?;
    let study = convergence_study(&scenario, levels, &NewtonOptions::default())?;
    for row in &study.rows {
        println!(
            "n={:<4} h={:.4}  max error {:.3e}  newton {}{}",
            row.n,
            row.spacing,
            row.max_error,
            row.report.newton_iters,
            if row.report.continuation { " (continuation in H)" } else { "" }
        );
    }
    for (k, p) in study.orders.iter().enumerate() {
        println!("order between levels {k} and {}: {p:.3}", k + 1);
    }
    Ok(())
}

pub fn run_example() -> cmcbar::Result<()> {
    study(2)
}

fn main() -> cmcbar::Result<()> {
    let levels = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    study(levels)
}
