// The height bound as a function of the boundary geodesic curvature.

use cmcbar::Barriers;

pub fn run_example() -> cmcbar::Result<()> {
    for h in [0.1, 0.25, 0.4] {
        let b = Barriers::new(h)?;
        println!("H = {h}: limit height {:.10}", b.limit_height());
        for kappa in [-3.0, -1.5, -1.0, -0.5, 0.0, 2.0 * h - 1e-3, 2.0 * h] {
            println!("  kappa {kappa:>7.4}  bound {}", b.height_bound(kappa)?);
        }
    }
    Ok(())
}

fn main() -> cmcbar::Result<()> {
    run_example()
}
