// Heights from the flux ODE against the quadrature values.

use cmcbar::{integrate_flux, BarrierParams, Barriers};

pub fn run_example() -> cmcbar::Result<()> {
    let h = 0.3;
    let b = Barriers::new(h)?;
    let cases = [
        (BarrierParams::strip(h, 1.5)?, b.strip_height(1.5)?),
        (BarrierParams::hypercycle(h, 0.5)?, b.hypercycle_height(0.5)?.as_f64()),
        (BarrierParams::nodoid(h, 2.0)?, b.nodoid_height(2.0)?),
    ];
    for (params, exact) in cases {
        for step in [4e-3, 2e-3, 1e-3] {
            let run = integrate_flux(&params, step)?;
            println!(
                "{:<10} step {step:.0e}: ode {:.12}  quadrature {:.12}  diff {:.2e}",
                params.family,
                run.height_estimate,
                exact,
                (run.height_estimate - exact).abs()
            );
        }
    }
    Ok(())
}

fn main() -> cmcbar::Result<()> {
    run_example()
}
