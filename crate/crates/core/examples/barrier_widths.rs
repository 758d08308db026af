// Widths of the hypercycle and nodoid barriers, and the strip half-widths
// whose barrier reaches the same height.

use cmcbar::Barriers;

pub fn run_example() -> cmcbar::Result<()> {
    let b = Barriers::new(0.25)?;

    let ell = b.critical_half_width()?;
    println!("critical half-width {:.12} ({} iterations)", ell.value, ell.iterations);
    println!("  strip height there {:.12}, limit height {:.12}", b.strip_height(ell.value)?, b.limit_height());

    for r in [-0.2, 0.0, 1.0] {
        let width = b.hypercycle_width(r)?;
        let matching = b.strip_width_matching_hypercycle(r)?;
        println!(
            "hypercycle r={r:<5} width {:.10} >= 2z = {:.10}, matching strip half-width {:.10}",
            width.value,
            2.0 * b.hypercycle_peak(r)?,
            matching.value
        );
    }
    for rho in [0.5, 1.0, 3.0] {
        let width = b.nodoid_width(rho)?;
        let matching = b.strip_width_matching_nodoid(rho)?;
        println!("nodoid rho={rho:<4} width {:.10}, matching strip half-width {:.10}", width.value, matching.value);
    }

    // Every solve carries its own convergence record.
    println!("{}", serde_json::to_string(&b.nodoid_width(1.0)?)?);
    Ok(())
}

fn main() -> cmcbar::Result<()> {
    run_example()
}
