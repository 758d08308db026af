// Samples one member of each barrier family and writes the curves as CSV.

use cmcbar::{BarrierParams, Barriers};

pub fn run_example() -> cmcbar::Result<()> {
    let h = 0.25;
    let b = Barriers::new(h)?;
    let dir = std::env::temp_dir().join("cmcbar-profile-curves");
    std::fs::create_dir_all(&dir)?;

    for params in [
        BarrierParams::strip(h, 1.0)?,
        BarrierParams::hypercycle(h, 0.0)?,
        BarrierParams::nodoid(h, 1.0)?,
    ] {
        let curve = b.curve(&params, 101)?;
        let path = dir.join(format!("{}.csv", params.family));
        curve.write_csv(std::fs::File::create(&path)?)?;
        println!(
            "{:<10} {}={:<4} height {:.10}  peak at d={:.6}  width {:.6}  -> {}",
            params.family,
            params.family.shape_name(),
            params.shape,
            curve.height,
            curve.argmax_d,
            curve.d_max,
            path.display()
        );
    }
    Ok(())
}

fn main() -> cmcbar::Result<()> {
    run_example()
}
