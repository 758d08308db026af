// Solves the strip scenario and writes the field in Poincaré-disk
// coordinates, both directly and by converting the chart CSV.

use cmcbar::pde::{export_disk, NewtonOptions, Scenario};
use cmcbar::{FermiChart, PolarChart};

pub fn run_example() -> cmcbar::Result<()> {
    // The geodesic t = 0 is the real diameter; the circle rho = 1 has
    // Euclidean radius tanh(1/2).
    println!("Fermi (0, 0.5) -> {:?}", FermiChart::to_disk(0.0, 0.5));
    println!("polar (1, 0)   -> {:?}", PolarChart::to_disk(1.0, 0.0));

    let solve = Scenario::strip(0.25, 1.0)?.solve(33, &NewtonOptions::default())?;
    let dir = std::env::temp_dir().join("cmcbar-poincare");
    std::fs::create_dir_all(&dir)?;

    let chart_path = dir.join("strip_chart.csv");
    solve.grid.write_csv(std::fs::File::create(&chart_path)?)?;
    let disk_path = dir.join("strip_disk.csv");
    let rows = export_disk(std::fs::File::open(&chart_path)?, std::fs::File::create(&disk_path)?)?;
    println!("{rows} points -> {}", disk_path.display());
    Ok(())
}

fn main() -> cmcbar::Result<()> {
    run_example()
}
