// Tables of peaks, heights, widths and bounds, written as CSV and JSON.

use cmcbar::report::{build_tables, Format, SweepConfig};

pub fn run_example() -> cmcbar::Result<()> {
    let cfg = SweepConfig {
        h_grid: vec![0.1, 0.25, 0.4],
        output_dir: std::env::temp_dir().join("cmcbar-tables"),
        ..SweepConfig::default()
    };
    let tables = build_tables(&cfg)?;
    for row in &tables.summary {
        println!(
            "H={:<5} limit height {:.10}  critical half-width {:.10}  bound at 2H {}",
            row.h, row.limit_height, row.critical_half_width, row.bound_at_2h
        );
    }
    for path in tables.write(&cfg.output_dir, &[Format::Csv, Format::Json])? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> cmcbar::Result<()> {
    run_example()
}
