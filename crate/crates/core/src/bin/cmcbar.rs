//! Command-line front end. Exit codes: 0 success, 1 a verified property
//! failed, 2 bad input, 3 a numerical method failed.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cmcbar::pde::{convergence_study, export_disk, NewtonOptions, Scenario};
use cmcbar::report::{build_tables, run_verification, Format, SweepConfig};
use cmcbar::{BarrierParams, Barriers, Error, Family};

#[derive(Parser)]
#[command(name = "cmcbar", version, about = "CMC barrier profiles and Dirichlet solves in H^2 x R")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Strip,
    Hypercycle,
    Nodoid,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Strip,
    Annulus,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a barrier profile and write it as CSV (and optionally JSON).
    Profile {
        family: FamilyArg,
        #[arg(long = "H")]
        h: f64,
        /// Strip half-width.
        #[arg(long, required_if_eq("family", "strip"))]
        l: Option<f64>,
        /// Hypercycle shape parameter.
        #[arg(long, allow_hyphen_values = true, required_if_eq("family", "hypercycle"))]
        r: Option<f64>,
        /// Nodoid shape parameter.
        #[arg(long, required_if_eq("family", "nodoid"))]
        rho: Option<f64>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check the barrier inequalities and identities over a parameter sweep.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve a Dirichlet scenario on refined grids and report convergence.
    Solve {
        scenario: ScenarioArg,
        #[arg(long = "H", default_value_t = 0.25)]
        h: f64,
        /// Strip half-width.
        #[arg(long, default_value_t = 1.0)]
        l: f64,
        /// Nodoid shape parameter of the annulus.
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 0.25)]
        d_inner: f64,
        #[arg(long, default_value_t = 2.5)]
        d_outer: f64,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// CSV of the finest-grid solution in chart coordinates.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON convergence report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Tabulate peaks, heights, widths and critical half-widths.
    Tables {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config's H grid, e.g. `0.1,0.25,0.4`.
        #[arg(long = "H-grid", value_delimiter = ',')]
        h_grid: Option<Vec<f64>>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Convert a chart-coordinate solution CSV to Poincaré-disk coordinates.
    ExportDisk {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_config(path: Option<&Path>) -> Result<SweepConfig, Error> {
    match path {
        Some(p) => SweepConfig::from_json_file(p),
        None => Ok(SweepConfig::default()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Profile { family, h, l, r, rho, samples, out, json } => {
            let params = match family {
                FamilyArg::Strip => BarrierParams::new(h, Family::Strip, l.unwrap_or_default())?,
                FamilyArg::Hypercycle => BarrierParams::new(h, Family::Hypercycle, r.unwrap_or_default())?,
                FamilyArg::Nodoid => BarrierParams::new(h, Family::Nodoid, rho.unwrap_or_default())?,
            };
            let curve = Barriers::new(h)?.curve(&params, samples)?;
            curve.write_csv(BufWriter::new(File::create(&out)?))?;
            if let Some(path) = json {
                fs::write(path, curve.to_json()?)?;
            }
            println!(
                "{} H={} {}={}: max u = {} at d = {}, width = {}",
                params.family,
                h,
                params.family.shape_name(),
                params.shape,
                curve.height,
                curve.argmax_d,
                curve.d_max
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { config, out } => {
            let cfg = load_config(config.as_deref())?;
            let report = run_verification(&cfg)?;
            fs::write(&out, report.to_json()?)?;
            for e in report.entries.iter().filter(|e| !e.pass) {
                eprintln!(
                    "FAIL {} {:?} margin={:?} {}",
                    e.property_id,
                    e.params,
                    e.margin,
                    e.error.as_deref().unwrap_or("")
                );
            }
            let s = report.summary;
            println!("{} checks: {} passed, {} failed", s.total, s.passed, s.failed);
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Solve { scenario, h, l, rho, d_inner, d_outer, levels, out, report } => {
            let scenario = match scenario {
                ScenarioArg::Strip => Scenario::strip(h, l)?,
                ScenarioArg::Annulus => Scenario::annulus(h, rho, d_inner, d_outer)?,
            };
            let opts = NewtonOptions::default();
            let study = convergence_study(&scenario, levels, &opts)?;
            println!("{:>6} {:>12} {:>12} {:>8} {:>12}", "n", "spacing", "max_error", "newton", "residual");
            for row in &study.rows {
                println!(
                    "{:>6} {:>12.4e} {:>12.4e} {:>8} {:>12.4e}",
                    row.n, row.spacing, row.max_error, row.report.newton_iters, row.report.residual_norm
                );
            }
            if let Some(p) = study.observed_order() {
                println!("observed order {p:.3}");
            }
            if let Some(path) = report {
                fs::write(path, serde_json::to_string_pretty(&study)?)?;
            }
            if let (Some(path), Some(grid)) = (out, &study.finest_grid) {
                grid.write_csv(BufWriter::new(File::create(path)?))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tables { config, h_grid, out_dir } => {
            let mut cfg = load_config(config.as_deref())?;
            if let Some(grid) = h_grid {
                cfg.h_grid = grid;
            }
            if let Some(dir) = out_dir {
                cfg.output_dir = dir;
            }
            let tables = build_tables(&cfg)?;
            let formats = if cfg.formats.is_empty() { vec![Format::Csv, Format::Json] } else { cfg.formats.clone() };
            let written = tables.write(&cfg.output_dir, &formats)?;
            println!("{:>6} {:>12} {:>14} {:>14}", "H", "peak_limit", "limit_height", "half_width");
            for row in &tables.summary {
                println!(
                    "{:>6} {:>12.8} {:>14.10} {:>14.10}",
                    row.h, row.peak_limit, row.limit_height, row.critical_half_width
                );
            }
            for p in written {
                println!("wrote {}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportDisk { input, out } => {
            let rows = export_disk(BufReader::new(File::open(input)?), BufWriter::new(File::create(&out)?))?;
            println!("wrote {rows} rows to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
