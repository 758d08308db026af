//! Parameter sweeps that check the barrier inequalities and identities, and
//! the tables of derived quantities.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::ode_oracle::oracle_height;
use crate::profiles::{check_mean_curvature, hypercycle_shape_min, BarrierParams, Barriers, Height};
use crate::scalar::ScalarReport;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "CMCBAR_THREADS";

/// Builds the worker pool, honouring [`THREADS_ENV`] when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Grids and tolerances for `verify` and `tables`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    #[serde(rename = "H_grid")]
    pub h_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub rho_grid: Vec<f64>,
    pub l_grid: Vec<f64>,
    pub tolerances: Tolerances,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            h_grid: vec![0.05, 0.15, 0.25, 0.35, 0.45],
            r_grid: vec![-0.05, 0.0, 0.5, 1.0, 2.0, 4.0],
            rho_grid: vec![0.1, 0.5, 1.0, 2.0, 4.0],
            l_grid: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            tolerances: Tolerances::default(),
            output_dir: PathBuf::from("."),
            formats: vec![Format::Json, Format::Csv],
        }
    }
}

impl SweepConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let cfg: SweepConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, grid) in [
            ("H_grid", &self.h_grid),
            ("r_grid", &self.r_grid),
            ("rho_grid", &self.rho_grid),
            ("l_grid", &self.l_grid),
        ] {
            if grid.is_empty() {
                return Err(Error::Config(format!("{name} must not be empty")));
            }
            if grid.iter().any(|v| !v.is_finite()) {
                return Err(Error::Config(format!("{name} contains a non-finite value")));
            }
        }
        for &h in &self.h_grid {
            check_mean_curvature(h).map_err(|e| Error::Config(format!("H_grid: {e}")))?;
            let r_min = hypercycle_shape_min(h);
            if let Some(r) = self.r_grid.iter().find(|&&r| r <= r_min) {
                return Err(Error::Config(format!(
                    "r_grid value {r} is not above atanh(-2H) = {r_min} for H = {h}"
                )));
            }
        }
        if let Some(v) = self.rho_grid.iter().find(|&&v| v <= 0.0) {
            return Err(Error::Config(format!("rho_grid values must be positive, got {v}")));
        }
        if let Some(v) = self.l_grid.iter().find(|&&v| v <= 0.0) {
            return Err(Error::Config(format!("l_grid values must be positive, got {v}")));
        }
        self.tolerances.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// Passes when `margin >= 0`.
    Inequality,
    /// Passes when `|margin| <= tolerance`.
    Identity,
}

/// One checked property at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub property_id: String,
    /// Which documented property family the check belongs to.
    pub anchor: String,
    pub params: BTreeMap<String, f64>,
    pub kind: CheckKind,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn from_entries(entries: Vec<Entry>) -> Self {
        let passed = entries.iter().filter(|e| e.pass).count();
        let summary = Summary {
            total: entries.len(),
            passed,
            failed: entries.len() - passed,
        };
        Self { entries, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

struct Check {
    id: &'static str,
    anchor: &'static str,
    params: Vec<(&'static str, f64)>,
}

impl Check {
    fn new(id: &'static str, anchor: &'static str, params: &[(&'static str, f64)]) -> Self {
        Self { id, anchor, params: params.to_vec() }
    }

    fn entry(&self, kind: CheckKind, tolerance: Option<f64>, outcome: Result<(f64, f64, f64)>) -> Entry {
        let params = self.params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        let base = Entry {
            property_id: self.id.to_string(),
            anchor: self.anchor.to_string(),
            params,
            kind,
            lhs: None,
            rhs: None,
            margin: None,
            tolerance,
            pass: false,
            error: None,
        };
        match outcome {
            Ok((lhs, rhs, margin)) => {
                let pass = match kind {
                    CheckKind::Inequality => margin >= 0.0,
                    CheckKind::Identity => margin.abs() <= tolerance.unwrap_or(0.0),
                };
                Entry { lhs: Some(lhs), rhs: Some(rhs), margin: Some(margin), pass, ..base }
            }
            Err(e) => Entry { error: Some(e.to_string()), ..base },
        }
    }

    /// `lhs <= rhs` (margin `rhs - lhs`).
    fn at_most(&self, f: impl FnOnce() -> Result<(f64, f64)>) -> Entry {
        self.entry(CheckKind::Inequality, None, f().map(|(l, r)| (l, r, r - l)))
    }

    /// `lhs == rhs` within `tol` (margin `lhs - rhs`).
    fn equal(&self, tol: f64, f: impl FnOnce() -> Result<(f64, f64)>) -> Entry {
        self.entry(CheckKind::Identity, Some(tol), f().map(|(l, r)| (l, r, l - r)))
    }
}

fn finite_height(h: Height) -> Result<f64> {
    h.finite().ok_or(Error::Unbounded)
}

type Job<'a> = Box<dyn Fn() -> Vec<Entry> + Send + Sync + 'a>;

/// Tolerances used by identity checks.
pub const IDENTITY_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-6;
pub const LIMIT_TOL: f64 = 1e-4;
/// Shape parameter used for the large-parameter limit checks.
pub const LIMIT_SHAPE: f64 = 25.0;

/// `n` points strictly inside `(lo, hi)`.
pub fn interior_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| lo + (hi - lo) * k as f64 / (n + 1) as f64).collect()
}

/// Minimum over `s` in 20 interior points of `(0, z)` of `c(z-s) + c(z+s)`,
/// returned with the `(-c(z+s), c(z-s))` pair where it is attained.
pub fn symmetric_decay_margin(b: &Barriers, r: f64) -> Result<(f64, f64)> {
    let z = b.hypercycle_peak(r)?;
    let mut worst = (f64::NEG_INFINITY, f64::INFINITY);
    for s in interior_points(0.0, z, 20) {
        let lhs = -b.hypercycle_flux(r, z + s)?;
        let rhs = b.hypercycle_flux(r, z - s)?;
        if rhs - lhs < worst.1 - worst.0 {
            worst = (lhs, rhs);
        }
    }
    Ok(worst)
}

/// Smallest forward difference of the height bound over `kappas`, with the
/// pair attaining it. Equal infinities count as a zero difference.
pub fn bound_monotonicity(b: &Barriers, kappas: &[f64]) -> Result<(f64, f64)> {
    let values = kappas
        .iter()
        .map(|&k| b.height_bound(k))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: Option<(f64, f64, f64)> = None;
    for w in values.windows(2) {
        let (lo, hi) = (w[0].as_f64(), w[1].as_f64());
        let diff = if lo.is_infinite() && hi.is_infinite() { 0.0 } else { hi - lo };
        if worst.is_none_or(|(d, _, _)| diff < d) {
            worst = Some((diff, lo, hi));
        }
    }
    let (_, lo, hi) = worst.ok_or_else(|| Error::Config("need at least two curvature samples".into()))?;
    // Report finite stand-ins so the entry stays serializable.
    let cap = |v: f64| if v.is_finite() { v } else { f64::MAX };
    Ok((cap(lo), cap(hi)))
}

fn jobs_for_h<'a>(cfg: &'a SweepConfig, h: f64) -> Vec<Job<'a>> {
    let tol = cfg.tolerances;
    let bar = move || Barriers::with_tolerances(h, tol);
    let mut jobs: Vec<Job<'a>> = Vec::new();

    for &l in &cfg.l_grid {
        jobs.push(Box::new(move || {
            let c = Check::new("strip-height-closed-form-vs-quadrature", "profiles/strip-height", &[("H", h), ("l", l)]);
            let o = Check::new("strip-height-oracle", "ode_oracle/strip", &[("H", h), ("l", l)]);
            vec![
                c.equal(IDENTITY_TOL, || {
                    let b = bar()?;
                    Ok((b.strip_height(l)?, b.strip_profile(l, 0.0)?))
                }),
                o.equal(ORACLE_TOL, || {
                    let b = bar()?;
                    Ok((b.strip_height(l)?, oracle_height(&BarrierParams::strip(h, l)?)?))
                }),
            ]
        }));
    }

    for &r in &cfg.r_grid {
        jobs.push(Box::new(move || {
            let p = [("H", h), ("r", r)];
            vec![
                Check::new("hypercycle-width-exceeds-twice-peak", "scalar_solvers/width-lower-bound", &p)
                    .at_most(|| {
                        let b = bar()?;
                        Ok((2.0 * b.hypercycle_peak(r)?, b.hypercycle_width(r)?.value))
                    }),
                Check::new("hypercycle-symmetric-decay", "profiles/symmetric-decay", &p)
                    .at_most(|| symmetric_decay_margin(&bar()?, r)),
                Check::new("hypercycle-height-oracle", "ode_oracle/hypercycle", &p).equal(ORACLE_TOL, || {
                    let b = bar()?;
                    Ok((
                        finite_height(b.hypercycle_height(r)?)?,
                        oracle_height(&BarrierParams::hypercycle(h, r)?)?,
                    ))
                }),
                Check::new("strip-width-matching-hypercycle", "scalar_solvers/strip-matching", &p).equal(
                    IDENTITY_TOL,
                    || {
                        let b = bar()?;
                        let w = b.strip_width_matching_hypercycle(r)?;
                        Ok((b.strip_height(w.value)?, finite_height(b.hypercycle_height(r)?)?))
                    },
                ),
            ]
        }));
    }

    for &rho in &cfg.rho_grid {
        jobs.push(Box::new(move || {
            let p = [("H", h), ("rho", rho)];
            vec![
                Check::new("nodoid-width-exceeds-twice-peak", "scalar_solvers/width-lower-bound", &p)
                    .at_most(|| {
                        let b = bar()?;
                        Ok((2.0 * b.nodoid_peak(rho)?, b.nodoid_width(rho)?.value))
                    }),
                Check::new("nodoid-height-oracle", "ode_oracle/nodoid", &p).equal(ORACLE_TOL, || {
                    let b = bar()?;
                    Ok((b.nodoid_height(rho)?, oracle_height(&BarrierParams::nodoid(h, rho)?)?))
                }),
                Check::new("strip-width-matching-nodoid", "scalar_solvers/strip-matching", &p).equal(
                    IDENTITY_TOL,
                    || {
                        let b = bar()?;
                        let w = b.strip_width_matching_nodoid(rho)?;
                        Ok((b.strip_height(w.value)?, b.nodoid_height(rho)?))
                    },
                ),
            ]
        }));
    }

    // Orderings along the shape grids and across families.
    jobs.push(Box::new(move || {
        let mut out = Vec::new();
        let b = match bar() {
            Ok(b) => b,
            Err(e) => {
                return vec![Check::new("setup", "cli_reports/config", &[("H", h)])
                    .entry(CheckKind::Inequality, None, Err(e))]
            }
        };
        let mut rs = cfg.r_grid.clone();
        rs.sort_by(f64::total_cmp);
        for w in rs.windows(2) {
            out.push(
                Check::new("hypercycle-height-decreasing", "profiles/monotonicity", &[("H", h), ("r_lo", w[0]), ("r_hi", w[1])])
                    .at_most(|| Ok((finite_height(b.hypercycle_height(w[1])?)?, finite_height(b.hypercycle_height(w[0])?)?))),
            );
        }
        let mut rhos = cfg.rho_grid.clone();
        rhos.sort_by(f64::total_cmp);
        for w in rhos.windows(2) {
            out.push(
                Check::new("nodoid-height-increasing", "profiles/monotonicity", &[("H", h), ("rho_lo", w[0]), ("rho_hi", w[1])])
                    .at_most(|| Ok((b.nodoid_height(w[0])?, b.nodoid_height(w[1])?))),
            );
        }
        for &rho in &cfg.rho_grid {
            for &r in &cfg.r_grid {
                out.push(
                    Check::new("nodoid-below-hypercycle", "profiles/monotonicity", &[("H", h), ("r", r), ("rho", rho)])
                        .at_most(|| Ok((b.nodoid_height(rho)?, finite_height(b.hypercycle_height(r)?)?))),
                );
            }
        }
        out
    }));

    // Comparisons for r between atanh(-2H) and 0.
    jobs.push(Box::new(move || {
        let mut out = Vec::new();
        let r_min = hypercycle_shape_min(h);
        for r in interior_points(r_min, 0.0, 10) {
            let p = [("H", h), ("r", r)];
            out.push(Check::new("strip-below-hypercycle", "profiles/strip-comparison", &p).at_most(|| {
                let b = bar()?;
                Ok((b.strip_height(r.abs())?, finite_height(b.hypercycle_height(r)?)?))
            }));
            out.push(Check::new("offset-below-peak", "profiles/strip-comparison", &p).at_most(|| {
                let b = bar()?;
                Ok((r.abs(), b.hypercycle_peak(r)?))
            }));
        }
        out
    }));

    // Limits and the critical half-width.
    jobs.push(Box::new(move || {
        let p = [("H", h)];
        vec![
            Check::new("hypercycle-height-limit", "profiles/limit", &[("H", h), ("r", LIMIT_SHAPE)]).equal(LIMIT_TOL, || {
                let b = bar()?;
                Ok((finite_height(b.hypercycle_height(LIMIT_SHAPE)?)?, b.limit_height()))
            }),
            Check::new("nodoid-height-limit", "profiles/limit", &[("H", h), ("rho", LIMIT_SHAPE)]).equal(LIMIT_TOL, || {
                let b = bar()?;
                Ok((b.nodoid_height(LIMIT_SHAPE)?, b.limit_height()))
            }),
            Check::new("limit-height-closed-form-vs-quadrature", "profiles/limit", &p).equal(IDENTITY_TOL, || {
                let b = bar()?;
                Ok((b.limit_height(), b.limit_height_by_quadrature()?))
            }),
            Check::new("critical-half-width", "scalar_solvers/critical-half-width", &p).equal(IDENTITY_TOL, || {
                let b = bar()?;
                let ell = b.critical_half_width()?;
                Ok((b.strip_height(ell.value)?, b.limit_height()))
            }),
            Check::new("critical-half-width-log-form", "scalar_solvers/critical-half-width", &p).equal(IDENTITY_TOL, || {
                let b = bar()?;
                let ell = b.critical_half_width()?;
                Ok((b.critical_half_width_log_residual(ell.value), 0.0))
            }),
            Check::new("height-bound-monotone", "scalar_solvers/height-bound", &p).at_most(|| {
                let b = bar()?;
                bound_monotonicity(&b, &interior_points(-2.0, 1.0, 100))
            }),
        ]
    }));

    jobs
}

/// Runs every property check over the configured grids. Numerical failures
/// are recorded on their entries rather than aborting the sweep.
pub fn run_verification(cfg: &SweepConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let jobs: Vec<Job<'_>> = cfg.h_grid.iter().flat_map(|&h| jobs_for_h(cfg, h)).collect();
    let pool = thread_pool()?;
    let entries: Vec<Entry> = pool.install(|| jobs.par_iter().flat_map_iter(|job| job()).collect());
    Ok(VerificationReport::from_entries(entries))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    #[serde(rename = "H")]
    pub h: f64,
    pub peak_limit: f64,
    pub limit_height: f64,
    pub limit_height_quadrature: f64,
    pub critical_half_width: f64,
    pub bound_at_2h: Height,
    pub bound_at_minus_one: Height,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypercycleRow {
    #[serde(rename = "H")]
    pub h: f64,
    pub r: f64,
    pub peak: f64,
    pub height: Height,
    pub width: f64,
    pub strip_match: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodoidRow {
    #[serde(rename = "H")]
    pub h: f64,
    pub rho: f64,
    pub peak: f64,
    pub height: f64,
    pub width: f64,
    pub strip_match: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    #[serde(rename = "H")]
    pub h: f64,
    pub kappa: f64,
    pub bound: Height,
}

/// Derived quantities tabulated over the configured grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    pub summary: Vec<SummaryRow>,
    pub hypercycle: Vec<HypercycleRow>,
    pub nodoid: Vec<NodoidRow>,
    pub bounds: Vec<BoundRow>,
    /// Convergence data for every root solve behind the tables.
    pub solves: Vec<ScalarReport>,
}

/// Curvature values used for the bound table at each `H`: a fixed sweep
/// plus `-1` and `2H` themselves.
pub fn bound_kappas(h: f64) -> Vec<f64> {
    let mut ks = vec![-3.0, -2.0, -1.5, -1.0, -0.5, 0.0, 0.5 * h, 2.0 * h, 0.5, 1.0];
    ks.sort_by(f64::total_cmp);
    ks.dedup();
    ks
}

pub fn build_tables(cfg: &SweepConfig) -> Result<Tables> {
    cfg.validate()?;
    let pool = thread_pool()?;
    type PerH = (SummaryRow, Vec<HypercycleRow>, Vec<NodoidRow>, Vec<BoundRow>, Vec<ScalarReport>);
    let per_h: Vec<PerH> = pool.install(|| {
        cfg.h_grid
            .par_iter()
            .map(|&h| -> Result<PerH> {
                let b = Barriers::with_tolerances(h, cfg.tolerances)?;
                let mut solves = Vec::new();
                let ell = b.critical_half_width()?;
                solves.push(ell);
                let summary = SummaryRow {
                    h,
                    peak_limit: b.peak_limit(),
                    limit_height: b.limit_height(),
                    limit_height_quadrature: b.limit_height_by_quadrature()?,
                    critical_half_width: ell.value,
                    bound_at_2h: b.height_bound(2.0 * h)?,
                    bound_at_minus_one: b.height_bound(-1.0)?,
                };
                let mut hyp = Vec::new();
                for &r in &cfg.r_grid {
                    let width = b.hypercycle_width(r)?;
                    let matching = b.strip_width_matching_hypercycle(r)?;
                    hyp.push(HypercycleRow {
                        h,
                        r,
                        peak: b.hypercycle_peak(r)?,
                        height: b.hypercycle_height(r)?,
                        width: width.value,
                        strip_match: matching.value,
                    });
                    solves.extend([width, matching]);
                }
                let mut nod = Vec::new();
                for &rho in &cfg.rho_grid {
                    let width = b.nodoid_width(rho)?;
                    let matching = b.strip_width_matching_nodoid(rho)?;
                    nod.push(NodoidRow {
                        h,
                        rho,
                        peak: b.nodoid_peak(rho)?,
                        height: b.nodoid_height(rho)?,
                        width: width.value,
                        strip_match: matching.value,
                    });
                    solves.extend([width, matching]);
                }
                let bounds = bound_kappas(h)
                    .into_iter()
                    .map(|kappa| Ok(BoundRow { h, kappa, bound: b.height_bound(kappa)? }))
                    .collect::<Result<Vec<_>>>()?;
                Ok((summary, hyp, nod, bounds, solves))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut t = Tables { summary: vec![], hypercycle: vec![], nodoid: vec![], bounds: vec![], solves: vec![] };
    for (s, hyp, nod, bounds, solves) in per_h {
        t.summary.push(s);
        t.hypercycle.extend(hyp);
        t.nodoid.extend(nod);
        t.bounds.extend(bounds);
        t.solves.extend(solves);
    }
    Ok(t)
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

impl Tables {
    /// Writes the tables into `dir` in the requested formats and returns the
    /// paths written.
    pub fn write(&self, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        if formats.contains(&Format::Csv) {
            let files = [
                ("tables_summary.csv", 0),
                ("tables_hypercycle.csv", 1),
                ("tables_nodoid.csv", 2),
                ("tables_bounds.csv", 3),
            ];
            for (name, which) in files {
                let path = dir.join(name);
                match which {
                    0 => write_rows(&path, &self.summary)?,
                    1 => write_rows(&path, &self.hypercycle)?,
                    2 => write_rows(&path, &self.nodoid)?,
                    _ => write_rows(&path, &self.bounds)?,
                }
                written.push(path);
            }
        }
        if formats.contains(&Format::Json) {
            let path = dir.join("tables.json");
            fs::write(&path, serde_json::to_string_pretty(self)?)?;
            written.push(path);
        }
        Ok(written)
    }
}
