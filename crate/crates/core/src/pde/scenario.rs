//! Exact-solution scenarios for the Dirichlet solver.
//!
//! * [`Scenario::Strip`]: Fermi rectangle `t ∈ [-l, l]` carrying the strip
//!   barrier `u = ψ(|t|)`. The side walls at the ends of the `x` range take
//!   the same exact data, so the finite rectangle reproduces the
//!   translation-invariant solution.
//! * [`Scenario::Annulus`]: polar sector `ρ̂ ∈ [ρ + d₁, ρ + d₂]` with the
//!   nodoid profile as exact data. The sub-annulus stays away from the
//!   vertical inner circle where the profile has infinite slope.

use serde::{Deserialize, Serialize};

use super::{newton_solve, ChartGrid, NewtonOptions, SolveReport};
use crate::error::{domain, Result};
use crate::hyperbolic::Chart;
use crate::profiles::Barriers;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Scenario {
    Strip {
        h: f64,
        l: f64,
        x_extent: f64,
    },
    Annulus {
        h: f64,
        rho: f64,
        d_inner: f64,
        d_outer: f64,
        theta_span: f64,
    },
}

impl Scenario {
    /// Strip of half-width `l`, `2l` long.
    pub fn strip(h: f64, l: f64) -> Result<Self> {
        let s = Scenario::Strip { h, l, x_extent: 2.0 * l };
        s.validate()?;
        Ok(s)
    }

    pub fn annulus(h: f64, rho: f64, d_inner: f64, d_outer: f64) -> Result<Self> {
        let s = Scenario::Annulus { h, rho, d_inner, d_outer, theta_span: 0.5 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        Barriers::new(self.h())?;
        match *self {
            Scenario::Strip { l, x_extent, .. } => {
                if !(l > 0.0 && x_extent > 0.0) {
                    return Err(domain(format!(
                        "strip needs positive half-width and length, got l = {l}, length = {x_extent}"
                    )));
                }
            }
            Scenario::Annulus { rho, d_inner, d_outer, theta_span, .. } => {
                if !(rho > 0.0 && d_inner > 0.0 && d_outer > d_inner && theta_span > 0.0) {
                    return Err(domain(format!(
                        "annulus needs rho > 0 and 0 < d_inner < d_outer, got rho = {rho}, [{d_inner}, {d_outer}]"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        match *self {
            Scenario::Strip { h, .. } | Scenario::Annulus { h, .. } => h,
        }
    }

    pub fn chart(&self) -> Chart {
        match self {
            Scenario::Strip { .. } => Chart::Fermi,
            Scenario::Annulus { .. } => Chart::Polar,
        }
    }

    fn ranges(&self) -> ((f64, f64), (f64, f64)) {
        match *self {
            Scenario::Strip { l, x_extent, .. } => ((-l, l), (0.0, x_extent)),
            Scenario::Annulus { rho, d_inner, d_outer, theta_span, .. } => {
                ((rho + d_inner, rho + d_outer), (0.0, theta_span))
            }
        }
    }

    /// Exact solution as a function of the radial chart coordinate.
    pub fn exact(&self, radial: f64) -> Result<f64> {
        let b = Barriers::new(self.h())?;
        match *self {
            Scenario::Strip { l, .. } => b.strip_profile(l, radial.abs().min(l)),
            Scenario::Annulus { rho, .. } => b.nodoid_profile(rho, radial - rho),
        }
    }

    /// An `n × n` grid whose boundary carries the exact solution, plus the
    /// exact value for each radial row.
    pub fn grid(&self, n: usize) -> Result<(ChartGrid, Vec<f64>)> {
        self.validate()?;
        let (radial, lateral) = self.ranges();
        let mut grid = ChartGrid::new(self.chart(), radial, lateral, n, n)?;
        let exact = (0..n)
            .map(|i| self.exact(grid.radial(i)))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..n {
            for j in 0..n {
                if grid.is_boundary(i, j) {
                    grid.set(i, j, exact[i]);
                }
            }
        }
        Ok((grid, exact))
    }

    pub fn solve(&self, n: usize, opts: &NewtonOptions) -> Result<ScenarioSolve> {
        let (mut grid, exact) = self.grid(n)?;
        let report = newton_solve(&mut grid, self.h(), opts)?;
        let mut max_error = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                max_error = max_error.max((grid.get(i, j) - exact[i]).abs());
            }
        }
        Ok(ScenarioSolve { grid, report, max_error })
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioSolve {
    pub grid: ChartGrid,
    pub report: SolveReport,
    /// Max-norm error against the exact solution.
    pub max_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub spacing: f64,
    pub max_error: f64,
    pub report: SolveReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub scenario: Scenario,
    pub rows: Vec<ConvergenceRow>,
    /// `log2(e_k / e_{k+1})` between consecutive levels.
    pub orders: Vec<f64>,
    /// Solution on the finest grid. Not serialized.
    #[serde(skip)]
    pub finest_grid: Option<ChartGrid>,
}

impl ConvergenceStudy {
    /// Order observed between the two finest levels.
    pub fn observed_order(&self) -> Option<f64> {
        self.orders.last().copied()
    }

    pub fn finest(&self) -> Option<&ConvergenceRow> {
        self.rows.last()
    }
}

/// Solves the scenario on `levels` grids of `32·2^k + 1` nodes per side,
/// starting from 33.
pub fn convergence_study(
    scenario: &Scenario,
    levels: usize,
    opts: &NewtonOptions,
) -> Result<ConvergenceStudy> {
    if levels < 2 {
        return Err(domain(format!("a convergence study needs at least 2 levels, got {levels}")));
    }
    let mut rows = Vec::with_capacity(levels);
    let mut finest_grid = None;
    for k in 0..levels {
        let n = 32 * (1 << k) + 1;
        let solve = scenario.solve(n, opts)?;
        rows.push(ConvergenceRow {
            n,
            spacing: solve.grid.spacing().0,
            max_error: solve.max_error,
            report: solve.report,
        });
        finest_grid = Some(solve.grid);
    }
    let orders = rows
        .windows(2)
        .map(|w| (w[0].max_error / w[1].max_error).log2())
        .collect();
    Ok(ConvergenceStudy { scenario: *scenario, rows, orders, finest_grid })
}
