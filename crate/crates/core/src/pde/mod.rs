//! Finite-difference Newton solver for the CMC Dirichlet problem
//! `div(∇u/√(1+|∇u|²)) + 2H = 0` on a chart rectangle.
//!
//! With metric `dr² + g(r)² dy²` the operator is
//!
//! ```text
//! (1/g) ∂_r(g u_r / W) + (1/g²) ∂_y(u_y / W) + 2H,   W = √(1 + u_r² + u_y²/g²)
//! ```
//!
//! discretized in conservative form: fluxes live on cell faces, the normal
//! derivative there is a two-point difference and the tangential one an
//! average of the two adjacent central differences. The scheme is second
//! order and the Jacobian is the exact derivative of the discrete residual.

mod banded;
mod grid;
mod scenario;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use banded::BandMatrix;
pub use grid::{export_disk, ChartGrid};
pub use scenario::{convergence_study, ConvergenceRow, ConvergenceStudy, Scenario, ScenarioSolve};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    /// Max-norm of the residual over interior nodes.
    pub residual_norm: f64,
    pub newton_iters: usize,
    pub max_u: f64,
    pub min_u: f64,
    pub converged: bool,
    /// Largest |∇u|/W over all faces; always below one.
    pub max_flux: f64,
    /// Whether the solve needed continuation in H.
    pub continuation: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub max_backtracks: usize,
    /// H increment used when plain Newton from zero stalls.
    pub continuation_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iters: 50,
            max_backtracks: 30,
            continuation_step: 0.05,
        }
    }
}

/// Face flux and its derivatives with respect to the normal (`p`) and
/// tangential (`q`) difference quotients.
struct Face {
    flux: f64,
    d_p: f64,
    d_q: f64,
    /// |∇u|/W, the magnitude of the normalized gradient.
    norm: f64,
}

/// `p / √(1 + a p² + b q²)` scaled by `scale`.
#[inline]
fn face(p: f64, q: f64, a: f64, b: f64, scale: f64) -> Face {
    let w2 = 1.0 + a * p * p + b * q * q;
    let w = w2.sqrt();
    let w3 = w2 * w;
    Face {
        flux: scale * p / w,
        d_p: scale * (1.0 + b * q * q) / w3,
        d_q: -scale * b * p * q / w3,
        norm: ((w2 - 1.0) / w2).sqrt(),
    }
}

struct Stencil<'a> {
    grid: &'a ChartGrid,
    hr: f64,
    hl: f64,
}

impl<'a> Stencil<'a> {
    fn new(grid: &'a ChartGrid) -> Self {
        let (hr, hl) = grid.spacing();
        Self { grid, hr, hl }
    }

    /// Face between (i, j) and (i+1, j); needs 1 <= j <= n_lateral - 2.
    #[inline]
    fn radial_face(&self, i: usize, j: usize) -> Face {
        let u = |a, b| self.grid.get(a, b);
        let p = (u(i + 1, j) - u(i, j)) / self.hr;
        let q = (u(i, j + 1) - u(i, j - 1) + u(i + 1, j + 1) - u(i + 1, j - 1)) / (4.0 * self.hl);
        let g = self.grid.chart().metric(self.grid.radial(i) + 0.5 * self.hr);
        face(p, q, 1.0, 1.0 / (g * g), g)
    }

    /// Face between (i, j) and (i, j+1); needs 1 <= i <= n_radial - 2.
    #[inline]
    fn lateral_face(&self, i: usize, j: usize) -> Face {
        let u = |a, b| self.grid.get(a, b);
        let p = (u(i, j + 1) - u(i, j)) / self.hl;
        let q = (u(i + 1, j) - u(i - 1, j) + u(i + 1, j + 1) - u(i - 1, j + 1)) / (4.0 * self.hr);
        let g = self.grid.chart().metric(self.grid.radial(i));
        face(p, q, 1.0 / (g * g), 1.0, 1.0)
    }

    fn residual_at(&self, i: usize, j: usize, h: f64) -> f64 {
        let g = self.grid.chart().metric(self.grid.radial(i));
        let radial = (self.radial_face(i, j).flux - self.radial_face(i - 1, j).flux) / (self.hr * g);
        let lateral = (self.lateral_face(i, j).flux - self.lateral_face(i, j - 1).flux) / (self.hl * g * g);
        radial + lateral + 2.0 * h
    }

    /// Derivative of the residual at (i, j) with respect to every node of its
    /// 3x3 neighbourhood, as `(di, dj, value)` with offsets in -1..=1.
    fn jacobian_row(&self, i: usize, j: usize) -> [[f64; 3]; 3] {
        let mut row = [[0.0; 3]; 3];
        let g = self.grid.chart().metric(self.grid.radial(i));
        let (hr, hl) = (self.hr, self.hl);
        let mut put = |di: isize, dj: isize, v: f64| row[(di + 1) as usize][(dj + 1) as usize] += v;

        // Radial faces: the face above (i, j) enters with +, the one below with -.
        for (sign, base) in [(1.0, 0isize), (-1.0, -1isize)] {
            let f = self.radial_face((i as isize + base) as usize, j);
            let c = sign / (hr * g);
            // p = (u[b+1, j] - u[b, j]) / hr
            put(base + 1, 0, c * f.d_p / hr);
            put(base, 0, -c * f.d_p / hr);
            // q = (u[b, j+1] - u[b, j-1] + u[b+1, j+1] - u[b+1, j-1]) / (4 hl)
            let cq = c * f.d_q / (4.0 * hl);
            put(base, 1, cq);
            put(base + 1, 1, cq);
            put(base, -1, -cq);
            put(base + 1, -1, -cq);
        }
        for (sign, base) in [(1.0, 0isize), (-1.0, -1isize)] {
            let f = self.lateral_face(i, (j as isize + base) as usize);
            let c = sign / (hl * g * g);
            put(0, base + 1, c * f.d_p / hl);
            put(0, base, -c * f.d_p / hl);
            let cq = c * f.d_q / (4.0 * hr);
            put(1, base, cq);
            put(1, base + 1, cq);
            put(-1, base, -cq);
            put(-1, base + 1, -cq);
        }
        row
    }

    fn max_flux(&self) -> f64 {
        let (nr, nl) = (self.grid.n_radial(), self.grid.n_lateral());
        let mut m: f64 = 0.0;
        for i in 0..nr - 1 {
            for j in 1..nl - 1 {
                m = m.max(self.radial_face(i, j).norm);
            }
        }
        for i in 1..nr - 1 {
            for j in 0..nl - 1 {
                m = m.max(self.lateral_face(i, j).norm);
            }
        }
        m
    }
}

/// Residual of the discrete operator at every node; zero on the boundary.
pub fn assemble_residual(grid: &ChartGrid, h: f64) -> Vec<f64> {
    let stencil = Stencil::new(grid);
    let (nr, nl) = (grid.n_radial(), grid.n_lateral());
    let mut out = vec![0.0; nr * nl];
    out.par_chunks_mut(nl)
        .enumerate()
        .filter(|(i, _)| *i > 0 && *i < nr - 1)
        .for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate().take(nl - 1).skip(1) {
                *slot = stencil.residual_at(i, j, h);
            }
        });
    out
}

/// Jacobian of the interior residual with respect to interior unknowns,
/// numbered `(i - 1) * (n_lateral - 2) + (j - 1)`.
pub fn assemble_jacobian(grid: &ChartGrid) -> BandMatrix {
    let stencil = Stencil::new(grid);
    let (nr, nl) = (grid.n_radial(), grid.n_lateral());
    let m = nl - 2;
    let n = (nr - 2) * m;
    let mut jac = BandMatrix::zeros(n, m + 1, m + 1);
    let blocks: Vec<_> = jac.row_blocks_mut(m).collect();
    blocks.into_par_iter().enumerate().for_each(|(bi, mut block)| {
        let i = bi + 1;
        for j in 1..nl - 1 {
            let row = (i - 1) * m + (j - 1);
            let local = stencil.jacobian_row(i, j);
            for (a, line) in local.iter().enumerate() {
                for (b, &v) in line.iter().enumerate() {
                    let (ii, jj) = (i + a - 1, j + b - 1);
                    if v != 0.0 && !grid.is_boundary(ii, jj) {
                        block.add(row, (ii - 1) * m + (jj - 1), v);
                    }
                }
            }
        }
    });
    jac
}

fn interior_norms(grid: &ChartGrid, residual: &[f64]) -> (f64, f64) {
    let mut max = 0.0f64;
    let mut sum = 0.0;
    for i in 1..grid.n_radial() - 1 {
        for j in 1..grid.n_lateral() - 1 {
            let r = residual[grid.index(i, j)];
            max = max.max(r.abs());
            sum += r * r;
        }
    }
    (max, sum.sqrt())
}

struct NewtonOutcome {
    iterations: usize,
    residual: f64,
    converged: bool,
}

/// Number of consecutive heavily damped steps after which a run counts as stalled.
const STALL_STEPS: usize = 3;
const STALL_LAMBDA: f64 = 1.0 / 64.0;

fn newton_iterate(
    grid: &mut ChartGrid,
    h: f64,
    opts: &NewtonOptions,
    abort_on_stall: bool,
) -> Result<NewtonOutcome> {
    let (nr, nl) = (grid.n_radial(), grid.n_lateral());
    let m = nl - 2;
    let mut residual = assemble_residual(grid, h);
    let (mut max_res, mut l2) = interior_norms(grid, &residual);
    let mut damped_run = 0;

    for iteration in 0..opts.max_iters {
        if max_res < opts.tol {
            return Ok(NewtonOutcome { iterations: iteration, residual: max_res, converged: true });
        }
        let mut step: Vec<f64> = (1..nr - 1)
            .flat_map(|i| (1..nl - 1).map(move |j| (i, j)))
            .map(|(i, j)| -residual[grid.index(i, j)])
            .collect();
        assemble_jacobian(grid).solve_in_place(&mut step)?;

        let base = grid.values().to_vec();
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_backtracks {
            {
                let values = grid.values_mut();
                for i in 1..nr - 1 {
                    for j in 1..nl - 1 {
                        let k = i * nl + j;
                        values[k] = base[k] + lambda * step[(i - 1) * m + (j - 1)];
                    }
                }
            }
            let trial = assemble_residual(grid, h);
            let (trial_max, trial_l2) = interior_norms(grid, &trial);
            if trial_l2.is_finite() && trial_l2 <= (1.0 - 1e-4 * lambda) * l2 {
                residual = trial;
                max_res = trial_max;
                l2 = trial_l2;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            grid.values_mut().copy_from_slice(&base);
            // Already at round-off level: no descent is possible.
            if max_res < 1e3 * opts.tol {
                return Ok(NewtonOutcome { iterations: iteration, residual: max_res, converged: false });
            }
            return Err(Error::LineSearch { iteration, residual: max_res });
        }
        damped_run = if lambda <= STALL_LAMBDA { damped_run + 1 } else { 0 };
        if abort_on_stall && damped_run >= STALL_STEPS {
            return Ok(NewtonOutcome { iterations: iteration + 1, residual: max_res, converged: false });
        }
    }
    Ok(NewtonOutcome {
        iterations: opts.max_iters,
        residual: max_res,
        converged: max_res < opts.tol,
    })
}

/// Solves `Q_H(u) = 0` with the grid's boundary values as Dirichlet data.
///
/// Interior values are reset to zero first. If damped Newton fails from
/// there, the solve is repeated with continuation in `H` from zero.
pub fn newton_solve(grid: &mut ChartGrid, h: f64, opts: &NewtonOptions) -> Result<SolveReport> {
    if !(0.0..0.5).contains(&h) {
        return Err(domain(format!("mean curvature H must lie in [0, 1/2), got {h}")));
    }
    if grid.values().iter().any(|v| !v.is_finite()) {
        return Err(domain("boundary data must be finite"));
    }

    grid.fill_interior(0.0);
    let mut continuation = false;
    let outcome = match newton_iterate(grid, h, opts, true) {
        Ok(out) if out.converged => out,
        stalled => {
            continuation = true;
            grid.fill_interior(0.0);
            let mut total = match stalled {
                Ok(out) => out.iterations,
                Err(Error::LineSearch { iteration, .. }) => iteration + 1,
                Err(_) => 0,
            };
            let mut level = 0.0;
            loop {
                level = (level + opts.continuation_step).min(h);
                let out = newton_iterate(grid, level, opts, false)?;
                total += out.iterations;
                if level >= h {
                    break NewtonOutcome { iterations: total, ..out };
                }
            }
        }
    };

    let stencil = Stencil::new(grid);
    Ok(SolveReport {
        residual_norm: outcome.residual,
        newton_iters: outcome.iterations,
        max_u: grid.max_u(),
        min_u: grid.min_u(),
        converged: outcome.converged,
        max_flux: stencil.max_flux(),
        continuation,
    })
}
