//! Independent check on the barrier profiles.
//!
//! For a graph `u = ũ(d)` over the level sets of a distance function, the CMC
//! equation reduces to a linear first-order ODE for the flux
//! `φ = ũ'/√(1+ũ'²)`:
//!
//! ```text
//! φ' + φ·Δd + 2H = 0,   Δd = tanh(r + d)  (hypercycle, strip with r = 0)
//!                       Δd = coth(ρ + d)  (nodoid)
//! ```
//!
//! This module integrates that ODE with classical RK4 and accumulates the
//! height alongside. It shares nothing with the quadrature path in
//! [`crate::profiles`]: no closed-form flux, no peak formula, no quadrature.
//!
//! Near the vertical boundary `φ → 1`, so the hypercycle and nodoid runs carry
//! `w = 1 - φ` instead of `φ` and step in `σ = √d`, which turns the
//! `d^{-1/2}` behaviour of the slope into a smooth integrand.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{BarrierParams, Family};

/// Result of one flux integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeRun {
    pub family: Family,
    pub params: BarrierParams,
    /// Step in `σ = √d` for hypercycle/nodoid runs, in `d` for strips.
    pub step: f64,
    /// Offset from the singular boundary where integration starts.
    pub epsilon_start: f64,
    /// `(d, φ)` pairs in integration order.
    pub phi_samples: Vec<(f64, f64)>,
    pub height_estimate: f64,
}

/// Integrator settings.
#[derive(Debug, Clone, Copy)]
pub struct FluxIntegrator {
    pub step: f64,
    pub epsilon_start: f64,
    /// Allowed overshoot of |φ| past 1 before the run is declared unstable.
    pub overshoot: f64,
    /// Give up if the flux has not vanished by this distance.
    pub max_distance: f64,
}

impl Default for FluxIntegrator {
    fn default() -> Self {
        Self {
            step: 1e-3,
            epsilon_start: 1e-6,
            overshoot: 1e-9,
            max_distance: 200.0,
        }
    }
}

type State<const N: usize> = [f64; N];

fn rk4_step<const N: usize, F>(f: &F, x: f64, y: State<N>, h: f64) -> State<N>
where
    F: Fn(f64, State<N>) -> State<N>,
{
    let shift = |base: &State<N>, k: &State<N>, c: f64| {
        let mut out = *base;
        for (o, kv) in out.iter_mut().zip(k) {
            *o += c * kv;
        }
        out
    };
    let k1 = f(x, y);
    let k2 = f(x + 0.5 * h, shift(&y, &k1, 0.5 * h));
    let k3 = f(x + 0.5 * h, shift(&y, &k2, 0.5 * h));
    let k4 = f(x + h, shift(&y, &k3, h));
    let mut out = y;
    for n in 0..N {
        out[n] += h / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
    }
    out
}

impl FluxIntegrator {
    pub fn with_step(step: f64) -> Self {
        Self {
            step,
            ..Self::default()
        }
    }

    pub fn run(&self, params: &BarrierParams) -> Result<OdeRun> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Domain(format!("ODE step must be positive, got {}", self.step)));
        }
        match params.family {
            Family::Strip => self.run_strip(params),
            Family::Hypercycle => {
                let r = params.shape;
                self.run_from_vertical(params, move |d| (r + d).tanh())
            }
            Family::Nodoid => {
                let rho = params.shape;
                self.run_from_vertical(params, move |d| 1.0 / (rho + d).tanh())
            }
        }
    }

    /// Integrates from the vertical boundary until the flux vanishes.
    /// `level_curvature(d)` is the Laplacian of the distance function.
    ///
    /// Only `w = 1 - φ` goes through RK4. The slope `φ/√(1-φ²)` depends
    /// singularly on `w` near the boundary, so the height is accumulated
    /// separately with Simpson's rule per step, using an extra RK4 half-step
    /// for the midpoint value.
    fn run_from_vertical<L: Fn(f64) -> f64>(
        &self,
        params: &BarrierParams,
        level_curvature: L,
    ) -> Result<OdeRun> {
        let h = params.h;
        let rhs = |sigma: f64, y: State<1>| -> State<1> {
            [2.0 * sigma * (2.0 * h + (1.0 - y[0]) * level_curvature(sigma * sigma))]
        };
        // du/dσ in terms of w = 1 - φ.
        let slope = |sigma: f64, w: f64| 2.0 * sigma * (1.0 - w) / (w * (2.0 - w)).sqrt();
        let simpson = |sigma: f64, len: f64, w0: f64, wm: f64, w1: f64| {
            len / 6.0 * (slope(sigma, w0) + 4.0 * slope(sigma + 0.5 * len, wm) + slope(sigma + len, w1))
        };

        let eps = self.epsilon_start;
        let slope0 = 2.0 * h + level_curvature(0.0);
        let mut sigma = eps.sqrt();
        let mut w = slope0 * eps;
        // Height of the skipped sliver [0, ε], where 1 - φ ≈ slope0·d.
        let mut u = (2.0 * eps / slope0).sqrt();
        let mut samples = vec![(eps, 1.0 - w)];

        let sigma_max = self.max_distance.sqrt();
        loop {
            let next = rk4_step(&rhs, sigma, [w], self.step)[0];
            self.check_flux(sigma + self.step, 1.0 - next)?;
            if next >= 1.0 {
                // Flux crossed zero inside this step: bisect the step length.
                let (mut lo, mut hi) = (0.0, self.step);
                let mut w_end = next;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let trial = rk4_step(&rhs, sigma, [w], mid)[0];
                    if trial >= 1.0 {
                        hi = mid;
                        w_end = trial;
                    } else {
                        lo = mid;
                    }
                    if hi - lo <= 4.0 * f64::EPSILON * (sigma + hi) {
                        break;
                    }
                }
                let w_mid = rk4_step(&rhs, sigma, [w], 0.5 * hi)[0];
                u += simpson(sigma, hi, w, w_mid, w_end);
                let s = sigma + hi;
                samples.push((s * s, 1.0 - w_end));
                return Ok(OdeRun {
                    family: params.family,
                    params: *params,
                    step: self.step,
                    epsilon_start: eps,
                    phi_samples: samples,
                    height_estimate: u,
                });
            }
            let w_mid = rk4_step(&rhs, sigma, [w], 0.5 * self.step)[0];
            u += simpson(sigma, self.step, w, w_mid, next);
            sigma += self.step;
            w = next;
            samples.push((sigma * sigma, 1.0 - w));
            if sigma > sigma_max {
                return Err(Error::NonConvergence {
                    what: "flux integration (no zero crossing)",
                    iterations: samples.len(),
                    residual: 1.0 - w,
                });
            }
        }
    }

    /// Strip barrier: start on the boundary hypercycle `d = l`, where the
    /// profile slope is known, and integrate inward to the geodesic.
    fn run_strip(&self, params: &BarrierParams) -> Result<OdeRun> {
        let h = params.h;
        let l = params.shape;
        let rhs = |d: f64, y: State<2>| -> State<2> {
            let phi = y[0];
            [-2.0 * h - phi * d.tanh(), phi / (1.0 - phi * phi).sqrt()]
        };
        let th = l.tanh();
        let slope_at_l = -2.0 * h * th / (1.0 - 4.0 * h * h * th * th).sqrt();
        let phi_l = slope_at_l / (1.0 + slope_at_l * slope_at_l).sqrt();

        let n = (l / self.step).ceil().max(1.0) as usize;
        let step = l / n as f64;
        let mut y: State<2> = [phi_l, 0.0];
        let mut samples = Vec::with_capacity(n + 1);
        samples.push((l, phi_l));
        for k in 0..n {
            let d = l - k as f64 * step;
            y = rk4_step(&rhs, d, y, -step);
            let d_next = l - (k + 1) as f64 * step;
            self.check_flux(d_next, y[0])?;
            samples.push((d_next.max(0.0), y[0]));
        }
        Ok(OdeRun {
            family: Family::Strip,
            params: *params,
            step,
            epsilon_start: 0.0,
            phi_samples: samples,
            height_estimate: y[1],
        })
    }

    fn check_flux(&self, at: f64, phi: f64) -> Result<()> {
        if !phi.is_finite() || phi.abs() > 1.0 + self.overshoot {
            return Err(Error::StepInstability { at, flux: phi });
        }
        Ok(())
    }
}

/// Runs the flux ODE with the given step and default start offset.
pub fn integrate_flux(params: &BarrierParams, step: f64) -> Result<OdeRun> {
    FluxIntegrator::with_step(step).run(params)
}

/// Height of a barrier computed only from the flux ODE.
pub fn oracle_height(params: &BarrierParams) -> Result<f64> {
    FluxIntegrator::default().run(params).map(|run| run.height_estimate)
}
