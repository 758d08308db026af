//! Coordinate charts on the hyperbolic plane.
//!
//! Everything in the crate works in one of two intrinsic charts:
//!
//! * Fermi coordinates `(t, x)` about a geodesic: `t` is the signed distance
//!   to the geodesic and `x` the arclength along it. The metric is
//!   `dt² + cosh²(t) dx²`.
//! * Geodesic polar coordinates `(ρ, θ)` about a point, with metric
//!   `dρ² + sinh²(ρ) dθ²`.
//!
//! The Poincaré disk only appears at export time.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Which chart a grid or sample set is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Fermi,
    Polar,
}

impl Chart {
    /// Length scale of the lateral direction, `√g` in the divergence formula.
    pub fn metric(self, radial: f64) -> f64 {
        match self {
            Chart::Fermi => FermiChart::metric(radial),
            Chart::Polar => PolarChart::metric(radial),
        }
    }

    /// Mean curvature of the level set `{radial = s}`, i.e. `g'(s)/g(s)`,
    /// which is also the Laplacian of the radial coordinate.
    pub fn level_curvature(self, radial: f64) -> f64 {
        match self {
            Chart::Fermi => radial.tanh(),
            Chart::Polar => 1.0 / radial.tanh(),
        }
    }

    pub fn to_disk(self, radial: f64, lateral: f64) -> Result<(f64, f64)> {
        match self {
            Chart::Fermi => Ok(FermiChart::to_disk(radial, lateral)),
            Chart::Polar => PolarChart::to_disk(radial, lateral),
        }
    }
}

/// Fermi coordinates about a fixed geodesic.
#[derive(Debug, Clone, Copy, Default)]
pub struct FermiChart;

impl FermiChart {
    pub fn metric(t: f64) -> f64 {
        t.cosh()
    }

    /// |∇u|² in terms of coordinate partials.
    pub fn gradient_norm_sq(du_dt: f64, du_dx: f64, t: f64) -> f64 {
        let g = t.cosh();
        du_dt * du_dt + du_dx * du_dx / (g * g)
    }

    /// Geodesic curvature of `{t = s}` with normal pointing toward decreasing `t`.
    pub fn hypercycle_curvature(s: f64) -> f64 {
        -s.tanh()
    }

    /// Maps Fermi coordinates to the Poincaré disk. The base geodesic is the
    /// real diameter, `x = 0` passes through the origin, and `t > 0` is the
    /// upper half of the disk.
    pub fn to_disk(t: f64, x: f64) -> (f64, f64) {
        // Upper half-plane point at signed distance t from the imaginary axis;
        // the Cayley map sends that axis to the real diameter.
        let z = Complex64::new(t.tanh(), 1.0 / t.cosh()) * x.exp();
        let i = Complex64::i();
        let w = (z - i) / (z + i);
        (w.re, -w.im)
    }
}

/// Geodesic polar coordinates about a fixed point.
#[derive(Debug, Clone, Copy, Default)]
pub struct PolarChart;

impl PolarChart {
    pub fn metric(rho: f64) -> f64 {
        rho.sinh()
    }

    pub fn gradient_norm_sq(du_drho: f64, du_dtheta: f64, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(domain(format!(
                "polar chart is singular at rho = {rho}; need rho > 0"
            )));
        }
        let g = rho.sinh();
        Ok(du_drho * du_drho + du_dtheta * du_dtheta / (g * g))
    }

    /// The Laplacian of the distance to the circle of radius `rho`, at distance `d` outside it.
    pub fn circle_distance_laplacian(rho: f64, d: f64) -> f64 {
        1.0 / (rho + d).tanh()
    }

    pub fn to_disk(rho: f64, theta: f64) -> Result<(f64, f64)> {
        if rho < 0.0 {
            return Err(domain(format!("polar radius must be non-negative, got {rho}")));
        }
        let r = (0.5 * rho).tanh();
        Ok((r * theta.cos(), r * theta.sin()))
    }
}

/// Hyperbolic distance between two points of the Poincaré disk.
pub fn disk_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let a = Complex64::new(a.0, a.1);
    let b = Complex64::new(b.0, b.1);
    let ratio = (a - b).norm() / (Complex64::new(1.0, 0.0) - a.conj() * b).norm();
    2.0 * ratio.atanh()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermi_gradient_examples() {
        assert_eq!(FermiChart::gradient_norm_sq(1.0, 0.0, 3.7), 1.0);
        assert_eq!(FermiChart::gradient_norm_sq(0.0, 1.0, 0.0), 1.0);
        let expected = 4.0 / 1f64.cosh().powi(2);
        assert!((FermiChart::gradient_norm_sq(0.0, 2.0, 1.0) - expected).abs() < 1e-15);
        assert!((expected - 1.679_89).abs() < 1e-5);
    }

    #[test]
    fn polar_gradient_examples() {
        assert_eq!(PolarChart::gradient_norm_sq(1.0, 0.0, 1.0).unwrap(), 1.0);
        let v = PolarChart::gradient_norm_sq(0.0, 1.0, 1f64.asinh()).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert_eq!(PolarChart::gradient_norm_sq(0.0, 0.0, 0.5).unwrap(), 0.0);
        assert!(PolarChart::gradient_norm_sq(1.0, 1.0, 0.0).is_err());
        assert!(PolarChart::gradient_norm_sq(1.0, 1.0, -0.2).is_err());
    }

    #[test]
    fn metric_conventions() {
        assert_eq!(FermiChart::metric(0.0), 1.0);
        assert!(FermiChart::metric(0.3) > 1.0 && FermiChart::metric(-0.3) > 1.0);
        assert_eq!(PolarChart::metric(0.0), 0.0);
        assert!(PolarChart::metric(1e-3) > 0.0);
        assert!((FermiChart::hypercycle_curvature(0.7) + 0.7f64.tanh()).abs() < 1e-16);
    }

    #[test]
    fn fermi_disk_map_preserves_distances() {
        for &(t, x) in &[(0.5, 0.0), (-1.2, 0.3), (2.0, -1.0)] {
            let p = FermiChart::to_disk(t, x);
            let foot = FermiChart::to_disk(0.0, x);
            // Distance to the foot on the base geodesic is |t|.
            assert!((disk_distance(p, foot) - t.abs()).abs() < 1e-12);
        }
        // Along the geodesic, distance is arclength.
        let a = FermiChart::to_disk(0.0, -0.4);
        let b = FermiChart::to_disk(0.0, 1.1);
        assert!((disk_distance(a, b) - 1.5).abs() < 1e-12);
        assert!(FermiChart::to_disk(0.0, 0.0).0.abs() < 1e-15);
        assert!(FermiChart::to_disk(1.0, 0.0).1 > 0.0);
    }

    #[test]
    fn polar_disk_map_preserves_radius() {
        for &(rho, theta) in &[(0.3, 0.0), (1.5, 2.0), (4.0, -0.7)] {
            let p = PolarChart::to_disk(rho, theta).unwrap();
            assert!((disk_distance(p, (0.0, 0.0)) - rho).abs() < 1e-11);
        }
    }

    #[test]
    fn fermi_lateral_spacing_matches_metric() {
        // Points (t, x) and (t, x + dx) are cosh(t)·dx apart to first order.
        let (t, dx) = (1.3, 1e-6);
        let d = disk_distance(FermiChart::to_disk(t, 0.2), FermiChart::to_disk(t, 0.2 + dx));
        assert!((d / dx - t.cosh()).abs() < 1e-5);
    }
}
