//! Implicitly defined scalars: barrier widths, critical strip half-widths and
//! the curvature-dependent height bound.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::profiles::{Barriers, Height};
use crate::roots::{Bracketed, Root};

/// Which implicit quantity a [`ScalarReport`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Distance between the two zero sets of the hypercycle barrier.
    HypercycleWidth,
    /// Radial width of the nodoid barrier annulus.
    NodoidWidth,
    /// Half-width whose strip barrier reaches the limit height.
    CriticalHalfWidth,
    /// Half-width whose strip barrier matches a hypercycle barrier height.
    StripMatchingHypercycle,
    /// Half-width whose strip barrier matches a nodoid barrier height.
    StripMatchingNodoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarReport {
    pub quantity: Quantity,
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

const SEARCH_LIMIT: f64 = 1e4;

impl Barriers {
    fn root_finder(&self) -> Bracketed {
        Bracketed::new(self.tolerances().root)
    }

    fn report(&self, quantity: Quantity, root: Root) -> Result<ScalarReport> {
        if root.fx.abs() > self.tolerances().residual {
            return Err(Error::NonConvergence {
                what: "scalar solve",
                iterations: root.iterations,
                residual: root.fx.abs(),
            });
        }
        Ok(ScalarReport {
            quantity,
            value: root.x,
            residual: root.fx,
            iterations: root.iterations,
            bracket: root.bracket,
        })
    }

    /// Width of the hypercycle barrier: the positive zero of its profile.
    /// The search starts at twice the peak distance and doubles outward.
    pub fn hypercycle_width(&self, r: f64) -> Result<ScalarReport> {
        let start = 2.0 * self.hypercycle_peak(r)?;
        let root = self.root_finder().solve_expanding(
            |d| self.hypercycle_profile(r, d),
            start,
            2.0 * start,
            SEARCH_LIMIT,
            "hypercycle barrier width",
        )?;
        self.report(Quantity::HypercycleWidth, root)
    }

    pub fn nodoid_width(&self, rho: f64) -> Result<ScalarReport> {
        let start = 2.0 * self.nodoid_peak(rho)?;
        let root = self.root_finder().solve_expanding(
            |d| self.nodoid_profile(rho, d),
            start,
            2.0 * start,
            SEARCH_LIMIT,
            "nodoid barrier width",
        )?;
        self.report(Quantity::NodoidWidth, root)
    }

    /// Strip half-width whose height equals `target`. The strip height is an
    /// increasing bijection of `[0, ∞)`, so any finite target is reached.
    fn strip_width_for(&self, target: f64, quantity: Quantity) -> Result<ScalarReport> {
        if !(target >= 0.0 && target.is_finite()) {
            return Err(domain(format!("target height must be finite and non-negative, got {target}")));
        }
        let root = self.root_finder().solve_expanding(
            |l| Ok(self.strip_height(l)? - target),
            0.0,
            1.0,
            SEARCH_LIMIT,
            "strip half-width",
        )?;
        self.report(quantity, root)
    }

    /// The half-width `ℓ(H)` at which the strip barrier is as tall as the limit height.
    pub fn critical_half_width(&self) -> Result<ScalarReport> {
        self.strip_width_for(self.limit_height(), Quantity::CriticalHalfWidth)
    }

    /// Residual of the logarithmic characterization of `ℓ(H)`:
    /// `ln[(q + √(1 - 4H² tanh² ℓ))/(q + 1) · cosh ℓ] - (π q/(4H) - 2 atanh((1-2H)/q))`
    /// with `q = √(1 - 4H²)`.
    pub fn critical_half_width_log_residual(&self, ell: f64) -> f64 {
        let h = self.h();
        let q = (1.0 - 4.0 * h * h).sqrt();
        let th = ell.tanh();
        let lhs = ((q + (1.0 - 4.0 * h * h * th * th).sqrt()) / (q + 1.0)).ln() + ell.cosh().ln();
        let rhs = std::f64::consts::PI * q / (4.0 * h) - 2.0 * ((1.0 - 2.0 * h) / q).atanh();
        lhs - rhs
    }

    /// Strip half-width `R(H, r)` whose height equals the hypercycle barrier height.
    pub fn strip_width_matching_hypercycle(&self, r: f64) -> Result<ScalarReport> {
        match self.hypercycle_height(r)? {
            Height::Finite(target) => self.strip_width_for(target, Quantity::StripMatchingHypercycle),
            Height::Unbounded => Err(Error::Unbounded),
        }
    }

    /// Strip half-width `ϱ(H, ρ)` whose height equals the nodoid barrier height.
    pub fn strip_width_matching_nodoid(&self, rho: f64) -> Result<ScalarReport> {
        let target = self.nodoid_height(rho)?;
        self.strip_width_for(target, Quantity::StripMatchingNodoid)
    }

    /// A priori height bound as a function of the infimum `kappa` of the
    /// boundary geodesic curvature:
    ///
    /// * `+∞` for `kappa ≥ 2H`,
    /// * the hypercycle height at `r = atanh(-kappa)` for `kappa ∈ (-1, 2H)`,
    /// * the limit height at `kappa = -1`,
    /// * the nodoid height at `ρ = acoth(-kappa)` for `kappa < -1`.
    pub fn height_bound(&self, kappa: f64) -> Result<Height> {
        if kappa.is_nan() || kappa == f64::NEG_INFINITY {
            return Err(domain(format!("curvature bound must be a finite number, got {kappa}")));
        }
        if kappa >= 2.0 * self.h() {
            Ok(Height::Unbounded)
        } else if kappa == -1.0 {
            Ok(Height::Finite(self.limit_height()))
        } else if kappa > -1.0 {
            self.hypercycle_height((-kappa).atanh())
        } else {
            // acoth(x) = atanh(1/x) for x > 1
            self.nodoid_height((-1.0 / kappa).atanh()).map(Height::Finite)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::hypercycle_shape_min;

    #[test]
    fn hypercycle_width_example() {
        let b = Barriers::new(0.25).unwrap();
        let rep = b.hypercycle_width(0.0).unwrap();
        assert_eq!(rep.quantity, Quantity::HypercycleWidth);
        assert!(rep.value > 2.0 * 2f64.asinh());
        // Independent scipy evaluation of the same root: 5.197708059201675.
        assert!((rep.value - 5.197_708_059_2).abs() < 1e-8);
        assert!(rep.residual.abs() < 1e-9);
        assert!(rep.bracket.0 <= rep.value && rep.value <= rep.bracket.1);
    }

    #[test]
    fn nodoid_width_example() {
        let b = Barriers::new(0.25).unwrap();
        let rep = b.nodoid_width(1.0).unwrap();
        assert!(rep.value >= 2.0 * b.nodoid_peak(1.0).unwrap());
        assert!((rep.value - 3.265_152_498_3).abs() < 1e-8);
        assert!(rep.residual.abs() < 1e-9);
        assert!(rep.bracket.0 <= rep.value && rep.value <= rep.bracket.1);
    }

    #[test]
    fn critical_half_width_example() {
        let b = Barriers::new(0.25).unwrap();
        let rep = b.critical_half_width().unwrap();
        assert!((rep.value - 2.153_670_657).abs() < 1e-8);
        assert!((b.strip_height(rep.value).unwrap() - b.limit_height()).abs() < 1e-9);
        assert!(b.critical_half_width_log_residual(rep.value).abs() < 1e-8);
    }

    #[test]
    fn matching_widths() {
        let b = Barriers::new(0.25).unwrap();
        let r1 = b.strip_width_matching_hypercycle(1.0).unwrap();
        let target = b.hypercycle_height(1.0).unwrap().finite().unwrap();
        assert!(r1.value > 0.0 && r1.value.is_finite());
        assert!((b.strip_height(r1.value).unwrap() - target).abs() < 1e-9);
        let r2 = b.strip_width_matching_hypercycle(2.0).unwrap();
        assert!(r1.value > r2.value);

        let rho = b.strip_width_matching_nodoid(1.0).unwrap();
        assert!((b.strip_height(rho.value).unwrap() - b.nodoid_height(1.0).unwrap()).abs() < 1e-9);

        let r_min = hypercycle_shape_min(0.25);
        assert!(matches!(b.strip_width_matching_hypercycle(r_min), Err(Error::Unbounded)));
    }

    #[test]
    fn height_bound_branches() {
        let b = Barriers::new(0.25).unwrap();
        assert_eq!(b.height_bound(0.5).unwrap(), Height::Unbounded);
        assert_eq!(b.height_bound(3.0).unwrap(), Height::Unbounded);
        assert_eq!(b.height_bound(f64::INFINITY).unwrap(), Height::Unbounded);
        assert_eq!(b.height_bound(-1.0).unwrap(), Height::Finite(b.limit_height()));
        let mid = b.height_bound(0.0).unwrap().finite().unwrap();
        assert_eq!(mid, b.hypercycle_height(0.0).unwrap().finite().unwrap());
        let low = b.height_bound(-2.0).unwrap().finite().unwrap();
        assert!((low - b.nodoid_height(0.5f64.atanh()).unwrap()).abs() < 1e-15);
        // Approaching 2H from below the bound grows without limit.
        let close = b.height_bound(0.5 - 1e-9).unwrap().as_f64();
        assert!(close > 5.0);
        assert!(b.height_bound(f64::NAN).is_err());
    }
}
