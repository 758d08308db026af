use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Absolute tolerance requested from adaptive quadrature.
    pub quadrature: f64,
    /// Bracket width at which root finding stops.
    pub root: f64,
    /// Largest residual accepted from a root solve.
    pub residual: f64,
    /// Allowed overshoot of |flux| past 1 in the ODE oracle.
    pub ode: f64,
    /// Newton residual (max norm) for the Dirichlet solver.
    pub pde: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quadrature: 1e-10,
            root: 1e-10,
            residual: 1e-9,
            ode: 1e-9,
            pde: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("quadrature", self.quadrature),
            ("root", self.root),
            ("residual", self.residual),
            ("ode", self.ode),
            ("pde", self.pde),
        ];
        for (name, value) in all {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Config(format!(
                    "tolerance `{name}` must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}
