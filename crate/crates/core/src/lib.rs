//! Constant mean curvature barrier graphs in ℍ²×ℝ.
//!
//! The crate computes the one-dimensional CMC barrier profiles over strips,
//! hypercycle bands and annuli in the hyperbolic plane, the heights and
//! widths derived from them, an independent ODE cross-check, and a
//! finite-difference Newton solver for the full two-dimensional Dirichlet
//! problem `div(∇u/√(1+|∇u|²)) + 2H = 0` in Fermi and polar charts.
//!
//! ```
//! use cmcbar::Barriers;
//!
//! let b = Barriers::new(0.25)?;
//! let ell = b.critical_half_width()?;
//! assert!((b.strip_height(ell.value)? - b.limit_height()).abs() < 1e-9);
//! # Ok::<(), cmcbar::Error>(())
//! ```

pub mod config;
pub mod error;
pub mod hyperbolic;
pub mod ode_oracle;
pub mod pde;
pub mod profiles;
pub mod quadrature;
pub mod report;
pub mod roots;
pub mod scalar;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use hyperbolic::{Chart, FermiChart, PolarChart};
pub use ode_oracle::{integrate_flux, oracle_height, FluxIntegrator, OdeRun};
pub use profiles::{BarrierParams, Barriers, Family, Height, ProfileCurve};
pub use scalar::{Quantity, ScalarReport};
