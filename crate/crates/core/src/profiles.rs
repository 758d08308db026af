//! Rotational and translational CMC barrier profiles in ℍ²×ℝ.
//!
//! Three families of `H`-graphs depend on a single distance variable `d`:
//!
//! * **strip**: over the band between two hypercycles at distance `l` from a
//!   geodesic; `d` is the distance to the geodesic and the height is
//!   [`Barriers::strip_height`].
//! * **hypercycle**: starts vertically on a hypercycle of curvature `-tanh r`;
//!   `d` is the distance to that hypercycle. Flux `c(r, t)`.
//! * **nodoid**: starts vertically on a circle of radius `ρ`; `d` is the
//!   distance to the circle. Flux `s(ρ, t)`.
//!
//! For the last two the profile is `u(d) = ∫₀ᵈ φ/√(1-φ²)` with `φ` the flux.
//! Because `φ(0) = 1` the integrand blows up like `t^{-1/2}`; we integrate in
//! `τ = √t` and evaluate `1 - φ` through a cancellation-free product formula.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::Tolerances;
use crate::error::{domain, Error, Result};
use crate::quadrature::Quadrature;

/// The three barrier families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Strip,
    Hypercycle,
    Nodoid,
}

impl Family {
    pub fn shape_name(self) -> &'static str {
        match self {
            Family::Strip => "l",
            Family::Hypercycle => "r",
            Family::Nodoid => "rho",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Strip => "strip",
            Family::Hypercycle => "hypercycle",
            Family::Nodoid => "nodoid",
        })
    }
}

/// Mean curvature plus the shape parameter selecting one family member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierParams {
    pub h: f64,
    pub family: Family,
    /// `l` for strips, `r` for hypercycles, `ρ` for nodoids.
    pub shape: f64,
}

impl BarrierParams {
    pub fn new(h: f64, family: Family, shape: f64) -> Result<Self> {
        check_mean_curvature(h)?;
        match family {
            Family::Strip => check_positive("strip half-width l", shape)?,
            Family::Hypercycle => check_hypercycle_shape(h, shape)?,
            Family::Nodoid => check_positive("nodoid radius rho", shape)?,
        }
        Ok(Self { h, family, shape })
    }

    pub fn strip(h: f64, l: f64) -> Result<Self> {
        Self::new(h, Family::Strip, l)
    }

    pub fn hypercycle(h: f64, r: f64) -> Result<Self> {
        Self::new(h, Family::Hypercycle, r)
    }

    pub fn nodoid(h: f64, rho: f64) -> Result<Self> {
        Self::new(h, Family::Nodoid, rho)
    }
}

/// A height that may be genuinely infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Height {
    Finite(f64),
    Unbounded,
}

impl Height {
    pub fn finite(self) -> Option<f64> {
        match self {
            Height::Finite(v) => Some(v),
            Height::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Height::Unbounded)
    }

    /// Value on the extended real line, for ordering comparisons.
    pub fn as_f64(self) -> f64 {
        match self {
            Height::Finite(v) => v,
            Height::Unbounded => f64::INFINITY,
        }
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(v) => write!(f, "{v}"),
            Height::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for Height {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Height::Finite(v) => serializer.serialize_f64(*v),
            Height::Unbounded => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Height {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(v) => Ok(Height::Finite(v)),
            Repr::Text(s) if s == "inf" => Ok(Height::Unbounded),
            Repr::Text(s) => Err(serde::de::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}

pub fn check_mean_curvature(h: f64) -> Result<()> {
    if h > 0.0 && h < 0.5 {
        Ok(())
    } else {
        Err(domain(format!("mean curvature H must lie in (0, 1/2), got {h}")))
    }
}

/// Smallest admissible hypercycle parameter, `atanh(-2H)`.
pub fn hypercycle_shape_min(h: f64) -> f64 {
    (-2.0 * h).atanh()
}

fn check_hypercycle_shape(h: f64, r: f64) -> Result<()> {
    let r_min = hypercycle_shape_min(h);
    if r > r_min && r.is_finite() {
        Ok(())
    } else {
        Err(domain(format!(
            "hypercycle parameter r must exceed atanh(-2H) = {r_min}, got {r}"
        )))
    }
}

fn check_positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{what} must be positive, got {v}")))
    }
}

fn check_offset(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("distance must be non-negative, got {t}")))
    }
}

/// Flux `φ` and `1 - φ` of the hypercycle family at offset `t`.
fn hypercycle_flux_parts(h: f64, r: f64, t: f64) -> (f64, f64) {
    let den = (r + t).cosh();
    let phi = (r.cosh() + 2.0 * h * (r.sinh() - (r + t).sinh())) / den;
    // sinh(m) + 2H cosh(m) = √(1-4H²)·sinh(m - atanh(-2H)), without the
    // cancellation that the left side suffers for r near atanh(-2H).
    let gap = (r - hypercycle_shape_min(h)) + 0.5 * t;
    let one_minus = 2.0 * (0.5 * t).sinh() * (1.0 - 4.0 * h * h).sqrt() * gap.sinh() / den;
    (phi, one_minus)
}

fn nodoid_flux_parts(h: f64, rho: f64, t: f64) -> (f64, f64) {
    let den = (rho + t).sinh();
    let phi = (rho.sinh() + 2.0 * h * (rho.cosh() - (rho + t).cosh())) / den;
    let mid = rho + 0.5 * t;
    let one_minus = 2.0 * (0.5 * t).sinh() * (mid.cosh() + 2.0 * h * mid.sinh()) / den;
    (phi, one_minus)
}

/// Profile slope `φ/√(1-φ²)` written in `τ = √t`, times the Jacobian `2τ`.
fn slope_in_tau(parts: (f64, f64), tau: f64) -> f64 {
    let (phi, one_minus) = parts;
    2.0 * tau * phi / (one_minus * (1.0 + phi)).sqrt()
}

/// Evaluates the barrier formulas at a fixed mean curvature.
#[derive(Debug, Clone, Copy)]
pub struct Barriers {
    h: f64,
    tol: Tolerances,
}

impl Barriers {
    pub fn new(h: f64) -> Result<Self> {
        Self::with_tolerances(h, Tolerances::default())
    }

    pub fn with_tolerances(h: f64, tol: Tolerances) -> Result<Self> {
        check_mean_curvature(h)?;
        tol.validate()?;
        Ok(Self { h, tol })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub(crate) fn quadrature(&self) -> Quadrature {
        Quadrature::new(self.tol.quadrature)
    }

    /// `sqrt(1 - 4H²)`, which appears throughout the closed forms.
    fn q(&self) -> f64 {
        (1.0 - 4.0 * self.h * self.h).sqrt()
    }

    /// `c(r, t)`: the flux of the hypercycle barrier at distance `t` from its
    /// vertical boundary.
    pub fn hypercycle_flux(&self, r: f64, t: f64) -> Result<f64> {
        check_hypercycle_shape(self.h, r)?;
        check_offset(t)?;
        Ok(hypercycle_flux_parts(self.h, r, t).0)
    }

    /// `s(ρ, t)`: the flux of the nodoid barrier.
    pub fn nodoid_flux(&self, rho: f64, t: f64) -> Result<f64> {
        check_positive("nodoid radius rho", rho)?;
        check_offset(t)?;
        Ok(nodoid_flux_parts(self.h, rho, t).0)
    }

    /// Distance from the boundary hypercycle to the top of the barrier, where the flux vanishes.
    pub fn hypercycle_peak(&self, r: f64) -> Result<f64> {
        check_hypercycle_shape(self.h, r)?;
        Ok((r.sinh() + r.cosh() / (2.0 * self.h)).asinh() - r)
    }

    pub fn nodoid_peak(&self, rho: f64) -> Result<f64> {
        check_positive("nodoid radius rho", rho)?;
        Ok((rho.cosh() + rho.sinh() / (2.0 * self.h)).acosh() - rho)
    }

    /// Common limit of both peak distances as the shape parameter grows.
    pub fn peak_limit(&self) -> f64 {
        (1.0 / (2.0 * self.h)).ln_1p()
    }

    /// Closed-form height of the strip barrier of half-width `l`.
    pub fn strip_height(&self, l: f64) -> Result<f64> {
        if !(l >= 0.0 && l.is_finite()) {
            return Err(domain(format!("strip half-width must be non-negative, got {l}")));
        }
        let h = self.h;
        let q = self.q();
        let th = l.tanh();
        let inner = (q + (1.0 - 4.0 * h * h * th * th).sqrt()) / (q + 1.0);
        // ln(inner·cosh l) without overflowing cosh for large l.
        let ln_cosh = l + (-2.0 * l).exp().ln_1p() - std::f64::consts::LN_2;
        Ok(2.0 * h / q * (inner.ln() + ln_cosh))
    }

    /// Strip barrier profile at distance `d` from the central geodesic, by quadrature.
    pub fn strip_profile(&self, l: f64, d: f64) -> Result<f64> {
        check_positive("strip half-width l", l)?;
        if !(0.0..=l).contains(&d) {
            return Err(domain(format!("strip profile needs 0 <= d <= l = {l}, got {d}")));
        }
        let h = self.h;
        self.quadrature().integrate(
            |s| {
                let th = s.tanh();
                2.0 * h * th / (1.0 - 4.0 * h * h * th * th).sqrt()
            },
            d,
            l,
        )
    }

    /// Hypercycle barrier profile at distance `d` from its boundary.
    pub fn hypercycle_profile(&self, r: f64, d: f64) -> Result<f64> {
        check_hypercycle_shape(self.h, r)?;
        check_offset(d)?;
        let h = self.h;
        self.quadrature().integrate(
            |tau| slope_in_tau(hypercycle_flux_parts(h, r, tau * tau), tau),
            0.0,
            d.sqrt(),
        )
    }

    pub fn nodoid_profile(&self, rho: f64, d: f64) -> Result<f64> {
        check_positive("nodoid radius rho", rho)?;
        check_offset(d)?;
        let h = self.h;
        self.quadrature().integrate(
            |tau| slope_in_tau(nodoid_flux_parts(h, rho, tau * tau), tau),
            0.0,
            d.sqrt(),
        )
    }

    /// Height of the hypercycle barrier. Infinite exactly at `r = atanh(-2H)`.
    pub fn hypercycle_height(&self, r: f64) -> Result<Height> {
        if r == hypercycle_shape_min(self.h) {
            return Ok(Height::Unbounded);
        }
        let peak = self.hypercycle_peak(r)?;
        self.hypercycle_profile(r, peak).map(Height::Finite)
    }

    pub fn nodoid_height(&self, rho: f64) -> Result<f64> {
        let peak = self.nodoid_peak(rho)?;
        self.nodoid_profile(rho, peak)
    }

    /// Common limit of the hypercycle and nodoid heights as `r, ρ → ∞`.
    pub fn limit_height(&self) -> f64 {
        let h = self.h;
        let q = self.q();
        std::f64::consts::FRAC_PI_2 - 4.0 * h / q * ((1.0 - 2.0 * h) / q).atanh()
    }

    /// The same limit, integrating the limiting slope
    /// `g/√(1-g²)` with `g(t) = -2H + (1+2H)e^{-t}` up to [`Self::peak_limit`].
    pub fn limit_height_by_quadrature(&self) -> Result<f64> {
        let h = self.h;
        self.quadrature().integrate(
            |tau| {
                let t = tau * tau;
                let one_minus = -(1.0 + 2.0 * h) * (-t).exp_m1();
                let g = 1.0 - one_minus;
                2.0 * tau * g / (one_minus * (1.0 + g)).sqrt()
            },
            0.0,
            self.peak_limit().sqrt(),
        )
    }

    /// Samples a barrier profile from its zero boundary to its far zero
    /// (or, for strips, from the geodesic to the boundary hypercycle).
    pub fn curve(&self, params: &BarrierParams, samples: usize) -> Result<ProfileCurve> {
        if params.h != self.h {
            return Err(domain(format!(
                "parameters carry H = {}, evaluator is set up for H = {}",
                params.h, self.h
            )));
        }
        if samples < 2 {
            return Err(domain(format!("a profile needs at least 2 samples, got {samples}")));
        }
        match params.family {
            Family::Strip => self.strip_curve(params, samples),
            Family::Hypercycle => {
                let width = self.hypercycle_width(params.shape)?.value;
                let peak = self.hypercycle_peak(params.shape)?;
                let (h, r) = (self.h, params.shape);
                self.flux_curve(params, samples, width, peak, move |tau| {
                    slope_in_tau(hypercycle_flux_parts(h, r, tau * tau), tau)
                })
            }
            Family::Nodoid => {
                let width = self.nodoid_width(params.shape)?.value;
                let peak = self.nodoid_peak(params.shape)?;
                let (h, rho) = (self.h, params.shape);
                self.flux_curve(params, samples, width, peak, move |tau| {
                    slope_in_tau(nodoid_flux_parts(h, rho, tau * tau), tau)
                })
            }
        }
    }

    fn strip_curve(&self, params: &BarrierParams, samples: usize) -> Result<ProfileCurve> {
        let l = params.shape;
        let h = self.h;
        let slope = |s: f64| {
            let th = s.tanh();
            2.0 * h * th / (1.0 - 4.0 * h * h * th * th).sqrt()
        };
        let quad = self.quadrature();
        let ds: Vec<f64> = (0..samples)
            .map(|k| l * k as f64 / (samples - 1) as f64)
            .collect();
        let mut us = vec![0.0; samples];
        for k in (0..samples - 1).rev() {
            us[k] = us[k + 1] + quad.integrate(slope, ds[k], ds[k + 1])?;
        }
        let samples = ds
            .into_iter()
            .zip(us)
            .map(|(d, u)| ProfileSample { d, u })
            .collect();
        Ok(ProfileCurve {
            params: *params,
            samples,
            d_max: l,
            argmax_d: 0.0,
            height: self.strip_height(l)?,
        })
    }

    fn flux_curve<F: Fn(f64) -> f64 + Copy>(
        &self,
        params: &BarrierParams,
        samples: usize,
        width: f64,
        peak: f64,
        slope: F,
    ) -> Result<ProfileCurve> {
        let quad = self.quadrature();
        let tau_max = width.sqrt();
        let mut taus: Vec<f64> = (0..samples)
            .map(|k| tau_max * k as f64 / (samples - 1) as f64)
            .collect();
        // Snap the nearest interior node onto the peak so the curve attains it.
        let step = tau_max / (samples - 1) as f64;
        let nearest = ((peak.sqrt() / step).round() as usize).clamp(1, samples.saturating_sub(2).max(1));
        if nearest < samples - 1 {
            taus[nearest] = peak.sqrt();
        }

        let mut u = 0.0;
        let mut out = Vec::with_capacity(samples);
        out.push(ProfileSample { d: 0.0, u: 0.0 });
        for pair in taus.windows(2) {
            u += quad.integrate(slope, pair[0], pair[1])?;
            out.push(ProfileSample { d: pair[1] * pair[1], u });
        }
        let height = quad.integrate(slope, 0.0, peak.sqrt())?;
        Ok(ProfileCurve {
            params: *params,
            samples: out,
            d_max: width,
            argmax_d: peak,
            height,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub d: f64,
    pub u: f64,
}

/// A sampled profile `d ↦ u(d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub params: BarrierParams,
    pub samples: Vec<ProfileSample>,
    pub d_max: f64,
    pub argmax_d: f64,
    pub height: f64,
}

impl ProfileCurve {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record(["d", "u"])?;
        for s in &self.samples {
            csv.write_record([s.d.to_string(), s.u.to_string()])?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(Error::from)
    }

    pub fn max_u(&self) -> f64 {
        self.samples.iter().map(|s| s.u).fold(f64::NEG_INFINITY, f64::max)
    }
}
