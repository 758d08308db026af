use cmcbar::hyperbolic::disk_distance;
use cmcbar::profiles::hypercycle_shape_min;
use cmcbar::{integrate_flux, BarrierParams, Barriers, FermiChart, PolarChart};
use proptest::prelude::*;

fn mean_curvature() -> impl Strategy<Value = f64> {
    0.02f64..0.48
}

/// `(H, r)` with `r` above the hypercycle threshold.
fn hypercycle_params() -> impl Strategy<Value = (f64, f64)> {
    (mean_curvature(), 0.02f64..4.0).prop_map(|(h, off)| (h, hypercycle_shape_min(h) + off))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flux_stays_inside_unit_interval((h, r) in hypercycle_params(), frac in 0.001f64..0.999) {
        let b = Barriers::new(h).unwrap();
        let width = b.hypercycle_width(r).unwrap().value;
        let c = b.hypercycle_flux(r, frac * width).unwrap();
        prop_assert!(c.abs() < 1.0, "c = {c}");
        prop_assert_eq!(b.hypercycle_flux(r, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn flux_decays_at_least_symmetrically((h, r) in hypercycle_params(), frac in 0.0f64..1.0) {
        let b = Barriers::new(h).unwrap();
        let z = b.hypercycle_peak(r).unwrap();
        let s = frac * z;
        let sum = b.hypercycle_flux(r, z - s).unwrap() + b.hypercycle_flux(r, z + s).unwrap();
        prop_assert!(sum >= -1e-14, "c(z-s) + c(z+s) = {sum}");
    }

    #[test]
    fn profile_slope_matches_flux((h, r) in hypercycle_params(), frac in 0.2f64..1.8) {
        let b = Barriers::new(h).unwrap();
        let d = frac * b.hypercycle_peak(r).unwrap();
        let eps = 1e-4;
        let slope = (b.hypercycle_profile(r, d + eps).unwrap() - b.hypercycle_profile(r, d - eps).unwrap())
            / (2.0 * eps);
        let c = b.hypercycle_flux(r, d).unwrap();
        let expected = c / (1.0 - c * c).sqrt();
        prop_assert!((slope - expected).abs() < 1e-5 * (1.0 + expected.abs()), "{slope} vs {expected}");
    }

    #[test]
    fn nodoid_height_increases(h in mean_curvature(), rho in 0.05f64..5.0, step in 0.05f64..1.0) {
        let b = Barriers::new(h).unwrap();
        prop_assert!(b.nodoid_height(rho + step).unwrap() > b.nodoid_height(rho).unwrap());
        prop_assert!(b.nodoid_height(rho).unwrap() < b.limit_height());
    }

    #[test]
    fn strip_height_increases_below_limit(h in mean_curvature(), l in 0.05f64..6.0, step in 0.05f64..1.0) {
        let b = Barriers::new(h).unwrap();
        let (lo, hi) = (b.strip_height(l).unwrap(), b.strip_height(l + step).unwrap());
        prop_assert!(0.0 < lo && lo < hi);
    }

    #[test]
    fn width_exceeds_twice_peak(h in mean_curvature(), rho in 0.05f64..5.0) {
        let b = Barriers::new(h).unwrap();
        let width = b.nodoid_width(rho).unwrap();
        prop_assert!(width.value > 2.0 * b.nodoid_peak(rho).unwrap());
        prop_assert!(b.nodoid_profile(rho, width.value).unwrap().abs() < 1e-9);
    }

    #[test]
    fn disk_maps_preserve_chart_distances(t in -3.0f64..3.0, x in -3.0f64..3.0, dt in -1.0f64..1.0) {
        // Along the normal geodesic x = const the distance is |dt|.
        let d = disk_distance(FermiChart::to_disk(t, x), FermiChart::to_disk(t + dt, x));
        prop_assert!((d - dt.abs()).abs() < 1e-9 * (1.0 + t.abs().exp()));
        let p = PolarChart::to_disk(t.abs() + 0.1, x).unwrap();
        prop_assert!(p.0.hypot(p.1) < 1.0);
    }
}

#[test]
fn oracle_error_shrinks_at_fourth_order() {
    let params = BarrierParams::strip(0.3, 1.5).unwrap();
    let exact = Barriers::new(0.3).unwrap().strip_height(1.5).unwrap();
    let coarse = (integrate_flux(&params, 0.04).unwrap().height_estimate - exact).abs();
    let fine = (integrate_flux(&params, 0.02).unwrap().height_estimate - exact).abs();
    let ratio = coarse / fine;
    assert!((12.0..20.0).contains(&ratio), "error ratio {ratio}, errors {coarse:e} {fine:e}");
}
