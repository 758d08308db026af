//! Acceptance gate: eight numbered criteria, each printed as one PASS/FAIL
//! line. Runs sequentially so the timing limits are measured without
//! competing test threads.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cmcbar::pde::{NewtonOptions, Scenario};
use cmcbar::profiles::hypercycle_shape_min;
use cmcbar::report::{bound_monotonicity, interior_points, symmetric_decay_margin};
use cmcbar::{oracle_height, BarrierParams, Barriers, Height, Result};

type Outcome = std::result::Result<String, String>;

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

fn h_values(n: usize) -> Vec<f64> {
    linspace(0.05, 0.45, n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> std::result::Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("{what} took {:.2} s, limit {limit_s} s", elapsed.as_secs_f64())
    })
}

fn num<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn finite(h: Height) -> std::result::Result<f64, String> {
    h.finite().ok_or_else(|| "unexpected unbounded height".to_string())
}

fn closed_form_vs_quadrature() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for h in h_values(9) {
        let b = num(Barriers::new(h))?;
        for l in [0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0] {
            let diff = (num(b.strip_height(l))? - num(b.strip_profile(l, 0.0))?).abs();
            ensure(diff < 1e-8, || format!("H={h} l={l}: |h - psi(0)| = {diff:e}"))?;
            worst = worst.max(diff);
        }
    }
    within(start.elapsed(), 10.0, "grid")?;
    Ok(format!("max diff {worst:.1e} over 81 points in {:.2?}", start.elapsed()))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for h in h_values(10) {
        let b = num(Barriers::new(h))?;
        let r_min = hypercycle_shape_min(h);
        for r in linspace(r_min + 0.05, 4.0, 10) {
            let q = finite(num(b.hypercycle_height(r))?)?;
            let o = num(oracle_height(&num(BarrierParams::hypercycle(h, r))?))?;
            ensure((q - o).abs() < 1e-6, || format!("hypercycle H={h} r={r}: {q} vs {o}"))?;
            worst = worst.max((q - o).abs());
        }
        for rho in linspace(0.1, 4.0, 10) {
            let q = num(b.nodoid_height(rho))?;
            let o = num(oracle_height(&num(BarrierParams::nodoid(h, rho))?))?;
            ensure((q - o).abs() < 1e-6, || format!("nodoid H={h} rho={rho}: {q} vs {o}"))?;
            worst = worst.max((q - o).abs());
        }
        for l in linspace(0.25, 4.0, 10) {
            let q = num(b.strip_height(l))?;
            let o = num(oracle_height(&num(BarrierParams::strip(h, l))?))?;
            ensure((q - o).abs() < 1e-6, || format!("strip H={h} l={l}: {q} vs {o}"))?;
            worst = worst.max((q - o).abs());
        }
    }
    within(start.elapsed(), 60.0, "oracle grid")?;
    Ok(format!("max diff {worst:.1e} over 3x10x10 points in {:.2?}", start.elapsed()))
}

fn inequalities() -> Outcome {
    let mut min_width = f64::INFINITY;
    let mut min_decay = f64::INFINITY;
    let mut min_strip = f64::INFINITY;
    let mut min_offset = f64::INFINITY;
    for h in h_values(20) {
        let b = num(Barriers::new(h))?;
        let r_min = hypercycle_shape_min(h);
        for r in linspace(r_min + 0.02, 5.0, 20) {
            let m = num(b.hypercycle_width(r))?.value - 2.0 * num(b.hypercycle_peak(r))?;
            ensure(m > 0.0, || format!("hypercycle width H={h} r={r}: margin {m}"))?;
            min_width = min_width.min(m);
            let (lhs, rhs) = num(symmetric_decay_margin(&b, r))?;
            ensure(rhs - lhs > 0.0, || format!("symmetric decay H={h} r={r}: margin {}", rhs - lhs))?;
            min_decay = min_decay.min(rhs - lhs);
        }
        for rho in linspace(0.05, 5.0, 20) {
            let m = num(b.nodoid_width(rho))?.value - 2.0 * num(b.nodoid_peak(rho))?;
            ensure(m > 0.0, || format!("nodoid width H={h} rho={rho}: margin {m}"))?;
            min_width = min_width.min(m);
        }
        for r in interior_points(r_min, 0.0, 10) {
            let m = finite(num(b.hypercycle_height(r))?)? - num(b.strip_height(r.abs()))?;
            ensure(m > 0.0, || format!("strip below hypercycle H={h} r={r}: margin {m}"))?;
            min_strip = min_strip.min(m);
            let m = num(b.hypercycle_peak(r))? - r.abs();
            ensure(m > 0.0, || format!("offset below peak H={h} r={r}: margin {m}"))?;
            min_offset = min_offset.min(m);
        }
    }
    Ok(format!(
        "min margins: widths {min_width:.3e}, decay {min_decay:.3e}, strip {min_strip:.3e}, offset {min_offset:.3e}"
    ))
}

fn limits() -> Outcome {
    let mut worst: f64 = 0.0;
    for h in h_values(5) {
        let b = num(Barriers::new(h))?;
        let inf = b.limit_height();
        let a = finite(num(b.hypercycle_height(25.0))?)?;
        let big_a = num(b.nodoid_height(25.0))?;
        ensure((a - inf).abs() < 1e-4, || format!("H={h}: hypercycle {a} vs limit {inf}"))?;
        ensure((big_a - inf).abs() < 1e-4, || format!("H={h}: nodoid {big_a} vs limit {inf}"))?;
        worst = worst.max((a - inf).abs()).max((big_a - inf).abs());
    }
    let b = num(Barriers::new(0.25))?;
    let d = (b.limit_height() - num(b.limit_height_by_quadrature())?).abs();
    ensure(d < 1e-8, || format!("H=0.25 closed form vs quadrature: {d:e}"))?;
    Ok(format!("max limit gap {worst:.1e}, closed form vs quadrature {d:.1e}"))
}

fn monotonicity() -> Outcome {
    let mut min_step = f64::INFINITY;
    let mut min_cross = f64::INFINITY;
    for h in h_values(5) {
        let b = num(Barriers::new(h))?;
        let r_min = hypercycle_shape_min(h);
        let a = linspace(r_min + 0.01, 4.0, 50)
            .into_iter()
            .map(|r| finite(num(b.hypercycle_height(r))?))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let big_a = linspace(0.05, 4.0, 50)
            .into_iter()
            .map(|rho| num(b.nodoid_height(rho)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        for (k, w) in a.windows(2).enumerate() {
            ensure(w[1] < w[0], || format!("H={h}: hypercycle height not decreasing at index {k}"))?;
            min_step = min_step.min(w[0] - w[1]);
        }
        for (k, w) in big_a.windows(2).enumerate() {
            ensure(w[1] > w[0], || format!("H={h}: nodoid height not increasing at index {k}"))?;
            min_step = min_step.min(w[1] - w[0]);
        }
        let cross = a.iter().cloned().fold(f64::INFINITY, f64::min)
            - big_a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        ensure(cross >= 0.0, || format!("H={h}: a nodoid height exceeds a hypercycle height by {}", -cross))?;
        min_cross = min_cross.min(cross);
    }
    Ok(format!("min consecutive gap {min_step:.3e}, min cross margin {min_cross:.3e} (5 H, 2x50 points)"))
}

fn scalar_solves() -> Outcome {
    let mut worst_res: f64 = 0.0;
    let mut worst_ell: f64 = 0.0;
    for h in h_values(5) {
        let b = num(Barriers::new(h))?;
        let mut reports = vec![num(b.critical_half_width())?];
        for r in [hypercycle_shape_min(h) + 0.05, 0.0, 1.0, 3.0] {
            reports.push(num(b.hypercycle_width(r))?);
            reports.push(num(b.strip_width_matching_hypercycle(r))?);
        }
        for rho in [0.2, 1.0, 3.0] {
            reports.push(num(b.nodoid_width(rho))?);
            reports.push(num(b.strip_width_matching_nodoid(rho))?);
        }
        for rep in &reports {
            ensure(rep.residual.abs() < 1e-9, || format!("H={h}: {:?} residual {:e}", rep.quantity, rep.residual))?;
            worst_res = worst_res.max(rep.residual.abs());
        }
        let gap = (num(b.strip_height(reports[0].value))? - b.limit_height()).abs();
        ensure(gap < 1e-8, || format!("H={h}: h(ell) - a_inf = {gap:e}"))?;
        worst_ell = worst_ell.max(gap);
    }
    Ok(format!("max residual {worst_res:.1e}, max |h(ell) - limit| {worst_ell:.1e}"))
}

fn pde_scenario(name: &str, scenario: Scenario, height_bound: f64) -> std::result::Result<String, String> {
    let opts = NewtonOptions::default();
    let mut errors = Vec::new();
    let mut finest = None;
    for n in [33, 65, 129] {
        let start = Instant::now();
        let solve = num(scenario.solve(n, &opts))?;
        within(start.elapsed(), 30.0, &format!("{name} solve at n={n}"))?;
        ensure(solve.report.converged, || format!("{name} n={n} did not converge"))?;
        errors.push(solve.max_error);
        finest = Some(solve);
    }
    let finest = finest.unwrap();
    let err = *errors.last().unwrap();
    ensure(err < 1e-3, || format!("{name}: error {err:e} at 129"))?;
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    for p in &orders {
        ensure((1.7..=2.3).contains(p), || format!("{name}: observed order {p:.3}"))?;
    }
    let max_abs = finest.grid.max_u().abs().max(finest.grid.min_u().abs());
    ensure(max_abs <= height_bound + 10.0 * err, || {
        format!("{name}: max|u| {max_abs} exceeds bound {height_bound}")
    })?;
    let errors: Vec<String> = errors.iter().map(|e| format!("{e:.2e}")).collect();
    Ok(format!(
        "{name}: errors [{}], orders {orders:.3?}, max|u| {max_abs:.6} <= {height_bound:.6}",
        errors.join(", ")
    ))
}

fn pde_solver() -> Outcome {
    let b = num(Barriers::new(0.25))?;
    let strip = pde_scenario("strip", num(Scenario::strip(0.25, 1.0))?, num(b.strip_height(1.0))?)?;
    let annulus = pde_scenario(
        "annulus",
        num(Scenario::annulus(0.25, 1.0, 0.25, 2.5))?,
        num(b.nodoid_height(1.0))?,
    )?;
    Ok(format!("{strip}; {annulus}"))
}

fn dispatch() -> Outcome {
    let h = 0.25;
    let b = num(Barriers::new(h))?;
    for kappa in [2.0 * h, 2.0 * h + 1e-12, 0.75, 1.0, 10.0] {
        ensure(num(b.height_bound(kappa))? == Height::Unbounded, || format!("kappa={kappa} not unbounded"))?;
    }
    ensure(num(b.height_bound(2.0 * h - 1e-6))?.finite().is_some(), || "bound just below 2H is infinite".into())?;
    let at_minus_one = finite(num(b.height_bound(-1.0))?)?;
    ensure(at_minus_one == b.limit_height(), || format!("F(-1) = {at_minus_one}, limit {}", b.limit_height()))?;
    let (lo, hi) = num(bound_monotonicity(&b, &interior_points(-2.0, 1.0, 100)))?;
    let step = if lo == hi { 0.0 } else { hi - lo };
    ensure(step >= 0.0, || format!("bound decreases: {lo} -> {hi}"))?;
    Ok(format!("F(-1) = limit = {at_minus_one:.10}, smallest step over 100 samples {step:.3e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("closed-form strip height vs quadrature", closed_form_vs_quadrature),
        ("ODE oracle vs quadrature heights", oracle_equivalence),
        ("width, decay and comparison inequalities", inequalities),
        ("large-parameter limits", limits),
        ("height monotonicity and cross ordering", monotonicity),
        ("scalar solve residuals and critical half-width", scalar_solves),
        ("Dirichlet solver accuracy and order", pde_solver),
        ("height bound dispatch", dispatch),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
