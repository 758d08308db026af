use cmcbar::hyperbolic::Chart;
use cmcbar::pde::{assemble_residual, newton_solve, ChartGrid, NewtonOptions, Scenario};
use cmcbar::{Barriers, Height};

fn strip_grid(l: f64, n: usize) -> ChartGrid {
    ChartGrid::new(Chart::Fermi, (-l, l), (0.0, 2.0 * l), n, n).unwrap()
}

#[test]
fn ordered_boundary_data_give_ordered_solutions() {
    let h = 0.25;
    let mut low = strip_grid(1.0, 33);
    let mut high = strip_grid(1.0, 33);
    low.set_boundary(|t, x| 0.1 * (t * x).sin()).unwrap();
    high.set_boundary(|t, x| 0.1 * (t * x).sin() + 0.05 * (1.0 + t).powi(2)).unwrap();
    let opts = NewtonOptions::default();
    newton_solve(&mut low, h, &opts).unwrap();
    newton_solve(&mut high, h, &opts).unwrap();
    let worst = low
        .values()
        .iter()
        .zip(high.values())
        .map(|(a, b)| a - b)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(worst <= 1e-12, "low solution exceeds high by {worst}");
}

#[test]
fn zero_data_solution_stays_under_barriers() {
    let (h, l) = (0.25, 1.0);
    let b = Barriers::new(h).unwrap();
    let mut grid = strip_grid(l, 65);
    grid.set_boundary(|_, _| 0.0).unwrap();
    let report = newton_solve(&mut grid, h, &NewtonOptions::default()).unwrap();
    assert!(report.converged);
    assert!(report.max_flux < 1.0);
    assert!(report.min_u >= -1e-12);
    // The strip barrier dominates, and the sides t = ±l are hypercycles of
    // curvature tanh l, whose height bound is larger still.
    let strip = b.strip_height(l).unwrap();
    assert!(report.max_u <= strip + 1e-4, "{} > {strip}", report.max_u);
    let Height::Finite(bound) = b.height_bound(-l.tanh()).unwrap() else {
        panic!("bound should be finite")
    };
    assert!(report.max_u < bound);
}

#[test]
fn newton_converges_quadratically_on_the_strip() {
    let solve = Scenario::strip(0.25, 1.0).unwrap().solve(33, &NewtonOptions::default()).unwrap();
    assert!(solve.report.newton_iters <= 10, "{:?}", solve.report);
    assert!(solve.report.residual_norm < 1e-10);
    assert!(!solve.report.continuation);
}

#[test]
fn solution_is_independent_of_thread_count() {
    let run = || {
        let mut g = strip_grid(1.0, 33);
        g.set_boundary(|t, x| 0.2 * t * x).unwrap();
        newton_solve(&mut g, 0.3, &NewtonOptions::default()).unwrap();
        g.values().to_vec()
    };
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
    assert_eq!(single, many);
}

fn max_interior(grid: &ChartGrid, field: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 1..grid.n_radial() - 1 {
        for j in 1..grid.n_lateral() - 1 {
            worst = worst.max(field[grid.index(i, j)].abs());
        }
    }
    worst
}

fn exact_residual(scenario: &Scenario, n: usize) -> f64 {
    let (mut grid, exact) = scenario.grid(n).unwrap();
    for (i, &u) in exact.iter().enumerate() {
        for j in 0..grid.n_lateral() {
            grid.set(i, j, u);
        }
    }
    max_interior(&grid, &assemble_residual(&grid, scenario.h()))
}

#[test]
fn exact_profiles_have_second_order_residuals() {
    for scenario in [
        Scenario::strip(0.25, 1.0).unwrap(),
        Scenario::annulus(0.3, 1.0, 0.25, 2.0).unwrap(),
    ] {
        let coarse = exact_residual(&scenario, 65);
        let fine = exact_residual(&scenario, 129);
        let order = (coarse / fine).log2();
        assert!((1.7..2.3).contains(&order), "{scenario:?}: residuals {coarse:e} {fine:e}");
    }
}

/// The discrete operator on `u(radial)` converges to `φ' + φ·k` with
/// `φ = u'/√(1+u'²)` and `k` the level-curve curvature term of the chart.
#[test]
fn discrete_divergence_reduces_to_the_profile_operator() {
    let u = |s: f64| 0.3 * s.sin() + 0.1 * s * s;
    let du = |s: f64| 0.3 * s.cos() + 0.2 * s;
    let d2u = |s: f64| -0.3 * s.sin() + 0.2;
    for (chart, range, term) in [
        (Chart::Fermi, (-1.0, 1.0), f64::tanh as fn(f64) -> f64),
        (Chart::Polar, (0.5, 2.0), |s: f64| 1.0 / s.tanh()),
    ] {
        let mut errors = Vec::new();
        for n in [33, 65] {
            let mut grid = ChartGrid::new(chart, range, (0.0, 0.5), n, 9).unwrap();
            for i in 0..n {
                for j in 0..9 {
                    grid.set(i, j, u(grid.radial(i)));
                }
            }
            let res = assemble_residual(&grid, 0.0);
            let mut worst: f64 = 0.0;
            for i in 1..n - 1 {
                let s = grid.radial(i);
                let p = du(s);
                let w = (1.0 + p * p).sqrt();
                let exact = d2u(s) / (w * w * w) + p / w * term(s);
                worst = worst.max((res[grid.index(i, 4)] - exact).abs());
            }
            errors.push(worst);
        }
        let order = (errors[0] / errors[1]).log2();
        assert!((1.7..2.3).contains(&order), "{chart:?}: errors {errors:?}");
    }
}
