//! Bracketed root finding: Illinois false position with a bisection safeguard.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    /// Final bracket; always contains `x`.
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, Copy)]
pub struct Bracketed {
    pub x_tol: f64,
    pub max_iters: usize,
}

impl Bracketed {
    pub fn new(x_tol: f64) -> Self {
        Self {
            x_tol,
            max_iters: 200,
        }
    }

    /// Finds a root of `f` in `[lo, hi]` given values of opposite sign at the ends.
    pub fn solve<F>(&self, mut f: F, lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Root>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let (mut a, mut b, mut fa, mut fb) = if lo <= hi {
            (lo, hi, f_lo, f_hi)
        } else {
            (hi, lo, f_hi, f_lo)
        };
        if fa == 0.0 {
            return Ok(Root { x: a, fx: 0.0, iterations: 0, bracket: (a, a) });
        }
        if fb == 0.0 {
            return Ok(Root { x: b, fx: 0.0, iterations: 0, bracket: (b, b) });
        }
        if fa.signum() == fb.signum() {
            return Err(Error::Domain(format!(
                "root bracket [{a}, {b}] has no sign change ({fa:e}, {fb:e})"
            )));
        }

        // Which end survived the last step: -1 for a, +1 for b.
        let mut kept = 0i8;
        let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };

        for iteration in 1..=self.max_iters {
            let width = b - a;
            if width <= self.x_tol {
                return Ok(Root { x: best.0, fx: best.1, iterations: iteration - 1, bracket: (a, b) });
            }

            let mut x = b - fb * (b - a) / (fb - fa);
            // Keep clear of the endpoints so the bracket always shrinks.
            let margin = 0.01 * width;
            if !(x > a + margin && x < b - margin) {
                x = 0.5 * (a + b);
            }
            // Every third step is a plain bisection to bound the worst case.
            if iteration % 3 == 0 && width > 0.0 {
                x = 0.5 * (a + b);
            }

            let fx = f(x)?;
            if fx.abs() < best.1.abs() {
                best = (x, fx);
            }
            if fx == 0.0 {
                return Ok(Root { x, fx, iterations: iteration, bracket: (x, x) });
            }
            if fx.signum() == fa.signum() {
                a = x;
                fa = fx;
                if kept == 1 {
                    fb *= 0.5;
                }
                kept = 1;
            } else {
                b = x;
                fb = fx;
                if kept == -1 {
                    fa *= 0.5;
                }
                kept = -1;
            }
        }

        Err(Error::NonConvergence {
            what: "bracketed root finding",
            iterations: self.max_iters,
            residual: best.1.abs(),
        })
    }

    /// Doubles `hi` (starting from `first_hi > 0`) until `f` changes sign
    /// relative to `f(start)`, then solves on the last bracket.
    pub fn solve_expanding<F>(
        &self,
        mut f: F,
        start: f64,
        first_hi: f64,
        limit: f64,
        quantity: &'static str,
    ) -> Result<Root>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let f_start = f(start)?;
        let mut lo = start;
        let mut f_lo = f_start;
        let mut hi = first_hi;
        loop {
            let f_hi = f(hi)?;
            if f_hi == 0.0 || f_hi.signum() != f_lo.signum() {
                return self.solve(&mut f, lo, hi, f_lo, f_hi);
            }
            lo = hi;
            f_lo = f_hi;
            hi *= 2.0;
            if !hi.is_finite() || hi > limit {
                return Err(Error::BracketNotFound { quantity, limit });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Result<f64> {
        move |x| Ok(f(x))
    }

    #[test]
    fn sqrt_two() {
        let f = |x: f64| x * x - 2.0;
        let root = Bracketed::new(1e-13).solve(ok(f), 0.0, 2.0, f(0.0), f(2.0)).unwrap();
        assert!((root.x - 2f64.sqrt()).abs() < 1e-12);
        assert!(root.bracket.0 <= root.x && root.x <= root.bracket.1);
    }

    #[test]
    fn flat_function_converges() {
        // Illinois handles the one-sided stagnation of plain false position here.
        let f = |x: f64| (x - 1.0).powi(5);
        let root = Bracketed::new(1e-10).solve(ok(f), 0.0, 3.0, f(0.0), f(3.0)).unwrap();
        assert!((root.x - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_bracket() {
        let f = |x: f64| x * x + 1.0;
        assert!(Bracketed::new(1e-10).solve(ok(f), -1.0, 1.0, 2.0, 2.0).is_err());
    }

    #[test]
    fn expanding_search_finds_far_root() {
        let f = |x: f64| 40.0 - x;
        let root = Bracketed::new(1e-11)
            .solve_expanding(ok(f), 1.0, 2.0, 1e6, "test")
            .unwrap();
        assert!((root.x - 40.0).abs() < 1e-9);
    }

    #[test]
    fn expanding_search_gives_up() {
        let f = |_: f64| 1.0;
        let err = Bracketed::new(1e-11)
            .solve_expanding(ok(f), 1.0, 2.0, 100.0, "test")
            .unwrap_err();
        assert!(matches!(err, Error::BracketNotFound { .. }));
    }
}
