//! Globally adaptive 15-point Gauss–Kronrod quadrature.
//!
//! Intervals are kept in a max-heap keyed by their error estimate and the
//! worst one is bisected until the summed estimate meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (plus the centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Quadrature settings. `abs_tol` is the primary target; `rel_tol` lets
/// large integrals stop earlier.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Quadrature {
    pub fn new(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol: 1e-14,
            max_intervals: 2000,
        }
    }

    /// Integrates `f` over `[a, b]`. Reversed limits flip the sign.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        self.integrate_with_error(f, a, b).map(|(value, _)| value)
    }

    pub fn integrate_with_error<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
    ) -> Result<(f64, f64)> {
        if a == b {
            return Ok((0.0, 0.0));
        }
        if b < a {
            return self
                .integrate_with_error(f, b, a)
                .map(|(value, err)| (-value, err));
        }

        let mut heap = BinaryHeap::new();
        let first = Segment::new(&f, a, b);
        let mut total = first.value;
        let mut error = first.error;
        heap.push(first);

        while error > self.abs_tol.max(self.rel_tol * total.abs()) {
            if heap.len() >= self.max_intervals {
                return Err(Error::Quadrature {
                    tolerance: self.abs_tol,
                    estimate: error,
                });
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Interval cannot be split further in double precision.
                return Err(Error::Quadrature {
                    tolerance: self.abs_tol,
                    estimate: error,
                });
            }
            let left = Segment::new(&f, worst.a, mid);
            let right = Segment::new(&f, mid, worst.b);
            total += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
        }

        // Re-sum to shed the drift from incremental updates.
        let value = heap.iter().map(|s| s.value).sum();
        let error = heap.iter().map(|s| s.error).sum();
        Ok((value, error))
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Segment {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Self {
        let (value, error) = gauss_kronrod_15(f, a, b);
        Self { a, b, value, error }
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];

    for k in 0..7 {
        let dx = half * XGK[k];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }

    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    (value, error.max(50.0 * f64::EPSILON * value.abs()))
}
