//! Gauss–Kronrod 7/15 rule and globally adaptive 1D quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{NumintError, Quadrature};

/// Kronrod abscissae on `[−1, 1]`, descending; the Gauss nodes are the odd
/// indices.
pub(crate) const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

pub(crate) const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

pub(crate) const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// The 15 Kronrod nodes and weights on `[a, b]`, with Gauss weights (zero
/// off the Gauss subset).
pub(crate) fn rule(a: f64, b: f64) -> [(f64, f64, f64); 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0, 0.0); 15];
    for k in 0..7 {
        let g = if k % 2 == 1 { WG[k / 2] * h } else { 0.0 };
        out[2 * k] = (c - h * XK[k], WK[k] * h, g);
        out[2 * k + 1] = (c + h * XK[k], WK[k] * h, g);
    }
    out[14] = (c, WK[7] * h, WG[3] * h);
    out
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel, NumintError> {
    let (mut k, mut g) = (0.0, 0.0);
    for (x, wk, wg) in rule(a, b) {
        let y = f(x);
        if !y.is_finite() {
            return Err(NumintError::NonFinite { at: [x, f64::NAN] });
        }
        k += wk * y;
        g += wg * y;
    }
    Ok(Panel { a, b, value: k, error: (k - g).abs() })
}

/// Globally adaptive integral of `f` over `[a, b]` to relative tolerance
/// `tol`. Panels are bisected worst-first, so the sequence of partitions
/// does not depend on `tol`; the reported pair is the one with the smallest
/// error estimate seen, which makes the estimate monotone in `tol`.
pub fn quad1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_panels: usize) -> Result<Quadrature, NumintError> {
    if !(tol > 0.0) {
        return Err(NumintError::InvalidTolerance(tol));
    }
    let first = panel(&f, a, b)?;
    let (mut value, mut error) = (first.value, first.error);
    let mut best = Quadrature { value, error, evaluations: 15 };
    let mut heap = BinaryHeap::from([first]);
    let mut evaluations = 15;
    while best.error > tol * best.value.abs() {
        if heap.len() >= max_panels {
            return Err(NumintError::ToleranceNotReached {
                estimate: best.error,
                tolerance: tol * best.value.abs(),
                evaluations,
            });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = panel(&f, worst.a, mid)?;
        let right = panel(&f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
        if error < best.error {
            best = Quadrature { value, error: error.max(0.0), evaluations };
        }
    }
    best.evaluations = evaluations;
    Ok(best)
}

/// `∫_a^∞ f` through `x = a + t/(1−t)`.
pub fn quad1d_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    tol: f64,
    max_panels: usize,
) -> Result<Quadrature, NumintError> {
    quad1d(
        |t| {
            let u = 1.0 - t;
            f(a + t / u) / (u * u)
        },
        0.0,
        1.0,
        tol,
        max_panels,
    )
}
