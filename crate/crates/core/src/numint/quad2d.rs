//! Globally adaptive tensor Gauss–Kronrod cubature over compactified
//! rectangles of the `(r, s)` quadrant.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::exactfn::beta_unit;
use crate::profile::{KernelProfile, NumericKernel};

use super::gk::rule;
use super::{NumericConstant, NumintError, Quadrature};

/// `[a, b]` or `[a, ∞)`, the latter mapped by `x = a + t/(1−t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Interval {
    Finite(f64, f64),
    From(f64),
}

impl Interval {
    /// Point and Jacobian for the unit-interval coordinate `t`.
    fn map(self, t: f64) -> (f64, f64) {
        match self {
            Interval::Finite(a, b) => (a + (b - a) * t, b - a),
            Interval::From(a) => {
                let u = 1.0 - t;
                (a + t / u, 1.0 / (u * u))
            }
        }
    }
}

/// A pointwise integrand `F(r, s)` integrated against `r^p dr ds`.
pub struct ReducedIntegrand<'a> {
    f: Box<dyn Fn(f64, f64) -> f64 + Sync + 'a>,
    radial_power: f64,
}

impl<'a> ReducedIntegrand<'a> {
    /// `F` with the default radial power `n + 2`.
    pub fn new(n: i64, f: impl Fn(f64, f64) -> f64 + Sync + 'a) -> Self {
        ReducedIntegrand { f: Box::new(f), radial_power: (n + 2) as f64 }
    }

    pub fn with_radial_power(mut self, p: f64) -> Self {
        self.radial_power = p;
        self
    }

    /// The pointwise product of kernels, each evaluated separately.
    pub fn product(n: i64, factors: &[KernelProfile]) -> Result<ReducedIntegrand<'static>, NumintError> {
        let ks: Vec<NumericKernel> = factors.iter().map(|k| k.at(n)).collect::<Result<_, _>>()?;
        Ok(ReducedIntegrand::new(n, move |r, s| ks.iter().map(|k| k.eval(r, s)).product()))
    }

    pub fn zero(n: i64) -> ReducedIntegrand<'static> {
        ReducedIntegrand::new(n, |_, _| 0.0)
    }

    /// `F(r, s) r^p`.
    pub fn weighted(&self, r: f64, s: f64) -> f64 {
        let f = (self.f)(r, s);
        if f == 0.0 {
            0.0
        } else {
            f * r.powf(self.radial_power)
        }
    }

    /// Rejects integrands whose polar profile `F r^p ρ²` does not decrease
    /// between radii `10³` and `10⁴` along a fan of directions.
    pub fn check_decay(&self) -> Result<(), NumintError> {
        for theta in [0.02, 0.3, 0.785, 1.2, 1.55] {
            let g = |rad: f64| {
                let (r, s) = (rad * f64::cos(theta), rad * f64::sin(theta));
                (r, s, (self.weighted(r, s) * rad * rad).abs())
            };
            let (_, _, near) = g(1e3);
            let (r, s, far) = g(1e4);
            if !far.is_finite() || !near.is_finite() {
                return Err(NumintError::NonFinite { at: [r, s] });
            }
            if far > 0.5 * near && far > 1e-300 {
                return Err(NumintError::DivergentTail { at: [r, s], ratio: far / near });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CubatureOptions {
    pub tol: f64,
    pub max_panels: usize,
}

impl Default for CubatureOptions {
    fn default() -> Self {
        CubatureOptions { tol: 1e-10, max_panels: 20_000 }
    }
}

struct Panel {
    t: (f64, f64),
    u: (f64, f64),
    value: f64,
    error: f64,
    /// Split along `t` (true) or `u`.
    split_t: bool,
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
        self.error.total_cmp(&other.error).then(other.t.0.total_cmp(&self.t.0)).then(other.u.0.total_cmp(&self.u.0))
    }
}

fn panel(g: &ReducedIntegrand, x: Interval, y: Interval, t: (f64, f64), u: (f64, f64)) -> Result<Panel, NumintError> {
    let rt = rule(t.0, t.1);
    let ru = rule(u.0, u.1);
    let ys: Vec<(f64, f64)> = ru.iter().map(|p| y.map(p.0)).collect();
    let (mut kk, mut gg, mut kg, mut gk) = (0.0, 0.0, 0.0, 0.0);
    for &(tn, wkt, wgt) in &rt {
        let (r, jr) = x.map(tn);
        let (mut k_line, mut g_line) = (0.0, 0.0);
        for (&(_, wku, wgu), &(s, js)) in ru.iter().zip(&ys) {
            let v = g.weighted(r, s) * jr * js;
            if !v.is_finite() {
                return Err(NumintError::NonFinite { at: [r, s] });
            }
            k_line += wku * v;
            g_line += wgu * v;
        }
        kk += wkt * k_line;
        kg += wkt * g_line;
        gk += wgt * k_line;
        gg += wgt * g_line;
    }
    // Error attributable to each direction decides the split.
    let err_t = (kk - gk).abs();
    let err_u = (kk - kg).abs();
    Ok(Panel { t, u, value: kk, error: (kk - gg).abs(), split_t: err_t >= err_u })
}

/// `∬_{x × y} F(r, s) r^p dr ds` to relative tolerance `opts.tol`.
pub fn cubature(
    g: &ReducedIntegrand,
    x: Interval,
    y: Interval,
    opts: CubatureOptions,
) -> Result<Quadrature, NumintError> {
    if !(opts.tol > 0.0) {
        return Err(NumintError::InvalidTolerance(opts.tol));
    }
    let first = panel(g, x, y, (0.0, 1.0), (0.0, 1.0))?;
    let (mut value, mut error) = (first.value, first.error);
    let mut evaluations = 225;
    let mut best = Quadrature { value, error, evaluations };
    let mut heap = BinaryHeap::from([first]);
    while best.error > opts.tol * best.value.abs() {
        if heap.len() >= opts.max_panels {
            return Err(NumintError::ToleranceNotReached {
                estimate: best.error,
                tolerance: opts.tol * best.value.abs(),
                evaluations,
            });
        }
        let p = heap.pop().expect("nonempty");
        let (a, b) = if p.split_t {
            let m = 0.5 * (p.t.0 + p.t.1);
            (panel(g, x, y, (p.t.0, m), p.u)?, panel(g, x, y, (m, p.t.1), p.u)?)
        } else {
            let m = 0.5 * (p.u.0 + p.u.1);
            (panel(g, x, y, p.t, (p.u.0, m))?, panel(g, x, y, p.t, (m, p.u.1))?)
        };
        evaluations += 450;
        value += a.value + b.value - p.value;
        error += a.error + b.error - p.error;
        heap.push(a);
        heap.push(b);
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

/// `3/((n−1)(n+1))` over `B((n−1)/2, (n+1)/2)`: converts `∬ F r^{n+2}` into
/// units of `ω_{n−2} B((n−1)/2, (n+1)/2)`.
pub fn unit_factor(n: i64) -> Result<f64, NumintError> {
    let nf = n as f64;
    Ok(3.0 / ((nf - 1.0) * (nf + 1.0) * beta_unit(n)?))
}

/// `∫_{R^n_+} F(|x′|, x_n) x₁⁴ dx` over the whole quadrant, in units of
/// `ω_{n−2} B((n−1)/2, (n+1)/2)`.
pub fn quad2d(g: &ReducedIntegrand, n: i64, opts: CubatureOptions) -> Result<NumericConstant, NumintError> {
    g.check_decay()?;
    let q = cubature(g, Interval::From(0.0), Interval::From(0.0), opts)?;
    let c = unit_factor(n)?;
    Ok(NumericConstant::in_units(q.value * c, q.error * c, q.evaluations))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_integrand_is_exactly_zero() {
        let q = quad2d(&ReducedIntegrand::zero(9), 9, CubatureOptions::default()).unwrap();
        assert_eq!((q.value, q.error), (0.0, 0.0));
    }

    #[test]
    fn gaussian_product() {
        let g = ReducedIntegrand::new(0, |r, s| (-r * r - s * s).exp()).with_radial_power(0.0);
        let q = cubature(&g, Interval::From(0.0), Interval::From(0.0), CubatureOptions::default()).unwrap();
        assert!((q.value - std::f64::consts::PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn divergent_tail_is_detected() {
        let g = ReducedIntegrand::new(9, |r, s| (1.0 + r * r + s * s).powf(-5.0));
        assert!(matches!(quad2d(&g, 9, CubatureOptions::default()), Err(NumintError::DivergentTail { .. })));
    }
}
