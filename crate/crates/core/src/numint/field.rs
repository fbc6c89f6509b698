//! Integrals of solved fields: composite Simpson in the mapped grid
//! coordinates on `[0, R]²`, plus the exterior of the box from a closed-form
//! surrogate of the field.

use crate::pde::{HalfPlaneField, RadialGrid};

use super::{cubature, unit_factor, CubatureOptions, Interval, NumericConstant, NumintError, ReducedIntegrand};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldQuadrature {
    /// Total in units of `ω_{n−2} B((n−1)/2, (n+1)/2)`.
    pub total: NumericConstant,
    /// Contribution of `[0, R]²`.
    pub interior: f64,
    /// Contribution of the exterior, from the surrogate.
    pub tail: f64,
}

/// Simpson weights in `ξ` times `dx/dξ`, with `stride` picking every
/// `stride`-th node.
fn simpson(dx_dxi: &[f64], stride: usize) -> Vec<(usize, f64)> {
    let m = (dx_dxi.len() - 1) / stride;
    let h = stride as f64 / (dx_dxi.len() - 1) as f64;
    (0..=m)
        .map(|k| {
            let c = if k == 0 || k == m {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (k * stride, c * h / 3.0 * dx_dxi[k * stride])
        })
        .collect()
}

fn box_sum(grid: &RadialGrid, n: i64, g: &dyn Fn(usize, usize) -> f64, stride: usize) -> f64 {
    let p = (n + 2) as f64;
    let wr = simpson(grid.dr_dxi(), stride);
    let ws = simpson(grid.ds_deta(), stride);
    let mut total = 0.0;
    for &(i, wi) in &wr {
        let r = grid.r()[i];
        if r == 0.0 {
            continue;
        }
        let line: f64 = ws.iter().map(|&(j, wj)| wj * g(i, j)).sum();
        total += wi * r.powf(p) * line;
    }
    total
}

/// `∫ G(r, s, u(r, s)) x₁⁴ dx` with `u` the field inside the box and
/// `surrogate` outside it. The error combines the Simpson step-doubling
/// estimate with the cubature error of the exterior.
pub fn field_integral(
    field: &HalfPlaneField,
    integrand: &(dyn Fn(f64, f64, f64) -> f64 + Sync),
    surrogate: &(dyn Fn(f64, f64) -> f64 + Sync),
    tail_tol: f64,
) -> Result<FieldQuadrature, NumintError> {
    let grid = field.grid();
    let n = field.n();
    let g = |i: usize, j: usize| integrand(grid.r()[i], grid.s()[j], field.value(i, j));
    let fine = box_sum(grid, n, &g, 1);
    let coarse = box_sum(grid, n, &g, 2);
    let simpson_error = (fine - coarse).abs() / 15.0;

    let rad = grid.radius();
    let ext = ReducedIntegrand::new(n, |r, s| integrand(r, s, surrogate(r, s)));
    let opts = CubatureOptions { tol: tail_tol, max_panels: 20_000 };
    let right = cubature(&ext, Interval::From(rad), Interval::From(0.0), opts)?;
    let top = cubature(&ext, Interval::Finite(0.0, rad), Interval::From(rad), opts)?;
    let tail = right.value + top.value;
    let c = unit_factor(n)?;
    let total = NumericConstant::in_units(
        c * (fine + tail),
        c * (simpson_error + right.error + top.error),
        right.evaluations + top.evaluations + grid.len(),
    );
    Ok(FieldQuadrature { total, interior: c * fine, tail: c * tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::{solve_profile, GridSpec, ProfileTag};

    #[test]
    fn simpson_weights_integrate_the_map() {
        let g = RadialGrid::new(GridSpec::square(257)).unwrap();
        let total: f64 = simpson(g.dr_dxi(), 1).iter().map(|p| p.1).sum();
        assert!((total - 40.0).abs() < 1e-6);
    }

    #[test]
    fn closed_form_in_place_of_field() {
        // Replacing the field by the subsolution itself must reproduce the
        // exact main linear integral.
        let n = 9;
        let f = solve_profile(ProfileTag::V, n, GridSpec::square(257)).unwrap();
        let sub = ProfileTag::V.subsolution().unwrap().at(n).unwrap();
        let sub_vals: Vec<f64> = f
            .grid()
            .r()
            .iter()
            .flat_map(|&r| f.grid().s().iter().map(move |&s| (r, s)))
            .map(|(r, s)| sub.eval(r, s))
            .collect();
        let fake = f.with_values(sub_vals);
        let weight = |r: f64, s: f64, u: f64| s * s * (r * r + (1.0 + s).powi(2)).powf(-(n as f64 + 4.0) / 2.0) * u;
        let q = field_integral(&fake, &weight, &|r, s| sub.eval(r, s), 1e-8).unwrap();
        let exact = 9.0 / (4.0 * 100.0 * 729.0 * 8.0 * 7.0 * 6.0);
        assert!(((q.total.value - exact) / exact).abs() < 1e-6, "{} vs {exact}", q.total.value);
        assert!(q.tail.abs() < 1e-6 * exact);
    }
}
