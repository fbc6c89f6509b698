//! The dimension constants evaluated with solved profiles in place of their
//! subsolutions.

use std::sync::Arc;

use serde::Serialize;

use crate::bounds::chain::CaseData;
use crate::bounds::{assemble, Case, Target};
use crate::pde::{solve_with, FarField, GridSpec, HalfPlaneField, PoissonSolver, Problem, ProfileTag, RadialGrid};

use super::{field_integral, NumintError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericOptions {
    pub nodes: usize,
    pub radius: f64,
    pub stretch: f64,
    /// Relative tolerance of the exterior cubature.
    pub tail_tol: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            nodes: GridSpec::DEFAULT_NODES,
            radius: GridSpec::DEFAULT_RADIUS,
            stretch: GridSpec::DEFAULT_STRETCH,
            tail_tol: 1e-8,
        }
    }
}

impl NumericOptions {
    fn spec(&self) -> GridSpec {
        GridSpec { n_r: self.nodes, n_s: self.nodes, radius: self.radius, stretch: self.stretch }
    }
}

/// Error budget of a numeric constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorBreakdown {
    /// Half-width of the sub/supersolution far-field bracket, or the
    /// domain-doubling difference.
    pub truncation: f64,
    /// `|C_h − C_{2h}| / 3`.
    pub discretization: f64,
    pub quadrature: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CRecord {
    pub case: Case,
    pub n: i64,
    pub value: f64,
    pub error: f64,
    pub units: &'static str,
    pub lower_bound_exact: f64,
    pub upper_bound_exact: Option<f64>,
    pub contained: bool,
    pub breakdown: ErrorBreakdown,
}

pub const UNITS: &str = "omega_(n-2) * B((n-1)/2, (n+1)/2)";

struct Evaluation {
    value: f64,
    quadrature: f64,
}

/// `leading + P_lin ∫ w ρ^{−(n+4)/2} u x₁⁴ + P_quad ∫ ρ^{−2} u² x₁⁴`, with
/// the tagged far-field bound standing in for `u` outside the box.
fn evaluate(
    cd: &CaseData,
    field: &HalfPlaneField,
    tag: ProfileTag,
    far: FarField,
    tail_tol: f64,
) -> Result<Evaluation, NumintError> {
    let n = field.n();
    let surrogate = tag.far_field(far)?.at(n)?;
    let weight = cd.weight.at(n)?;
    let half = (n as f64 + 4.0) / 2.0;
    let lin = |r: f64, s: f64, u: f64| weight.eval(s) * (r * r + (1.0 + s).powi(2)).powf(-half) * u;
    let quad = |r: f64, s: f64, u: f64| u * u / (r * r + (1.0 + s).powi(2)).powi(2);
    let sur = |r, s| surrogate.eval(r, s);
    let l = field_integral(field, &lin, &sur, tail_tol)?.total;
    let q = field_integral(field, &quad, &sur, tail_tol)?.total;
    let pl = cd.linear_prefactor.eval_f64(n)?;
    let pq = cd.quadratic_prefactor.eval_f64(n)?;
    Ok(Evaluation {
        value: cd.leading.eval_f64(n)? + pl * l.value + pq * q.value,
        quadrature: pl.abs() * l.error + pq.abs() * q.error,
    })
}

fn solve_tag(tag: ProfileTag, n: i64, far: FarField, spec: GridSpec) -> Result<HalfPlaneField, NumintError> {
    let grid = Arc::new(RadialGrid::new(spec)?);
    let solver = PoissonSolver::new(&grid, n)?;
    Ok(solve_with(&solver, grid, &Problem::tagged(tag, n, far)?)?)
}

/// Value and discretization estimate from the grid and its 2:1 coarsening.
fn richardson(
    cd: &CaseData,
    tag: ProfileTag,
    n: i64,
    far: FarField,
    spec: GridSpec,
    tail_tol: f64,
) -> Result<(Evaluation, f64), NumintError> {
    let coarse = GridSpec { n_r: spec.n_r.div_ceil(2), n_s: spec.n_s.div_ceil(2), ..spec };
    let fine = evaluate(cd, &solve_tag(tag, n, far, spec)?, tag, far, tail_tol)?;
    let c = evaluate(cd, &solve_tag(tag, n, far, coarse)?, tag, far, tail_tol)?;
    let disc = (fine.value - c.value).abs() / 3.0;
    Ok((fine, disc))
}

/// Stretch for radius `2R` that keeps the first spacing of `(R, κ)`.
fn doubled_stretch(kappa: f64) -> f64 {
    let target = kappa / kappa.sinh();
    let (mut lo, mut hi) = (kappa, 20.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if 2.0 * mid / mid.sinh() > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn compute_c_numeric(case: Case, n: i64, opts: NumericOptions) -> Result<CRecord, NumintError> {
    let cd = CaseData::new(case);
    let spec = opts.spec();
    let (value, breakdown, lower_target, upper) = match case {
        Case::Nonumbilic => {
            let tag = ProfileTag::V;
            let (lo, d_lo) = richardson(&cd, tag, n, FarField::Subsolution, spec, opts.tail_tol)?;
            let (hi, d_hi) = richardson(&cd, tag, n, FarField::Supersolution, spec, opts.tail_tol)?;
            let b = ErrorBreakdown {
                truncation: 0.5 * (hi.value - lo.value).abs(),
                discretization: d_lo.max(d_hi),
                quadrature: lo.quadrature.max(hi.quadrature),
            };
            let upper = assemble(Target::C1Upper)?.total.coeff.eval_f64(n)?;
            (0.5 * (lo.value + hi.value), b, Target::C1Lower, Some(upper))
        }
        Case::Umbilic => {
            let tag = ProfileTag::Lambda;
            let (base, disc) = richardson(&cd, tag, n, FarField::Subsolution, spec, opts.tail_tol)?;
            let wide = GridSpec { radius: 2.0 * spec.radius, stretch: doubled_stretch(spec.stretch), ..spec };
            let far = evaluate(
                &cd,
                &solve_tag(tag, n, FarField::Subsolution, wide)?,
                tag,
                FarField::Subsolution,
                opts.tail_tol,
            )?;
            let b = ErrorBreakdown {
                truncation: (far.value - base.value).abs(),
                discretization: disc,
                quadrature: base.quadrature.max(far.quadrature),
            };
            (base.value, b, Target::C2Lower, None)
        }
    };
    let error = breakdown.truncation + breakdown.discretization + breakdown.quadrature;
    let lower = assemble(lower_target)?.total.coeff.eval_f64(n)?;
    let contained = value + error >= lower && upper.is_none_or(|u| value - error <= u);
    Ok(CRecord {
        case,
        n,
        value,
        error,
        units: UNITS,
        lower_bound_exact: lower,
        upper_bound_exact: upper,
        contained,
        breakdown,
    })
}
