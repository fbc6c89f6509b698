//! Numerical check of the symmetry `∫ φ₁ u₂ x₁⁴ = ∫ φ₂ u₁ x₁⁴` for
//! `−Δũᵢ = φᵢ` with zero Dirichlet data.

use std::sync::Arc;

use serde::Serialize;

use crate::pde::{solve_with, GridSpec, PoissonSolver, Problem, ProfileTag, RadialGrid};
use crate::profile::KernelProfile;

use super::{field_integral, NumintError};

#[derive(Clone, Debug)]
pub struct AdjointPair {
    pub name: String,
    pub phi1: KernelProfile,
    pub phi2: KernelProfile,
    pub n: i64,
}

/// The pairings used by the bound chains, plus the `V`/`ṽ₁` pairing.
pub fn standard_adjoint_pairs() -> Vec<AdjointPair> {
    let pair = |a: ProfileTag, b: ProfileTag, n| AdjointPair {
        name: format!("{a}/{b}"),
        phi1: a.source(),
        phi2: b.source(),
        n,
    };
    vec![
        pair(ProfileTag::V, ProfileTag::V1, 9),
        pair(ProfileTag::U1, ProfileTag::V1, 9),
        pair(ProfileTag::U2, ProfileTag::V2, 7),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjointnessReport {
    pub name: String,
    pub n: i64,
    pub nodes: usize,
    /// `∫ φ₁ u₂ x₁⁴` on the given grid, in units of `ω_{n−2} B(…)`.
    pub lhs: f64,
    pub rhs: f64,
    /// Relative discrepancy of the unextrapolated sides.
    pub raw_discrepancy: f64,
    /// Both sides Richardson-extrapolated from the grid and its 2:1 coarsening.
    pub lhs_extrapolated: f64,
    pub rhs_extrapolated: f64,
    pub discrepancy: f64,
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn sides(pair: &AdjointPair, spec: GridSpec) -> Result<(f64, f64), NumintError> {
    let n = pair.n;
    let grid = Arc::new(RadialGrid::new(spec)?);
    let solver = PoissonSolver::new(&grid, n)?;
    let u1 = solve_with(&solver, Arc::clone(&grid), &Problem::custom("u1", n, vec![pair.phi1.clone()], vec![]))?;
    let u2 = solve_with(&solver, Arc::clone(&grid), &Problem::custom("u2", n, vec![pair.phi2.clone()], vec![]))?;
    let p1 = pair.phi1.at(n)?;
    let p2 = pair.phi2.at(n)?;
    let zero = |_: f64, _: f64| 0.0;
    let lhs = field_integral(&u2, &|r, s, u| p1.eval(r, s) * u, &zero, 1e-8)?.total.value;
    let rhs = field_integral(&u1, &|r, s, u| p2.eval(r, s) * u, &zero, 1e-8)?.total.value;
    Ok((lhs, rhs))
}

/// Solves both problems with zero Dirichlet data on `spec` and on its 2:1
/// coarsening, and compares the two sides.
pub fn check_adjointness(pair: &AdjointPair, spec: GridSpec) -> Result<AdjointnessReport, NumintError> {
    let (lhs, rhs) = sides(pair, spec)?;
    let coarse = GridSpec { n_r: spec.n_r.div_ceil(2), n_s: spec.n_s.div_ceil(2), ..spec };
    let (lc, rc) = sides(pair, coarse)?;
    let lx = lhs + (lhs - lc) / 3.0;
    let rx = rhs + (rhs - rc) / 3.0;
    Ok(AdjointnessReport {
        name: pair.name.clone(),
        n: pair.n,
        nodes: spec.n_r,
        lhs,
        rhs,
        raw_discrepancy: relative(lhs, rhs),
        lhs_extrapolated: lx,
        rhs_extrapolated: rx,
        discrepancy: relative(lx, rx),
    })
}
