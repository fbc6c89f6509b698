//! Observed order of accuracy from a sequence of nested grids.

use std::sync::Arc;

use serde::Serialize;

use super::{field::solve_with, GridSpec, HalfPlaneField, PdeError, PoissonSolver, Problem, RadialGrid};

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub label: String,
    pub n: i64,
    pub nodes: Vec<usize>,
    pub h: Vec<f64>,
    /// Max difference between consecutive solutions on the coarsest nodes.
    pub differences: Vec<f64>,
    /// `log2` of consecutive difference ratios.
    pub orders: Vec<f64>,
    /// Order from the two finest pairs.
    pub order: f64,
    /// `C` in the error model `C h²` for the finest grid.
    pub constant: f64,
    /// Set when differences fail to decrease.
    pub inconclusive: bool,
}

impl ConvergenceReport {
    /// Estimated max error of the finest solution.
    pub fn error_estimate(&self) -> f64 {
        let h = *self.h.last().unwrap_or(&0.0);
        self.constant * h * h
    }

    /// `safety · C · h²` for a grid with mapped spacing `h`.
    pub fn tolerance_for(&self, h: f64, safety: f64) -> f64 {
        safety * self.constant * h * h
    }
}

pub struct ConvergenceStudy {
    pub report: ConvergenceReport,
    pub fields: Vec<HalfPlaneField>,
}

pub fn convergence_study(problem: &Problem, specs: &[GridSpec]) -> Result<ConvergenceStudy, PdeError> {
    if specs.len() < 3 {
        return Err(PdeError::NotNested(format!("need at least 3 grids, got {}", specs.len())));
    }
    let grids: Vec<RadialGrid> = specs.iter().map(|s| RadialGrid::new(*s)).collect::<Result<_, _>>()?;
    for (k, w) in grids.windows(2).enumerate() {
        if !w[0].nests_in(&w[1]) {
            return Err(PdeError::NotNested(format!("grid {} does not refine grid {}", k + 1, k)));
        }
    }
    let mut fields = Vec::with_capacity(grids.len());
    for g in grids {
        let solver = PoissonSolver::new(&g, problem.n)?;
        fields.push(solve_with(&solver, Arc::new(g), problem)?);
    }
    let coarse = fields[0].grid();
    let mut differences = Vec::new();
    for (k, w) in fields.windows(2).enumerate() {
        let (stride_a, stride_b) = (1usize << k, 1usize << (k + 1));
        let mut d = 0.0f64;
        for i in 0..coarse.n_r() {
            for j in 0..coarse.n_s() {
                d = d.max((w[0].value(stride_a * i, stride_a * j) - w[1].value(stride_b * i, stride_b * j)).abs());
            }
        }
        differences.push(d);
    }
    let orders: Vec<f64> = differences.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let order = *orders.last().expect("at least one ratio");
    let inconclusive = differences.windows(2).any(|w| !(w[1] < w[0])) || !order.is_finite();
    let h: Vec<f64> = specs.iter().map(|s| s.h()).collect();
    let hf = *h.last().unwrap();
    let p = if order.is_finite() { order.clamp(1.0, 3.0) } else { 2.0 };
    let constant = differences.last().unwrap() / ((p.exp2() - 1.0) * hf * hf);
    Ok(ConvergenceStudy {
        report: ConvergenceReport {
            label: problem.label.clone(),
            n: problem.n,
            nodes: specs.iter().map(|s| s.n_r).collect(),
            h,
            differences,
            orders,
            order,
            constant,
            inconclusive,
        },
        fields,
    })
}
