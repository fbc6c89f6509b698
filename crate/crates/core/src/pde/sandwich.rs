//! Nodewise comparison of a solved field against its closed-form bounds.

use serde::Serialize;

use super::{HalfPlaneField, PdeError, SpacingSummary};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Violation {
    /// `max(bound − u, 0)` for the lower bound, `max(u − bound, 0)` for the
    /// upper one.
    pub value: f64,
    pub r: f64,
    pub s: f64,
    pub i: usize,
    pub j: usize,
}

impl Violation {
    fn none() -> Self {
        Violation { value: 0.0, r: 0.0, s: 0.0, i: 0, j: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub label: String,
    pub n: i64,
    pub lower_bound: String,
    /// `None` when only the Dirichlet row bounds the field from above.
    pub upper_bound: Option<String>,
    pub lower: Violation,
    pub upper: Violation,
    pub spacing: SpacingSummary,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks `sub ≤ u ≤ super` at every node, with `u = 0` enforced as both
/// bounds on the row `s = 0`.
pub fn sandwich_check(field: &HalfPlaneField, tolerance: f64) -> Result<SandwichReport, PdeError> {
    let tag = field.tag().ok_or_else(|| PdeError::NoBounds(field.label().to_string()))?;
    let n = field.n();
    let sub_k = tag.subsolution()?;
    let super_k = tag.supersolution();
    let sub = sub_k.at(n)?;
    let sup = super_k.as_ref().map(|k| k.at(n)).transpose()?;
    let grid = field.grid();
    let mut lower = Violation::none();
    let mut upper = Violation::none();
    for (i, &r) in grid.r().iter().enumerate() {
        for (j, &s) in grid.s().iter().enumerate() {
            let u = field.value(i, j);
            let (lo, hi) = if j == 0 { (0.0, Some(0.0)) } else { (sub.eval(r, s), sup.as_ref().map(|k| k.eval(r, s))) };
            // NaN compares false everywhere, so it is caught as a violation.
            let below = if u.is_nan() { f64::INFINITY } else { lo - u };
            if below > lower.value {
                lower = Violation { value: below, r, s, i, j };
            }
            if let Some(hi) = hi {
                let above = if u.is_nan() { f64::INFINITY } else { u - hi };
                if above > upper.value {
                    upper = Violation { value: above, r, s, i, j };
                }
            }
        }
    }
    Ok(SandwichReport {
        label: field.label().to_string(),
        n,
        lower_bound: sub_k.to_string(),
        upper_bound: super_k.map(|k| k.to_string()),
        pass: lower.value <= tolerance && upper.value <= tolerance,
        lower,
        upper,
        spacing: grid.spacing_summary(),
        tolerance,
    })
}
