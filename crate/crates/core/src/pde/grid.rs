//! Graded tensor grids on the `(r, s)` quarter plane.

use serde::{Deserialize, Serialize};

use super::PdeError;

/// Grid parameters: node counts, truncation radius, and the grading
/// `x(ξ) = R · sinh(κξ) / sinh(κ)`, `ξ ∈ [0, 1]` uniform (`κ = 0` is uniform).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_r: usize,
    pub n_s: usize,
    pub radius: f64,
    pub stretch: f64,
}

impl GridSpec {
    pub const DEFAULT_RADIUS: f64 = 40.0;
    pub const DEFAULT_STRETCH: f64 = 5.0;
    pub const DEFAULT_NODES: usize = 257;

    pub fn square(nodes: usize) -> Self {
        GridSpec { n_r: nodes, n_s: nodes, radius: Self::DEFAULT_RADIUS, stretch: Self::DEFAULT_STRETCH }
    }

    pub fn with_radius(self, radius: f64) -> Self {
        GridSpec { radius, ..self }
    }

    /// Same grading with twice the intervals in each direction.
    pub fn refined(self) -> Self {
        GridSpec { n_r: 2 * self.n_r - 1, n_s: 2 * self.n_s - 1, ..self }
    }

    /// Mapped spacing `Δξ` in the r direction (the `h` of error estimates).
    pub fn h(&self) -> f64 {
        1.0 / (self.n_r - 1).max(self.n_s - 1) as f64
    }

    pub fn validate(&self) -> Result<(), PdeError> {
        for (name, n) in [("n_r", self.n_r), ("n_s", self.n_s)] {
            if n < 5 || (n - 1) % 2 != 0 {
                return Err(PdeError::InvalidGrid(format!("{name} = {n}: need an odd count >= 5")));
            }
        }
        if !(self.radius >= 10.0 && self.radius.is_finite()) {
            return Err(PdeError::InvalidGrid(format!("truncation radius {} < 10", self.radius)));
        }
        if !(self.stretch >= 0.0 && self.stretch <= 20.0) {
            return Err(PdeError::InvalidGrid(format!("stretch {} outside [0, 20]", self.stretch)));
        }
        Ok(())
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::square(Self::DEFAULT_NODES)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    spec: GridSpec,
    r: Vec<f64>,
    s: Vec<f64>,
    dr_dxi: Vec<f64>,
    ds_deta: Vec<f64>,
}

fn nodes(count: usize, radius: f64, stretch: f64) -> (Vec<f64>, Vec<f64>) {
    let last = (count - 1) as f64;
    (0..count)
        .map(|k| {
            let xi = k as f64 / last;
            if stretch == 0.0 {
                (radius * xi, radius)
            } else {
                let sk = stretch.sinh();
                (radius * (stretch * xi).sinh() / sk, radius * stretch * (stretch * xi).cosh() / sk)
            }
        })
        .unzip()
}

impl RadialGrid {
    pub fn new(spec: GridSpec) -> Result<Self, PdeError> {
        spec.validate()?;
        let (mut r, dr_dxi) = nodes(spec.n_r, spec.radius, spec.stretch);
        let (mut s, ds_deta) = nodes(spec.n_s, spec.radius, spec.stretch);
        // Pin the endpoints exactly.
        r[0] = 0.0;
        s[0] = 0.0;
        *r.last_mut().unwrap() = spec.radius;
        *s.last_mut().unwrap() = spec.radius;
        Ok(RadialGrid { spec, r, s, dr_dxi, ds_deta })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn n_r(&self) -> usize {
        self.r.len()
    }

    pub fn n_s(&self) -> usize {
        self.s.len()
    }

    /// `dr/dξ` at each r node.
    pub fn dr_dxi(&self) -> &[f64] {
        &self.dr_dxi
    }

    pub fn ds_deta(&self) -> &[f64] {
        &self.ds_deta
    }

    pub fn radius(&self) -> f64 {
        self.spec.radius
    }

    /// Flat index of node `(i, j)`, row-major in `r`.
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.s.len() + j
    }

    pub fn len(&self) -> usize {
        self.r.len() * self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether every node of `self` is a node of `finer` (same grading, twice
    /// the intervals).
    pub fn nests_in(&self, finer: &RadialGrid) -> bool {
        let a = &self.spec;
        let b = &finer.spec;
        a.radius == b.radius && a.stretch == b.stretch && b.n_r - 1 == 2 * (a.n_r - 1) && b.n_s - 1 == 2 * (a.n_s - 1)
    }

    pub fn spacing_summary(&self) -> SpacingSummary {
        let minmax = |x: &[f64]| {
            x.windows(2).map(|w| w[1] - w[0]).fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)))
        };
        let (min_dr, max_dr) = minmax(&self.r);
        let (min_ds, max_ds) = minmax(&self.s);
        SpacingSummary { h: self.spec.h(), min_dr, max_dr, min_ds, max_ds }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpacingSummary {
    /// Uniform spacing of the mapped coordinate.
    pub h: f64,
    pub min_dr: f64,
    pub max_dr: f64,
    pub min_ds: f64,
    pub max_ds: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_increase_from_zero_to_radius() {
        let g = RadialGrid::new(GridSpec::square(65)).unwrap();
        assert_eq!(g.r()[0], 0.0);
        assert_eq!(*g.s().last().unwrap(), 40.0);
        assert!(g.r().windows(2).all(|w| w[1] > w[0]));
        let sp = g.spacing_summary();
        assert!(sp.min_dr < 0.2 && sp.max_dr > 1.0);
    }

    #[test]
    fn refined_grid_contains_coarse_nodes() {
        let c = RadialGrid::new(GridSpec::square(65)).unwrap();
        let f = RadialGrid::new(GridSpec::square(65).refined()).unwrap();
        assert!(c.nests_in(&f));
        for (k, &x) in c.r().iter().enumerate() {
            assert!((f.r()[2 * k] - x).abs() <= 1e-12 * (1.0 + x));
        }
        assert!(!c.nests_in(&c));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(RadialGrid::new(GridSpec::square(64)).is_err());
        assert!(RadialGrid::new(GridSpec::square(65).with_radius(5.0)).is_err());
    }
}
