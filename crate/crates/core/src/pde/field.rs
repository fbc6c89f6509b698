use std::sync::Arc;

use serde::Serialize;

use crate::profile::{KernelProfile, NumericKernel};

use super::{FarField, GridSpec, PdeError, PoissonSolver, ProfileTag, RadialGrid, SolveStats, MIN_DIMENSION};

/// A source and far-field data, both sums of kernels.
#[derive(Clone, Debug)]
pub struct Problem {
    pub label: String,
    pub tag: Option<ProfileTag>,
    pub n: i64,
    pub source: Vec<KernelProfile>,
    pub boundary: Vec<KernelProfile>,
    pub far_field: Option<FarField>,
}

impl Problem {
    pub fn tagged(tag: ProfileTag, n: i64, far: FarField) -> Result<Self, PdeError> {
        if n < MIN_DIMENSION {
            return Err(PdeError::Domain { n, min: MIN_DIMENSION });
        }
        Ok(Problem {
            label: tag.name().to_string(),
            tag: Some(tag),
            n,
            source: vec![tag.source()],
            boundary: vec![tag.far_field(far)?],
            far_field: Some(far),
        })
    }

    pub fn custom(label: impl Into<String>, n: i64, source: Vec<KernelProfile>, boundary: Vec<KernelProfile>) -> Self {
        Problem { label: label.into(), tag: None, n, source, boundary, far_field: None }
    }

    fn sample(kernels: &[KernelProfile], n: i64, grid: &RadialGrid) -> Result<Vec<f64>, PdeError> {
        let ks: Vec<NumericKernel> = kernels.iter().map(|k| k.at(n)).collect::<Result<_, _>>()?;
        let mut out = Vec::with_capacity(grid.len());
        for &r in grid.r() {
            for &s in grid.s() {
                out.push(ks.iter().map(|k| k.eval(r, s)).sum());
            }
        }
        Ok(out)
    }

    pub fn source_values(&self, grid: &RadialGrid) -> Result<Vec<f64>, PdeError> {
        Self::sample(&self.source, self.n, grid)
    }

    /// Far-field data on every node, with the row `s = 0` forced to zero.
    pub fn boundary_values(&self, grid: &RadialGrid) -> Result<Vec<f64>, PdeError> {
        let mut v = Self::sample(&self.boundary, self.n, grid)?;
        for i in 0..grid.n_r() {
            v[grid.idx(i, 0)] = 0.0;
        }
        Ok(v)
    }
}

/// A solved field. Immutable after construction.
#[derive(Clone, Debug)]
pub struct HalfPlaneField {
    grid: Arc<RadialGrid>,
    n: i64,
    label: String,
    tag: Option<ProfileTag>,
    far_field: Option<FarField>,
    boundary: Vec<String>,
    values: Vec<f64>,
    stats: SolveStats,
}

/// Solves `problem` with a prebuilt solver for `(grid, problem.n)`.
pub fn solve_with(
    solver: &PoissonSolver,
    grid: Arc<RadialGrid>,
    problem: &Problem,
) -> Result<HalfPlaneField, PdeError> {
    assert_eq!(solver.n(), problem.n, "solver built for another dimension");
    let source = problem.source_values(&grid)?;
    let boundary = problem.boundary_values(&grid)?;
    let (values, stats) = solver.solve(&source, &boundary)?;
    Ok(HalfPlaneField {
        grid,
        n: problem.n,
        label: problem.label.clone(),
        tag: problem.tag,
        far_field: problem.far_field,
        boundary: problem.boundary.iter().map(|k| k.to_string()).collect(),
        values,
        stats,
    })
}

pub fn solve(problem: &Problem, spec: GridSpec) -> Result<HalfPlaneField, PdeError> {
    let grid = Arc::new(RadialGrid::new(spec)?);
    let solver = PoissonSolver::new(&grid, problem.n)?;
    solve_with(&solver, grid, problem)
}

/// Solves a tagged problem with subsolution far-field data.
pub fn solve_profile(tag: ProfileTag, n: i64, spec: GridSpec) -> Result<HalfPlaneField, PdeError> {
    solve(&Problem::tagged(tag, n, FarField::Subsolution)?, spec)
}

impl HalfPlaneField {
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn shared_grid(&self) -> Arc<RadialGrid> {
        Arc::clone(&self.grid)
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn tag(&self) -> Option<ProfileTag> {
        self.tag
    }

    pub fn far_field(&self) -> Option<FarField> {
        self.far_field
    }

    /// Far-field data descriptions, one per kernel.
    pub fn boundary(&self) -> &[String] {
        &self.boundary
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    /// Node closest to `(r, s)` and the value there.
    pub fn nearest(&self, r: f64, s: f64) -> (usize, usize, f64) {
        let pick = |x: &[f64], t: f64| {
            (0..x.len()).min_by(|&a, &b| (x[a] - t).abs().total_cmp(&(x[b] - t).abs())).unwrap_or(0)
        };
        let i = pick(self.grid.r(), r);
        let j = pick(self.grid.s(), s);
        (i, j, self.value(i, j))
    }

    /// Bilinear interpolation; `None` outside `[0, R]²`.
    pub fn interpolate(&self, r: f64, s: f64) -> Option<f64> {
        let (gr, gs) = (self.grid.r(), self.grid.s());
        let cell = |x: &[f64], t: f64| -> Option<(usize, f64)> {
            if !(t >= 0.0 && t <= *x.last()?) {
                return None;
            }
            let k = x.partition_point(|&v| v <= t).clamp(1, x.len() - 1) - 1;
            Some((k, (t - x[k]) / (x[k + 1] - x[k])))
        };
        let (i, a) = cell(gr, r)?;
        let (j, b) = cell(gs, s)?;
        let v = |i, j| self.value(i, j);
        Some((1.0 - a) * ((1.0 - b) * v(i, j) + b * v(i, j + 1)) + a * ((1.0 - b) * v(i + 1, j) + b * v(i + 1, j + 1)))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Copy with node values replaced, for fault injection and differences.
    pub fn with_values(&self, values: Vec<f64>) -> HalfPlaneField {
        assert_eq!(values.len(), self.values.len());
        HalfPlaneField { values, ..self.clone() }
    }

    pub fn report(&self) -> FieldReport {
        let (i, j) = (0..self.values.len())
            .max_by(|&a, &b| self.values[a].total_cmp(&self.values[b]))
            .map(|k| (k / self.grid.n_s(), k % self.grid.n_s()))
            .unwrap_or((0, 0));
        FieldReport {
            label: self.label.clone(),
            n: self.n,
            grid: *self.grid.spec(),
            spacing: self.grid.spacing_summary(),
            far_field: self.far_field,
            boundary: self.boundary.clone(),
            stats: self.stats,
            min_value: self.values.iter().copied().fold(f64::INFINITY, f64::min),
            max_value: self.value(i, j),
            argmax: [self.grid.r()[i], self.grid.s()[j]],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldReport {
    pub label: String,
    pub n: i64,
    pub grid: GridSpec,
    pub spacing: super::SpacingSummary,
    pub far_field: Option<FarField>,
    pub boundary: Vec<String>,
    pub stats: SolveStats,
    pub min_value: f64,
    pub max_value: f64,
    pub argmax: [f64; 2],
}
