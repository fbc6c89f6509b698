//! Direct solver for the stencil by diagonalizing the `s` direction.
//!
//! The `s` operator is similar to a symmetric tridiagonal matrix
//! `M = W^{1/2} A_s W^{−1/2}` with `W` the dual cell widths. With
//! `M = Q Λ Qᵀ` each eigenmode leaves an independent tridiagonal system in
//! `r`, solved by the Thomas algorithm. A few steps of iterative refinement
//! follow.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::{PdeError, RadialGrid, Stencil};

/// Contract on the relative discrete residual `‖b − A u‖∞ / ‖b‖∞`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Largest admissible first spacing next to the source peak at the origin.
pub const MAX_FIRST_SPACING: f64 = 0.25;

const MAX_REFINEMENTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolveStats {
    pub relative_residual: f64,
    pub refinements: usize,
    /// Negative roundoff values reset to zero under a nonnegative source.
    pub clamped: usize,
    pub tolerance: f64,
}

pub struct PoissonSolver {
    n: i64,
    n_r: usize,
    n_s: usize,
    stencil: Stencil,
    /// Eigenvectors of `M`, one per column.
    q: DMatrix<f64>,
    lambda: Vec<f64>,
    sqrt_w: Vec<f64>,
}

impl PoissonSolver {
    pub fn new(grid: &RadialGrid, n: i64) -> Result<Self, PdeError> {
        let first = grid.r()[1].max(grid.s()[1]);
        if first > MAX_FIRST_SPACING {
            return Err(PdeError::GridTooCoarse { spacing: first, limit: MAX_FIRST_SPACING });
        }
        if n < 3 {
            return Err(PdeError::Domain { n, min: 3 });
        }
        let stencil = Stencil::new(grid, n);
        let s = grid.s();
        let m = s.len() - 2;
        let w: Vec<f64> = (1..=m).map(|j| 0.5 * (s[j + 1] - s[j - 1])).collect();
        let mut mat = DMatrix::<f64>::zeros(m, m);
        for k in 0..m {
            let j = k + 1;
            mat[(k, k)] = stencil.south[j] + stencil.north[j];
            if k + 1 < m {
                let off = -1.0 / ((s[j + 1] - s[j]) * (w[k] * w[k + 1]).sqrt());
                mat[(k, k + 1)] = off;
                mat[(k + 1, k)] = off;
            }
        }
        let eig = SymmetricEigen::new(mat);
        Ok(PoissonSolver {
            n,
            n_r: grid.n_r(),
            n_s: grid.n_s(),
            stencil,
            q: eig.eigenvectors,
            lambda: eig.eigenvalues.iter().copied().collect(),
            sqrt_w: w.iter().map(|x| x.sqrt()).collect(),
        })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn stencil(&self) -> &Stencil {
        &self.stencil
    }

    /// Solves `A δ = rhs` on the unknowns with homogeneous boundary data;
    /// `rhs` and the result are full-grid arrays.
    fn solve_homogeneous(&self, rhs: &[f64]) -> Vec<f64> {
        let (nr, ns) = (self.n_r, self.n_s);
        let mr = nr - 1;
        let ms = ns - 2;
        let f = DMatrix::from_fn(mr, ms, |i, k| rhs[i * ns + k + 1] * self.sqrt_w[k]);
        let mut fh = f * &self.q;
        let st = &self.stencil;
        let mut c = vec![0.0; mr];
        let mut d = vec![0.0; mr];
        for k in 0..ms {
            let lam = self.lambda[k];
            // Forward sweep, then back substitution.
            for i in 0..mr {
                let diag = st.west[i] + st.east[i] + lam;
                let (den, prev_d) =
                    if i == 0 { (diag, 0.0) } else { (diag - st.west[i] * c[i - 1], st.west[i] * d[i - 1]) };
                c[i] = st.east[i] / den;
                d[i] = (fh[(i, k)] + prev_d) / den;
            }
            let mut x = d[mr - 1];
            fh[(mr - 1, k)] = x;
            for i in (0..mr - 1).rev() {
                x = d[i] + c[i] * x;
                fh[(i, k)] = x;
            }
        }
        let u = fh * self.q.transpose();
        let mut out = vec![0.0; nr * ns];
        for i in 0..mr {
            for k in 0..ms {
                out[i * ns + k + 1] = u[(i, k)] / self.sqrt_w[k];
            }
        }
        out
    }

    /// Solves `−L u = source` with `u = boundary` on the Dirichlet nodes
    /// (`s = 0`, `s = R`, `r = R`). Both inputs are full-grid arrays; the
    /// interior entries of `boundary` are ignored.
    pub fn solve(&self, source: &[f64], boundary: &[f64]) -> Result<(Vec<f64>, SolveStats), PdeError> {
        let (nr, ns) = (self.n_r, self.n_s);
        assert_eq!(source.len(), nr * ns);
        assert_eq!(boundary.len(), nr * ns);
        let mut u = vec![0.0; nr * ns];
        for i in 0..nr {
            for j in 0..ns {
                if i == nr - 1 || j == 0 || j == ns - 1 {
                    u[i * ns + j] = boundary[i * ns + j];
                }
            }
        }
        let (b, _) = self.stencil.residual(&u, source, nr);
        let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            let stats =
                SolveStats { relative_residual: 0.0, refinements: 0, clamped: 0, tolerance: RESIDUAL_TOLERANCE };
            return Ok((u, stats));
        }
        let mut r = b;
        let mut rel = 1.0;
        let mut refinements = 0;
        for step in 0..=MAX_REFINEMENTS {
            let du = self.solve_homogeneous(&r);
            for (a, d) in u.iter_mut().zip(&du) {
                *a += d;
            }
            let (next, worst) = self.stencil.residual(&u, source, nr);
            r = next;
            rel = worst / scale;
            refinements = step;
            if rel <= 1e-3 * RESIDUAL_TOLERANCE {
                break;
            }
        }
        let mut clamped = 0;
        let nonnegative = source.iter().all(|x| *x >= 0.0)
            && u.iter().enumerate().all(|(k, x)| {
                let (i, j) = (k / ns, k % ns);
                !(i == nr - 1 || j == 0 || j == ns - 1) || *x >= 0.0
            });
        if nonnegative {
            for x in u.iter_mut() {
                if *x < 0.0 {
                    *x = 0.0;
                    clamped += 1;
                }
            }
            if clamped > 0 {
                rel = self.stencil.residual(&u, source, nr).1 / scale;
            }
        }
        if !(rel <= RESIDUAL_TOLERANCE) {
            return Err(PdeError::NotConverged { residual: rel, tolerance: RESIDUAL_TOLERANCE });
        }
        Ok((u, SolveStats { relative_residual: rel, refinements, clamped, tolerance: RESIDUAL_TOLERANCE }))
    }
}
