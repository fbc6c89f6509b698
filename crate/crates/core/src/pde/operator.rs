//! Five-point finite-volume stencil of the reduced operator.
//!
//! In `r` the cell around node `i` spans the face midpoints and carries the
//! weight `r^{n+2}`, so the stencil is exact on `r²` and reduces to
//! `(n+3)·2(u₁ − u₀)/r₁²` on the axis. In `s` it is the standard
//! nonuniform three-point second difference.

use super::RadialGrid;

#[derive(Clone, Debug)]
pub struct Stencil {
    /// Coupling to `i − 1`, zero on the axis.
    pub west: Vec<f64>,
    /// Coupling to `i + 1`.
    pub east: Vec<f64>,
    /// Coupling to `j − 1`.
    pub south: Vec<f64>,
    /// Coupling to `j + 1`.
    pub north: Vec<f64>,
    n_s: usize,
}

impl Stencil {
    pub fn new(grid: &RadialGrid, n: i64) -> Self {
        let r = grid.r();
        let s = grid.s();
        let k = (n + 3) as f64;
        let mut west = vec![0.0; r.len()];
        let mut east = vec![0.0; r.len()];
        for i in 0..r.len() - 1 {
            let upper = 0.5 * (r[i] + r[i + 1]);
            let d_up = r[i + 1] - r[i];
            if i == 0 {
                east[0] = k / (upper * d_up);
                continue;
            }
            let lower = 0.5 * (r[i - 1] + r[i]);
            let q = lower / upper;
            let denom = upper * -(k * q.ln()).exp_m1();
            east[i] = k / (denom * d_up);
            west[i] = k * q.powf(k - 1.0) / (denom * (r[i] - r[i - 1]));
        }
        let mut south = vec![0.0; s.len()];
        let mut north = vec![0.0; s.len()];
        for j in 1..s.len() - 1 {
            let dm = s[j] - s[j - 1];
            let dp = s[j + 1] - s[j];
            let w = 0.5 * (dm + dp);
            south[j] = 1.0 / (w * dm);
            north[j] = 1.0 / (w * dp);
        }
        Stencil { west, east, south, north, n_s: s.len() }
    }

    pub fn diagonal(&self, i: usize, j: usize) -> f64 {
        self.west[i] + self.east[i] + self.south[j] + self.north[j]
    }

    /// `(−L u)` at interior node `(i, j)`: `0 ≤ i < N_r − 1`, `0 < j < N_s − 1`.
    pub fn apply_at(&self, u: &[f64], i: usize, j: usize) -> f64 {
        let ns = self.n_s;
        let c = i * ns + j;
        let mut v =
            self.diagonal(i, j) * u[c] - self.east[i] * u[c + ns] - self.south[j] * u[c - 1] - self.north[j] * u[c + 1];
        if i > 0 {
            v -= self.west[i] * u[c - ns];
        }
        v
    }

    /// Largest absolute row sum of the discrete operator.
    pub fn norm_inf(&self) -> f64 {
        let r = self.west.iter().zip(&self.east).map(|(a, b)| a + b).fold(0.0, f64::max);
        let s = self.south.iter().zip(&self.north).map(|(a, b)| a + b).fold(0.0, f64::max);
        2.0 * (r + s)
    }

    /// Residual `f − (−L u)` on interior nodes (zero elsewhere) and its
    /// max norm.
    pub fn residual(&self, u: &[f64], f: &[f64], n_r: usize) -> (Vec<f64>, f64) {
        let ns = self.n_s;
        let mut out = vec![0.0; u.len()];
        let mut worst = 0.0f64;
        for i in 0..n_r - 1 {
            for j in 1..ns - 1 {
                let v = f[i * ns + j] - self.apply_at(u, i, j);
                out[i * ns + j] = v;
                worst = worst.max(v.abs());
            }
        }
        (out, worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::GridSpec;

    fn apply_all(st: &Stencil, g: &RadialGrid, u: &[f64]) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..g.n_r() - 1 {
            for j in 1..g.n_s() - 1 {
                out.push((i, j, st.apply_at(u, i, j)));
            }
        }
        out
    }

    #[test]
    fn exact_on_quadratics() {
        // −(∂rr + (n+2)/r ∂r + ∂ss)(r² + s²) = −(2(n+3) + 2)
        let g = RadialGrid::new(GridSpec::square(33)).unwrap();
        let n = 9;
        let st = Stencil::new(&g, n);
        let u: Vec<f64> = (0..g.len())
            .map(|k| {
                let (i, j) = (k / g.n_s(), k % g.n_s());
                g.r()[i].powi(2) + g.s()[j].powi(2)
            })
            .collect();
        for (i, j, v) in apply_all(&st, &g, &u) {
            let expect = -(2.0 * (n + 3) as f64 + 2.0);
            assert!((v - expect).abs() < 1e-8 * (1.0 + st.diagonal(i, j)), "({i},{j}): {v}");
        }
    }

    #[test]
    fn rows_are_diagonally_dominant_with_nonpositive_couplings() {
        let g = RadialGrid::new(GridSpec::square(65)).unwrap();
        let st = Stencil::new(&g, 7);
        assert!(st.west.iter().chain(&st.east).chain(&st.south).chain(&st.north).all(|c| *c >= 0.0));
        assert_eq!(st.west[0], 0.0);
        let r1 = g.r()[1];
        assert!((st.east[0] - 10.0 * 2.0 / (r1 * r1)).abs() < 1e-9 * st.east[0]);
    }
}
