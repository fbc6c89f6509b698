//! Exact rational simplex method for `max cᵀx` subject to `Ax ≤ b`, `x ≥ 0`,
//! `b ≥ 0`, with Bland's anti-cycling rule.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::BoundsError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<BigRational>,
    pub value: BigRational,
    pub pivots: usize,
}

pub fn maximize(
    c: &[BigRational],
    a: &[Vec<BigRational>],
    b: &[BigRational],
    max_pivots: usize,
) -> Result<LpSolution, BoundsError> {
    let nv = c.len();
    let m = a.len();
    assert_eq!(b.len(), m, "one right-hand side per row");
    if b.iter().any(Signed::is_negative) {
        return Err(BoundsError::Infeasible("origin is not feasible (negative right-hand side)".into()));
    }
    let width = nv + m + 1;
    let rhs = nv + m;
    let mut rows: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, ai)| {
            assert_eq!(ai.len(), nv, "row {i} has the wrong length");
            let mut row = vec![BigRational::zero(); width];
            row[..nv].clone_from_slice(ai);
            row[nv + i] = BigRational::from_integer(1.into());
            row[rhs] = b[i].clone();
            row
        })
        .collect();
    let mut obj = vec![BigRational::zero(); width];
    obj[..nv].clone_from_slice(c);
    let mut basis: Vec<usize> = (nv..nv + m).collect();

    let mut pivots = 0;
    while let Some(enter) = (0..rhs).find(|&j| obj[j].is_positive()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in rows.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            return Err(BoundsError::Unbounded);
        };
        if pivots == max_pivots {
            return Err(BoundsError::BudgetExhausted(max_pivots));
        }
        pivots += 1;

        let p = rows[r][enter].clone();
        for v in rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        let f = obj[enter].clone();
        for (v, pv) in obj.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
        basis[r] = enter;
    }

    let mut x = vec![BigRational::zero(); nv];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nv {
            x[bv] = rows[i][rhs].clone();
        }
    }
    Ok(LpSolution { x, value: -obj[rhs].clone(), pivots })
}
