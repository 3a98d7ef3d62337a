//! Small dense linear solves (LU with one iterative-refinement step).
//!
//! Menus hold a handful of alternatives, so everything here is O(n³) with
//! tiny n; the refinement step keeps residuals near machine precision even
//! for the badly conditioned systems that arise as the stopping probability
//! approaches zero.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

fn lu_solve_refined(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let lu = a.clone().lu();
    let mut x = lu.solve(b).ok_or_else(|| {
        Error::SingularSystem(format!("{}×{} LU solve failed", a.nrows(), a.ncols()))
    })?;
    // One refinement step: solve A·dx = b − A·x and correct.
    let residual = b - a * &x;
    if let Some(dx) = lu.solve(&residual) {
        x += dx;
    }
    Ok(x)
}

/// Solves the row-vector system x·A = b.
pub(crate) fn solve_row(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    let at = DMatrix::from_fn(n, n, |r, c| a[c][r]);
    let x = lu_solve_refined(&at, &DVector::from_column_slice(b))?;
    Ok(x.iter().copied().collect())
}

/// Solves the column-vector system A·x = b.
pub(crate) fn solve_col(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |r, c| a[r][c]);
    let x = lu_solve_refined(&m, &DVector::from_column_slice(b))?;
    Ok(x.iter().copied().collect())
}

/// Row vector times matrix: (v·Q)_j = Σ_i v_i Q_ij.
pub(crate) fn row_times(v: &[f64], q: &[Vec<f64>]) -> Vec<f64> {
    let n = q.len();
    let mut out = vec![0.0; n];
    for (i, &vi) in v.iter().enumerate() {
        if vi != 0.0 {
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * q[i][j];
            }
        }
    }
    out
}
