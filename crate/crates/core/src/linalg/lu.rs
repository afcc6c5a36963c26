//! Linear solves via LU with partial pivoting.
//!
//! The factorization is not exposed; the crate only ever needs `A⁻¹B` for
//! the Cayley transform and the generators, and those systems are small and
//! well conditioned. Breakdown is reported with a crude condition estimate
//! so the caller can tell "singular input" from "bug".

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tol;

/// Solves `A · X = B` for dense square `A` (multiple right-hand sides).
///
/// Elimination stops with a singularity error when a pivot falls below
/// [`tol::PIVOT_REL_TOL`]` · max|A|`.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("right-hand side with {} rows", a.rows()),
            got: format!("{}x{}", b.rows(), b.cols()),
        });
    }

    let n = a.rows();
    let nrhs = b.cols();
    let scale = a.max_abs();
    let threshold = tol::PIVOT_REL_TOL * scale;
    let mut lu = a.clone();
    let mut x = b.clone();

    for col in 0..n {
        // Partial pivot: largest magnitude on or below the diagonal.
        let mut piv_row = col;
        let mut piv_val = lu[(col, col)].abs();
        for r in col + 1..n {
            let v = lu[(r, col)].abs();
            if v > piv_val {
                piv_val = v;
                piv_row = r;
            }
        }
        if piv_val <= threshold || !piv_val.is_finite() {
            return Err(Error::Singular {
                condition_estimate: scale / piv_val.max(f64::MIN_POSITIVE),
            });
        }
        if piv_row != col {
            for j in 0..n {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(piv_row, j)];
                lu[(piv_row, j)] = tmp;
            }
            for j in 0..nrhs {
                let tmp = x[(col, j)];
                x[(col, j)] = x[(piv_row, j)];
                x[(piv_row, j)] = tmp;
            }
        }
        let inv_piv = 1.0 / lu[(col, col)];
        for r in col + 1..n {
            let factor = lu[(r, col)] * inv_piv;
            if factor == 0.0 {
                continue;
            }
            lu[(r, col)] = 0.0;
            for j in col + 1..n {
                let v = lu[(col, j)];
                if v != 0.0 {
                    lu[(r, j)] -= factor * v;
                }
            }
            for j in 0..nrhs {
                let v = x[(col, j)];
                if v != 0.0 {
                    x[(r, j)] -= factor * v;
                }
            }
        }
    }

    // Back substitution on the triangularized system.
    for col in (0..n).rev() {
        let inv_piv = 1.0 / lu[(col, col)];
        for j in 0..nrhs {
            let mut acc = x[(col, j)];
            for kk in col + 1..n {
                acc -= lu[(col, kk)] * x[(kk, j)];
            }
            x[(col, j)] = acc * inv_piv;
        }
    }
    Ok(x)
}
