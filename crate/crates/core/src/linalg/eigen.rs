//! Symmetric eigendecomposition by the cyclic Jacobi method, and fractional
//! powers of symmetric positive-definite matrices built on top of it.
//!
//! Jacobi is chosen over tridiagonalization + QL for its simplicity and its
//! backward stability: every update is an orthogonal similarity, so the
//! accumulated eigenvector matrix stays orthogonal to machine precision,
//! which the symplectic layer leans on. At the sizes used here (≤ ~100) the
//! O(n³) per sweep is irrelevant.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tol;

/// Full sweeps before declaring failure. Cyclic Jacobi converges
/// quadratically once the off-diagonal mass is small; well-posed inputs
/// finish in < 15 sweeps, so 50 only trips on garbage (NaN contamination).
const MAX_SWEEPS: usize = 50;

/// Eigendecomposition `A = Q Λ Qᵀ` of a symmetric matrix.
///
/// `values` are ascending; column `j` of `vectors` is the eigenvector for
/// `values[j]`.
#[derive(Debug, Clone)]
pub struct SymEigDecomp {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// The input must be square and symmetric within
/// [`tol::SYMMETRY_REL_TOL`]` · ‖A‖_F`; it is symmetrized internally before
/// sweeping so the iteration works on an exactly symmetric copy.
pub fn sym_eig(a: &Matrix) -> Result<SymEigDecomp> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let norm = a.frobenius_norm();
    let dev = a.symmetry_deviation();
    if dev > tol::SYMMETRY_REL_TOL * norm {
        return Err(Error::NotSymmetric {
            deviation: dev,
            threshold: tol::SYMMETRY_REL_TOL * norm,
        });
    }

    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = Matrix::identity(n);
    if n <= 1 || norm == 0.0 {
        let values = (0..n).map(|i| m[(i, i)]).collect();
        return Ok(SymEigDecomp { values, vectors: v });
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diag_norm(&m) <= f64::EPSILON * norm {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                // Entries already negligible against their diagonal are
                // zeroed instead of rotated; this is what terminates the
                // final sweeps.
                if apq.abs() <= f64::EPSILON * 0.5 * (m[(p, p)].abs() + m[(q, q)].abs()) {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let (c, s) = sym_schur2(m[(p, p)], m[(q, q)], apq);
                rotate(&mut m, p, q, c, s);
                rotate_right(&mut v, p, q, c, s);
            }
        }
    }
    if !converged && off_diag_norm(&m) > f64::EPSILON * norm {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SymEigDecomp { values, vectors })
}

/// `M^p` for symmetric positive-definite `M`, via the eigendecomposition:
/// `M^p = Q Λ^p Qᵀ`. Any real `p` is accepted; the crate uses `±1/2`.
///
/// Fails with a definiteness error if any eigenvalue is `≤ 0`.
pub fn spd_power(m: &Matrix, p: f64) -> Result<Matrix> {
    let eig = sym_eig(m)?;
    power_from_eig(&eig, p)
}

/// `M^p` from a precomputed decomposition of `M`. Shared by `spd_power` and
/// the symplectic layer, which needs both `M^{1/2}` and `M^{-1/2}` from one
/// factorization.
pub(crate) fn power_from_eig(eig: &SymEigDecomp, p: f64) -> Result<Matrix> {
    if let Some(&lo) = eig.values.first() {
        if lo <= 0.0 {
            return Err(Error::NotPositiveDefinite { eigenvalue: lo });
        }
    }
    let n = eig.values.len();
    let q = &eig.vectors;
    // Q Λ^p Qᵀ, accumulated as (Q Λ^p) Qᵀ.
    let mut scaled = q.clone();
    for (j, &lam) in eig.values.iter().enumerate() {
        let w = lam.powf(p);
        for i in 0..n {
            scaled[(i, j)] *= w;
        }
    }
    Ok(scaled.matmul(&q.transpose()))
}

fn off_diag_norm(m: &Matrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            acc += 2.0 * m[(i, j)] * m[(i, j)];
        }
    }
    acc.sqrt()
}

/// Cosine/sine of the rotation that annihilates the (p,q) entry
/// (Golub & Van Loan, "symmetric Schur decomposition 2x2").
fn sym_schur2(app: f64, aqq: f64, apq: f64) -> (f64, f64) {
    let tau = (aqq - app) / (2.0 * apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

/// Two-sided update `A ← GᵀAG` with the Givens rotation in the (p,q) plane,
/// exploiting symmetry.
fn rotate(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    let app = m[(p, p)];
    let aqq = m[(q, q)];
    let apq = m[(p, q)];
    let t = s / c;
    m[(p, p)] = app - t * apq;
    m[(q, q)] = aqq + t * apq;
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for i in 0..n {
        if i == p || i == q {
            continue;
        }
        let aip = m[(i, p)];
        let aiq = m[(i, q)];
        m[(i, p)] = c * aip - s * aiq;
        m[(p, i)] = m[(i, p)];
        m[(i, q)] = s * aip + c * aiq;
        m[(q, i)] = m[(i, q)];
    }
}

/// One-sided update `V ← VG` accumulating the eigenvector basis.
fn rotate_right(v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = v.rows();
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = c * vip - s * viq;
        v[(i, q)] = s * vip + c * viq;
    }
}
