//! Symplectic structure: the standard form, feasibility of frames, and the
//! operations that create or repair symplectic bases.
//!
//! Conventions used across the crate:
//!
//! * The symplectic form on `R^{2m}` is `J = [[0, Iₘ], [−Iₘ, 0]]`. `J` is
//!   never materialized inside an operation: left multiplication swaps the
//!   two block rows and negates the (new) lower one, and `Jᵀ = −J = J⁻¹`.
//! * A *frame* is `X ∈ R^{2n×2k}` with `XᵀJ₂ₙX = J₂ₖ`, `1 ≤ k ≤ n`. Columns
//!   `(x_j, x_{k+j})` form the `j`-th pair; pair indices are 0-based in code.
//! * Feasibility is measured by the residual `‖XᵀJ₂ₙX − J₂ₖ‖_F`.

mod generate;
mod williamson;

pub use generate::{plant_spd, plant_spd_with_basis, random_symplectic};
pub use williamson::{symplectic_spectrum, williamson, SpectrumResult, WilliamsonDecomposition};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tol;

/// `J · X` for `X` with an even number of rows (`J` of matching order).
///
/// Row block `0..m` of the result is row block `m..2m` of `X`; row block
/// `m..2m` is the negated top block.
pub fn apply_j(x: &Matrix) -> Matrix {
    let rows = x.rows();
    assert!(rows % 2 == 0, "apply_j needs an even number of rows");
    let m = rows / 2;
    Matrix::from_fn(rows, x.cols(), |i, j| {
        if i < m {
            x[(i + m, j)]
        } else {
            -x[(i - m, j)]
        }
    })
}

/// `Jᵀ · X = −J · X`.
pub fn apply_j_transpose(x: &Matrix) -> Matrix {
    let mut out = apply_j(x);
    out.scale_mut(-1.0);
    out
}

/// `X · J` for `X` with an even number of columns (`J` of matching order).
///
/// Column `j` of the result is `−x_{m+j}`, column `m+j` is `x_j`.
pub fn mul_j_right(x: &Matrix) -> Matrix {
    let cols = x.cols();
    assert!(cols % 2 == 0, "mul_j_right needs an even number of columns");
    let m = cols / 2;
    Matrix::from_fn(x.rows(), cols, |i, j| {
        if j < m {
            -x[(i, j + m)]
        } else {
            x[(i, j - m)]
        }
    })
}

/// Symplectic pairing `uᵀ J v` of two vectors of even length.
pub fn jdot(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    debug_assert!(u.len() % 2 == 0);
    let m = u.len() / 2;
    let mut acc = 0.0;
    for i in 0..m {
        acc += u[i] * v[m + i] - u[m + i] * v[i];
    }
    acc
}

/// Feasibility residual `‖XᵀJ₂ₙX − J₂ₖ‖_F` of a candidate frame.
///
/// Errors on odd dimensions or a frame wider than its ambient space.
pub fn symplecticity_residual(x: &Matrix) -> Result<f64> {
    check_frame_shape(x)?;
    Ok(residual_raw(x))
}

/// Residual without shape validation, for callers that already checked.
pub(crate) fn residual_raw(x: &Matrix) -> f64 {
    let k = x.cols() / 2;
    let jx = apply_j(x);
    let mut gram = x.transpose().matmul(&jx); // XᵀJX, skew 2k×2k
    for j in 0..k {
        gram[(j, k + j)] -= 1.0;
        gram[(k + j, j)] += 1.0;
    }
    gram.frobenius_norm()
}

pub(crate) fn check_frame_shape(x: &Matrix) -> Result<()> {
    if x.rows() % 2 != 0 || x.cols() % 2 != 0 {
        return Err(Error::OddDimension {
            rows: x.rows(),
            cols: x.cols(),
        });
    }
    if x.cols() == 0 || x.cols() > x.rows() {
        return Err(Error::DimensionMismatch {
            expected: "2n×2k with 1 ≤ k ≤ n".into(),
            got: format!("{}x{}", x.rows(), x.cols()),
        });
    }
    Ok(())
}

/// Symmetric positive-definite problem matrix of even order `2n`.
///
/// Construction checks shape and symmetry (within
/// [`tol::SYMMETRY_REL_TOL`]` · ‖M‖_F`) and stores the symmetrized copy.
/// Definiteness is not verified eagerly; the spectral operations surface a
/// definiteness error the moment a non-positive eigenvalue shows up.
#[derive(Debug, Clone)]
pub struct SpdMatrix {
    m: Matrix,
    n: usize,
}

impl SpdMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() % 2 != 0 || m.rows() == 0 {
            return Err(Error::OddDimension {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let dev = m.symmetry_deviation();
        let threshold = tol::SYMMETRY_REL_TOL * m.frobenius_norm();
        if dev > threshold {
            return Err(Error::NotSymmetric {
                deviation: dev,
                threshold,
            });
        }
        let n = m.rows() / 2;
        Ok(SpdMatrix {
            m: m.symmetrized(),
            n,
        })
    }

    /// Half-order `n` (the matrix is `2n×2n`).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Full order `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }
}

/// A feasible symplectic frame `X ∈ R^{2n×2k}`, validated on construction.
#[derive(Debug, Clone)]
pub struct SymplecticFrame {
    x: Matrix,
    n: usize,
    k: usize,
    residual: f64,
}

impl SymplecticFrame {
    /// Admits `x` when its residual is at most [`tol::FEASIBILITY_TOL`].
    pub fn new(x: Matrix) -> Result<Self> {
        Self::with_tolerance(x, tol::FEASIBILITY_TOL)
    }

    /// Admits `x` when its residual is at most `tolerance`.
    pub fn with_tolerance(x: Matrix, tolerance: f64) -> Result<Self> {
        check_frame_shape(&x)?;
        let residual = residual_raw(&x);
        if !(residual <= tolerance) {
            return Err(Error::NotFeasible {
                residual,
                tolerance,
            });
        }
        Ok(SymplecticFrame {
            n: x.rows() / 2,
            k: x.cols() / 2,
            x,
            residual,
        })
    }

    /// Wraps a matrix produced by an operation that guarantees feasibility.
    pub(crate) fn from_trusted(x: Matrix) -> Self {
        let residual = residual_raw(&x);
        debug_assert!(
            residual <= tol::FEASIBILITY_TOL,
            "trusted frame residual {residual:.3e}"
        );
        SymplecticFrame {
            n: x.rows() / 2,
            k: x.cols() / 2,
            x,
            residual,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &Matrix {
        &self.x
    }

    pub fn into_matrix(self) -> Matrix {
        self.x
    }

    /// Residual measured when the frame was admitted.
    pub fn residual(&self) -> f64 {
        self.residual
    }
}

/// The canonical frame `[e₁ … e_k, e_{n+1} … e_{n+k}]`, exactly feasible.
pub fn canonical_frame(n: usize, k: usize) -> Matrix {
    assert!(k >= 1 && k <= n, "canonical_frame needs 1 ≤ k ≤ n");
    Matrix::from_fn(2 * n, 2 * k, |i, j| {
        let hit = if j < k { i == j } else { i == n + (j - k) };
        if hit {
            1.0
        } else {
            0.0
        }
    })
}

/// Selects the column pairs `(s_i, s_{n+i})` for each `i` in `indices` from a
/// `2n×2n` symplectic basis, producing a `2n×2k` frame in the given order.
pub fn select_pairs(s: &Matrix, indices: &[usize]) -> Result<Matrix> {
    if !s.is_square() || s.rows() % 2 != 0 {
        return Err(Error::DimensionMismatch {
            expected: "square 2n×2n basis".into(),
            got: format!("{}x{}", s.rows(), s.cols()),
        });
    }
    let n = s.rows() / 2;
    let k = indices.len();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument {
            what: format!("need 1 ≤ k ≤ {n}, got k = {k}"),
        });
    }
    for (pos, &i) in indices.iter().enumerate() {
        if i >= n {
            return Err(Error::InvalidArgument {
                what: format!("pair index {i} out of 0..{n}"),
            });
        }
        if indices[..pos].contains(&i) {
            return Err(Error::InvalidArgument {
                what: format!("pair index {i} repeated"),
            });
        }
    }
    Ok(Matrix::from_fn(2 * n, 2 * k, |r, c| {
        let src = if c < k {
            indices[c]
        } else {
            n + indices[c - k]
        };
        s[(r, src)]
    }))
}

/// Projects a near-feasible matrix back onto the symplectic frames by
/// symplectic Gram–Schmidt.
///
/// Pair by pair, both columns are made `J`-orthogonal to every finished pair
/// (the projection is run twice for numerical hygiene) and the pairing
/// `ω = x_jᵀ J x_{k+j}` is scaled to 1 symmetrically across the two columns,
/// which keeps the correction `‖X′ − X‖` proportional to the input residual.
///
/// Requires the input residual below [`tol::RESYMPLECTIFY_MAX_RESIDUAL`];
/// fails with an isotropy error when some pairing collapses below
/// [`tol::ISOTROPY_TOL`].
pub fn resymplectify(x: &Matrix) -> Result<SymplecticFrame> {
    check_frame_shape(x)?;
    let k = x.cols() / 2;
    // Degenerate pairs are diagnosed before the drift gate: an isotropic
    // pair is unrepairable at any distance, and saying so is more useful
    // than reporting the (necessarily large) residual it causes.
    for j in 0..k {
        let omega = jdot(&x.col(j), &x.col(k + j));
        if omega.abs() < tol::ISOTROPY_TOL {
            return Err(Error::IsotropicPair {
                pair: j,
                pairing: omega,
            });
        }
    }
    let input_residual = residual_raw(x);
    if !(input_residual < tol::RESYMPLECTIFY_MAX_RESIDUAL) {
        return Err(Error::NotFeasible {
            residual: input_residual,
            tolerance: tol::RESYMPLECTIFY_MAX_RESIDUAL,
        });
    }
    let mut y = x.clone();
    for j in 0..k {
        // J-orthogonalize the pair against everything already finished.
        for _pass in 0..2 {
            for i in 0..j {
                let u = y.col(i);
                let w = y.col(k + i);
                for target in [j, k + j] {
                    let mut z = y.col(target);
                    let a = jdot(&u, &z); // ω(u_i, z)
                    let b = jdot(&w, &z); // ω(w_i, z)
                                          // z ← z − a·w_i + b·u_i removes both pairings.
                    for (zi, (wi, ui)) in z.iter_mut().zip(w.iter().zip(u.iter())) {
                        *zi += -a * wi + b * ui;
                    }
                    y.set_col(target, &z);
                }
            }
        }
        let u = y.col(j);
        let w = y.col(k + j);
        let omega = jdot(&u, &w);
        if omega.abs() < tol::ISOTROPY_TOL {
            return Err(Error::IsotropicPair {
                pair: j,
                pairing: omega,
            });
        }
        let s = omega.abs().sqrt();
        y.scale_col(j, 1.0 / s);
        y.scale_col(k + j, omega.signum() / s);
    }
    SymplecticFrame::new(y)
}
