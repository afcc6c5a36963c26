//! The weighted trace cost on symplectic frames and its first- and
//! second-order data.
//!
//! For `M ∈ R^{2n×2n}` SPD, a frame `X ∈ R^{2n×2k}` with `XᵀJX = J₂ₖ`, and
//! strictly increasing positive weights `ν₁ < … < ν_k` arranged as
//! `Ñ = diag(N, N)`, `N = diag(ν₁ … ν_k)`, the cost is
//!
//! `f(X) = tr(Ñ XᵀMX) = Σⱼ νⱼ (xⱼᵀMxⱼ + x_{k+j}ᵀMx_{k+j})`.
//!
//! The doubled `diag(N, N)` layout is what couples the two columns of a pair
//! to the *same* weight: it makes `f` constant on the orbit `X ↦ XK` of the
//! per-pair rotation group (see [`pair_rotation`]) and strict increase of the
//! `νⱼ` is what forces distinct pairs apart at minimizers. First-order data:
//!
//! * Euclidean gradient `∇f = 2MXÑ`.
//! * Lagrange multiplier estimate `L = skew(J₂ₖᵀ XᵀMX Ñ)` (skew-symmetric
//!   `2k×2k`), and the stationarity residual
//!   `‖MXÑ − JXL‖_F / (1 + ‖M‖_F ν_k)`: zero exactly at critical points,
//!   where `MXÑ = JXL` holds with the true multiplier.
//! * Hessian form of the Lagrangian along a tangent direction `Z`:
//!   `∇²L[Z, Z] = 2 tr(Zᵀ(MZÑ − JZL))`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::symplectic::{apply_j, apply_j_transpose, SpdMatrix, SymplecticFrame};

/// How to build the weight ladder.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightMode {
    /// `νⱼ = 1 + j·eps` for `j = 1..k`; `eps > 0`.
    Auto { eps: f64 },
    /// Explicit strictly increasing positive list of length `k`.
    Explicit(Vec<f64>),
}

/// Validated weight ladder `0 < ν₁ < ν₂ < … < ν_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    nu: Vec<f64>,
}

impl WeightSpec {
    pub fn k(&self) -> usize {
        self.nu.len()
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    /// Largest weight `ν_k`, the scale that enters the residual normalizer.
    pub fn nu_max(&self) -> f64 {
        *self.nu.last().expect("weights are non-empty")
    }
}

/// Builds and validates a [`WeightSpec`].
///
/// Distinctness is not cosmetic: with tied weights the cost loses the
/// rotations that separate pairs, and the theory below (order of pair values
/// at minimizers, saddle certificates) silently breaks. Hence ties are
/// rejected here, at the single entry point.
pub fn build_weights(k: usize, mode: WeightMode) -> Result<WeightSpec> {
    if k == 0 {
        return Err(Error::InvalidWeights {
            detail: "k must be at least 1".into(),
        });
    }
    let nu: Vec<f64> = match mode {
        WeightMode::Auto { eps } => {
            if !(eps > 0.0) || !eps.is_finite() {
                return Err(Error::InvalidWeights {
                    detail: format!("auto spacing must be finite and > 0, got {eps}"),
                });
            }
            (1..=k).map(|j| 1.0 + j as f64 * eps).collect()
        }
        WeightMode::Explicit(list) => {
            if list.len() != k {
                return Err(Error::InvalidWeights {
                    detail: format!("expected {k} weights, got {}", list.len()),
                });
            }
            list
        }
    };
    for (j, &v) in nu.iter().enumerate() {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidWeights {
                detail: format!("weight {j} is {v}; weights must be finite and positive"),
            });
        }
        if j > 0 && v <= nu[j - 1] {
            return Err(Error::InvalidWeights {
                detail: format!(
                    "weights must be strictly increasing, got ν{} = {} after ν{} = {}",
                    j + 1,
                    v,
                    j,
                    nu[j - 1]
                ),
            });
        }
    }
    Ok(WeightSpec { nu })
}

/// Skew-symmetric `2k×2k` multiplier estimate at a frame.
#[derive(Debug, Clone)]
pub struct LagrangeMultiplier {
    l: Matrix,
}

impl LagrangeMultiplier {
    pub fn matrix(&self) -> &Matrix {
        &self.l
    }
}

/// Hessian form value along a direction, with the direction's tangency
/// residual `‖ZᵀJX + XᵀJZ‖_F` reported alongside (the form is only
/// meaningful on tangent directions; the residual lets the caller judge).
#[derive(Debug, Clone, Copy)]
pub struct HessianEvaluation {
    pub value: f64,
    pub tangency_residual: f64,
}

/// Per-pair rotation `K(Φ) = [[diag cos Φ, diag sin Φ], [−diag sin Φ, diag cos Φ]]`,
/// the symmetry group of the cost: `K` is orthogonal, symplectic, commutes
/// with `Ñ`, and `f(XK) = f(X)` for every frame.
#[derive(Debug, Clone)]
pub struct PairRotation {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

/// Builds the rotation for phases `phi` (length `k`).
pub fn pair_rotation(phi: &[f64]) -> PairRotation {
    PairRotation {
        cos: phi.iter().map(|p| p.cos()).collect(),
        sin: phi.iter().map(|p| p.sin()).collect(),
    }
}

impl PairRotation {
    pub fn k(&self) -> usize {
        self.cos.len()
    }

    /// Materializes `K`, `2k×2k`.
    pub fn matrix(&self) -> Matrix {
        let k = self.k();
        let mut m = Matrix::zeros(2 * k, 2 * k);
        for j in 0..k {
            m[(j, j)] = self.cos[j];
            m[(k + j, k + j)] = self.cos[j];
            m[(j, k + j)] = self.sin[j];
            m[(k + j, j)] = -self.sin[j];
        }
        m
    }

    /// `X · K` without materializing `K`: mixes the two columns of each pair.
    pub fn apply_right(&self, x: &Matrix) -> Matrix {
        let k = self.k();
        assert_eq!(x.cols(), 2 * k, "pair rotation order mismatch");
        let mut out = x.clone();
        for j in 0..k {
            let (c, s) = (self.cos[j], self.sin[j]);
            for i in 0..x.rows() {
                let a = x[(i, j)];
                let b = x[(i, k + j)];
                out[(i, j)] = c * a - s * b;
                out[(i, k + j)] = s * a + c * b;
            }
        }
        out
    }
}

pub(crate) fn check_problem_dims(m: &SpdMatrix, x: &SymplecticFrame, w: &WeightSpec) -> Result<()> {
    if x.n() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: format!("frame with {} rows", m.dim()),
            got: format!("{} rows", 2 * x.n()),
        });
    }
    if w.k() != x.k() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} weights for this frame", x.k()),
            got: format!("{}", w.k()),
        });
    }
    Ok(())
}

/// Cost `f(X) = tr(Ñ XᵀMX)`.
pub fn brockett_value(m: &SpdMatrix, x: &SymplecticFrame, w: &WeightSpec) -> Result<f64> {
    check_problem_dims(m, x, w)?;
    Ok(value_raw(m.matrix(), x.matrix(), w.nu()))
}

/// Euclidean gradient `∇f(X) = 2MXÑ`.
pub fn euclid_gradient(m: &SpdMatrix, x: &SymplecticFrame, w: &WeightSpec) -> Result<Matrix> {
    check_problem_dims(m, x, w)?;
    let y = m.matrix().matmul(x.matrix());
    Ok(scale_pairs(&y, w.nu(), 2.0))
}

/// Multiplier estimate and scaled stationarity residual at a feasible frame.
///
/// Requires feasibility within 1e-8 (looser than frame admission, so frames
/// constructed with a custom tolerance are still diagnosable).
pub fn multiplier_and_kkt(
    m: &SpdMatrix,
    x: &SymplecticFrame,
    w: &WeightSpec,
) -> Result<(LagrangeMultiplier, f64)> {
    check_problem_dims(m, x, w)?;
    if x.residual() > 1e-8 {
        return Err(Error::NotFeasible {
            residual: x.residual(),
            tolerance: 1e-8,
        });
    }
    let (l, res) = multiplier_raw(m.matrix(), x.matrix(), w.nu());
    Ok((LagrangeMultiplier { l }, res))
}

/// Hessian form of the Lagrangian at `(X, L)` along `Z`:
/// `2 tr(Zᵀ(MZÑ − JZL))`, with `Z`'s tangency residual.
pub fn hessian_form(
    m: &SpdMatrix,
    x: &SymplecticFrame,
    l: &LagrangeMultiplier,
    w: &WeightSpec,
    z: &Matrix,
) -> Result<HessianEvaluation> {
    check_problem_dims(m, x, w)?;
    let (rows, cols) = (x.matrix().rows(), x.matrix().cols());
    if z.rows() != rows || z.cols() != cols {
        return Err(Error::DimensionMismatch {
            expected: format!("direction of shape {rows}x{cols}"),
            got: format!("{}x{}", z.rows(), z.cols()),
        });
    }
    if l.l.rows() != cols || l.l.cols() != cols {
        return Err(Error::DimensionMismatch {
            expected: format!("multiplier of shape {cols}x{cols}"),
            got: format!("{}x{}", l.l.rows(), l.l.cols()),
        });
    }
    let mz_nu = scale_pairs(&m.matrix().matmul(z), w.nu(), 1.0);
    let jzl = apply_j(&z.matmul(&l.l));
    let value = 2.0 * (z.frobenius_dot(&mz_nu) - z.frobenius_dot(&jzl));

    // ‖ZᵀJX + XᵀJZ‖_F = ‖B − Bᵀ‖_F with B = ZᵀJX, since XᵀJZ = −(ZᵀJX)ᵀ.
    let b = z.transpose().matmul(&apply_j(x.matrix()));
    let tangency_residual = (&b - &b.transpose()).frobenius_norm();
    Ok(HessianEvaluation {
        value,
        tangency_residual,
    })
}

// ---------------------------------------------------------------------------
// Raw kernels shared with the optimizer hot path (no wrapper re-validation).
// ---------------------------------------------------------------------------

/// Scales column `j` and `k+j` by `factor · ν_j`.
pub(crate) fn scale_pairs(y: &Matrix, nu: &[f64], factor: f64) -> Matrix {
    let k = nu.len();
    debug_assert_eq!(y.cols(), 2 * k);
    let mut out = y.clone();
    for (j, &v) in nu.iter().enumerate() {
        out.scale_col(j, factor * v);
        out.scale_col(k + j, factor * v);
    }
    out
}

pub(crate) fn value_raw(m: &Matrix, x: &Matrix, nu: &[f64]) -> f64 {
    let y = m.matmul(x);
    value_from_product(x, &y, nu)
}

/// Cost from a precomputed `Y = MX`.
pub(crate) fn value_from_product(x: &Matrix, y: &Matrix, nu: &[f64]) -> f64 {
    let k = nu.len();
    let mut acc = 0.0;
    for (j, &v) in nu.iter().enumerate() {
        acc += v * (x.col_dot(j, y, j) + x.col_dot(k + j, y, k + j));
    }
    acc
}

/// Multiplier `L = skew(J₂ₖᵀ XᵀMX Ñ)` and scaled residual
/// `‖MXÑ − JXL‖_F / (1 + ‖M‖_F ν_k)`.
pub(crate) fn multiplier_raw(m: &Matrix, x: &Matrix, nu: &[f64]) -> (Matrix, f64) {
    let y = m.matmul(x);
    let gram = x.transpose().matmul(&y); // XᵀMX
    let l = multiplier_from_gram(&gram, nu);
    let res = kkt_residual_from_parts(m, x, &y, &l, nu);
    (l, res)
}

pub(crate) fn multiplier_from_gram(gram: &Matrix, nu: &[f64]) -> Matrix {
    let raw = apply_j_transpose(&scale_pairs(gram, nu, 1.0)); // J₂ₖᵀ (XᵀMX Ñ)
    let rt = raw.transpose();
    (&raw - &rt).scaled(0.5)
}

pub(crate) fn kkt_residual_from_parts(
    m: &Matrix,
    x: &Matrix,
    y: &Matrix,
    l: &Matrix,
    nu: &[f64],
) -> f64 {
    let lhs = scale_pairs(y, nu, 1.0); // MXÑ
    let rhs = apply_j(&x.matmul(l)); // JXL
    let raw = (&lhs - &rhs).frobenius_norm();
    raw / (1.0 + m.frobenius_norm() * nu.last().expect("weights non-empty"))
}
