//! Williamson normal form: the direct (non-iterative) diagonalization
//! `SᵀMS = diag(D, D)` of a symmetric positive-definite `M ∈ R^{2n×2n}` by a
//! symplectic congruence, and the symplectic spectrum extracted from it.
//!
//! Construction: with `Ã = M^{1/2} J M^{1/2}` (skew-symmetric, nonsingular),
//! the SPD matrix `−Ã²` has each `d_j²` as a doubly degenerate eigenvalue.
//! For a unit eigenvector `u` of `−Ã²` with eigenvalue `d²`, the partner
//! `v = −Ã u / d` is a unit vector orthogonal to `u`, and on the basis
//! `Q = [u₁ … u_n, v₁ … v_n]` the skew matrix takes the canonical form
//! `QᵀÃQ = [[0, D], [−D, 0]]`. Then
//!
//! `S = M^{−1/2} Q diag(D^{1/2}, D^{1/2})`
//!
//! satisfies both `SᵀMS = diag(D, D)` (directly) and `SᵀJS = J` (because
//! `M^{−1/2} J M^{−1/2} = −Ã⁻¹`, whose canonical form under the same `Q` is
//! `[[0, D⁻¹], [−D⁻¹, 0]]`). This routine is the independent oracle against
//! which the optimization path is validated, so it shares no code with it
//! beyond the dense kernels.

use crate::error::{Error, Result};
use crate::linalg::{power_from_eig, sym_eig, Matrix};
use crate::symplectic::{apply_j, residual_raw, SpdMatrix};
use crate::tol;

/// Result of [`williamson`]: the symplectic congruence `SᵀMS = diag(D, D)`.
#[derive(Debug, Clone)]
pub struct WilliamsonDecomposition {
    /// Symplectic diagonalizer, `2n×2n`.
    pub s: Matrix,
    /// Symplectic eigenvalues, ascending, length `n`.
    pub d: Vec<f64>,
    /// `‖SᵀJS − J‖_F`.
    pub symplectic_residual: f64,
    /// `‖SᵀMS − diag(D, D)‖_F`.
    pub diag_residual: f64,
    /// Worst relative intra-pair gap among the eigenvalues of `−Ã²`.
    pub pairing_residual: f64,
}

/// Result of [`symplectic_spectrum`].
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Symplectic eigenvalues, ascending, length `n`.
    pub values: Vec<f64>,
    /// Worst relative intra-pair gap among the eigenvalues of `−Ã²`; a value
    /// near 1e-8 or above means the input is too ill-conditioned for the
    /// pairing to be trusted.
    pub pairing_residual: f64,
}

/// Shared spectral groundwork: `M^{±1/2}`, `Ã`, and the eigendecomposition
/// of `−Ã²` with the pairing residual of its (theoretically double)
/// eigenvalues.
struct SkewSpectral {
    m_inv_half: Matrix,
    a_tilde: Matrix,
    /// `sqrt(λ)` of `−Ã²`, ascending, length `2n`.
    roots: Vec<f64>,
    /// Eigenvectors of `−Ã²`, columns matching `roots`.
    vectors: Matrix,
    pairing_residual: f64,
}

fn skew_spectral(m: &SpdMatrix) -> Result<SkewSpectral> {
    let eig = sym_eig(m.matrix())?;
    // power_from_eig rejects non-positive eigenvalues: definiteness check.
    let m_half = power_from_eig(&eig, 0.5)?;
    let m_inv_half = power_from_eig(&eig, -0.5)?;

    // Ã = M^{1/2} J M^{1/2}; enforce exact skewness against roundoff.
    let mut a_tilde = m_half.matmul(&apply_j(&m_half));
    let at = a_tilde.transpose();
    a_tilde = (&a_tilde - &at).scaled(0.5);

    // −Ã² is symmetric positive definite with doubly degenerate spectrum.
    let minus_a2 = a_tilde.matmul(&a_tilde).scaled(-1.0).symmetrized();
    let beig = sym_eig(&minus_a2)?;
    if beig.values[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: beig.values[0],
        });
    }
    let roots: Vec<f64> = beig.values.iter().map(|&v| v.max(0.0).sqrt()).collect();

    let two_n = roots.len();
    let mut pairing_residual = 0.0_f64;
    for j in 0..two_n / 2 {
        let lo = roots[2 * j];
        let hi = roots[2 * j + 1];
        let gap = (hi - lo).abs() / hi.max(f64::MIN_POSITIVE);
        pairing_residual = pairing_residual.max(gap);
    }

    Ok(SkewSpectral {
        m_inv_half,
        a_tilde,
        roots,
        vectors: beig.vectors,
        pairing_residual,
    })
}

/// Symplectic spectrum of `M`, ascending, without forming the diagonalizer.
///
/// Each symplectic eigenvalue is the mean of one matched pair of square
/// roots of eigenvalues of `−Ã²`.
pub fn symplectic_spectrum(m: &SpdMatrix) -> Result<SpectrumResult> {
    let sp = skew_spectral(m)?;
    let values = sp
        .roots
        .chunks_exact(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect();
    Ok(SpectrumResult {
        values,
        pairing_residual: sp.pairing_residual,
    })
}

/// Williamson normal form of `M`.
///
/// Errors: definiteness failure of `M`, and a degeneracy error when the
/// eigenvalues of `−Ã²` do not pair up within [`tol::PAIRING_REL_TOL`].
pub fn williamson(m: &SpdMatrix) -> Result<WilliamsonDecomposition> {
    let sp = skew_spectral(m)?;
    if sp.pairing_residual > tol::PAIRING_REL_TOL {
        return Err(Error::DegeneratePairing {
            residual: sp.pairing_residual,
            tolerance: tol::PAIRING_REL_TOL,
        });
    }

    let two_n = sp.roots.len();
    let n = two_n / 2;

    // Greedy pairing over eigenvector candidates in ascending eigenvalue
    // order. Each accepted u spawns its partner v = −Ãu/d; the candidate
    // that spans the other half of an already-finished invariant plane
    // collapses under projection and is skipped. Repeated symplectic
    // eigenvalues (eigenspaces of dimension 2m) work out naturally: the
    // span of finished (u, v) pairs is Ã-invariant, so projection stays
    // inside the eigenspace.
    let mut us: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut ds: Vec<f64> = Vec::with_capacity(n);
    for cand in 0..two_n {
        if us.len() == n {
            break;
        }
        let d = sp.roots[cand];
        let mut u = sp.vectors.col(cand);
        for _pass in 0..2 {
            for (ui, vi) in us.iter().zip(vs.iter()) {
                let cu = dot(&u, ui);
                let cv = dot(&u, vi);
                for (x, (a, b)) in u.iter_mut().zip(ui.iter().zip(vi.iter())) {
                    *x -= cu * a + cv * b;
                }
            }
        }
        let norm = norm2(&u);
        if norm < 1e-6 {
            continue; // candidate lives in an already-finished plane
        }
        for x in &mut u {
            *x /= norm;
        }
        // Partner: v = −Ãu/d, automatically unit and orthogonal to the
        // finished pairs; normalize once more for hygiene.
        let um = Matrix::from_rows(two_n, 1, &u).expect("column shape");
        let mut v = sp.a_tilde.matmul(&um).col(0);
        for x in &mut v {
            *x /= -d;
        }
        let vnorm = norm2(&v);
        for x in &mut v {
            *x /= vnorm;
        }
        us.push(u);
        vs.push(v);
        ds.push(d);
    }
    if us.len() != n {
        // Unreachable for inputs that passed the pairing gate; kept as a
        // structured failure rather than a panic.
        return Err(Error::DegeneratePairing {
            residual: sp.pairing_residual,
            tolerance: tol::PAIRING_REL_TOL,
        });
    }

    // Q = [u's | v's], S = M^{−1/2} Q diag(√D, √D).
    let q = Matrix::from_fn(
        two_n,
        two_n,
        |i, j| {
            if j < n {
                us[j][i]
            } else {
                vs[j - n][i]
            }
        },
    );
    let mut s = sp.m_inv_half.matmul(&q);
    for j in 0..n {
        let w = ds[j].sqrt();
        s.scale_col(j, w);
        s.scale_col(n + j, w);
    }

    let symplectic_residual = residual_raw(&s);
    let gram = s.transpose().matmul(m.matrix()).matmul(&s);
    let mut diag_residual = 0.0;
    for i in 0..two_n {
        for j in 0..two_n {
            let target = if i == j { ds[i % n] } else { 0.0 };
            let dlt = gram[(i, j)] - target;
            diag_residual += dlt * dlt;
        }
    }
    let diag_residual = diag_residual.sqrt();

    Ok(WilliamsonDecomposition {
        s,
        d: ds,
        symplectic_residual,
        diag_residual,
        pairing_residual: sp.pairing_residual,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
