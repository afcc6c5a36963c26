//! Deterministic generators: random symplectic matrices and planted
//! positive-definite problems with a known symplectic spectrum.
//!
//! All randomness flows from a ChaCha stream keyed by the caller's seed, so
//! results are bit-reproducible across platforms and runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{solve_linear, Matrix};
use crate::symplectic::{apply_j, mul_j_right, SpdMatrix};

/// Standard normal via Box–Muller on the uniform stream.
fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Random symplectic `2n×2n` matrix, deterministic in `seed`.
///
/// * `orthosymplectic = true`: embeds a random unitary `U = P + iQ` as
///   `[[P, Q], [−Q, P]]`, which is simultaneously orthogonal and symplectic.
///   `magnitude` is ignored on this path.
/// * `orthosymplectic = false`: `cay(J·A) · diag(C, C⁻¹)` with `A` random
///   symmetric and `C` random positive diagonal. `magnitude ≥ 0` controls the
///   spread of both factors (0 gives exactly the identity); the symmetric
///   generator is normalized by `√(2n)` so conditioning is governed by
///   `magnitude`, only weakly by `n`.
pub fn random_symplectic(
    n: usize,
    seed: u64,
    orthosymplectic: bool,
    magnitude: f64,
) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::InvalidArgument {
            what: "n must be at least 1".into(),
        });
    }
    if !magnitude.is_finite() || magnitude < 0.0 {
        return Err(Error::InvalidArgument {
            what: format!("magnitude must be finite and ≥ 0, got {magnitude}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if orthosymplectic {
        Ok(random_orthosymplectic(n, &mut rng))
    } else {
        random_general_symplectic(n, &mut rng, magnitude)
    }
}

/// Unitary-group embedding. A complex matrix `U = P + iQ` is unitary iff its
/// real embedding `R = [[P, Q], [−Q, P]]` is orthogonal, and every such
/// embedding commutes with `J`, hence `RᵀJR = RᵀRJ = J`.
fn random_orthosymplectic(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    // Complex Gaussian columns, orthonormalized by modified Gram–Schmidt
    // with one re-orthogonalization pass. Columns are (re, im) pairs.
    let mut re: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| gauss(rng)).collect())
        .collect();
    let mut im: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| gauss(rng)).collect())
        .collect();
    for j in 0..n {
        for _pass in 0..2 {
            for i in 0..j {
                // ⟨cᵢ, cⱼ⟩ = Σ conj(cᵢ)·cⱼ
                let mut hr = 0.0;
                let mut hi = 0.0;
                for t in 0..n {
                    hr += re[i][t] * re[j][t] + im[i][t] * im[j][t];
                    hi += re[i][t] * im[j][t] - im[i][t] * re[j][t];
                }
                for t in 0..n {
                    let (ar, ai) = (re[i][t], im[i][t]);
                    re[j][t] -= hr * ar - hi * ai;
                    im[j][t] -= hr * ai + hi * ar;
                }
            }
        }
        let norm = (0..n)
            .map(|t| re[j][t] * re[j][t] + im[j][t] * im[j][t])
            .sum::<f64>()
            .sqrt();
        for t in 0..n {
            re[j][t] /= norm;
            im[j][t] /= norm;
        }
    }
    Matrix::from_fn(2 * n, 2 * n, |r, c| {
        // Column-major complex columns: entry (t, j) of U is re[j][t] + i·im[j][t].
        match (r < n, c < n) {
            (true, true) => re[c][r],           // P
            (true, false) => im[c - n][r],      // Q
            (false, true) => -im[c][r - n],     // −Q
            (false, false) => re[c - n][r - n], // P
        }
    })
}

/// General symplectic via the Cayley transform of a Hamiltonian generator,
/// post-multiplied by a symplectic diagonal stretch.
fn random_general_symplectic(n: usize, rng: &mut ChaCha8Rng, magnitude: f64) -> Result<Matrix> {
    let two_n = 2 * n;
    let scale = magnitude / (two_n as f64).sqrt();
    let mut a = Matrix::zeros(two_n, two_n);
    for i in 0..two_n {
        for j in i..two_n {
            let g = gauss(rng) * scale;
            a[(i, j)] = g;
            a[(j, i)] = g;
        }
    }
    // cay(H) = (I − H/2)⁻¹(I + H/2) with H = J·A Hamiltonian; a symmetric A
    // keeps the pencil I ∓ H/2 uniformly nonsingular for moderate ‖A‖.
    let h = apply_j(&a);
    let id = Matrix::identity(two_n);
    let lhs = id.add_scaled(&h, -0.5);
    let rhs = id.add_scaled(&h, 0.5);
    let cay = solve_linear(&lhs, &rhs)?;
    // diag(C, C⁻¹) with log-normal C tied to the same magnitude.
    let mut out = cay;
    for j in 0..n {
        let c = (magnitude * gauss(rng)).exp();
        out.scale_col(j, c);
        out.scale_col(n + j, 1.0 / c);
    }
    Ok(out)
}

/// Symmetric positive-definite matrix with planted symplectic spectrum:
/// `M = S⁻ᵀ diag(D, D) S⁻¹` for `S = random_symplectic(n, seed, false, magnitude)`,
/// symmetrized before return. `symplectic_spectrum(M)` recovers the sorted
/// spectrum and the column pairs of `S` are the planted eigenvector pairs.
pub fn plant_spd(n: usize, spectrum: &[f64], seed: u64, magnitude: f64) -> Result<SpdMatrix> {
    plant_spd_with_basis(n, spectrum, seed, magnitude).map(|(m, _)| m)
}

/// [`plant_spd`] variant that also returns the symplectic diagonalizer `S`
/// (the planted eigenbasis), which test harnesses and the saddle-construction
/// paths need.
pub fn plant_spd_with_basis(
    n: usize,
    spectrum: &[f64],
    seed: u64,
    magnitude: f64,
) -> Result<(SpdMatrix, Matrix)> {
    if spectrum.len() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("spectrum of length {n}"),
            got: format!("{}", spectrum.len()),
        });
    }
    for &d in spectrum {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::InvalidArgument {
                what: format!("planted spectrum must be positive and finite, got {d}"),
            });
        }
    }
    let s = random_symplectic(n, seed, false, magnitude)?;
    // S⁻¹ = Jᵀ Sᵀ J, exact up to the transposes: no linear solve involved.
    let s_inv = apply_j_transpose_square(&mul_j_right(&s.transpose()));
    // M = S⁻ᵀ diag(D,D) S⁻¹, built as (diag·S⁻¹) premultiplied by S⁻ᵀ.
    let mut scaled = s_inv.clone();
    for i in 0..n {
        let d = spectrum[i];
        scale_row(&mut scaled, i, d);
        scale_row(&mut scaled, n + i, d);
    }
    let m = s_inv.transpose().matmul(&scaled).symmetrized();
    Ok((SpdMatrix::new(m)?, s))
}

fn apply_j_transpose_square(x: &Matrix) -> Matrix {
    let mut out = apply_j(x);
    out.scale_mut(-1.0);
    out
}

fn scale_row(m: &mut Matrix, i: usize, s: f64) {
    for j in 0..m.cols() {
        m[(i, j)] *= s;
    }
}
