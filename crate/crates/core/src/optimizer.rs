//! Feasible-point minimization of the weighted trace cost over the
//! symplectic Stiefel manifold `{X : XᵀJX = J₂ₖ}`.
//!
//! Search directions have the form `Ẋ = (JA)X` with `A` symmetric, i.e. the
//! generator `JA` is Hamiltonian. The symplectic group acts transitively on
//! frames, so these directions span the whole tangent space, and the Cayley
//! update
//!
//! `X⁺ = cay(tJA)·X = (I − (t/2)JA)⁻¹ (I + (t/2)JA) X`
//!
//! is a left-multiplication by a symplectic matrix: feasibility is preserved
//! by construction, up to linear-solve roundoff, instead of by a retraction
//! error argument. The specific generator used here is
//!
//! `A = −sym(X ∇f(X)ᵀ J) = JP + (JP)ᵀ`,  `P = MXÑXᵀ`,
//!
//! which gives `d/dt f(cay(tJA)X)|₀ = −‖A‖_F²` (strict descent away from
//! critical points) and vanishes exactly at critical points. Step lengths are
//! seeded by alternating Barzilai–Borwein formulas and safeguarded by a
//! nonmonotone Armijo backtracking line search.
//!
//! Critical points whose pair values are not in nonincreasing column order
//! are saddles, not minimizers; the solver escapes them by perturbing along
//! the pair-swap direction `Z = XJ₂ₖP̃_{αβ}`, which carries the negative
//! curvature, and re-entering the descent loop.

use std::collections::VecDeque;

use crate::brockett::{multiplier_from_gram, scale_pairs, value_from_product, WeightSpec};
use crate::error::{Error, Result};
use crate::linalg::{solve_linear, Matrix};
use crate::symplectic::{
    apply_j, mul_j_right, random_symplectic, residual_raw, resymplectify, select_pairs, SpdMatrix,
    SymplecticFrame,
};
use crate::tol;

/// Smallest step the backtracking line search will try before declaring
/// stagnation.
const MIN_STEP: f64 = 1e-16;
/// Armijo sufficient-decrease constant.
const ARMIJO_C: f64 = 1e-4;
/// Safeguard interval for line-search step seeds. The upper end must admit
/// steps of order `1/λ_min(Hess)`: near-degenerate weights `ν_j = 1 + jε`
/// flatten the landscape to curvature `O(ε)`, so useful steps reach `1/ε`.
const BB_CLAMP: (f64, f64) = (1e-10, 1e6);

/// Knobs for [`solve`]. `Default` gives the reference configuration.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Iteration cap (accepted descent steps).
    pub max_iter: usize,
    /// Stop when the scaled KKT residual falls to this level.
    pub tol: f64,
    /// Step length used before any curvature information exists.
    pub step_init: f64,
    /// Alternate BB1/BB2 step seeds; `false` uses BB1 only.
    pub alternate_bb: bool,
    /// Window length for the nonmonotone line-search reference value.
    pub nonmonotone_memory: usize,
    /// Re-symplectify the iterate when its feasibility residual drifts
    /// above this.
    pub refeasibility_threshold: f64,
    /// Seed for the random initial frame.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iter: 5000,
            tol: tol::KKT_DEFAULT_TOL,
            step_init: 1e-2,
            alternate_bb: true,
            nonmonotone_memory: 10,
            refeasibility_threshold: tol::REFEASIBILITY_THRESHOLD,
            seed: 0,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iter < 1 {
            return Err(Error::InvalidArgument {
                what: "max_iter must be at least 1".into(),
            });
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument {
                what: format!("tol must be positive, got {}", self.tol),
            });
        }
        if !(self.step_init > 0.0) || !self.step_init.is_finite() {
            return Err(Error::InvalidArgument {
                what: format!(
                    "step_init must be finite and positive, got {}",
                    self.step_init
                ),
            });
        }
        if self.nonmonotone_memory < 1 {
            return Err(Error::InvalidArgument {
                what: "nonmonotone_memory must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Eigenpair data read off a frame: per-pair value estimates and residuals.
#[derive(Debug, Clone)]
pub struct ExtractedPairs {
    /// Pair value estimates, ascending.
    pub values: Vec<f64>,
    /// The input frame with pairs reordered so pair `j` carries `values[j]`.
    pub frame: SymplecticFrame,
    /// `‖XᵀMX − diag(D,D)‖_F / ‖XᵀMX‖_F` for `D` the extracted values:
    /// near zero exactly when the frame is an eigenvector set.
    pub offdiag_residual: f64,
    /// Per-pair residual `‖M[xⱼ, x_{k+j}] − J[xⱼ, x_{k+j}]·[[0,−dⱼ],[dⱼ,0]]‖_F`.
    pub pair_residuals: Vec<f64>,
}

/// Outcome of a [`solve`] run.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Recovered symplectic eigenvalue estimates, ascending.
    pub values: Vec<f64>,
    /// Final frame, pairs ordered to match `values`.
    pub frame: SymplecticFrame,
    /// Cost at the final iterate. The iterate pairs the smallest values with
    /// the largest weights, so at a global minimizer this is
    /// `2(d₁ν_k + … + d_kν₁)`.
    pub f_value: f64,
    /// Scaled KKT residual at the final iterate.
    pub kkt_residual: f64,
    /// Off-diagonal mass of `XᵀMX` relative to its norm (see
    /// [`ExtractedPairs::offdiag_residual`]).
    pub offdiag_residual: f64,
    /// Per-pair eigen-residuals, matching `values` order.
    pub pair_residuals: Vec<f64>,
    /// Accepted descent steps.
    pub iterations: usize,
    /// Whether the KKT tolerance was met.
    pub converged: bool,
    /// Whether the line search ran out of step lengths before convergence.
    pub stagnated: bool,
    /// Saddle-escape perturbations taken.
    pub escapes: usize,
    /// Per-iterate `(f, kkt_residual)` history, including the start point
    /// and each escape restart.
    pub trace: Vec<(f64, f64)>,
}

/// Random feasible starting frame: the first `k` pair columns of a random
/// orthosymplectic matrix. Deterministic in `seed`.
pub fn initial_frame(n: usize, k: usize, seed: u64) -> Result<SymplecticFrame> {
    if k < 1 || k > n {
        return Err(Error::InvalidArgument {
            what: format!("initial frame needs 1 ≤ k ≤ n, got k = {k}, n = {n}"),
        });
    }
    let r = random_symplectic(n, seed, true, 1.0)?;
    let indices: Vec<usize> = (0..k).collect();
    // Selecting pair columns of R equals R · (canonical frame).
    let x = select_pairs(&r, &indices)?;
    SymplecticFrame::new(x)
}

/// Everything the solver needs at one iterate, computed from one `MX`
/// product.
struct Evaluation {
    f: f64,
    /// Pair value estimates in *column* order (not sorted).
    pair_values: Vec<f64>,
    /// Descent generator `A = JP + (JP)ᵀ`, symmetric `2n×2n`.
    a: Matrix,
    a_norm_sq: f64,
    /// Tangent direction `(JA)X`.
    dir: Matrix,
    kkt: f64,
}

fn evaluate(m: &Matrix, x: &Matrix, nu: &[f64], m_norm: f64) -> Evaluation {
    let y = m.matmul(x);
    finish_evaluation(x, y, nu, m_norm)
}

fn finish_evaluation(x: &Matrix, y: Matrix, nu: &[f64], m_norm: f64) -> Evaluation {
    let k = nu.len();
    let f = value_from_product(x, &y, nu);
    let yw = scale_pairs(&y, nu, 1.0); // MXÑ
    let p = yw.matmul(&x.transpose()); // MXÑXᵀ
    let jp = apply_j(&p);
    let a = &jp + &jp.transpose();
    let a_norm_sq = a.frobenius_dot(&a);
    let dir = apply_j(&a.matmul(x));

    let gram = x.transpose().matmul(&y); // XᵀMX
    let mut pair_values = Vec::with_capacity(k);
    for j in 0..k {
        pair_values.push(0.5 * (gram[(j, j)] + gram[(k + j, k + j)]));
    }
    let l = multiplier_from_gram(&gram, nu);
    let lhs = yw;
    let rhs = apply_j(&x.matmul(&l));
    let kkt = (&lhs - &rhs).frobenius_norm() / (1.0 + m_norm * nu[k - 1]);
    Evaluation {
        f,
        pair_values,
        a,
        a_norm_sq,
        dir,
        kkt,
    }
}

/// One Cayley trial: `(I − (t/2)JA)⁻¹ (X + (t/2)(JA)X)`.
///
/// A singular solve (step far too large) surfaces as `Err(Singular)`, which
/// the line search treats as a rejection.
fn cayley_step(x: &Matrix, a: &Matrix, dir: &Matrix, t: f64) -> Result<Matrix> {
    let dim = a.rows();
    let mut lhs = apply_j(a).scaled(-t / 2.0);
    for i in 0..dim {
        lhs[(i, i)] += 1.0;
    }
    let rhs = x.add_scaled(dir, t / 2.0);
    solve_linear(&lhs, &rhs)
}

/// One descent update with fixed step `t ≥ 0`.
///
/// Returns the new frame, its cost, and the directional derivative
/// `−‖A‖_F²` of the cost along the search curve at the current point. The
/// derivative is zero exactly at critical points, so it doubles as a
/// criticality diagnostic: `‖A‖_F = sqrt(−directional_derivative)`.
pub fn descent_step(
    m: &SpdMatrix,
    x: &SymplecticFrame,
    w: &WeightSpec,
    t: f64,
) -> Result<(SymplecticFrame, f64, f64)> {
    crate::brockett::check_problem_dims(m, x, w)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument {
            what: format!("step length must be finite and nonnegative, got {t}"),
        });
    }
    let m_norm = m.matrix().frobenius_norm();
    let ev = evaluate(m.matrix(), x.matrix(), w.nu(), m_norm);
    let x_new = cayley_step(x.matrix(), &ev.a, &ev.dir, t)?;
    let f_new = value_from_product(&x_new, &m.matrix().matmul(&x_new), w.nu());
    let frame = SymplecticFrame::new(x_new)?;
    Ok((frame, f_new, -ev.a_norm_sq))
}

/// Largest-gap violation of nonincreasing pair order, if any.
///
/// Returns `(α, β)` with `α < β` and `v_α < v_β` beyond the relative tie
/// tolerance; ties are treated as correctly ordered (any order inside an
/// eigenvalue cluster is acceptable).
pub(crate) fn order_violation(values: &[f64]) -> Option<(usize, usize)> {
    let mut worst: Option<(usize, usize, f64)> = None;
    for a in 0..values.len() {
        for b in (a + 1)..values.len() {
            let gap = values[b] - values[a];
            let scale = values[a].abs().max(values[b].abs()).max(1e-300);
            if gap > tol::TIE_REL_TOL * scale {
                if worst.map_or(true, |(_, _, g)| gap > g) {
                    worst = Some((a, b, gap));
                }
            }
        }
    }
    worst.map(|(a, b, _)| (a, b))
}

/// Saddle-escape direction `Z = XJ₂ₖP̃_{αβ}`: right-multiplying by `J₂ₖ`
/// maps each pair into its J-rotated copy, and the pair permutation routes
/// pair α's rotation through pair β's slot and vice versa.
fn escape_direction(x: &Matrix, k: usize, alpha: usize, beta: usize) -> Matrix {
    let mut z = mul_j_right(x);
    z.swap_cols(alpha, beta);
    z.swap_cols(k + alpha, k + beta);
    z
}

/// Minimizes the cost from a random starting frame (see [`initial_frame`]).
///
/// `k` is the number of eigenvalue pairs requested and must match
/// `w.k()`; it is taken explicitly so that mismatched weight lists are
/// caught here rather than deep in the loop.
pub fn solve(m: &SpdMatrix, k: usize, w: &WeightSpec, cfg: &SolverConfig) -> Result<EigenResult> {
    if w.k() != k {
        return Err(Error::DimensionMismatch {
            expected: format!("{k} weights"),
            got: format!("{}", w.k()),
        });
    }
    if k < 1 || k > m.n() {
        return Err(Error::InvalidArgument {
            what: format!("need 1 ≤ k ≤ n, got k = {k} with n = {}", m.n()),
        });
    }
    let x0 = initial_frame(m.n(), k, cfg.seed)?;
    solve_from(m, x0, w, cfg)
}

/// Minimizes the cost starting from a caller-supplied feasible frame.
///
/// The loop alternates Barzilai–Borwein step seeds with nonmonotone Armijo
/// backtracking (reference value: max of the last `nonmonotone_memory`
/// costs), re-symplectifies on feasibility drift, and applies at most
/// [`tol::MAX_ESCAPES`] saddle-escape perturbations when it lands on a
/// critical point whose pair values are out of order.
pub fn solve_from(
    m: &SpdMatrix,
    x0: SymplecticFrame,
    w: &WeightSpec,
    cfg: &SolverConfig,
) -> Result<EigenResult> {
    cfg.validate()?;
    crate::brockett::check_problem_dims(m, &x0, w)?;
    let mm = m.matrix();
    let m_norm = mm.frobenius_norm();
    let nu = w.nu();

    let mut x = x0.into_matrix();
    let mut ev = evaluate(mm, &x, nu, m_norm);
    let mut trace = vec![(ev.f, ev.kkt)];
    let mut history: VecDeque<f64> = VecDeque::with_capacity(cfg.nonmonotone_memory);
    history.push_back(ev.f);
    // (previous iterate, previous direction) for the BB quotients.
    let mut prev: Option<(Matrix, Matrix)> = None;

    let mut iterations = 0;
    let mut escapes = 0;
    let mut converged = false;
    let mut stagnated = false;
    // Last accepted step length; seeds the search when the BB quotients are
    // unusable (see below).
    let mut t_last = cfg.step_init;

    loop {
        if ev.kkt <= cfg.tol {
            match order_violation(&ev.pair_values) {
                None => {
                    converged = true;
                    break;
                }
                Some((alpha, beta)) if escapes < tol::MAX_ESCAPES => {
                    // Critical but misordered: a saddle. Kick along the
                    // pair-swap direction, which carries negative curvature,
                    // restore feasibility, and restart the step machinery.
                    let z = escape_direction(&x, w.k(), alpha, beta);
                    let perturbed = x.add_scaled(&z, tol::ESCAPE_STEP);
                    x = resymplectify(&perturbed)?.into_matrix();
                    ev = evaluate(mm, &x, nu, m_norm);
                    history.clear();
                    history.push_back(ev.f);
                    prev = None;
                    t_last = cfg.step_init;
                    escapes += 1;
                    trace.push((ev.f, ev.kkt));
                    continue;
                }
                // Escape budget exhausted: accept the critical point; the
                // classifier downstream will still label it a saddle.
                Some(_) => {
                    converged = true;
                    break;
                }
            }
        }
        if iterations >= cfg.max_iter {
            break;
        }

        // Step seed: BB quotients from the last accepted move, else the
        // configured initial step. The direction plays the role of the
        // negative gradient, so y uses the sign-flipped difference.
        let mut t = match &prev {
            Some((x_prev, dir_prev)) => {
                let s = &x - x_prev;
                let y = dir_prev - &ev.dir;
                let sy = s.frobenius_dot(&y);
                if sy <= 0.0 {
                    // ⟨s, y⟩ ≤ 0 marks a locally nonconvex stretch — the walk
                    // away from a saddle, typically — where both quotients are
                    // meaningless. A fixed small seed would crawl through it
                    // at O(step_init) per iteration, so grow the last accepted
                    // step instead and let the backtracking halve any
                    // overshoot.
                    (2.0 * t_last).clamp(BB_CLAMP.0, BB_CLAMP.1)
                } else {
                    let use_bb2 = cfg.alternate_bb && iterations % 2 == 1;
                    let raw = if use_bb2 {
                        sy / y.frobenius_dot(&y)
                    } else {
                        s.frobenius_dot(&s) / sy
                    };
                    raw.clamp(BB_CLAMP.0, BB_CLAMP.1)
                }
            }
            None => cfg.step_init,
        };

        let f_ref = history.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut accepted = None;
        while t >= MIN_STEP {
            match cayley_step(&x, &ev.a, &ev.dir, t) {
                Ok(xt) => {
                    let yt = mm.matmul(&xt);
                    let ft = value_from_product(&xt, &yt, nu);
                    if ft <= f_ref - ARMIJO_C * t * ev.a_norm_sq {
                        accepted = Some((xt, yt));
                        break;
                    }
                }
                // Step too large for the Cayley solve: reject and shrink.
                Err(Error::Singular { .. }) => {}
                Err(e) => return Err(e),
            }
            t *= 0.5;
        }
        let Some((mut xt, mut yt)) = accepted else {
            stagnated = true;
            break;
        };
        t_last = t;

        if residual_raw(&xt) > cfg.refeasibility_threshold {
            xt = resymplectify(&xt)?.into_matrix();
            yt = mm.matmul(&xt);
        }
        let old_x = std::mem::replace(&mut x, xt);
        let old_ev = std::mem::replace(&mut ev, finish_evaluation(&x, yt, nu, m_norm));
        prev = Some((old_x, old_ev.dir));
        if history.len() == cfg.nonmonotone_memory {
            history.pop_front();
        }
        history.push_back(ev.f);
        iterations += 1;
        trace.push((ev.f, ev.kkt));
    }

    let frame = SymplecticFrame::new(x)?;
    let extracted = extract_eigenpairs(m, &frame)?;
    Ok(EigenResult {
        values: extracted.values,
        frame: extracted.frame,
        f_value: ev.f,
        kkt_residual: ev.kkt,
        offdiag_residual: extracted.offdiag_residual,
        pair_residuals: extracted.pair_residuals,
        iterations,
        converged,
        stagnated,
        escapes,
        trace,
    })
}

/// Reads eigenpair estimates off a feasible frame.
///
/// Pair `j`'s value is the average of the two matching diagonal entries of
/// `B = XᵀMX`; pairs are then reordered ascending (a pair permutation, which
/// preserves feasibility exactly). The off-diagonal residual measures how far
/// `B` is from `diag(D,D)` form — small only at eigenvector sets — and the
/// per-pair residuals check the defining relations `Mxⱼ = dⱼJx_{k+j}`,
/// `Mx_{k+j} = −dⱼJxⱼ` directly.
pub fn extract_eigenpairs(m: &SpdMatrix, x: &SymplecticFrame) -> Result<ExtractedPairs> {
    if x.n() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: format!("frame with {} rows", m.dim()),
            got: format!("{} rows", 2 * x.n()),
        });
    }
    let k = x.k();
    let b = x
        .matrix()
        .transpose()
        .matmul(&m.matrix().matmul(x.matrix()));
    let mut order: Vec<usize> = (0..k).collect();
    let column_values: Vec<f64> = (0..k)
        .map(|j| 0.5 * (b[(j, j)] + b[(k + j, k + j)]))
        .collect();
    order.sort_by(|&a, &c| column_values[a].total_cmp(&column_values[c]));

    let values: Vec<f64> = order.iter().map(|&j| column_values[j]).collect();
    let mut xs = Matrix::zeros(x.matrix().rows(), 2 * k);
    for (slot, &j) in order.iter().enumerate() {
        xs.set_col(slot, &x.matrix().col(j));
        xs.set_col(k + slot, &x.matrix().col(k + j));
    }

    // Off-diagonal mass: B minus the diag(D,D) pattern built from the
    // extracted values. Pair permutations conjugate B, so norms computed in
    // the original column order are identical.
    let mut dev = b.clone();
    for (slot, &j) in order.iter().enumerate() {
        dev[(j, j)] -= values[slot];
        dev[(k + j, k + j)] -= values[slot];
    }
    let b_norm = b.frobenius_norm();
    let offdiag_residual = dev.frobenius_norm() / if b_norm > 0.0 { b_norm } else { 1.0 };

    let ys = m.matrix().matmul(&xs);
    let mut pair_residuals = Vec::with_capacity(k);
    for j in 0..k {
        let u = xs.col(j);
        let v = xs.col(k + j);
        let mu = ys.col(j);
        let mv = ys.col(k + j);
        let ju = j_vec(&u);
        let jv = j_vec(&v);
        let mut acc = 0.0;
        for i in 0..u.len() {
            let r1 = mu[i] - values[j] * jv[i];
            let r2 = mv[i] + values[j] * ju[i];
            acc += r1 * r1 + r2 * r2;
        }
        pair_residuals.push(acc.sqrt());
    }

    let frame = SymplecticFrame::from_trusted(xs);
    Ok(ExtractedPairs {
        values,
        frame,
        offdiag_residual,
        pair_residuals,
    })
}

/// `J v` for a stacked vector `v = (top; bottom)`: `(bottom; −top)`.
fn j_vec(v: &[f64]) -> Vec<f64> {
    let n = v.len() / 2;
    let mut out = Vec::with_capacity(v.len());
    out.extend_from_slice(&v[n..]);
    out.extend(v[..n].iter().map(|&t| -t));
    out
}
