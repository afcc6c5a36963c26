//! Critical-point classification and closed-form verification.
//!
//! Critical points of the weighted trace cost are exactly the symplectic
//! eigenvector sets of `M`: each pair of columns spans an eigenspace for some
//! symplectic eigenvalue `d_{iⱼ}`. Its cost is `2Σⱼ d_{iⱼ}νⱼ`, so every
//! critical value is a weighted selection of eigenvalues, the global minimum
//! is the rearrangement pairing (smallest eigenvalues against the largest
//! weights, hence pair values *nonincreasing* in column order), and a
//! critical point whose pair values ascend somewhere is a saddle: swapping
//! the offending pairs lowers the cost, and the pair-swap direction
//! `Z = XJ₂ₖP̃_{αβ}` exhibits the negative curvature explicitly. The
//! certificate computed here evaluates the Hessian form along that direction
//! and cross-checks it against the closed form
//!
//! `4((d_{i_β}ν_α + d_{i_α}ν_β) − (d_{i_α}ν_α + d_{i_β}ν_β))
//!   = 4(d_{i_β} − d_{i_α})(ν_α − ν_β)`,
//!
//! negative precisely when `d_{i_α} < d_{i_β}` (weights increase strictly).
//!
//! The brute-force side — [`enumerate_critical_values`] over all ordered
//! eigenvalue selections, and [`min_value_formula`] for the rearrangement
//! minimum — gives the oracle values the optimizer is tested against.

use crate::brockett::{brockett_value, hessian_form, multiplier_and_kkt, WeightSpec};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::optimizer::order_violation;
use crate::symplectic::{mul_j_right, SpdMatrix, SymplecticFrame};

/// Cap on the number of ordered selections [`enumerate_critical_values`]
/// will materialize.
const SELECTION_LIMIT: u128 = 1_000_000;

/// The pair permutation `P̃_{αβ}`: identity with columns `α, β` swapped and
/// columns `k+α, k+β` swapped (0-based pair indices).
///
/// `P̃` is symmetric, involutive, and symplectic — right-multiplying a frame
/// by it swaps two column pairs without disturbing feasibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairPermutation {
    k: usize,
    alpha: usize,
    beta: usize,
}

impl PairPermutation {
    /// Requires `alpha < beta < k`.
    pub fn new(k: usize, alpha: usize, beta: usize) -> Result<Self> {
        if alpha >= beta || beta >= k {
            return Err(Error::InvalidArgument {
                what: format!(
                    "pair swap needs alpha < beta < k, got ({alpha}, {beta}) with k = {k}"
                ),
            });
        }
        Ok(PairPermutation { k, alpha, beta })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    /// Materializes `P̃`, `2k×2k`.
    pub fn matrix(&self) -> Matrix {
        let mut p = Matrix::identity(2 * self.k);
        p.swap_cols(self.alpha, self.beta);
        p.swap_cols(self.k + self.alpha, self.k + self.beta);
        p
    }

    /// `X · P̃` without materializing `P̃`.
    pub fn apply_right(&self, x: &Matrix) -> Matrix {
        assert_eq!(x.cols(), 2 * self.k, "pair permutation order mismatch");
        let mut out = x.clone();
        out.swap_cols(self.alpha, self.beta);
        out.swap_cols(self.k + self.alpha, self.k + self.beta);
        out
    }
}

/// Verdict of [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Critical with pair values in nonincreasing column order. Consistent
    /// with global minimality; confirming it requires comparing against the
    /// spectrum, which local data cannot do.
    GlobalMinCandidate,
    /// Critical with some pair values ascending: provably not a local
    /// minimizer.
    Saddle,
    /// KKT residual above the requested tolerance.
    NonCritical,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::GlobalMinCandidate => "global-min-candidate",
            Classification::Saddle => "saddle",
            Classification::NonCritical => "non-critical",
        };
        f.write_str(s)
    }
}

/// Negative-curvature witness for a saddle: the Hessian form value along the
/// swap direction for pairs `(alpha, beta)`.
#[derive(Debug, Clone, Copy)]
pub struct SaddleCertificate {
    pub alpha: usize,
    pub beta: usize,
    pub hessian_value: f64,
}

/// What [`classify`] found at a frame.
#[derive(Debug, Clone)]
pub struct CriticalPointReport {
    pub kkt_residual: f64,
    pub is_critical: bool,
    /// Pair values `(B_{jj} + B_{k+j,k+j})/2`, `B = XᵀMX`, in column order.
    pub pair_values: Vec<f64>,
    pub order_nonincreasing: bool,
    pub classification: Classification,
    /// Present exactly when `classification` is `Saddle`.
    pub certificate: Option<SaddleCertificate>,
    pub f_value: f64,
}

/// Pair values in column order (not sorted).
fn column_pair_values(m: &SpdMatrix, x: &SymplecticFrame) -> Vec<f64> {
    let k = x.k();
    let b = x
        .matrix()
        .transpose()
        .matmul(&m.matrix().matmul(x.matrix()));
    (0..k)
        .map(|j| 0.5 * (b[(j, j)] + b[(k + j, k + j)]))
        .collect()
}

/// Classifies a feasible frame against the critical-point taxonomy.
///
/// `tolerance` is the KKT threshold below which the frame counts as
/// critical. Saddles come with a certificate for the worst-ordered pair.
pub fn classify(
    m: &SpdMatrix,
    x: &SymplecticFrame,
    w: &WeightSpec,
    tolerance: f64,
) -> Result<CriticalPointReport> {
    let (_, kkt_residual) = multiplier_and_kkt(m, x, w)?;
    let f_value = brockett_value(m, x, w)?;
    let pair_values = column_pair_values(m, x);
    let violation = order_violation(&pair_values);
    let order_nonincreasing = violation.is_none();
    let is_critical = kkt_residual <= tolerance;

    let (classification, certificate) = if !is_critical {
        (Classification::NonCritical, None)
    } else {
        match violation {
            None => (Classification::GlobalMinCandidate, None),
            Some((alpha, beta)) => {
                let cert = saddle_certificate(m, x, w, alpha, beta, tolerance)?;
                (Classification::Saddle, Some(cert))
            }
        }
    };
    Ok(CriticalPointReport {
        kkt_residual,
        is_critical,
        pair_values,
        order_nonincreasing,
        classification,
        certificate,
        f_value,
    })
}

/// Evaluates the Hessian form along the swap direction `Z = XJ₂ₖP̃_{αβ}` at
/// a critical point and cross-checks it against the closed form
/// `4(d_{i_β} − d_{i_α})(ν_α − ν_β)`.
///
/// Errors if the frame is not critical within `tolerance` (the closed form
/// only holds at critical points) or if the two evaluations disagree — the
/// latter would mean the Hessian machinery and the theory have diverged,
/// which no tolerance should paper over.
pub fn saddle_certificate(
    m: &SpdMatrix,
    x: &SymplecticFrame,
    w: &WeightSpec,
    alpha: usize,
    beta: usize,
    tolerance: f64,
) -> Result<SaddleCertificate> {
    let perm = PairPermutation::new(w.k(), alpha, beta)?;
    let (l, kkt) = multiplier_and_kkt(m, x, w)?;
    if kkt > tolerance {
        return Err(Error::NotCritical {
            residual: kkt,
            tolerance,
        });
    }
    let z = perm.apply_right(&mul_j_right(x.matrix()));
    let h = hessian_form(m, x, &l, w, &z)?;
    debug_assert!(
        h.tangency_residual <= 1e-10,
        "swap direction should be tangent"
    );

    let d = column_pair_values(m, x);
    let (da, db) = (d[alpha], d[beta]);
    let (na, nb) = (w.nu()[alpha], w.nu()[beta]);
    let closed_form = 4.0 * ((db * na + da * nb) - (da * na + db * nb));
    let scale = closed_form.abs().max(h.value.abs()).max(1.0);
    if (h.value - closed_form).abs() > 1e-8 * scale {
        return Err(Error::CertificateMismatch {
            computed: h.value,
            closed_form,
        });
    }
    Ok(SaddleCertificate {
        alpha,
        beta,
        hessian_value: h.value,
    })
}

/// Rearrangement minimum `2(d₁ν_k + d₂ν_{k−1} + … + d_kν₁)` for the `k`
/// smallest symplectic eigenvalues `d`, ascending.
pub fn min_value_formula(d_smallest_ascending: &[f64], w: &WeightSpec) -> Result<f64> {
    let k = w.k();
    if d_smallest_ascending.len() != k {
        return Err(Error::DimensionMismatch {
            expected: format!("{k} eigenvalues to match the weights"),
            got: format!("{}", d_smallest_ascending.len()),
        });
    }
    for pair in d_smallest_ascending.windows(2) {
        if pair[1] < pair[0] {
            return Err(Error::InvalidArgument {
                what: format!("eigenvalues must ascend, got {} after {}", pair[1], pair[0]),
            });
        }
    }
    if d_smallest_ascending.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::InvalidArgument {
            what: "eigenvalues must be positive".into(),
        });
    }
    Ok(2.0
        * d_smallest_ascending
            .iter()
            .zip(w.nu().iter().rev())
            .map(|(d, nu)| d * nu)
            .sum::<f64>())
}

/// Every critical value `2Σⱼ d_{iⱼ}νⱼ` over ordered selections of `k`
/// distinct indices from the full spectrum, sorted ascending (duplicates
/// kept — distinct selections can share a value).
///
/// The minimum of this multiset equals [`min_value_formula`] on the `k`
/// smallest eigenvalues; that identity is the rearrangement inequality made
/// computational, and tests lean on it.
pub fn enumerate_critical_values(d_all: &[f64], w: &WeightSpec, k: usize) -> Result<Vec<f64>> {
    let n = d_all.len();
    if k != w.k() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} weights", k),
            got: format!("{}", w.k()),
        });
    }
    if k < 1 || k > n {
        return Err(Error::InvalidArgument {
            what: format!("need 1 ≤ k ≤ n, got k = {k} with n = {n}"),
        });
    }
    if d_all.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
        return Err(Error::InvalidArgument {
            what: "spectrum entries must be finite and positive".into(),
        });
    }
    let mut count: u128 = 1;
    for j in 0..k {
        count = count.saturating_mul((n - j) as u128);
        if count > SELECTION_LIMIT {
            return Err(Error::SelectionOverflow {
                requested: count,
                limit: SELECTION_LIMIT,
            });
        }
    }

    let mut values = Vec::with_capacity(count as usize);
    let mut used = vec![false; n];
    let mut partial = 0.0;
    fn recurse(
        d_all: &[f64],
        nu: &[f64],
        depth: usize,
        used: &mut [bool],
        partial: &mut f64,
        values: &mut Vec<f64>,
    ) {
        if depth == nu.len() {
            values.push(2.0 * *partial);
            return;
        }
        for i in 0..d_all.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            *partial += d_all[i] * nu[depth];
            recurse(d_all, nu, depth + 1, used, partial, values);
            *partial -= d_all[i] * nu[depth];
            used[i] = false;
        }
    }
    recurse(d_all, w.nu(), 0, &mut used, &mut partial, &mut values);
    values.sort_by(f64::total_cmp);
    Ok(values)
}
