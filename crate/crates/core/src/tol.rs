//! Centralized numerical tolerances.
//!
//! Every threshold that crosses a module boundary lives here with its
//! rationale, so a change is made once and the reasoning stays attached to
//! the number. Purely local constants (line-search shrink factor, sweep caps)
//! stay with their algorithm.

/// Relative asymmetry `‖A − Aᵀ‖_F / ‖A‖_F` admitted for "symmetric" inputs.
///
/// Matrices that went through a handful of well-conditioned products carry
/// asymmetry of a few ulps; 1e-12 admits those while rejecting anything that
/// was never symmetric to begin with.
pub const SYMMETRY_REL_TOL: f64 = 1e-12;

/// Pivot threshold for elimination, relative to `max|A|`.
///
/// A pivot below `1e-14 · max|A|` means the remaining block is singular to
/// roughly double precision; continuing would amplify noise by ~1e14.
pub const PIVOT_REL_TOL: f64 = 1e-14;

/// Default admission tolerance on the symplecticity residual `‖XᵀJX − J‖_F`
/// of a frame. Generators and the solver's feasibility maintenance keep
/// iterates two orders tighter, so an excursion to 1e-10 indicates real drift
/// rather than roundoff.
pub const FEASIBILITY_TOL: f64 = 1e-10;

/// Solver re-projects (symplectic Gram–Schmidt) once the iterate's residual
/// exceeds this. One order below [`FEASIBILITY_TOL`]: maintenance triggers
/// before admission would fail.
pub const REFEASIBILITY_THRESHOLD: f64 = 1e-11;

/// Largest input residual `resymplectify` accepts. Beyond ~1e-2 the column
/// pairing is no longer trustworthy and projection may land far away.
pub const RESYMPLECTIFY_MAX_RESIDUAL: f64 = 1e-2;

/// A pair whose symplectic pairing `x_jᵀ J x_{k+j}` falls below this is
/// treated as isotropic: normalization would divide by ~0.
pub const ISOTROPY_TOL: f64 = 1e-12;

/// Relative intra-pair gap above which the eigenvalues of −(M^½ J M^½)² are
/// declared to have failed pairing. They are doubly degenerate in exact
/// arithmetic; a gap of 1e-8 relative means half the significand is gone.
pub const PAIRING_REL_TOL: f64 = 1e-8;

/// Relative gap under which two symplectic eigenvalues are treated as tied
/// (ordering between them is then arbitrary and not a saddle witness).
pub const TIE_REL_TOL: f64 = 1e-8;

/// Default stationarity tolerance: the solver stops when the scaled residual
/// `‖MXÑ − JXL‖_F / (1 + ‖M‖_F ν_k)` falls below this.
pub const KKT_DEFAULT_TOL: f64 = 1e-8;

/// Default spacing of the automatic weight ladder `ν_j = 1 + jε`.
///
/// Small enough that the cost is within ~5 k ε of the plain trace sum, large
/// enough that distinct pairs stay separated in the optimizer's eyes.
pub const AUTO_EPS_DEFAULT: f64 = 0.05;

/// Step length of the saddle-escape perturbation along `X J₂ₖ P̃`.
/// Large enough to leave the saddle's attraction in one move, small enough
/// that the re-projection afterwards is a second-order correction.
pub const ESCAPE_STEP: f64 = 1e-2;

/// Escape attempts before the solver reports the saddle instead of looping.
pub const MAX_ESCAPES: usize = 5;
