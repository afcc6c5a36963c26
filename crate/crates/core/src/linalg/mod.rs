//! Self-contained dense real linear algebra: the matrix type, a symmetric
//! eigensolver, SPD fractional powers, and a pivoted linear solve. Everything
//! above (symplectic structure, optimization) is built from these kernels.

mod eigen;
mod lu;
mod matrix;

pub use eigen::{spd_power, sym_eig, SymEigDecomp};
pub use lu::solve_linear;
pub use matrix::Matrix;

pub(crate) use eigen::power_from_eig;
