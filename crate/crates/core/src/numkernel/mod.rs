//! Dense complex linear-algebra kernel the rest of the library builds on.
//!
//! Everything here is a pure function of its inputs; all types are immutable
//! after construction, so any operation may run concurrently from worker
//! threads. Iterative starts are deterministically seeded.

mod eig;
mod expm;
mod lu;
mod matrix;
mod qr;
mod svd;

pub use eig::{eigen_with_vectors, eigenvalues, EigenResult};
pub use expm::{matrix_exp, matrix_exp_bounded, DEFAULT_EXP_NORM_BOUND};
pub use lu::{solve_linear, LuFactors, PIVOT_REL_THRESHOLD};
pub use matrix::{vec_dot, vec_norm, ComplexMatrix};
pub use qr::PivotedQr;
pub use svd::{bidiagonal_svd_values, bidiagonalize_values, operator_norm, smallest_singular_value};
