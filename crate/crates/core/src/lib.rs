//! Spectral computations for 1D non-selfadjoint Schrodinger operators with
//! complex polynomial potentials: discretization, eigenvalues, resolvent-norm
//! grids and pseudospectra, semigroup norm curves, Riesz projections, and the
//! scaling laws of the pseudospectral escape.

pub mod error;
pub mod numkernel;
pub mod operators;

pub use error::{Error, Result};
pub use numkernel::ComplexMatrix;
