//! Unistochastic matrices and the geometry of Birkhoff's polytope for small N.
//!
//! A bistochastic matrix `B` is unistochastic when `B_ij = |U_ij|²` for some
//! unitary `U`. The crate decides this exactly for N ≤ 3, handles N = 4 with
//! a mix of exact boundary tests, analytic families and a stochastic search,
//! and reproduces the combinatorics of the 4×4 polytope.

pub mod ensembles;
pub mod error;
pub mod io;
pub mod matcore;
pub mod polytope;
pub mod uni3;
pub mod uni4;

pub use error::{Error, Result};
pub use matcore::{
    distance, distance_to_center, entropy, BistochasticMatrix, ComplexMatrix, PermutationMatrix, RealMatrix,
    Tolerances, UnitaryMatrix,
};
