//! Koszul cohomology of truncated section rings over prime fields.

pub mod error;
pub mod ff_linalg;
pub mod graded_modules;
pub mod koszul;
pub mod multilinear;
pub mod projection;
pub mod scenarios;

pub use error::{Error, Result};
pub use ff_linalg::{in_span, kernel_basis, random_prime, rank, Prime, PrimeFieldMatrix, SparseVec, VectorSpaceBasis};
