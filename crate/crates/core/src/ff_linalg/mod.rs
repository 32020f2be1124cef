//! Exact linear algebra over prime fields.

mod echelon;
mod matrix;
mod prime;
mod vector;

use serde::{Deserialize, Serialize};

pub use echelon::{eliminate, Echelon, Elimination, DENSE_SWITCH_DENSITY};
pub use matrix::PrimeFieldMatrix;
pub use prime::{is_prime, random_prime, Prime, DEFAULT_PRIME_BITS, MAX_PRIME_BITS, MIN_PRIME_BITS};
pub use vector::{combine, SparseVec};

use crate::error::{Error, Result};

/// Linearly independent vectors inside a named coordinate space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorSpaceBasis {
    pub ambient: String,
    pub ambient_dim: usize,
    pub prime: Prime,
    pub vectors: Vec<SparseVec>,
}

impl VectorSpaceBasis {
    /// Wraps vectors after checking they are independent and fit the ambient space.
    pub fn new(ambient: impl Into<String>, ambient_dim: usize, prime: Prime, vectors: Vec<SparseVec>) -> Result<Self> {
        if let Some(bad) = vectors.iter().find(|v| v.max_index().is_some_and(|i| i >= ambient_dim)) {
            return Err(Error::DimensionMismatch(format!(
                "vector index {} outside ambient dimension {ambient_dim}",
                bad.max_index().unwrap_or(0)
            )));
        }
        let mut e = Echelon::new(prime, ambient_dim);
        if e.insert_all(&vectors).iter().any(|&fresh| !fresh) {
            return Err(Error::Construction("basis vectors are linearly dependent".into()));
        }
        Ok(VectorSpaceBasis { ambient: ambient.into(), ambient_dim, prime, vectors })
    }

    pub(crate) fn new_unchecked(
        ambient: impl Into<String>,
        ambient_dim: usize,
        prime: Prime,
        vectors: Vec<SparseVec>,
    ) -> Self {
        VectorSpaceBasis { ambient: ambient.into(), ambient_dim, prime, vectors }
    }

    pub fn standard(ambient: impl Into<String>, dim: usize, prime: Prime) -> Self {
        Self::new_unchecked(ambient, dim, prime, (0..dim).map(SparseVec::unit).collect())
    }

    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.prime, self.ambient_dim);
        e.insert_all(&self.vectors);
        e
    }
}

/// Rank over GF(p). Eliminates whichever of rows or columns is the shorter list.
pub fn rank(m: &PrimeFieldMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 || m.is_zero() {
        return 0;
    }
    if m.rows() <= m.cols() {
        eliminate(m.prime(), m.cols(), m.row_vecs()).echelon.rank()
    } else {
        eliminate(m.prime(), m.rows(), m.col_vecs()).echelon.rank()
    }
}

/// Basis of the right null space `{x : m x = 0}`.
pub fn kernel_basis(m: &PrimeFieldMatrix) -> VectorSpaceBasis {
    let ambient = format!("GF({})^{}", m.prime(), m.cols());
    if m.is_zero() {
        return VectorSpaceBasis::standard(ambient, m.cols(), m.prime());
    }
    let el = eliminate(m.prime(), m.cols(), m.row_vecs());
    let unperm: Vec<Option<u32>> = el.perm.iter().map(|&old| Some(old)).collect();
    let vectors = el.echelon.null_space().iter().map(|v| v.remap(&unperm)).collect();
    VectorSpaceBasis::new_unchecked(ambient, m.cols(), m.prime(), vectors)
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(v: &SparseVec, basis: &VectorSpaceBasis) -> Result<bool> {
    if v.max_index().is_some_and(|i| i >= basis.ambient_dim) {
        return Err(Error::DimensionMismatch(format!("vector does not fit ambient dimension {}", basis.ambient_dim)));
    }
    Ok(basis.echelon().contains(v))
}
