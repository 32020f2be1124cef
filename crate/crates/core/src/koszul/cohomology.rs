use crate::error::{Error, Result};
use crate::ff_linalg::{kernel_basis, Echelon, PrimeFieldMatrix, SparseVec};
use crate::graded_modules::GradedModule;

use super::assemble_differential;

/// A fixed basis of `K_{p,q}`: cocycle representatives in reduced echelon form modulo
/// the boundaries, with deterministic pivot order.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub p: usize,
    pub q: usize,
    d_out: PrimeFieldMatrix,
    boundaries: Echelon,
    classes: Echelon,
}

impl CohomologyBasis {
    pub fn new(module: &GradedModule, p: usize, q: usize) -> Result<Self> {
        let d_out = assemble_differential(module, p, q)?;
        let ambient = d_out.cols();
        let mut boundaries = Echelon::new(module.prime, ambient);
        if q > 0 && p < module.n_generators() {
            let d_in = assemble_differential(module, p + 1, q - 1)?;
            boundaries.insert_all(&d_in.col_vecs());
        }
        let kernel = kernel_basis(&d_out);
        let reduced = boundaries.reduce_many(&kernel.vectors);
        let mut classes = Echelon::new(module.prime, ambient);
        classes.insert_all(&reduced);
        let classes = classes.into_rref();
        if classes.rank() + boundaries.rank() != kernel.dimension() {
            return Err(Error::Construction(format!("boundaries of ({p},{q}) are not all cocycles")));
        }
        Ok(CohomologyBasis { p, q, d_out, boundaries, classes })
    }

    pub fn dim(&self) -> usize {
        self.classes.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.d_out.cols()
    }

    /// Cocycle representatives of the basis classes.
    pub fn representatives(&self) -> &[SparseVec] {
        self.classes.rows()
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundaries.rank()
    }

    pub fn is_cocycle(&self, v: &SparseVec) -> bool {
        self.d_out.mul_sparse(v).is_zero()
    }

    /// Coordinates of the class of a cocycle.
    pub fn class_coords(&self, v: &SparseVec) -> Result<SparseVec> {
        if v.max_index().is_some_and(|i| i >= self.ambient_dim()) || !self.is_cocycle(v) {
            return Err(Error::NotACocycle { p: self.p, q: self.q });
        }
        let prime = self.boundaries.prime();
        let r = self.boundaries.reduce(v);
        let mut rest = r.clone();
        let mut out = Vec::new();
        for (i, &c) in self.classes.pivot_cols().iter().enumerate() {
            let x = r.get(c as usize);
            if x != 0 {
                out.push((i as u32, x));
                rest = rest.add_scaled(prime, prime.neg(x), &self.classes.rows()[i]);
            }
        }
        if !rest.is_zero() {
            return Err(Error::Construction("cocycle outside kernel span".into()));
        }
        Ok(SparseVec::from_entries(prime, out))
    }

    /// Whether a cocycle is a boundary.
    pub fn is_zero_class(&self, v: &SparseVec) -> Result<bool> {
        Ok(self.class_coords(v)?.is_zero())
    }
}
