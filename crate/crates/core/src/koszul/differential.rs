use crate::error::{Error, Result};
use crate::ff_linalg::{PrimeFieldMatrix, SparseVec};
use crate::graded_modules::GradedModule;
use crate::multilinear::{binomial, rank_unchecked, subsets};

fn check_window(module: &GradedModule, p: usize, q: usize) -> Result<()> {
    if q >= module.action.len() {
        return Err(Error::Window { p, q, reason: format!("needs B_{} but qmax = {}", q + 1, module.qmax()) });
    }
    if p > module.n_generators() {
        return Err(Error::Window { p, q, reason: format!("p exceeds dim V = {}", module.n_generators()) });
    }
    Ok(())
}

/// Number of nonzeros of `d_{p,q}` without building it: every generator occurs in
/// `C(n-1, p-1)` of the `p`-subsets and contributes its action matrix once per subset.
pub fn differential_nnz(module: &GradedModule, p: usize, q: usize) -> Result<usize> {
    check_window(module, p, q)?;
    if p == 0 {
        return Ok(0);
    }
    let n = module.n_generators();
    let per: usize = module.action[q].iter().map(|m| m.nnz()).sum();
    Ok(binomial(n - 1, p - 1).saturating_mul(per))
}

/// Column of `d_{p,q}` indexed by `(S, b)` lives at `rank(S) * dim B_q + b`; rows likewise.
pub fn column_index(rank_s: usize, b: usize, dim_bq: usize) -> usize {
    rank_s * dim_bq + b
}

/// Columns of `d_{p,q}` as sparse vectors, in column order.
pub(crate) fn differential_columns(module: &GradedModule, p: usize, q: usize) -> Result<Vec<SparseVec>> {
    check_window(module, p, q)?;
    let n = module.n_generators();
    let (db, db1) = (module.dim(q), module.dim(q + 1));
    let prime = module.prime;
    if p == 0 {
        return Ok(vec![SparseVec::new(); db]);
    }
    let action_cols: Vec<Vec<SparseVec>> = module.action[q].iter().map(|m| m.col_vecs()).collect();
    let mut cols = Vec::with_capacity(db * binomial(n, p));
    let mut smaller = Vec::with_capacity(p);
    for s in subsets(n, p) {
        let mut faces = Vec::with_capacity(p);
        for j in 0..p {
            smaller.clear();
            smaller.extend(s.iter().enumerate().filter(|&(t, _)| t != j).map(|(_, &x)| x));
            let sign_neg = j % 2 == 1;
            faces.push((s[j], rank_unchecked(&smaller), sign_neg));
        }
        #[allow(clippy::needless_range_loop)]
        for b in 0..db {
            let mut e: Vec<(u32, u64)> = Vec::new();
            for &(gen, r, neg) in &faces {
                for (bp, v) in action_cols[gen][b].iter() {
                    e.push(((r * db1 + bp) as u32, if neg { prime.neg(v) } else { v }));
                }
            }
            e.sort_unstable_by_key(|x| x.0);
            cols.push(SparseVec::from_entries(prime, e));
        }
    }
    Ok(cols)
}

/// Matrix of `d_{p,q}: B_q ⊗ Λ^p V → B_{q+1} ⊗ Λ^{p-1} V` with
/// `d(b ⊗ v_{i_1} ∧ ... ∧ v_{i_p}) = Σ_j (-1)^{j-1} (v_{i_j} b) ⊗ (wedge without v_{i_j})`.
/// For `p = 0` the target is zero, so the matrix has no rows.
pub fn assemble_differential(module: &GradedModule, p: usize, q: usize) -> Result<PrimeFieldMatrix> {
    let cols = differential_columns(module, p, q)?;
    let n = module.n_generators();
    let rows = if p == 0 { 0 } else { module.dim(q + 1) * binomial(n, p - 1) };
    Ok(PrimeFieldMatrix::from_row_vecs(rows, module.prime, &cols)?.transpose())
}
