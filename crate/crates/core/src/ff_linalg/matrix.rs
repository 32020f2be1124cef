use serde::{Deserialize, Serialize};

use super::{Prime, SparseVec};
use crate::error::{Error, Result};

/// Sparse matrix over GF(p) in compressed-row form.
///
/// Invariants: no duplicate `(row, col)` pairs, no stored zeros, indices in bounds.
/// Matrices are immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeFieldMatrix {
    rows: usize,
    cols: usize,
    prime: Prime,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    vals: Vec<u64>,
}

impl PrimeFieldMatrix {
    pub fn zeros(rows: usize, cols: usize, prime: Prime) -> Self {
        PrimeFieldMatrix { rows, cols, prime, row_ptr: vec![0; rows + 1], col_idx: vec![], vals: vec![] }
    }

    pub fn identity(n: usize, prime: Prime) -> Self {
        PrimeFieldMatrix {
            rows: n,
            cols: n,
            prime,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n as u32).collect(),
            vals: vec![1; n],
        }
    }

    /// Builds from `(row, col, value)` triplets. Duplicate positions are summed and
    /// zero results dropped; out-of-range indices are an error.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        prime: Prime,
        triplets: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Result<Self> {
        let mut t: Vec<(usize, usize, u64)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfBounds { row: r, col: c, rows, cols });
            }
            t.push((r, c, v % prime.value()));
        }
        t.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(t.len());
        let mut vals: Vec<u64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        let mut row_of = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            if last == Some((r, c)) {
                let l = vals.len() - 1;
                vals[l] = prime.add(vals[l], v);
            } else {
                col_idx.push(c as u32);
                vals.push(v);
                row_of.push(r);
                last = Some((r, c));
            }
        }
        let mut keep_cols = Vec::with_capacity(col_idx.len());
        let mut keep_vals = Vec::with_capacity(vals.len());
        for ((c, v), r) in col_idx.into_iter().zip(vals).zip(row_of) {
            if v != 0 {
                keep_cols.push(c);
                keep_vals.push(v);
                row_ptr[r + 1] += 1;
            }
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(PrimeFieldMatrix { rows, cols, prime, row_ptr, col_idx: keep_cols, vals: keep_vals })
    }

    pub fn from_dense(prime: Prime, dense: &[Vec<u64>], cols: usize) -> Result<Self> {
        let triplets =
            dense.iter().enumerate().flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)));
        Self::from_triplets(dense.len(), cols, prime, triplets)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, prime: Prime, columns: &[SparseVec]) -> Result<Self> {
        let triplets = columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (r, c, v)));
        Self::from_triplets(rows, columns.len(), prime, triplets)
    }

    /// Builds from per-row sparse vectors whose indices are below `cols`.
    pub fn from_row_vecs(cols: usize, prime: Prime, rows: &[SparseVec]) -> Result<Self> {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        row_ptr.push(0);
        let nnz = rows.iter().map(|r| r.nnz()).sum();
        let mut col_idx = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        for (r, v) in rows.iter().enumerate() {
            if let Some(c) = v.max_index().filter(|&c| c >= cols) {
                return Err(Error::IndexOutOfBounds { row: r, col: c, rows: rows.len(), cols });
            }
            for &(c, x) in v.entries() {
                col_idx.push(c);
                vals.push(x);
            }
            row_ptr.push(col_idx.len());
        }
        Ok(PrimeFieldMatrix { rows: rows.len(), cols, prime, row_ptr, col_idx, vals })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[range.clone()].iter().zip(&self.vals[range]).map(|(&c, &v)| (c as usize, v))
    }

    pub fn row_vec(&self, r: usize) -> SparseVec {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        SparseVec::from_sorted_unchecked(
            self.col_idx[range.clone()].iter().copied().zip(self.vals[range].iter().copied()).collect(),
        )
    }

    pub fn row_vecs(&self) -> Vec<SparseVec> {
        (0..self.rows).map(|r| self.row_vec(r)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[range.clone()].binary_search(&(c as u32)) {
            Ok(i) => self.vals[range.start + i],
            Err(_) => 0,
        }
    }

    pub fn transpose(&self) -> PrimeFieldMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.col_idx {
            counts[c as usize + 1] += 1;
        }
        for i in 0..self.cols {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut col_idx = vec![0u32; self.nnz()];
        let mut vals = vec![0u64; self.nnz()];
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                let slot = next[c];
                col_idx[slot] = r as u32;
                vals[slot] = v;
                next[c] += 1;
            }
        }
        PrimeFieldMatrix { rows: self.cols, cols: self.rows, prime: self.prime, row_ptr: counts, col_idx, vals }
    }

    /// Columns as sparse vectors.
    pub fn col_vecs(&self) -> Vec<SparseVec> {
        self.transpose().row_vecs()
    }

    pub fn mul_dense(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|r| self.row(r).fold(0, |acc, (c, v)| self.prime.mul_add(acc, v, x[c]))).collect()
    }

    pub fn mul_sparse(&self, x: &SparseVec) -> SparseVec {
        let dense = x.to_dense(self.cols);
        SparseVec::from_dense(&self.mul_dense(&dense))
    }

    /// Product `self * other`.
    pub fn matmul(&self, other: &PrimeFieldMatrix) -> Result<PrimeFieldMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.prime;
        let mut triplets = Vec::new();
        let mut acc = vec![0u64; other.cols];
        let mut seen = vec![false; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    acc[c] = p.mul_add(acc[c], a, b);
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                if acc[c] != 0 {
                    triplets.push((r, c, acc[c]));
                }
                acc[c] = 0;
                seen[c] = false;
            }
            touched.clear();
        }
        PrimeFieldMatrix::from_triplets(self.rows, other.cols, p, triplets)
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f101() -> Prime {
        Prime::new(101).unwrap()
    }

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let m =
            PrimeFieldMatrix::from_triplets(2, 3, f101(), vec![(0, 1, 50), (0, 1, 51), (1, 2, 7), (1, 0, 0)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 2), 7);
        assert_eq!(m.get(0, 1), 0);
    }

    #[test]
    fn out_of_bounds_rejected() {
        let err = PrimeFieldMatrix::from_triplets(2, 2, f101(), vec![(2, 0, 1)]).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfBounds { row: 2, .. }));
    }

    #[test]
    fn transpose_and_product() {
        let a = PrimeFieldMatrix::from_dense(f101(), &[vec![1, 2, 0], vec![0, 3, 4]], 3).unwrap();
        let at = a.transpose();
        assert_eq!(at.to_dense(), vec![vec![1, 0], vec![2, 3], vec![0, 4]]);
        let g = a.matmul(&at).unwrap();
        assert_eq!(g.to_dense(), vec![vec![5, 6], vec![6, 25]]);
        assert!(a.matmul(&a).is_err());
    }
}
