use serde::{Deserialize, Serialize};

use super::Prime;

/// Sparse coordinate vector over GF(p): sorted column indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVec {
    entries: Vec<(u32, u64)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Builds from entries that are already sorted, distinct and nonzero.
    pub(crate) fn from_sorted_unchecked(entries: Vec<(u32, u64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|&(_, v)| v != 0));
        SparseVec { entries }
    }

    /// Sorts, merges duplicates and drops zeros.
    pub fn from_entries(prime: Prime, mut entries: Vec<(u32, u64)>) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(u32, u64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            let v = v % prime.value();
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 = prime.add(last.1, v),
                _ => out.push((c, v)),
            }
        }
        out.retain(|e| e.1 != 0);
        SparseVec { entries: out }
    }

    pub fn from_dense(dense: &[u64]) -> Self {
        SparseVec { entries: dense.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i as u32, v)).collect() }
    }

    pub fn unit(index: usize) -> Self {
        SparseVec { entries: vec![(index as u32, 1)] }
    }

    pub fn to_dense(&self, len: usize) -> Vec<u64> {
        let mut out = vec![0; len];
        for &(c, v) in &self.entries {
            out[c as usize] = v;
        }
        out
    }

    pub fn entries(&self) -> &[(u32, u64)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(u32, u64)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.entries.iter().map(|&(c, v)| (c as usize, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> u64 {
        match self.entries.binary_search_by_key(&(index as u32), |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn leading(&self) -> Option<(usize, u64)> {
        self.entries.first().map(|&(c, v)| (c as usize, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0 as usize)
    }

    pub fn scale(&self, prime: Prime, factor: u64) -> SparseVec {
        if factor == 0 {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|&(c, v)| (c, prime.mul(v, factor))).collect() }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, prime: Prime, factor: u64, other: &SparseVec) -> SparseVec {
        if factor == 0 {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, prime.mul(factor, b[j].1)));
                j += 1;
            } else {
                let v = prime.mul_add(a[i].1, factor, b[j].1);
                if v != 0 {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn dot_dense(&self, prime: Prime, dense: &[u64]) -> u64 {
        self.entries.iter().fold(0, |acc, &(c, v)| prime.mul_add(acc, v, dense[c as usize]))
    }

    /// Relabels indices through `map`; `map[i] = None` drops the coordinate.
    pub fn remap(&self, map: &[Option<u32>]) -> SparseVec {
        let mut entries: Vec<(u32, u64)> =
            self.entries.iter().filter_map(|&(c, v)| map[c as usize].map(|d| (d, v))).collect();
        entries.sort_unstable_by_key(|e| e.0);
        SparseVec { entries }
    }
}

/// Linear combination `sum coeffs[i] * vectors[i]`.
pub fn combine(prime: Prime, vectors: &[SparseVec], coeffs: &[u64]) -> SparseVec {
    let mut entries = Vec::new();
    for (v, &c) in vectors.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        entries.extend(v.entries.iter().map(|&(i, x)| (i, prime.mul(x, c))));
    }
    SparseVec::from_entries(prime, entries)
}
