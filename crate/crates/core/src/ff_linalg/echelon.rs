//! Row-echelon machinery shared by rank, kernel and span computations.
//!
//! An [`Echelon`] stores pivot rows with leading coefficient one. Rows are inserted
//! left-looking: each new vector is reduced against the existing pivots in increasing
//! column order, and if something survives its leading column becomes a new pivot.
//! Pivot rows therefore only carry entries at columns to the right of their pivot.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Prime, SparseVec};

const NO_PIVOT: u32 = u32::MAX;

/// Switch to dense elimination once a freshly reduced row fills more than this fraction
/// of the still-free columns.
pub const DENSE_SWITCH_DENSITY: f64 = 0.25;

/// Do not bother switching with fewer rows than this left to process.
const DENSE_SWITCH_MIN_ROWS: usize = 64;

#[derive(Clone, Debug)]
pub struct Echelon {
    prime: Prime,
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_cols: Vec<u32>,
    pivot_of: Vec<u32>,
}

/// Reusable dense accumulator for sparse reductions.
struct Scratch {
    acc: Vec<u64>,
    touched_flag: Vec<bool>,
    touched: Vec<u32>,
    heap: BinaryHeap<Reverse<u32>>,
}

impl Scratch {
    fn new(ncols: usize) -> Self {
        Scratch { acc: vec![0; ncols], touched_flag: vec![false; ncols], touched: vec![], heap: BinaryHeap::new() }
    }

    #[inline]
    fn touch(&mut self, c: u32) {
        if !self.touched_flag[c as usize] {
            self.touched_flag[c as usize] = true;
            self.touched.push(c);
            self.heap.push(Reverse(c));
        }
    }

    fn gather(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &c in &self.touched {
            let v = self.acc[c as usize];
            if v != 0 {
                out.push((c, v));
            }
            self.acc[c as usize] = 0;
            self.touched_flag[c as usize] = false;
        }
        self.touched.clear();
        self.heap.clear();
        SparseVec::from_sorted_unchecked(out)
    }
}

impl Echelon {
    pub fn new(prime: Prime, ncols: usize) -> Self {
        Echelon { prime, ncols, rows: vec![], pivot_cols: vec![], pivot_of: vec![NO_PIVOT; ncols] }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivot_cols(&self) -> &[u32] {
        &self.pivot_cols
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.pivot_of[col] != NO_PIVOT
    }

    pub fn total_nnz(&self) -> usize {
        self.rows.iter().map(|r| r.nnz()).sum()
    }

    fn reduce_in(&self, v: &SparseVec, full: bool, s: &mut Scratch) -> SparseVec {
        let p = self.prime;
        for (c, x) in v.iter() {
            s.acc[c] = x;
            s.touch(c as u32);
        }
        while let Some(Reverse(c)) = s.heap.pop() {
            let x = s.acc[c as usize];
            if x == 0 {
                continue;
            }
            let r = self.pivot_of[c as usize];
            if r == NO_PIVOT {
                if full {
                    continue;
                }
                break;
            }
            let f = p.neg(x);
            s.acc[c as usize] = 0;
            for &(j, y) in &self.rows[r as usize].entries()[1..] {
                s.touch(j);
                let a = &mut s.acc[j as usize];
                *a = p.mul_add(*a, f, y);
            }
        }
        s.gather()
    }

    fn push_row(&mut self, mut row: SparseVec) -> usize {
        let (lead, lv) = row.leading().expect("nonzero row");
        if lv != 1 {
            row = row.scale(self.prime, self.prime.inv(lv));
        }
        self.pivot_of[lead] = self.rows.len() as u32;
        self.pivot_cols.push(lead as u32);
        self.rows.push(row);
        lead
    }

    /// Reduces `v` and adds it as a pivot row if it is independent. Returns the new
    /// pivot column, or `None` when `v` was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let mut s = Scratch::new(self.ncols);
        self.insert_with(v, &mut s)
    }

    fn insert_with(&mut self, v: &SparseVec, s: &mut Scratch) -> Option<usize> {
        let r = self.reduce_in(v, false, s);
        if r.is_zero() {
            None
        } else {
            Some(self.push_row(r))
        }
    }

    /// Inserts many vectors, returning for each whether it enlarged the span.
    pub fn insert_all<'a>(&mut self, vs: impl IntoIterator<Item = &'a SparseVec>) -> Vec<bool> {
        let mut s = Scratch::new(self.ncols);
        vs.into_iter().map(|v| self.insert_with(v, &mut s).is_some()).collect()
    }

    /// Canonical residual of `v` modulo the row span: the unique representative of
    /// `v + span` that vanishes on every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut s = Scratch::new(self.ncols);
        self.reduce_in(v, true, &mut s)
    }

    pub fn reduce_many(&self, vs: &[SparseVec]) -> Vec<SparseVec> {
        let mut s = Scratch::new(self.ncols);
        vs.iter().map(|v| self.reduce_in(v, true, &mut s)).collect()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Brings the rows into reduced row-echelon form: every pivot column is zero in all
    /// rows but its own. Row order becomes increasing pivot column.
    pub fn into_rref(mut self) -> Echelon {
        let p = self.prime;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by_key(|&i| self.pivot_cols[i]);
        let mut rows: Vec<SparseVec> = order.iter().map(|&i| std::mem::take(&mut self.rows[i])).collect();
        let pivots: Vec<u32> = order.iter().map(|&i| self.pivot_cols[i]).collect();
        let mut pivot_of = vec![NO_PIVOT; self.ncols];
        for (i, &c) in pivots.iter().enumerate() {
            pivot_of[c as usize] = i as u32;
        }
        let mut s = Scratch::new(self.ncols);
        // Later rows are finished first, so each row is cleaned against rows that are
        // already fully reduced.
        for i in (0..rows.len()).rev() {
            let row = std::mem::take(&mut rows[i]);
            for (c, x) in row.iter() {
                s.acc[c] = x;
                s.touch(c as u32);
            }
            while let Some(Reverse(c)) = s.heap.pop() {
                let x = s.acc[c as usize];
                let r = pivot_of[c as usize];
                if x == 0 || r == NO_PIVOT || r as usize == i {
                    continue;
                }
                let f = p.neg(x);
                s.acc[c as usize] = 0;
                for &(j, y) in &rows[r as usize].entries()[1..] {
                    s.touch(j);
                    let a = &mut s.acc[j as usize];
                    *a = p.mul_add(*a, f, y);
                }
            }
            rows[i] = s.gather();
        }
        Echelon { prime: p, ncols: self.ncols, rows, pivot_cols: pivots, pivot_of }
    }

    /// Basis of `{x : r . x = 0 for every stored row r}` by back substitution.
    pub fn null_space(&self) -> Vec<SparseVec> {
        let p = self.prime;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by_key(|&i| Reverse(self.pivot_cols[i]));
        let free: Vec<usize> = (0..self.ncols).filter(|&c| self.pivot_of[c] == NO_PIVOT).collect();
        let mut out = Vec::with_capacity(free.len());
        let mut x = vec![0u64; self.ncols];
        for &f in &free {
            x.iter_mut().for_each(|v| *v = 0);
            x[f] = 1;
            for &i in &order {
                let row = &self.rows[i];
                let mut acc = 0u64;
                for &(j, y) in &row.entries()[1..] {
                    let xj = x[j as usize];
                    if xj != 0 {
                        acc = p.mul_add(acc, y, xj);
                    }
                }
                x[self.pivot_cols[i] as usize] = p.neg(acc);
            }
            out.push(SparseVec::from_dense(&x));
        }
        out
    }
}

/// Result of a full elimination pass over a list of rows.
pub struct Elimination {
    /// Echelon form in permuted column labels.
    pub echelon: Echelon,
    /// `perm[new] = old` column label.
    pub perm: Vec<u32>,
    /// Whether the dense fallback was used.
    pub went_dense: bool,
}

/// Eliminates `rows` (each of length `ncols`) with a static Markowitz ordering: sparse
/// columns are pivoted first and short rows are processed first. When fill-in makes
/// reduced rows denser than [`DENSE_SWITCH_DENSITY`] of the remaining free columns, the
/// remaining rows are reduced into a dense block over the free columns and finished
/// with dense elimination.
pub fn eliminate(prime: Prime, ncols: usize, rows: Vec<SparseVec>) -> Elimination {
    let mut counts = vec![0u32; ncols];
    for r in &rows {
        for (c, _) in r.iter() {
            counts[c] += 1;
        }
    }
    let mut perm: Vec<u32> = (0..ncols as u32).collect();
    perm.sort_by_key(|&c| (counts[c as usize], c));
    let mut new_of_old = vec![None; ncols];
    for (new, &old) in perm.iter().enumerate() {
        new_of_old[old as usize] = Some(new as u32);
    }
    let mut rows: Vec<SparseVec> = rows.iter().filter(|r| !r.is_zero()).map(|r| r.remap(&new_of_old)).collect();
    rows.sort_by_key(|r| r.nnz());

    let mut ech = Echelon::new(prime, ncols);
    let mut s = Scratch::new(ncols);
    let mut went_dense = false;
    let mut idx = 0;
    while idx < rows.len() && ech.rank() < ncols {
        let reduced = ech.reduce_in(&rows[idx], false, &mut s);
        idx += 1;
        if reduced.is_zero() {
            continue;
        }
        let free = ncols - ech.rank();
        let dense_now = reduced.nnz() as f64 > DENSE_SWITCH_DENSITY * free as f64
            && rows.len() - idx >= DENSE_SWITCH_MIN_ROWS
            && free >= 32;
        ech.push_row(reduced);
        if dense_now {
            went_dense = true;
            dense_finish(&mut ech, &rows[idx..], &mut s);
            break;
        }
    }
    Elimination { echelon: ech, perm, went_dense }
}

/// Dense phase: reduce every remaining row against the sparse pivots, then eliminate
/// the survivors densely over the free columns. New pivot rows are appended to `ech`.
fn dense_finish(ech: &mut Echelon, rest: &[SparseVec], s: &mut Scratch) {
    let p = ech.prime;
    let free: Vec<u32> = (0..ech.ncols as u32).filter(|&c| !ech.has_pivot(c as usize)).collect();
    let width = free.len();
    let mut slot_of = vec![u32::MAX; ech.ncols];
    for (i, &c) in free.iter().enumerate() {
        slot_of[c as usize] = i as u32;
    }
    // Dense pivot rows kept in reduced echelon form over the free columns.
    let mut piv_rows: Vec<Vec<u64>> = Vec::new();
    let mut piv_lead: Vec<usize> = Vec::new();
    let mut buf = vec![0u64; width];
    for row in rest {
        if piv_rows.len() == width {
            break;
        }
        let r = ech.reduce_in(row, true, s);
        if r.is_zero() {
            continue;
        }
        buf.iter_mut().for_each(|v| *v = 0);
        for (c, v) in r.iter() {
            buf[slot_of[c] as usize] = v;
        }
        for (k, &lead) in piv_lead.iter().enumerate() {
            let x = buf[lead];
            if x == 0 {
                continue;
            }
            let f = p.neg(x);
            let pr = &piv_rows[k];
            for j in lead..width {
                buf[j] = p.mul_add(buf[j], f, pr[j]);
            }
        }
        let Some(lead) = buf.iter().position(|&v| v != 0) else { continue };
        let inv = p.inv(buf[lead]);
        for v in buf[lead..].iter_mut() {
            *v = p.mul(*v, inv);
        }
        // Keep the existing rows clean on the new pivot column.
        for pr in piv_rows.iter_mut() {
            let x = pr[lead];
            if x != 0 {
                let f = p.neg(x);
                for j in lead..width {
                    pr[j] = p.mul_add(pr[j], f, buf[j]);
                }
            }
        }
        piv_rows.push(buf.clone());
        piv_lead.push(lead);
    }
    for pr in piv_rows {
        let entries: Vec<(u32, u64)> =
            pr.iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, &v)| (free[j], v)).collect();
        ech.push_row(SparseVec::from_sorted_unchecked(entries));
    }
}
