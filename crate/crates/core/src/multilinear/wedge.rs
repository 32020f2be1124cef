//! Colex indexing of exterior-power basis elements `v_S = v_{s_1} ∧ ... ∧ v_{s_p}`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TABLE: usize = 64;

fn table() -> &'static Vec<[u64; TABLE]> {
    static T: OnceLock<Vec<[u64; TABLE]>> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = vec![[0u64; TABLE]; TABLE];
        for n in 0..TABLE {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1].saturating_add(if k < n { t[n - 1][k] } else { 0 });
            }
        }
        t
    })
}

/// `C(n, k)`, zero when `k > n`. Saturates for `n >= 64`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    if n < TABLE {
        return table()[n][k] as usize;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

fn check_increasing(subset: &[usize], n: usize) -> Result<()> {
    let ok = subset.windows(2).all(|w| w[0] < w[1]) && subset.last().is_none_or(|&l| l < n);
    if ok {
        Ok(())
    } else {
        Err(Error::MalformedSubset { subset: subset.to_vec(), n })
    }
}

/// Colex rank `Σ_t C(s_t, t + 1)` of a strictly increasing subset.
pub fn wedge_rank(subset: &[usize]) -> Result<usize> {
    check_increasing(subset, usize::MAX)?;
    Ok(rank_unchecked(subset))
}

/// Like [`wedge_rank`] but also requires every entry to be below `n`.
pub fn wedge_rank_in(subset: &[usize], n: usize) -> Result<usize> {
    check_increasing(subset, n)?;
    Ok(rank_unchecked(subset))
}

#[inline]
pub(crate) fn rank_unchecked(subset: &[usize]) -> usize {
    subset.iter().enumerate().map(|(t, &s)| binomial(s, t + 1)).sum()
}

/// The `p`-subset of `{0..n-1}` with colex rank `rank`.
pub fn wedge_unrank(rank: usize, p: usize, n: usize) -> Result<Vec<usize>> {
    if rank >= binomial(n, p) {
        return Err(Error::MalformedSubset { subset: vec![rank], n });
    }
    let mut out = vec![0; p];
    let mut r = rank;
    let mut hi = n;
    for t in (1..=p).rev() {
        let mut c = t - 1;
        while c + 1 < hi && binomial(c + 1, t) <= r {
            c += 1;
        }
        out[t - 1] = c;
        r -= binomial(c, t);
        hi = c;
    }
    Ok(out)
}

/// All `p`-subsets of `{0..n-1}` in colex order, so position equals rank.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    let total = binomial(n, p);
    let mut out = Vec::with_capacity(total);
    if p > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        // Colex successor: bump the first entry that has room, reset those before it.
        let mut t = 0;
        while t < p && (if t + 1 < p { cur[t] + 1 == cur[t + 1] } else { cur[t] + 1 == n }) {
            t += 1;
        }
        if t == p {
            break;
        }
        cur[t] += 1;
        for (i, c) in cur.iter_mut().enumerate().take(t) {
            *c = i;
        }
    }
    out
}

/// `v_index ∧ v_S` rewritten in sorted order: the sign is `(-1)^{#{s ∈ S : s < v_index}}`,
/// or zero when `v_index ∈ S`.
pub fn wedge_insert(v_index: usize, subset: &[usize]) -> (i8, Vec<usize>) {
    let pos = subset.partition_point(|&s| s < v_index);
    if subset.get(pos) == Some(&v_index) {
        return (0, subset.to_vec());
    }
    let mut out = Vec::with_capacity(subset.len() + 1);
    out.extend_from_slice(&subset[..pos]);
    out.push(v_index);
    out.extend_from_slice(&subset[pos..]);
    (if pos % 2 == 0 { 1 } else { -1 }, out)
}

/// A subset together with its colex rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WedgeIndex {
    pub subset: Vec<usize>,
    pub rank: usize,
}

impl WedgeIndex {
    pub fn new(subset: Vec<usize>, n: usize) -> Result<Self> {
        let rank = wedge_rank_in(&subset, n)?;
        Ok(WedgeIndex { subset, rank })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_checked_values() {
        assert_eq!(wedge_rank(&[0, 1, 2, 3]).unwrap(), 0);
        assert_eq!(wedge_rank_in(&[1, 3, 4], 5).unwrap(), 8);
        assert!(wedge_rank(&[2, 2]).is_err());
        assert!(wedge_rank_in(&[1, 5], 5).is_err());
        assert_eq!(binomial(15, 11), 1365);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn insertion_signs() {
        assert_eq!(wedge_insert(2, &[2, 5]).0, 0);
        assert_eq!(wedge_insert(0, &[1, 2]), (1, vec![0, 1, 2]));
        assert_eq!(wedge_insert(3, &[1, 2, 4]), (1, vec![1, 2, 3, 4]));
        assert_eq!(wedge_insert(3, &[1, 4]), (-1, vec![1, 3, 4]));
    }

    #[test]
    fn three_subsets_of_six_round_trip() {
        for (r, s) in subsets(6, 3).iter().enumerate() {
            assert_eq!(wedge_rank(s).unwrap(), r);
            assert_eq!(&wedge_unrank(r, 3, 6).unwrap(), s);
        }
        assert_eq!(subsets(6, 3).len(), 20);
        assert_eq!(subsets(4, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }
}
