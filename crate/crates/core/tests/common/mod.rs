//! Independent dense reference implementations used as test oracles.
#![allow(dead_code, clippy::needless_range_loop)]

/// Rank by textbook dense Gaussian elimination mod `p` (small `p`, u128 products).
pub fn dense_rank(mut a: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_multiple_of(p)) else { continue };
        a.swap(rank, piv);
        let inv = modpow(a[rank][c], p - 2, p);
        for j in 0..cols {
            a[rank][j] = mulmod(a[rank][j], inv, p);
        }
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for j in 0..cols {
                    let sub = mulmod(f, a[rank][j], p);
                    a[r][j] = (a[r][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

pub fn dense_mul_vec(a: &[Vec<u64>], x: &[u64], p: u64) -> Vec<u64> {
    a.iter().map(|row| row.iter().zip(x).fold(0u64, |acc, (&u, &v)| (acc + mulmod(u, v, p)) % p)).collect()
}
