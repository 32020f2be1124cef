mod common;

use common::{dense_mul_vec, dense_rank};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syzygy_core::ff_linalg::{
    eliminate, in_span, kernel_basis, rank, Prime, PrimeFieldMatrix, SparseVec, VectorSpaceBasis,
};

fn random_dense(rows: usize, cols: usize, density: f64, p: u64, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows)
        .map(|_| (0..cols).map(|_| if rng.gen_bool(density) { rng.gen_range(1..p) } else { 0 }).collect())
        .collect()
}

/// Product of two thin random factors, so the rank is at most `inner`.
fn low_rank(rows: usize, cols: usize, inner: usize, p: u64, seed: u64) -> Vec<Vec<u64>> {
    let a = random_dense(rows, inner, 0.5, p, seed);
    let b = random_dense(inner, cols, 0.5, p, seed ^ 0xabc);
    (0..rows)
        .map(|i| {
            (0..cols).map(|j| (0..inner).fold(0, |acc, k| (acc + common::mulmod(a[i][k], b[k][j], p)) % p)).collect()
        })
        .collect()
}

fn check_matrix(dense: Vec<Vec<u64>>, cols: usize, p: u64) {
    let prime = Prime::new(p).unwrap();
    let m = PrimeFieldMatrix::from_dense(prime, &dense, cols).unwrap();
    let r = rank(&m);
    assert_eq!(r, dense_rank(dense.clone(), p), "rank vs oracle");
    assert_eq!(r, rank(&m.transpose()), "rank vs transpose");
    let k = kernel_basis(&m);
    assert_eq!(cols, r + k.dimension(), "rank-nullity");
    for v in &k.vectors {
        assert!(dense_mul_vec(&dense, &v.to_dense(cols), p).iter().all(|&x| x == 0));
    }
    let kd: Vec<Vec<u64>> = k.vectors.iter().map(|v| v.to_dense(cols)).collect();
    assert_eq!(dense_rank(kd, p), k.dimension(), "kernel vectors independent");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sparse_rank_matches_dense_oracle(rows in 0usize..40, cols in 0usize..40, density in 0.02f64..0.9, seed: u64) {
        check_matrix(random_dense(rows, cols, density, 7, seed), cols, 7);
    }

    #[test]
    fn low_rank_products(rows in 1usize..60, cols in 1usize..60, inner in 0usize..12, seed: u64) {
        check_matrix(low_rank(rows, cols, inner, 101, seed), cols, 101);
    }

    #[test]
    fn residual_is_zero_exactly_on_span(n in 1usize..20, k in 0usize..10, seed: u64) {
        let p = Prime::new(13).unwrap();
        let gens = random_dense(k, n, 0.4, 13, seed);
        let gens: Vec<SparseVec> = gens.iter().map(|r| SparseVec::from_dense(r)).collect();
        let mut e = syzygy_core::ff_linalg::Echelon::new(p, n);
        e.insert_all(&gens);
        let basis = VectorSpaceBasis::new("t", n, p, e.rows().to_vec()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..13)).collect();
        let inside = syzygy_core::ff_linalg::combine(p, &gens, &coeffs);
        prop_assert!(in_span(&inside, &basis).unwrap());
        let outside = random_dense(1, n, 0.5, 13, seed ^ 1).remove(0);
        let outside = SparseVec::from_dense(&outside);
        let mut stacked: Vec<Vec<u64>> = basis.vectors.iter().map(|v| v.to_dense(n)).collect();
        let before = dense_rank(stacked.clone(), 13);
        stacked.push(outside.to_dense(n));
        prop_assert_eq!(in_span(&outside, &basis).unwrap(), dense_rank(stacked, 13) == before);
    }
}

/// Every shape up to 200 columns in steps, including sizes that exercise the dense switch.
#[test]
fn exhaustive_shapes_up_to_200_columns() {
    let mut seed = 1;
    for cols in (1..=200).step_by(13) {
        for rows in [1, cols / 2 + 1, cols, cols + 70] {
            for density in [0.03, 0.2, 0.6] {
                seed += 1;
                check_matrix(random_dense(rows, cols, density, 101, seed), cols, 101);
            }
            seed += 1;
            check_matrix(low_rank(rows, cols, cols / 3, 101, seed), cols, 101);
        }
    }
}

#[test]
fn dense_fallback_is_exercised_and_correct() {
    let p = 2147483647u64;
    let dense = random_dense(180, 160, 0.3, p, 9);
    let prime = Prime::new(p).unwrap();
    let rows: Vec<SparseVec> = dense.iter().map(|r| SparseVec::from_dense(r)).collect();
    let el = eliminate(prime, 160, rows);
    assert!(el.went_dense);
    assert_eq!(el.echelon.rank(), 160);
    let lr = low_rank(200, 150, 90, p, 3);
    let rows: Vec<SparseVec> = lr.iter().map(|r| SparseVec::from_dense(r)).collect();
    let el = eliminate(prime, 150, rows);
    assert!(el.went_dense);
    assert_eq!(el.echelon.rank(), 90);
    check_matrix(lr, 150, p);
}
