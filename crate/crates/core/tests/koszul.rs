mod common;

use common::dense_rank;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use syzygy_core::ff_linalg::{Prime, PrimeFieldMatrix};
use syzygy_core::graded_modules::*;
use syzygy_core::koszul::*;
use syzygy_core::multilinear::{binomial, DivisorClass, SurfaceModel};
use syzygy_core::{kernel_basis, rank, Error};

const P: u64 = 2147483647;

fn prime() -> Prime {
    Prime::new(P).unwrap()
}

fn ambient(surface: SurfaceModel, degree: i64, qmax: usize) -> GradedModule {
    build_ambient_module(prime(), &surface, &DivisorClass::Degree(0), &DivisorClass::Degree(degree), qmax).unwrap()
}

fn plane_curve_module(d: i64, n: i64, seed: u64) -> GradedModule {
    let s = SurfaceModel::plane();
    let f = random_section(prime(), &s, &DivisorClass::Degree(d), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    build_restriction_module(&ambient(s, n, 2), &f, &DivisorClass::Degree(d)).unwrap()
}

/// `dim K_{p,q}` from dense ranks of the two assembled matrices.
fn dense_koszul_dim(m: &GradedModule, p: usize, q: usize) -> usize {
    let out = assemble_differential(m, p, q).unwrap();
    let dim = m.dim(q) * binomial(m.n_generators(), p);
    let ker = dim - dense_rank(out.to_dense(), P);
    let inc = if q == 0 { 0 } else { dense_rank(assemble_differential(m, p + 1, q - 1).unwrap().to_dense(), P) };
    ker - inc
}

#[test]
fn p_zero_differential_has_no_rows() {
    let m = ambient(SurfaceModel::plane(), 2, 2);
    let d = assemble_differential(&m, 0, 1).unwrap();
    assert_eq!((d.rows(), d.cols()), (0, 6));
}

#[test]
fn conic_multiplication_is_surjective() {
    let m = ambient(SurfaceModel::line(), 2, 2);
    let d = assemble_differential(&m, 1, 1).unwrap();
    assert_eq!((d.rows(), d.cols()), (5, 9));
    assert_eq!(rank(&d), 5);
    assert_eq!(dense_rank(d.to_dense(), P), 5);
}

#[test]
fn twisted_cubic_strand() {
    let m = ambient(SurfaceModel::line(), 3, 2);
    let cx = KoszulComplex::new(&m);
    assert_eq!(cx.cell(1, 1).unwrap().dim_k, 3);
    assert_eq!(cx.cell(2, 1).unwrap().dim_k, 2);
    assert_eq!(dense_koszul_dim(&m, 1, 1), 3);
    assert_eq!(dense_koszul_dim(&m, 2, 1), 2);
    assert_eq!(cx.cell(0, 0).unwrap().dim_k, 1);
}

#[test]
fn rational_normal_curves_match_closed_form() {
    // K_{p,1} of the degree-d rational normal curve is p * C(d, p+1).
    for d in 2..=6 {
        let m = ambient(SurfaceModel::line(), d as i64, 2);
        let cx = KoszulComplex::new(&m);
        for p in 1..=d {
            assert_eq!(cx.cell(p, 1).unwrap().dim_k, p * binomial(d, p + 1), "d={d}, p={p}");
        }
    }
}

#[test]
fn veronese_table_matches_dense_oracle() {
    let m = ambient(SurfaceModel::plane(), 2, 2);
    let t = betti_table(&m, 1..=5, [1]).unwrap();
    let dims: Vec<usize> = (1..=5).map(|p| t.get(p, 1).unwrap()).collect();
    assert_eq!(dims, vec![6, 8, 3, 0, 0]);
    for p in 1..=5 {
        assert_eq!(dense_koszul_dim(&m, p, 1), dims[p - 1]);
    }
    let row0 = betti_table(&m, 0..=5, [0]).unwrap();
    assert_eq!(row0.get(0, 0), Some(1));
    assert!((1..=5).all(|p| row0.get(p, 0) == Some(0)));
    assert!(betti_table(&m, 1..1, [1]).unwrap().entries.is_empty());
}

#[test]
fn cells_are_consistent() {
    let m = ambient(SurfaceModel::plane(), 2, 2);
    let cx = KoszulComplex::new(&m);
    for p in 0..=6 {
        for q in 0..2 {
            let c = cx.cell(p, q).unwrap();
            assert_eq!(c.dim_domain, m.dim(q) * binomial(6, p));
            assert!(c.dim_k <= c.dim_domain);
            assert_eq!(c.dim_k + c.rank_incoming, c.dim_kernel);
        }
    }
}

#[test]
fn differentials_compose_to_zero() {
    let modules = [
        ambient(SurfaceModel::plane(), 2, 3),
        ambient(SurfaceModel::line(), 4, 3),
        build_ambient_module(
            prime(),
            &SurfaceModel::hirzebruch(1),
            &DivisorClass::Ruled { a: 0, b: 0 },
            &DivisorClass::Ruled { a: 1, b: 2 },
            3,
        )
        .unwrap(),
        plane_curve_module(4, 3, 1),
    ];
    for m in &modules {
        let n = m.n_generators();
        for q in 0..m.qmax() - 1 {
            for p in 2..=n {
                let a = assemble_differential(m, p, q).unwrap();
                let b = assemble_differential(m, p - 1, q + 1).unwrap();
                assert!(b.matmul(&a).unwrap().is_zero(), "{} p={p} q={q}", describe(m));
            }
        }
    }
}

#[test]
fn rank_plus_nullity_on_koszul_matrices() {
    let m = ambient(SurfaceModel::plane(), 2, 2);
    for p in 1..=6 {
        let d = assemble_differential(&m, p, 1).unwrap();
        assert_eq!(d.cols(), rank(&d) + kernel_basis(&d).dimension());
    }
}

#[test]
fn out_of_window_is_rejected() {
    let m = ambient(SurfaceModel::plane(), 2, 2);
    assert!(matches!(assemble_differential(&m, 1, 2), Err(Error::Window { .. })));
    assert!(matches!(assemble_differential(&m, 7, 0), Err(Error::Window { .. })));
    assert!(euler_check(&m, 3).is_err());
}

#[test]
fn quartic_satisfies_m2_and_quintic_fails_m3() {
    let v = check_mk(&plane_curve_module(4, 3, 2), 2).unwrap();
    assert!(v.verdict);
    assert_eq!(v.threshold, 7);
    assert_eq!(v.witnesses, vec![(7, 0), (8, 0), (9, 0)]);
    let w = check_mk(&plane_curve_module(5, 3, 2), 3).unwrap();
    assert!(!w.verdict);
    assert!(w.witnesses.iter().any(|&(p, d)| p == 6 && d > 0));
}

#[test]
fn mk_needs_restriction_data() {
    let m = ambient(SurfaceModel::plane(), 2, 2);
    assert!(check_mk(&m, 1).is_err());
}

#[test]
fn dims_do_not_depend_on_the_curve() {
    let dims: Vec<Vec<usize>> = (0..3)
        .map(|seed| {
            let m = plane_curve_module(4, 3, 100 + seed);
            let cx = KoszulComplex::new(&m);
            (5..=9).map(|p| cx.cell(p, 1).unwrap().dim_k).collect()
        })
        .collect();
    assert!(dims.windows(2).all(|w| w[0] == w[1]), "{dims:?}");
}

#[test]
fn euler_characteristic_holds() {
    let m = ambient(SurfaceModel::plane(), 2, 2);
    for l in 0..=2 {
        let e = euler_check(&m, l).unwrap();
        assert!(e.passed, "{e:?}");
    }
    assert_eq!(euler_check(&m, 0).unwrap().chain_side, 1);
    let c = plane_curve_module(4, 3, 3);
    assert!((0..=2).all(|l| euler_check(&c, l).unwrap().passed));
}

#[test]
fn euler_check_detects_a_corrupted_action() {
    let mut m = ambient(SurfaceModel::plane(), 2, 2);
    let a = &m.action[1][0];
    let (rows, cols) = (a.rows(), a.cols());
    let bogus: Vec<Vec<u64>> = (0..rows).map(|r| (0..cols).map(|c| ((r * 7 + c * 3) % 5) as u64).collect()).collect();
    m.action[1][0] = PrimeFieldMatrix::from_dense(prime(), &bogus, cols).unwrap();
    assert!(!m.check_commutativity());
    assert!(!euler_check(&m, 2).unwrap().passed);
}

#[test]
fn standing_hypotheses_on_standard_modules() {
    assert!(standing_hypotheses(&ambient(SurfaceModel::plane(), 2, 2)).is_ok());
    assert!(standing_hypotheses(&plane_curve_module(4, 3, 4)).is_ok());
}

#[test]
fn duality_instances() {
    for k in [2, 3] {
        let (ok, rows) = duality_instance_check(prime(), k).unwrap();
        assert!(ok, "{rows:?}");
    }
    let (_, rows) = duality_instance_check(prime(), 2).unwrap();
    let row3 = rows.iter().find(|r| r.p == 3).unwrap();
    assert_eq!((row3.k_p1, row3.k_dual), (3, 3));
    let row4 = rows.iter().find(|r| r.p == 4).unwrap();
    assert_eq!((row4.k_p1, row4.k_dual), (0, 0));
    assert!(duality_instance_check(prime(), 4).is_err());
}

#[test]
fn veronese_cubic_threshold() {
    let m = ambient(SurfaceModel::plane(), 3, 2);
    let cx = KoszulComplex::new(&m);
    assert!(cx.cell(6, 1).unwrap().dim_k > 0);
    assert!((7..=9).all(|p| cx.cell(p, 1).unwrap().dim_k == 0));
}
