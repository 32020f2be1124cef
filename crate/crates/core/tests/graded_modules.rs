use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use syzygy_core::ff_linalg::Prime;
use syzygy_core::graded_modules::*;
use syzygy_core::multilinear::{BasePoint, DivisorClass, SurfaceModel};
use syzygy_core::Error;

fn big() -> Prime {
    Prime::new(2147483647).unwrap()
}

fn plane_ambient(prime: Prime, k: i64) -> GradedModule {
    build_ambient_module(prime, &SurfaceModel::plane(), &DivisorClass::Degree(0), &DivisorClass::Degree(k), 2).unwrap()
}

fn random_plane_curve(prime: Prime, d: i64, seed: u64) -> Poly {
    random_section(prime, &SurfaceModel::plane(), &DivisorClass::Degree(d), &mut ChaCha8Rng::seed_from_u64(seed))
        .unwrap()
}

fn fermat_quartic(prime: Prime) -> Poly {
    Poly::from_signed(prime, 3, &[(&[4, 0, 0], 1), (&[0, 4, 0], 1), (&[0, 0, 4], 1)])
}

#[test]
fn ruled_ambient_dims() {
    let s = SurfaceModel::hirzebruch(1);
    let m = build_ambient_module(big(), &s, &DivisorClass::Ruled { a: 0, b: 0 }, &DivisorClass::h_ab(2, 3), 2).unwrap();
    assert_eq!(m.dims(), vec![1, 5, 12]);
    assert!(m.check_commutativity());
}

#[test]
fn empty_polarization_is_rejected() {
    let s = SurfaceModel::plane();
    let err = build_ambient_module(big(), &s, &DivisorClass::Degree(0), &DivisorClass::Degree(-1), 2).unwrap_err();
    assert!(matches!(err, Error::EmptyGenerators), "{err:?}");
}

#[test]
fn plane_restriction_dims() {
    for (d, dims) in [(4, vec![1, 10, 22]), (5, vec![1, 10, 25])] {
        let f = random_plane_curve(big(), d, 1);
        let a = build_restriction_module(&plane_ambient(big(), 3), &f, &DivisorClass::Degree(d)).unwrap();
        assert_eq!(a.dims(), dims, "d = {d}");
        assert!(a.check_commutativity());
        let data = a.restriction.as_ref().unwrap();
        assert!(data.a0_is_constants && data.a1_identified);
        assert_eq!(data.h0, 10);
    }
}

#[test]
fn restriction_rejects_wrong_degree_and_zero_form() {
    let amb = plane_ambient(big(), 3);
    let f = random_plane_curve(big(), 3, 1);
    assert!(build_restriction_module(&amb, &f, &DivisorClass::Degree(4)).is_err());
    assert!(build_restriction_module(&amb, &Poly::zero(3), &DivisorClass::Degree(4)).is_err());
}

#[test]
fn one_point_truncation_on_quartic() {
    let prime = big();
    let f = random_plane_curve(prime, 4, 2);
    let a = build_restriction_module(&plane_ambient(prime, 3), &f, &DivisorClass::Degree(4)).unwrap();
    let pts = find_rational_points(prime, &f, 2, 3).unwrap();
    let b = local_branch_expansion(prime, &f, &pts[0], a.qmax() + 1).unwrap();
    let t = build_point_truncated_module(&a, &[TruncationPoint::from_branch(&b, 1)], None).unwrap();
    assert_eq!(t.dim(1), 9);
    assert_eq!(t.dim(0), 1);
    assert!(t.dim(2) < a.dim(2));
    assert!(t.check_commutativity());
    for i in 0..t.n_generators() {
        assert_eq!(t.generator_poly(i).eval(prime, &pts[0].coords), 0);
    }
}

#[test]
fn blowup_pieces() {
    let pt = BasePoint { a: 3, b: 7 };
    let s = SurfaceModel::quadric_blowup(vec![pt]).unwrap();
    let zero = DivisorClass::Blowup { a: 0, b: 0, mults: vec![0] };
    let m = build_ambient_module(big(), &s, &zero, &DivisorClass::Blowup { a: 2, b: 2, mults: vec![1] }, 2).unwrap();
    assert_eq!(m.dim(1), 8);
    let m = build_ambient_module(big(), &s, &zero, &DivisorClass::Blowup { a: 3, b: 3, mults: vec![2] }, 2).unwrap();
    assert_eq!(m.dim(1), 13);
    assert!(m.check_commutativity());
}

#[test]
fn colinear_base_points_are_rejected() {
    let err = SurfaceModel::quadric_blowup(vec![BasePoint { a: 1, b: 2 }, BasePoint { a: 1, b: 5 }]).unwrap_err();
    assert!(matches!(err, Error::InvalidSurface(_)), "{err:?}");
}

#[test]
fn branch_expansion_on_random_quartic() {
    let prime = big();
    let f = random_plane_curve(prime, 4, 5);
    for x in find_rational_points(prime, &f, 3, 6).unwrap() {
        let b = local_branch_expansion(prime, &f, &x, 4).unwrap();
        let vars: Vec<Series> = b.series();
        assert_eq!(substitute(prime, &f, &vars).valuation(), None);
    }
}

#[test]
fn branch_needs_positive_order() {
    let prime = big();
    let f = random_plane_curve(prime, 4, 5);
    let x = find_rational_points(prime, &f, 1, 6).unwrap().remove(0);
    assert!(local_branch_expansion(prime, &f, &x, 0).is_err());
}

#[test]
fn fermat_quartic_points_over_small_field() {
    let prime = Prime::new(101).unwrap();
    let f = fermat_quartic(prime);
    let pts = find_rational_points(prime, &f, 5, 1).unwrap();
    assert_eq!(pts.len(), 5);
    for (i, x) in pts.iter().enumerate() {
        assert_eq!(f.eval(prime, &x.coords), 0);
        assert_ne!(f.derivative(prime, x.smooth_var).eval(prime, &x.coords), 0);
        assert!(pts[..i].iter().all(|y| y.coords != x.coords));
    }
    assert!(find_rational_points(prime, &f, 0, 1).unwrap().is_empty());
}

#[test]
fn exhausted_budget_reports_partial_points() {
    // A smooth conic over GF(5) has exactly 6 points.
    let prime = Prime::new(5).unwrap();
    let conic = Poly::from_signed(prime, 3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
    match find_rational_points(prime, &conic, 10, 1) {
        Err(Error::PointBudget { requested, partial }) => {
            assert_eq!(requested, 10);
            assert!(partial.len() <= 6);
            assert!(partial.iter().all(|c| conic.eval(prime, c) == 0));
        }
        other => panic!("expected a budget error, got {other:?}"),
    }
}

#[test]
fn colinear_points_lie_on_one_line() {
    let prime = big();
    let f = random_plane_curve(prime, 4, 7);
    let pts = find_colinear_points(prime, &f, 3, 8).unwrap();
    assert_eq!(pts.len(), 3);
    let [a, b, c] = [pts[0].coords, pts[1].coords, pts[2].coords];
    let minor = |i: usize, j: usize| prime.sub(prime.mul(b[i], c[j]), prime.mul(b[j], c[i]));
    let det =
        prime.add(prime.sub(prime.mul(a[0], minor(1, 2)), prime.mul(a[1], minor(0, 2))), prime.mul(a[2], minor(0, 1)));
    assert_eq!(det, 0);
}

#[test]
fn evaluation_split_on_quartic() {
    let prime = big();
    let f = random_plane_curve(prime, 4, 9);
    let a = build_restriction_module(&plane_ambient(prime, 3), &f, &DivisorClass::Degree(4)).unwrap();
    let x = find_rational_points(prime, &f, 1, 10).unwrap().remove(0);
    let sp = evaluation_split(&a, &x.coords).unwrap();
    assert_eq!(sp.w.dimension(), 9);
    let eval = |v: &syzygy_core::SparseVec| v.iter().fold(0, |acc, (i, c)| prime.add(acc, prime.mul(c, sp.values[i])));
    assert_eq!(eval(&sp.v0), 1);
    assert!(sp.w.vectors.iter().all(|w| eval(w) == 0));
}

#[test]
fn small_prime_is_rejected_for_high_orders() {
    let prime = Prime::new(3).unwrap();
    let a = build_ambient_module(prime, &SurfaceModel::line(), &DivisorClass::Degree(0), &DivisorClass::Degree(4), 3)
        .unwrap();
    let err = build_point_truncated_module(&a, &[TruncationPoint::on_line(1, 2, 8)], None).unwrap_err();
    assert!(matches!(err, Error::PrimeTooSmall { .. }), "{err:?}");
}
