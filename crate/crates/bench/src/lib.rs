//! Fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use syzygy_core::graded_modules::{build_ambient_module, build_restriction_module, random_section, GradedModule};
use syzygy_core::multilinear::{DivisorClass, SurfaceModel};
use syzygy_core::{Prime, Result};

pub const BENCH_PRIME: u64 = 2147483647;

pub fn prime() -> Prime {
    Prime::new(BENCH_PRIME).expect("prime")
}

/// Section module of O(n) on the plane, degrees 0..=qmax.
pub fn plane_module(n: i64, qmax: usize) -> Result<GradedModule> {
    build_ambient_module(prime(), &SurfaceModel::plane(), &DivisorClass::Degree(0), &DivisorClass::Degree(n), qmax)
}

/// Section module of O_X(n) on a random plane curve of degree d.
pub fn plane_curve_module(d: i64, n: i64, seed: u64) -> Result<GradedModule> {
    let s = SurfaceModel::plane();
    let f = random_section(prime(), &s, &DivisorClass::Degree(d), &mut ChaCha8Rng::seed_from_u64(seed))?;
    build_restriction_module(&plane_module(n, 2)?, &f, &DivisorClass::Degree(d))
}
