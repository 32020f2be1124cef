use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bases for the Miller-Rabin rounds. Forty rounds bound the error by 4^-40 = 2^-80
/// for arbitrary inputs; the first twelve alone are deterministic below 3.3e24.
const MR_BASES: [u64; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

/// Smallest and largest bit lengths accepted by [`random_prime`].
pub const MIN_PRIME_BITS: u32 = 20;
pub const MAX_PRIME_BITS: u32 = 62;

/// Bit length used when no prime is specified.
pub const DEFAULT_PRIME_BITS: u32 = 31;

/// A verified prime modulus together with the constants needed for fast reduction.
///
/// All field elements are stored as `u64` values in `[0, p)`. Products of two elements
/// are reduced with a Barrett step when `p < 2^32` and with 128-bit division otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime {
    p: u64,
    // floor(2^64 / p), only meaningful for the small-modulus path.
    barrett: u64,
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prime({})", self.p)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.p
    }
}

impl Prime {
    /// Checks primality and builds the modulus. Values of `2^63` and above are rejected
    /// so that `a + b` never overflows.
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 {
            return Err(Error::InvalidPrime(p));
        }
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let barrett = if p < 1 << 32 { u64::MAX / p } else { 0 };
        Ok(Prime { p, barrett })
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.p
    }

    pub fn bits(self) -> u32 {
        64 - self.p.leading_zeros()
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Reduces any `u64` when `p < 2^32`; for larger moduli the input must be `< p^2`.
    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        if self.barrett != 0 {
            let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
            // The estimate undershoots the true quotient by at most two.
            let mut r = x - q * self.p;
            if r >= self.p {
                r -= self.p;
            }
            if r >= self.p {
                r -= self.p;
            }
            r
        } else {
            x % self.p
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        if self.barrett != 0 {
            self.reduce(a * b)
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    /// `a + b * c` reduced.
    #[inline]
    pub fn mul_add(self, a: u64, b: u64, c: u64) -> u64 {
        if self.barrett != 0 {
            // a < 2^32 and b * c <= (2^32 - 1)^2, so the sum fits.
            self.reduce(a + b * c)
        } else {
            ((a as u128 + b as u128 * c as u128) % self.p as u128) as u64
        }
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero, which is always a caller bug.
    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in GF({})", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(self, x: i64) -> u64 {
        let r = x.rem_euclid(self.p as i64);
        r as u64
    }

    /// Symmetric lift to `(-p/2, p/2]`, handy for printing small coefficients.
    pub fn to_signed(self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn random_element<R: Rng>(self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng>(self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }
}

fn mul_mod_u128(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u128(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_round(n: u64, d: u64, s: u32, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod_u128(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u128(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Primality: 40 Miller-Rabin rounds, then trial division up to `sqrt(n)` whenever
/// `n < 2^32`. Above that the fixed base set is itself a proof of primality.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    if !MR_BASES.iter().all(|&a| miller_rabin_round(n, d, s, a)) {
        return false;
    }
    if n < 1 << 32 {
        let mut q = 3u64;
        while q * q <= n {
            if n.is_multiple_of(q) {
                return false;
            }
            q += 2;
        }
    }
    true
}

/// Draws a prime with exactly `bits` bits, reproducibly from `seed`.
pub fn random_prime(bits: u32, seed: u64) -> Result<Prime> {
    if !(MIN_PRIME_BITS..=MAX_PRIME_BITS).contains(&bits) {
        return Err(Error::PrimeBits(bits));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ PRIME_STREAM);
    let lo = 1u64 << (bits - 1);
    let hi = 1u64 << bits;
    loop {
        let candidate = rng.gen_range(lo..hi) | 1;
        if is_prime(candidate) {
            return Prime::new(candidate);
        }
    }
}

// Keeps prime draws and data draws on separate streams for equal seeds.
const PRIME_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;
