use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Poly;
use crate::error::{Error, Result};
use crate::ff_linalg::Prime;

/// A smooth GF(p)-point of a plane curve `{f = 0}`, normalized so its last nonzero
/// coordinate is one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointOnCurve {
    pub coords: [u64; 3],
    /// Index of a partial derivative that does not vanish at the point.
    pub smooth_var: usize,
}

/// Scales so the last nonzero coordinate equals one.
pub fn normalize(prime: Prime, c: [u64; 3]) -> [u64; 3] {
    let Some(k) = (0..3).rev().find(|&i| c[i] != 0) else { return c };
    let inv = prime.inv(c[k]);
    [prime.mul(c[0], inv), prime.mul(c[1], inv), prime.mul(c[2], inv)]
}

impl PointOnCurve {
    /// Validates that `coords` lies on `f` and is smooth there.
    pub fn new(prime: Prime, f: &Poly, coords: [u64; 3]) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroForm);
        }
        if coords.iter().all(|&c| c == 0) {
            return Err(Error::PointNotOnCurve(coords.to_vec()));
        }
        let coords = normalize(prime, coords);
        if f.eval(prime, &coords) != 0 {
            return Err(Error::PointNotOnCurve(coords.to_vec()));
        }
        let g = f.gradient(prime, &coords);
        match g.iter().position(|&x| x != 0) {
            Some(smooth_var) => Ok(PointOnCurve { coords, smooth_var }),
            None => Err(Error::SingularPoint(coords.to_vec())),
        }
    }
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Upoly(Vec<u64>);

impl Upoly {
    fn trim(mut v: Vec<u64>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Upoly(v)
    }

    fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn rem(&self, p: Prime, m: &Upoly) -> Upoly {
        let mut r = self.0.clone();
        let dm = m.deg().expect("nonzero modulus");
        let inv = p.inv(m.0[dm]);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = p.mul(r[top], inv);
            if c != 0 {
                for i in 0..=dm {
                    let k = top - dm + i;
                    r[k] = p.sub(r[k], p.mul(c, m.0[i]));
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Upoly::trim(r)
    }

    fn div(&self, p: Prime, m: &Upoly) -> Upoly {
        let dm = m.deg().expect("nonzero divisor");
        let Some(ds) = self.deg() else { return Upoly(vec![]) };
        if ds < dm {
            return Upoly(vec![]);
        }
        let mut r = self.0.clone();
        let mut q = vec![0u64; ds - dm + 1];
        let inv = p.inv(m.0[dm]);
        for top in (dm..=ds).rev() {
            let c = p.mul(r[top], inv);
            q[top - dm] = c;
            for i in 0..=dm {
                let k = top - dm + i;
                r[k] = p.sub(r[k], p.mul(c, m.0[i]));
            }
        }
        Upoly::trim(q)
    }

    fn mulmod(&self, p: Prime, o: &Upoly, m: &Upoly) -> Upoly {
        if self.0.is_empty() || o.0.is_empty() {
            return Upoly(vec![]);
        }
        let mut out = vec![0u64; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in o.0.iter().enumerate() {
                out[i + j] = p.mul_add(out[i + j], a, b);
            }
        }
        Upoly::trim(out).rem(p, m)
    }

    fn powmod(&self, p: Prime, mut e: u64, m: &Upoly) -> Upoly {
        let mut base = self.rem(p, m);
        let mut acc = Upoly(vec![1]).rem(p, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(p, &base, m);
            }
            base = base.mulmod(p, &base, m);
            e >>= 1;
        }
        acc
    }

    fn sub(&self, p: Prime, o: &Upoly) -> Upoly {
        let n = self.0.len().max(o.0.len());
        let v = (0..n).map(|i| p.sub(*self.0.get(i).unwrap_or(&0), *o.0.get(i).unwrap_or(&0))).collect();
        Upoly::trim(v)
    }

    fn gcd(&self, p: Prime, o: &Upoly) -> Upoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.0.is_empty() {
            let r = a.rem(p, &b);
            a = b;
            b = r;
        }
        if let Some(d) = a.deg() {
            let inv = p.inv(a.0[d]);
            a = Upoly(a.0.iter().map(|&c| p.mul(c, inv)).collect());
        }
        a
    }
}

/// Distinct roots in GF(p): gcd with `y^p - y`, then equal-degree splitting.
fn roots<R: Rng>(p: Prime, g: &Upoly, rng: &mut R) -> Vec<u64> {
    if g.deg().is_none_or(|d| d == 0) {
        return vec![];
    }
    let y = Upoly(vec![0, 1]);
    let yp = y.powmod(p, p.value(), g);
    let mut linear = g.gcd(p, &yp.sub(p, &y));
    let mut out = Vec::new();
    if p.value() == 2 {
        return (0..2).filter(|&r| g.0.iter().rev().fold(0, |a, &c| p.add(p.mul(a, r), c)) == 0).collect();
    }
    split(p, &mut linear, rng, &mut out);
    out.sort_unstable();
    out
}

fn split<R: Rng>(p: Prime, g: &mut Upoly, rng: &mut R, out: &mut Vec<u64>) {
    match g.deg() {
        None | Some(0) => {}
        Some(1) => out.push(p.neg(p.mul(g.0[0], p.inv(g.0[1])))),
        Some(_) => loop {
            let a = p.random_element(rng);
            let h = Upoly(vec![a, 1]).powmod(p, (p.value() - 1) / 2, g).sub(p, &Upoly(vec![1]));
            let d = g.gcd(p, &h);
            if let Some(dd) = d.deg() {
                if dd > 0 && dd < g.deg().unwrap() {
                    let mut rest = g.div(p, &d);
                    let mut d = d;
                    split(p, &mut d, rng, out);
                    split(p, &mut rest, rng, out);
                    return;
                }
            }
        },
    }
}

/// Number of slicing lines tried per requested point before giving up.
const LINES_PER_POINT: usize = 40;

/// Smooth points of `f` on the affine line `x = a z` (with `z = 1`).
fn points_on_line<R: Rng>(prime: Prime, f: &Poly, a: u64, rng: &mut R) -> Vec<PointOnCurve> {
    let mut coeffs = vec![0u64; 1];
    for (m, c) in f.terms() {
        let e = m.exps();
        let j = e[1] as usize;
        if coeffs.len() <= j {
            coeffs.resize(j + 1, 0);
        }
        coeffs[j] = prime.mul_add(coeffs[j], *c, prime.pow(a, e[0] as u64));
    }
    let g = Upoly::trim(coeffs);
    roots(prime, &g, rng).into_iter().filter_map(|y| PointOnCurve::new(prime, f, [a, y, 1]).ok()).collect()
}

fn check_plane_form(f: &Poly) -> Result<()> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if f.nvars != 3 {
        return Err(Error::Unsupported("point search is implemented for plane curves".into()));
    }
    Ok(())
}

/// Finds `count` distinct smooth points of the plane curve `f` by slicing with lines
/// `x = a z` for random `a` and extracting roots of the restricted polynomial in `y`.
pub fn find_rational_points(prime: Prime, f: &Poly, count: usize, seed: u64) -> Result<Vec<PointOnCurve>> {
    check_plane_form(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<PointOnCurve> = Vec::new();
    let mut seen = HashSet::new();
    let budget = LINES_PER_POINT * (count + 1);
    for _ in 0..budget {
        if found.len() >= count {
            break;
        }
        let a = prime.random_element(&mut rng);
        for pt in points_on_line(prime, f, a, &mut rng) {
            if seen.insert(pt.coords) {
                found.push(pt);
                if found.len() >= count {
                    break;
                }
            }
        }
    }
    if found.len() < count {
        return Err(Error::PointBudget { requested: count, partial: found.iter().map(|p| p.coords).collect() });
    }
    Ok(found)
}

/// Finds `count` distinct smooth points of `f` lying on one line `x = a z`.
pub fn find_colinear_points(prime: Prime, f: &Poly, count: usize, seed: u64) -> Result<Vec<PointOnCurve>> {
    check_plane_form(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = Vec::new();
    for _ in 0..LINES_PER_POINT * (count + 1) * f.terms()[0].0.total_degree() as usize {
        let a = prime.random_element(&mut rng);
        let pts = points_on_line(prime, f, a, &mut rng);
        if pts.len() >= count {
            return Ok(pts.into_iter().take(count).collect());
        }
        if pts.len() > best.len() {
            best = pts;
        }
    }
    Err(Error::PointBudget { requested: count, partial: best.iter().map(|p| p.coords).collect() })
}
