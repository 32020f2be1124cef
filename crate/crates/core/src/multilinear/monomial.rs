use std::fmt;

use serde::{Deserialize, Serialize};

use super::{DivisorClass, SurfaceKind, SurfaceModel};
use crate::error::Result;

pub const MAX_VARS: usize = 4;

/// Exponent vector in at most four variables; unused trailing slots stay zero.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub [u16; MAX_VARS]);

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Monomial {
    pub fn new(exps: &[u16]) -> Self {
        let mut e = [0; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Monomial(e)
    }

    pub fn exps(&self) -> &[u16; MAX_VARS] {
        &self.0
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0) {
            *x += y;
        }
        Monomial(e)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0) {
            *x = x.checked_sub(y)?;
        }
        Some(Monomial(e))
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = names
            .iter()
            .zip(self.0)
            .filter(|(_, e)| *e > 0)
            .map(|(n, e)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// All exponent vectors of `nvars` variables with total degree `d`, in descending lex order.
fn homogeneous(nvars: usize, d: i64) -> Vec<Monomial> {
    fn rec(nvars: usize, i: usize, left: u16, cur: &mut [u16; MAX_VARS], out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur[i] = left;
            out.push(Monomial(*cur));
            return;
        }
        for x in (0..=left).rev() {
            cur[i] = x;
            rec(nvars, i + 1, left - x, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if d < 0 || nvars == 0 {
        return out;
    }
    rec(nvars, 0, d as u16, &mut [0; MAX_VARS], &mut out);
    out
}

/// Cox monomials `u^i v^j s^k t^l` with `k + l = a` and `i + j + l e = b`, descending lex.
fn ruled(e: i64, a: i64, b: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if a < 0 {
        return out;
    }
    for k in (0..=a).rev() {
        let l = a - k;
        let fib = b - l * e;
        if fib < 0 {
            continue;
        }
        for i in (0..=fib).rev() {
            out.push(Monomial([i as u16, (fib - i) as u16, k as u16, l as u16]));
        }
    }
    // Descending lex on (u, v, s, t).
    out.sort_by(|x, y| y.cmp(x));
    out
}

/// Ordered monomial basis of global sections of `class`. For the blown-up quadric this is
/// the basis of the underlying bidegree; base-point conditions are imposed by the module
/// builders.
pub fn monomial_basis(surface: &SurfaceModel, class: &DivisorClass) -> Result<Vec<Monomial>> {
    surface.check_class(class)?;
    Ok(match (&surface.kind, class) {
        (SurfaceKind::ProjectivePlane, DivisorClass::Degree(d)) => homogeneous(3, *d),
        (SurfaceKind::ProjectiveLine, DivisorClass::Degree(d)) => homogeneous(2, *d),
        (SurfaceKind::Hirzebruch { e }, DivisorClass::Ruled { a, b }) => ruled(*e as i64, *a, *b),
        (SurfaceKind::QuadricBlowup { .. }, DivisorClass::Blowup { a, b, .. }) => ruled(0, *a, *b),
        _ => unreachable!("class checked"),
    })
}

/// Closed-form count `Σ_{l=0..a} max(0, b - l e + 1)` of sections of `aC_0 + bf` on `Σ_e`.
pub fn ruled_section_count(e: i64, a: i64, b: i64) -> usize {
    if a < 0 {
        return 0;
    }
    (0..=a).map(|l| (b - l * e + 1).max(0) as usize).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_and_ruled_examples() {
        let p2 = SurfaceModel::plane();
        let b = monomial_basis(&p2, &DivisorClass::Degree(2)).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b[0], Monomial::new(&[2, 0, 0]));
        assert!(monomial_basis(&p2, &DivisorClass::Degree(-1)).unwrap().is_empty());
        let s1 = SurfaceModel::hirzebruch(1);
        assert_eq!(monomial_basis(&s1, &DivisorClass::Ruled { a: 1, b: 2 }).unwrap().len(), 5);
        assert!(monomial_basis(&s1, &DivisorClass::Degree(2)).is_err());
        let lin = monomial_basis(&p2, &DivisorClass::Degree(1)).unwrap();
        assert_eq!(lin, vec![Monomial::new(&[1, 0, 0]), Monomial::new(&[0, 1, 0]), Monomial::new(&[0, 0, 1])]);
    }
}
