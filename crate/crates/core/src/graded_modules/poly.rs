use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff_linalg::{Prime, SparseVec};
use crate::multilinear::{monomial_basis, DivisorClass, Monomial, SurfaceModel};

/// Polynomial over GF(p) as a sorted list of nonzero terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly {
    pub nvars: usize,
    terms: Vec<(Monomial, u64)>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: vec![] }
    }

    pub fn from_terms(prime: Prime, nvars: usize, mut terms: Vec<(Monomial, u64)>) -> Self {
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(Monomial, u64)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % prime.value();
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = prime.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Poly { nvars, terms: out }
    }

    /// Builds from signed integer coefficients, e.g. `[(vec![1,0,1], -1)]`.
    pub fn from_signed(prime: Prime, nvars: usize, terms: &[(&[u16], i64)]) -> Self {
        let t = terms.iter().map(|(e, c)| (Monomial::new(e), prime.from_i64(*c))).collect();
        Self::from_terms(prime, nvars, t)
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, prime: Prime, other: &Poly) -> Poly {
        let mut t = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                t.push((m.mul(n), prime.mul(*a, *b)));
            }
        }
        Poly::from_terms(prime, self.nvars, t)
    }

    pub fn eval(&self, prime: Prime, point: &[u64]) -> u64 {
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut v = *c;
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    v = prime.mul(v, prime.pow(*x, e as u64));
                }
            }
            acc = prime.add(acc, v);
        }
        acc
    }

    /// Partial derivative in variable `var`.
    pub fn derivative(&self, prime: Prime, var: usize) -> Poly {
        let t = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps()[var] > 0)
            .map(|(m, c)| {
                let mut e = *m.exps();
                let k = e[var];
                e[var] -= 1;
                (Monomial(e), prime.mul(*c, k as u64 % prime.value()))
            })
            .collect();
        Poly::from_terms(prime, self.nvars, t)
    }

    pub fn gradient(&self, prime: Prime, point: &[u64]) -> Vec<u64> {
        (0..self.nvars).map(|i| self.derivative(prime, i).eval(prime, point)).collect()
    }

    pub fn render(&self, prime: Prime, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| format!("{}*{}", prime.to_signed(*c), m.render(names)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The coordinate space `R_c` of all monomials of one class, with an index lookup.
#[derive(Clone, Debug)]
pub struct MonomialSpace {
    pub class: DivisorClass,
    pub nvars: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
}

impl MonomialSpace {
    pub fn new(surface: &SurfaceModel, class: &DivisorClass) -> Result<Arc<Self>> {
        let monomials = monomial_basis(surface, class)?;
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        Ok(Arc::new(MonomialSpace { class: class.clone(), nvars: surface.nvars(), monomials, index }))
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).map(|&i| i as usize)
    }

    pub fn to_poly(&self, prime: Prime, v: &SparseVec) -> Poly {
        Poly::from_terms(prime, self.nvars, v.iter().map(|(i, c)| (self.monomials[i], c)).collect())
    }

    pub fn coords(&self, prime: Prime, f: &Poly) -> Result<SparseVec> {
        let mut e = Vec::with_capacity(f.terms().len());
        for (m, c) in f.terms() {
            let i = self
                .index_of(m)
                .ok_or_else(|| Error::ClassMismatch { class: format!("{m:?}"), surface: self.class.to_string() })?;
            e.push((i as u32, *c));
        }
        Ok(SparseVec::from_entries(prime, e))
    }

    pub fn random<R: Rng>(&self, prime: Prime, rng: &mut R) -> SparseVec {
        let d: Vec<u64> = (0..self.dim()).map(|_| prime.random_element(rng)).collect();
        SparseVec::from_dense(&d)
    }
}

/// Product of `a ∈ R_{c_a}` and `b ∈ R_{c_b}` written in `target = R_{c_a + c_b}`.
pub fn multiply_into(
    prime: Prime,
    a_space: &MonomialSpace,
    a: &SparseVec,
    b_space: &MonomialSpace,
    b: &SparseVec,
    target: &MonomialSpace,
) -> Result<SparseVec> {
    let mut e = Vec::with_capacity(a.nnz() * b.nnz());
    for (i, x) in a.iter() {
        let mi = a_space.monomials[i];
        for (j, y) in b.iter() {
            let m = mi.mul(&b_space.monomials[j]);
            let k = target
                .index_of(&m)
                .ok_or_else(|| Error::Construction(format!("product monomial {m:?} not in {}", target.class)))?;
            e.push((k as u32, prime.mul(x, y)));
        }
    }
    Ok(SparseVec::from_entries(prime, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivative() {
        let p = Prime::new(101).unwrap();
        let f = Poly::from_signed(p, 3, &[(&[2, 0, 0], 1), (&[0, 1, 1], -3)]);
        assert_eq!(f.eval(p, &[2, 1, 1]), 1);
        let fx = f.derivative(p, 0);
        assert_eq!(fx, Poly::from_signed(p, 3, &[(&[1, 0, 0], 2)]));
        assert_eq!(f.gradient(p, &[1, 1, 1]), vec![2, 98, 98]);
    }
}
