use crate::ff_linalg::Prime;

use super::Poly;

/// Power series in one parameter `s`, truncated to `len` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub coeffs: Vec<u64>,
}

impl Series {
    pub fn constant(c: u64, len: usize) -> Self {
        let mut coeffs = vec![0; len];
        if len > 0 {
            coeffs[0] = c;
        }
        Series { coeffs }
    }

    /// `c + s`.
    pub fn linear(c: u64, len: usize) -> Self {
        let mut s = Self::constant(c, len);
        if len > 1 {
            s.coeffs[1] = 1;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, prime: Prime, other: &Series) -> Series {
        let n = self.len().min(other.len());
        let mut out = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = prime.mul_add(out[i + j], a, b);
            }
        }
        Series { coeffs: out }
    }

    pub fn add_scaled(&mut self, prime: Prime, c: u64, other: &Series) {
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = prime.mul_add(*a, c, b);
        }
    }

    /// Order of vanishing, or `None` when zero to the stored precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }
}

/// Powers `x^0 .. x^max` of a series.
pub fn powers(prime: Prime, x: &Series, max: usize) -> Vec<Series> {
    let mut out = vec![Series::constant(1, x.len())];
    for k in 1..=max {
        let next = out[k - 1].mul(prime, x);
        out.push(next);
    }
    out
}

/// Substitutes one series per variable into `f`.
pub fn substitute(prime: Prime, f: &Poly, vars: &[Series]) -> Series {
    let len = vars.iter().map(Series::len).min().unwrap_or(0);
    let max_deg = f.terms().iter().flat_map(|(m, _)| m.exps().iter().copied()).max().unwrap_or(0) as usize;
    let pows: Vec<Vec<Series>> = vars.iter().map(|v| powers(prime, v, max_deg)).collect();
    let mut acc = Series::constant(0, len);
    for (m, c) in f.terms() {
        let mut term = Series::constant(*c, len);
        for (i, &e) in m.exps().iter().enumerate().take(vars.len()) {
            if e > 0 {
                term = term.mul(prime, &pows[i][e as usize]);
            }
        }
        acc.add_scaled(prime, 1, &term);
    }
    acc
}
