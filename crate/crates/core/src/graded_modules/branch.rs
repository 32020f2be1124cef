use serde::{Deserialize, Serialize};

use super::series::{substitute, Series};
use super::{PointOnCurve, Poly};
use crate::error::{Error, Result};
use crate::ff_linalg::Prime;

/// A truncated parametrization `s ↦ [x_0(s) : x_1(s) : x_2(s)]` of the curve branch
/// through a smooth point. One affine coordinate is `c + s`, the chart coordinate is
/// `1`, and the remaining one is solved for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchExpansion {
    pub center: PointOnCurve,
    pub order: usize,
    /// Coordinate fixed to one.
    pub chart: usize,
    /// Coordinate used as the parameter.
    pub parameter_var: usize,
    /// Coordinate expressed as a series.
    pub solved_var: usize,
    /// Whether the default choice (parameter = first affine coordinate) was swapped
    /// because the tangent was vertical.
    pub swapped: bool,
    /// Coefficients of each homogeneous coordinate, `order + 1` terms each.
    pub coordinates: Vec<Vec<u64>>,
}

impl BranchExpansion {
    pub fn series(&self) -> Vec<Series> {
        self.coordinates.iter().map(|c| Series { coeffs: c.clone() }).collect()
    }
}

/// Solves `f(branch(s)) ≡ 0 mod s^{order+1}` coefficient by coefficient.
pub fn local_branch_expansion(prime: Prime, f: &Poly, x: &PointOnCurve, order: usize) -> Result<BranchExpansion> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if order < 1 {
        return Err(Error::Branch("a branch expansion needs order at least 1".into()));
    }
    let x = PointOnCurve::new(prime, f, x.coords)?;
    let c = x.coords;
    let chart = (0..3).rev().find(|&i| c[i] != 0).expect("nonzero point");
    let affine: Vec<usize> = (0..3).filter(|&i| i != chart).collect();
    let grad = f.gradient(prime, &c);
    let (param, solved, swapped) = if grad[affine[1]] != 0 {
        (affine[0], affine[1], false)
    } else if grad[affine[0]] != 0 {
        (affine[1], affine[0], true)
    } else {
        return Err(Error::Branch(format!("no affine partial derivative is nonzero at {c:?}")));
    };
    let len = order + 1;
    let mut vars: Vec<Series> = (0..3).map(|i| Series::constant(c[i], len)).collect();
    vars[param] = Series::linear(c[param], len);
    let inv = prime.inv(grad[solved]);
    for j in 1..len {
        let val = substitute(prime, f, &vars);
        vars[solved].coeffs[j] = prime.neg(prime.mul(val.coeffs[j], inv));
    }
    let check = substitute(prime, f, &vars);
    if check.valuation().is_some() {
        return Err(Error::Branch(format!("resubstitution leaves {:?}", check.coeffs)));
    }
    Ok(BranchExpansion {
        center: x,
        order,
        chart,
        parameter_var: param,
        solved_var: solved,
        swapped,
        coordinates: vars.into_iter().map(|s| s.coeffs).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_solves() {
        let p = Prime::new(101).unwrap();
        let f = Poly::from_signed(p, 3, &[(&[0, 1, 1], 1), (&[2, 0, 0], -1)]);
        let origin = PointOnCurve::new(p, &f, [0, 0, 1]).unwrap();
        let b = local_branch_expansion(p, &f, &origin, 3).unwrap();
        assert_eq!(b.coordinates[0], vec![0, 1, 0, 0]);
        assert_eq!(b.coordinates[1], vec![0, 0, 1, 0]);
        assert!(!b.swapped);
        let g = Poly::from_signed(p, 3, &[(&[0, 1, 2], 1), (&[1, 0, 2], -1), (&[3, 0, 0], -1)]);
        let b = local_branch_expansion(p, &g, &origin, 2).unwrap();
        assert_eq!(b.coordinates[1], vec![0, 1, 0]);
        // x = y^2 has a vertical tangent in the (x, y) chart, so the roles swap.
        let h = Poly::from_signed(p, 3, &[(&[1, 0, 1], 1), (&[0, 2, 0], -1)]);
        let b = local_branch_expansion(p, &h, &origin, 4).unwrap();
        assert!(b.swapped);
        assert_eq!(b.coordinates[0], vec![0, 0, 1, 0, 0]);
    }

    #[test]
    fn singular_point_rejected() {
        let p = Prime::new(101).unwrap();
        let node = Poly::from_signed(p, 3, &[(&[0, 2, 1], 1), (&[2, 0, 1], -1), (&[3, 0, 0], -1)]);
        let err = PointOnCurve::new(p, &node, [0, 0, 1]).unwrap_err();
        assert!(matches!(err, Error::SingularPoint(_)));
    }
}
