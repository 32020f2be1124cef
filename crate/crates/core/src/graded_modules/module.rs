use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::{multiply_into, MonomialSpace};
use super::series::{powers, Series};
use super::{BranchExpansion, Poly};
use crate::error::{Error, Result};
use crate::ff_linalg::{kernel_basis, Echelon, Prime, PrimeFieldMatrix, SparseVec, VectorSpaceBasis};
use crate::multilinear::{binomial, BasePoint, DivisorClass, SurfaceModel};

/// One graded piece, realized as a subquotient `U / Q` of a monomial space `R_c`.
///
/// Basis representatives are kept in reduced echelon form modulo `Q`, so coordinates of
/// an element are read off at the representatives' pivot columns after reduction.
#[derive(Clone, Debug)]
pub struct Piece {
    pub class: DivisorClass,
    pub space: Arc<MonomialSpace>,
    reps: Vec<SparseVec>,
    rep_pivots: Vec<u32>,
    quotient: Echelon,
}

impl Piece {
    /// `span(sub) + Q` modulo `Q`, where `Q` is already in echelon form.
    pub fn from_parts(class: DivisorClass, space: Arc<MonomialSpace>, sub: &[SparseVec], quotient: Echelon) -> Self {
        let residuals = quotient.reduce_many(sub);
        let mut classes = Echelon::new(quotient.prime(), space.dim());
        classes.insert_all(&residuals);
        let rref = classes.into_rref();
        Piece { class, space, reps: rref.rows().to_vec(), rep_pivots: rref.pivot_cols().to_vec(), quotient }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[SparseVec] {
        &self.reps
    }

    pub fn quotient(&self) -> &Echelon {
        &self.quotient
    }

    pub fn quotient_dim(&self) -> usize {
        self.quotient.rank()
    }

    /// Coordinates of `u ∈ U + Q` in the representative basis.
    pub fn coords(&self, u: &SparseVec) -> Result<SparseVec> {
        let p = self.quotient.prime();
        let r = self.quotient.reduce(u);
        let mut out = Vec::new();
        let mut rest = r.clone();
        for (i, &c) in self.rep_pivots.iter().enumerate() {
            let x = r.get(c as usize);
            if x != 0 {
                out.push((i as u32, x));
                rest = rest.add_scaled(p, p.neg(x), &self.reps[i]);
            }
        }
        if !rest.is_zero() {
            return Err(Error::Construction(format!("element not in the piece of class {}", self.class)));
        }
        Ok(SparseVec::from_entries(p, out))
    }

    pub fn contains(&self, u: &SparseVec) -> bool {
        self.coords(u).is_ok()
    }
}

/// What a module was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleLabel {
    pub kind: String,
    pub surface: String,
    pub twist: String,
    pub polarization: String,
    pub detail: Vec<String>,
}

/// Bookkeeping recorded by the restriction builder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionData {
    pub curve_class: DivisorClass,
    pub curve_genus: Option<i64>,
    pub degree: Option<i64>,
    /// `dim A_1`.
    pub h0: usize,
    /// `h^0` predicted by Riemann-Roch when the restricted bundle is nonspecial or canonical.
    pub expected_h0: Option<i64>,
    pub a0_is_constants: bool,
    /// `A_1` equals the image of the ambient degree-one piece and matches the predicted `h^0`.
    pub a1_identified: bool,
}

/// A point at which vanishing along a curve branch (or along `P^1`) is imposed.
#[derive(Clone, Debug)]
pub struct TruncationPoint {
    pub coords: Vec<u64>,
    /// Series for each homogeneous coordinate in a local parameter.
    pub param: Vec<Series>,
    pub mult: u32,
}

impl TruncationPoint {
    pub fn from_branch(b: &BranchExpansion, mult: u32) -> Self {
        TruncationPoint { coords: b.center.coords.to_vec(), param: b.series(), mult }
    }

    /// The point `[a : 1]` of `P^1` with local parameter `x = a + s`.
    pub fn on_line(a: u64, mult: u32, order: usize) -> Self {
        TruncationPoint {
            coords: vec![a, 1],
            param: vec![Series::linear(a, order + 1), Series::constant(1, order + 1)],
            mult,
        }
    }
}

/// Finite truncation `B_0, ..., B_qmax` of a graded module over `Sym(V)`.
#[derive(Clone, Debug)]
pub struct GradedModule {
    pub prime: Prime,
    pub surface: SurfaceModel,
    pub label: ModuleLabel,
    pub twist: DivisorClass,
    pub polarization: DivisorClass,
    pub gen_space: Arc<MonomialSpace>,
    /// Basis of `V` as elements of the polarization's monomial space.
    pub generators: Vec<SparseVec>,
    pub pieces: Vec<Arc<Piece>>,
    /// `action[q][i]` is the matrix of multiplication by generator `i` from `B_q` to `B_{q+1}`.
    pub action: Vec<Vec<PrimeFieldMatrix>>,
    pub restriction: Option<RestrictionData>,
}

impl GradedModule {
    pub fn qmax(&self) -> usize {
        self.pieces.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.dim()).collect()
    }

    pub fn dim(&self, q: usize) -> usize {
        self.pieces.get(q).map_or(0, |p| p.dim())
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn v_basis(&self) -> VectorSpaceBasis {
        VectorSpaceBasis::new_unchecked(
            format!("H0({})", self.polarization),
            self.gen_space.dim(),
            self.prime,
            self.generators.clone(),
        )
    }

    pub fn generator_poly(&self, i: usize) -> Poly {
        self.gen_space.to_poly(self.prime, &self.generators[i])
    }

    /// Checks `μ(v, μ(w, b)) = μ(w, μ(v, b))` for every pair of generators and every
    /// basis element where both sides are stored.
    pub fn check_commutativity(&self) -> bool {
        let n = self.n_generators();
        for q in 0..self.action.len().saturating_sub(1) {
            for i in 0..n {
                for j in i + 1..n {
                    let a = self.action[q + 1][i].matmul(&self.action[q][j]);
                    let b = self.action[q + 1][j].matmul(&self.action[q][i]);
                    match (a, b) {
                        (Ok(a), Ok(b)) if a == b => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }

    /// The same pieces viewed over the subspace of `V` spanned by `combos` (given in
    /// generator coordinates).
    pub fn restrict_scalars(&self, combos: &[SparseVec], note: &str) -> Result<GradedModule> {
        let p = self.prime;
        let n = self.n_generators();
        if combos.iter().any(|c| c.max_index().is_some_and(|i| i >= n)) {
            return Err(Error::DimensionMismatch("combination outside V".into()));
        }
        let generators: Vec<SparseVec> =
            combos.iter().map(|c| crate::ff_linalg::combine(p, &self.generators, &c.to_dense(n))).collect();
        VectorSpaceBasis::new("V", self.gen_space.dim(), p, generators.clone())?;
        let action = self
            .action
            .iter()
            .map(|mats| combos.iter().map(|c| combine_matrices(p, mats, c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut label = self.label.clone();
        label.detail.push(note.to_string());
        Ok(GradedModule { generators, action, label, ..self.clone() })
    }
}

fn combine_matrices(p: Prime, mats: &[PrimeFieldMatrix], c: &SparseVec) -> Result<PrimeFieldMatrix> {
    let (rows, cols) = (mats[0].rows(), mats[0].cols());
    let mut t = Vec::new();
    for (i, x) in c.iter() {
        t.extend(mats[i].entries().map(|(r, cc, v)| (r, cc, p.mul(v, x))));
    }
    PrimeFieldMatrix::from_triplets(rows, cols, p, t)
}

/// Taylor coefficients at a blowup base point: the functional sending a polynomial to the
/// coefficient of `(v-a)^α (t-b)^β` in the chart `u = s = 1`, for all `α + β < order`.
fn base_point_conditions(p: Prime, space: &MonomialSpace, pt: &BasePoint, order: u32) -> Vec<SparseVec> {
    let mut rows = Vec::new();
    for alpha in 0..order as u16 {
        for beta in 0..(order as u16 - alpha) {
            let mut e = Vec::new();
            for (i, m) in space.monomials().iter().enumerate() {
                let (j, l) = (m.exps()[1], m.exps()[3]);
                if j < alpha || l < beta {
                    continue;
                }
                let c = p.mul(
                    p.mul(binomial(j as usize, alpha as usize) as u64 % p.value(), p.pow(pt.a, (j - alpha) as u64)),
                    p.mul(binomial(l as usize, beta as usize) as u64 % p.value(), p.pow(pt.b, (l - beta) as u64)),
                );
                e.push((i as u32, c));
            }
            rows.push(SparseVec::from_entries(p, e));
        }
    }
    rows
}

/// Null space of a list of functionals on an `n`-dimensional space.
fn common_kernel(p: Prime, n: usize, conditions: &[SparseVec]) -> Result<Vec<SparseVec>> {
    if conditions.iter().all(|c| c.is_zero()) {
        return Ok((0..n).map(SparseVec::unit).collect());
    }
    let m = PrimeFieldMatrix::from_triplets(
        conditions.len(),
        n,
        p,
        conditions.iter().enumerate().flat_map(|(r, c)| c.iter().map(move |(j, v)| (r, j, v))),
    )?;
    Ok(kernel_basis(&m).vectors)
}

/// Sections of `class` on the surface, including blowup base-point conditions: the
/// monomial space and a basis of the subspace satisfying them.
pub fn section_space(
    p: Prime,
    surface: &SurfaceModel,
    class: &DivisorClass,
) -> Result<(Arc<MonomialSpace>, Vec<SparseVec>)> {
    let space = MonomialSpace::new(surface, class)?;
    let orders = class.point_orders();
    let mut conds = Vec::new();
    for (pt, &o) in surface.base_points().iter().zip(&orders) {
        conds.extend(base_point_conditions(p, &space, pt, o));
    }
    let sub = common_kernel(p, space.dim(), &conds)?;
    Ok((space, sub))
}

/// A uniformly random section of `class`, as a form in the Cox variables.
pub fn random_section<R: rand::Rng>(
    prime: Prime,
    surface: &SurfaceModel,
    class: &DivisorClass,
    rng: &mut R,
) -> Result<Poly> {
    surface.check_class(class)?;
    let (space, sub) = section_space(prime, surface, class)?;
    if sub.is_empty() {
        return Err(Error::Construction(format!("{class} has no sections on {surface}")));
    }
    let coeffs: Vec<u64> = sub.iter().map(|_| prime.random_element(rng)).collect();
    let v = crate::ff_linalg::combine(prime, &sub, &coeffs);
    Ok(space.to_poly(prime, &v))
}

fn check_prime(p: Prime, needed: u64) -> Result<()> {
    if p.value() <= needed {
        return Err(Error::PrimeTooSmall { prime: p.value(), needed });
    }
    Ok(())
}

fn compute_action(
    p: Prime,
    gen_space: &MonomialSpace,
    generators: &[SparseVec],
    pieces: &[Arc<Piece>],
) -> Result<Vec<Vec<PrimeFieldMatrix>>> {
    let mut action = Vec::with_capacity(pieces.len().saturating_sub(1));
    for q in 0..pieces.len().saturating_sub(1) {
        let (src, dst) = (&pieces[q], &pieces[q + 1]);
        let mut mats = Vec::with_capacity(generators.len());
        for g in generators {
            let mut cols = Vec::with_capacity(src.dim());
            for b in src.reps() {
                let prod = multiply_into(p, gen_space, g, &src.space, b, &dst.space)?;
                cols.push(dst.coords(&prod)?);
            }
            mats.push(PrimeFieldMatrix::from_columns(dst.dim(), p, &cols)?);
        }
        action.push(mats);
    }
    Ok(action)
}

/// `B_q = H^0(F + qL)` for `q = 0..=qmax`, acted on by the monomial basis of `H^0(L)`.
pub fn build_ambient_module(
    prime: Prime,
    surface: &SurfaceModel,
    twist: &DivisorClass,
    polarization: &DivisorClass,
    qmax: usize,
) -> Result<GradedModule> {
    if qmax < 2 {
        return Err(Error::Config(format!("qmax = {qmax} must be at least 2")));
    }
    surface.check_class(twist)?;
    surface.check_class(polarization)?;
    let max_order = (0..=qmax as i64)
        .flat_map(|q| twist.add(&polarization.scale(q)).map(|c| c.point_orders()).unwrap_or_default())
        .max()
        .unwrap_or(0);
    check_prime(prime, max_order as u64)?;
    let (gen_space, gen_sub) = section_space(prime, surface, polarization)?;
    let gen_piece =
        Piece::from_parts(polarization.clone(), gen_space.clone(), &gen_sub, Echelon::new(prime, gen_space.dim()));
    let generators = gen_piece.reps().to_vec();
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let mut pieces = Vec::with_capacity(qmax + 1);
    for q in 0..=qmax {
        let class = twist.add(&polarization.scale(q as i64))?;
        let (space, sub) = section_space(prime, surface, &class)?;
        let dim = space.dim();
        pieces.push(Arc::new(Piece::from_parts(class, space, &sub, Echelon::new(prime, dim))));
    }
    let action = compute_action(prime, &gen_space, &generators, &pieces)?;
    Ok(GradedModule {
        prime,
        surface: surface.clone(),
        label: ModuleLabel {
            kind: "ambient".into(),
            surface: surface.to_string(),
            twist: twist.to_string(),
            polarization: polarization.to_string(),
            detail: vec![],
        },
        twist: twist.clone(),
        polarization: polarization.clone(),
        gen_space,
        generators,
        pieces,
        action,
        restriction: None,
    })
}

/// `h^0` of the restriction to a curve of genus `g` of a bundle of degree `deg`, when
/// Riemann-Roch determines it (nonspecial or canonical).
fn predicted_h0(deg: i64, g: i64, canonical: bool) -> Option<i64> {
    if canonical {
        Some(g)
    } else if deg > 2 * g - 2 {
        Some(deg - g + 1)
    } else {
        None
    }
}

/// `A_q = B_q / f·B'_q` with `B'_q = H^0(F + qL - X)`, where `f` defines the curve `X`.
pub fn build_restriction_module(ambient: &GradedModule, f: &Poly, curve_class: &DivisorClass) -> Result<GradedModule> {
    let p = ambient.prime;
    let surface = &ambient.surface;
    surface.check_class(curve_class)?;
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let (x_space, x_sub) = section_space(p, surface, curve_class)?;
    let f_vec = x_space.coords(p, f).map_err(|_| Error::ClassMismatch {
        class: format!("form of degree {}", f.terms()[0].0.total_degree()),
        surface: format!("{} on {surface}", curve_class),
    })?;
    let mut x_ech = Echelon::new(p, x_space.dim());
    x_ech.insert_all(&x_sub);
    if !x_ech.contains(&f_vec) {
        return Err(Error::ClassMismatch {
            class: "form violating the base-point multiplicities".into(),
            surface: curve_class.to_string(),
        });
    }
    let mut pieces = Vec::with_capacity(ambient.pieces.len());
    let mut shifted_dims = Vec::new();
    for piece in &ambient.pieces {
        let shifted = piece.class.sub(curve_class)?;
        let (s_space, s_sub) = section_space(p, surface, &shifted)?;
        shifted_dims.push(s_sub.len());
        let mut q_ech = Echelon::new(p, piece.space.dim());
        for b in &s_sub {
            q_ech.insert(&multiply_into(p, &x_space, &f_vec, &s_space, b, &piece.space)?);
        }
        if q_ech.rank() != s_sub.len() {
            return Err(Error::Construction("multiplication by the defining form is not injective".into()));
        }
        pieces.push(Arc::new(Piece::from_parts(piece.class.clone(), piece.space.clone(), piece.reps(), q_ech)));
    }
    let action = compute_action(p, &ambient.gen_space, &ambient.generators, &pieces)?;
    let h0 = pieces.get(1).map_or(0, |x| x.dim());
    let genus = surface.adjunction_genus(curve_class).ok();
    let restricted = ambient.twist.add(&ambient.polarization)?;
    let degree = surface.intersection(&restricted, curve_class).ok();
    let canonical = surface.canonical_class().add(curve_class).ok().as_ref() == Some(&restricted);
    let expected_h0 = match (degree, genus) {
        (Some(d), Some(g)) => predicted_h0(d, g, canonical),
        _ => None,
    };
    let data = RestrictionData {
        curve_class: curve_class.clone(),
        curve_genus: genus,
        degree,
        h0,
        expected_h0,
        a0_is_constants: pieces[0].dim() == 1,
        a1_identified: shifted_dims.get(1) == Some(&0) && expected_h0 == Some(h0 as i64),
    };
    let mut label = ambient.label.clone();
    label.kind = "restriction".into();
    label.detail.push(format!("curve class {curve_class}"));
    Ok(GradedModule { pieces, action, restriction: Some(data), label, ..ambient.clone() })
}

/// Values of the local-parameter coefficients `s^0 .. s^{order-1}` of every monomial.
fn branch_conditions(p: Prime, space: &MonomialSpace, pt: &TruncationPoint, order: usize) -> Vec<SparseVec> {
    if order == 0 {
        return vec![];
    }
    let len = order;
    let param: Vec<Series> =
        pt.param.iter().map(|s| Series { coeffs: s.coeffs[..len.min(s.len())].to_vec() }).collect();
    let maxdeg = space.monomials().iter().flat_map(|m| m.exps().iter().copied()).max().unwrap_or(0) as usize;
    let pows: Vec<Vec<Series>> = param.iter().map(|s| powers(p, s, maxdeg)).collect();
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(space.dim());
    for m in space.monomials() {
        let mut s = Series::constant(1, len);
        for (i, &e) in m.exps().iter().enumerate().take(param.len()) {
            if e > 0 {
                s = s.mul(p, &pows[i][e as usize]);
            }
        }
        cols.push(s.coeffs);
    }
    (0..len)
        .map(|j| SparseVec::from_entries(p, cols.iter().enumerate().map(|(i, c)| (i as u32, c[j])).collect()))
        .collect()
}

/// Subspace of each piece of `base` vanishing to order `q·m_i` at the given points along
/// the curve (or line). `generators`, if given, must span the degree-one piece and are
/// used as the new `V`; otherwise the piece's own basis is used.
pub fn build_point_truncated_module(
    base: &GradedModule,
    points: &[TruncationPoint],
    generators: Option<Vec<SparseVec>>,
) -> Result<GradedModule> {
    let p = base.prime;
    if base.twist != base.twist.zero_like() {
        return Err(Error::Unsupported("point truncation of twisted modules".into()));
    }
    let qmax = base.qmax();
    let max_order = points.iter().map(|x| x.mult as usize * qmax).max().unwrap_or(0);
    check_prime(p, max_order as u64)?;
    if points.iter().any(|x| x.param.iter().any(|s| s.len() < max_order)) {
        return Err(Error::Branch(format!("local parameter shorter than the order {max_order}")));
    }
    let mut pieces = Vec::with_capacity(qmax + 1);
    for (q, piece) in base.pieces.iter().enumerate() {
        let mut conds: Vec<Vec<u64>> = Vec::new();
        for pt in points {
            for c in branch_conditions(p, &piece.space, pt, q * pt.mult as usize) {
                let dense = c.to_dense(piece.space.dim());
                conds.push(piece.reps().iter().map(|r| r.dot_dense(p, &dense)).collect());
            }
        }
        let cond_vecs: Vec<SparseVec> = conds.iter().map(|c| SparseVec::from_dense(c)).collect();
        let ker = common_kernel(p, piece.dim(), &cond_vecs)?;
        let sub: Vec<SparseVec> =
            ker.iter().map(|k| crate::ff_linalg::combine(p, piece.reps(), &k.to_dense(piece.dim()))).collect();
        pieces.push(Arc::new(Piece::from_parts(
            piece.class.clone(),
            piece.space.clone(),
            &sub,
            piece.quotient().clone(),
        )));
    }
    let gens = match generators {
        Some(g) => g,
        None => pieces[1].reps().to_vec(),
    };
    let mut ech = Echelon::new(p, base.gen_space.dim());
    for g in &gens {
        pieces[1]
            .coords(g)
            .map_err(|_| Error::Construction("generator outside the truncated degree-one piece".into()))?;
        if ech.insert(&pieces[1].quotient().reduce(g)).is_none() {
            return Err(Error::Construction("truncated generators are dependent".into()));
        }
    }
    if gens.len() != pieces[1].dim() {
        return Err(Error::Construction("generators do not span the truncated degree-one piece".into()));
    }
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let action = compute_action(p, &base.gen_space, &gens, &pieces)?;
    let mut label = base.label.clone();
    label.kind = "point-truncated".into();
    for pt in points {
        label.detail.push(format!("vanishing order {} per degree at {:?}", pt.mult, pt.coords));
    }
    Ok(GradedModule { pieces, action, generators: gens, label, restriction: None, ..base.clone() })
}

/// Splitting `0 → W_x → V → L_x → 0` with `ev_x(v_0) = 1`.
#[derive(Clone, Debug)]
pub struct EvaluationSplit {
    /// `ev_x(v_i)` for each generator.
    pub values: Vec<u64>,
    /// Index of the first generator not vanishing at `x`.
    pub pivot: usize,
    /// `v_0 = v_pivot / ev_x(v_pivot)` in generator coordinates.
    pub v0: SparseVec,
    /// `w_i = v_i - (c_i / c_pivot) v_pivot` for `i ≠ pivot`, in generator coordinates.
    pub w: VectorSpaceBasis,
}

pub fn evaluation_split(module: &GradedModule, x: &[u64]) -> Result<EvaluationSplit> {
    let p = module.prime;
    let values: Vec<u64> = (0..module.n_generators()).map(|i| module.generator_poly(i).eval(p, x)).collect();
    let pivot = values.iter().position(|&c| c != 0).ok_or_else(|| Error::BaseLocus(x.to_vec()))?;
    let inv = p.inv(values[pivot]);
    let v0 = SparseVec::from_entries(p, vec![(pivot as u32, inv)]);
    let w = (0..values.len())
        .filter(|&i| i != pivot)
        .map(|i| SparseVec::from_entries(p, vec![(i as u32, 1), (pivot as u32, p.neg(p.mul(values[i], inv)))]))
        .collect();
    let w = VectorSpaceBasis::new_unchecked("V", values.len(), p, w);
    Ok(EvaluationSplit { values, pivot, v0, w })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Prime {
        Prime::new(2147483647).unwrap()
    }

    #[test]
    fn plane_ambient_dims() {
        let s = SurfaceModel::plane();
        let m = build_ambient_module(p(), &s, &DivisorClass::Degree(0), &DivisorClass::Degree(2), 2).unwrap();
        assert_eq!(m.dims(), vec![1, 6, 15]);
        assert!(m.check_commutativity());
        let t = build_ambient_module(p(), &s, &DivisorClass::Degree(-5), &DivisorClass::Degree(4), 2).unwrap();
        assert_eq!(t.dims(), vec![0, 0, 10]);
    }

    #[test]
    fn split_on_plane() {
        let s = SurfaceModel::plane();
        let m = build_ambient_module(p(), &s, &DivisorClass::Degree(0), &DivisorClass::Degree(1), 2).unwrap();
        let sp = evaluation_split(&m, &[0, 0, 1]).unwrap();
        assert_eq!(sp.pivot, 2);
        assert_eq!(sp.w.vectors, vec![SparseVec::unit(0), SparseVec::unit(1)]);
        assert_eq!(sp.v0, SparseVec::unit(2));
        let sub = m.restrict_scalars(&[SparseVec::unit(0)], "x only").unwrap();
        let err = evaluation_split(&sub, &[0, 1, 1]).unwrap_err();
        assert!(matches!(err, Error::BaseLocus(_)));
    }
}
