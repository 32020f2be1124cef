//! Projection of syzygies from a point: the maps `π_x`, `η_x`, `∂_x`, the global map
//! `H^0(∂)`, and the containment and drop checks built on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff_linalg::{Echelon, Prime, PrimeFieldMatrix, SparseVec};
use crate::graded_modules::{
    build_point_truncated_module, evaluation_split, EvaluationSplit, GradedModule, TruncationPoint,
};
use crate::koszul::{assemble_differential, describe, standing_hypotheses, CohomologyBasis, KoszulComplex};
use crate::multilinear::{rank_unchecked, wedge_insert, wedge_unrank};

/// A Koszul cocycle in `B_q ⊗ Λ^p U` for a module whose generators span `U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygyClass {
    pub module: String,
    pub p: usize,
    pub q: usize,
    /// Number of generators of the complex the representative lives in.
    pub n: usize,
    pub representative: SparseVec,
}

impl SyzygyClass {
    /// Wraps a representative after checking it is a cocycle.
    pub fn new(module: &GradedModule, p: usize, q: usize, representative: SparseVec) -> Result<Self> {
        let d = assemble_differential(module, p, q)?;
        if representative.max_index().is_some_and(|i| i >= d.cols()) || !d.mul_sparse(&representative).is_zero() {
            return Err(Error::NotACocycle { p, q });
        }
        Ok(SyzygyClass { module: describe(module), p, q, n: module.n_generators(), representative })
    }
}

/// Everything attached to a point `x`: the split of `V`, and the module over `W_x`.
#[derive(Clone, Debug)]
pub struct ProjectionContext {
    pub point: Vec<u64>,
    pub split: EvaluationSplit,
    /// The module with generators `w_i`, in increasing order of `i ≠ pivot`.
    pub over_w: GradedModule,
    n: usize,
}

impl ProjectionContext {
    pub fn new(module: &GradedModule, point: &[u64]) -> Result<Self> {
        let split = evaluation_split(module, point)?;
        let over_w = module.restrict_scalars(&split.w.vectors, &format!("over W_x for x = {point:?}"))?;
        Ok(ProjectionContext { point: point.to_vec(), split, over_w, n: module.n_generators() })
    }

    pub fn n_v(&self) -> usize {
        self.n
    }

    pub fn n_w(&self) -> usize {
        self.n - 1
    }

    fn w_index(&self, i: usize) -> Option<usize> {
        use std::cmp::Ordering::*;
        match i.cmp(&self.split.pivot) {
            Less => Some(i),
            Equal => None,
            Greater => Some(i - 1),
        }
    }

    fn v_index(&self, w: usize) -> usize {
        if w < self.split.pivot {
            w
        } else {
            w + 1
        }
    }
}

/// Contraction `ι_φ` of a cochain in `B_q ⊗ Λ^p` (on `n` generators) by the functional
/// with values `phi` on the generators.
pub fn contract(prime: Prime, dim_bq: usize, n: usize, p: usize, cochain: &SparseVec, phi: &[u64]) -> SparseVec {
    if p == 0 {
        return SparseVec::new();
    }
    let mut out = Vec::new();
    let mut rest = Vec::with_capacity(p);
    for (col, val) in cochain.iter() {
        let (rs, b) = (col / dim_bq, col % dim_bq);
        let s = wedge_unrank(rs, p, n).expect("column in range");
        for (j, &i) in s.iter().enumerate() {
            if phi[i] == 0 {
                continue;
            }
            rest.clear();
            rest.extend(s.iter().copied().filter(|&x| x != i));
            let v = prime.mul(phi[i], val);
            let v = if j % 2 == 1 { prime.neg(v) } else { v };
            out.push(((rank_unchecked(&rest) * dim_bq + b) as u32, v));
        }
    }
    SparseVec::from_entries(prime, out)
}

/// `π_x`: contraction with `ev_x`, then `V → W_x` sending `v_pivot` to zero.
pub fn project_syzygy(alpha: &SyzygyClass, module: &GradedModule, ctx: &ProjectionContext) -> Result<SyzygyClass> {
    if alpha.n != ctx.n_v() || module.n_generators() != ctx.n_v() {
        return Err(Error::DimensionMismatch("syzygy, module and context disagree on dim V".into()));
    }
    let checked = SyzygyClass::new(module, alpha.p, alpha.q, alpha.representative.clone())?;
    let p = checked.p;
    if p == 0 {
        return Err(Error::Window { p, q: checked.q, reason: "projection needs p >= 1".into() });
    }
    let prime = module.prime;
    let db = module.dim(checked.q);
    let contracted = contract(prime, db, ctx.n_v(), p, &checked.representative, &ctx.split.values);
    let mut out = Vec::new();
    for (col, val) in contracted.iter() {
        let (rs, b) = (col / db, col % db);
        let t = wedge_unrank(rs, p - 1, ctx.n_v()).expect("column in range");
        let tw: Option<Vec<usize>> = t.iter().map(|&i| ctx.w_index(i)).collect();
        if let Some(tw) = tw {
            out.push(((rank_unchecked(&tw) * db + b) as u32, val));
        }
    }
    SyzygyClass::new(&ctx.over_w, p - 1, checked.q, SparseVec::from_entries(prime, out))
}

/// `η_x`: the inclusion `Λ W_x → Λ V`, expanding `w_i = v_i - r_i v_pivot`.
pub fn lift_eta(beta: &SyzygyClass, module: &GradedModule, ctx: &ProjectionContext) -> Result<SyzygyClass> {
    let beta = SyzygyClass::new(&ctx.over_w, beta.p, beta.q, beta.representative.clone())?;
    let prime = module.prime;
    let db = module.dim(beta.q);
    let p = beta.p;
    let pivot = ctx.split.pivot;
    // r_i with w_i = v_i - r_i v_pivot, read from the split.
    let r: Vec<u64> = (0..ctx.n_v())
        .map(|i| if i == pivot { 0 } else { prime.neg(ctx.split.w.vectors[ctx.w_index(i).unwrap()].get(pivot)) })
        .collect();
    let mut out = Vec::new();
    for (col, val) in beta.representative.iter() {
        let (rs, b) = (col / db, col % db);
        let tw = wedge_unrank(rs, p, ctx.n_w()).expect("column in range");
        let t: Vec<usize> = tw.iter().map(|&w| ctx.v_index(w)).collect();
        out.push(((rank_unchecked(&t) * db + b) as u32, val));
        for (pos, &i) in t.iter().enumerate() {
            if r[i] == 0 {
                continue;
            }
            // Replace v_i at position `pos` by -r_i v_pivot: move it to the front, then sort.
            let rest: Vec<usize> = t.iter().copied().filter(|&x| x != i).collect();
            let (sign, sorted) = wedge_insert(pivot, &rest);
            let neg = (pos % 2 == 1) ^ (sign < 0);
            let v = prime.mul(prime.neg(r[i]), val);
            let v = if neg { prime.neg(v) } else { v };
            out.push(((rank_unchecked(&sorted) * db + b) as u32, v));
        }
    }
    SyzygyClass::new(module, p, beta.q, SparseVec::from_entries(prime, out))
}

/// The matrix of `H^0(∂): K_{p+1,1}(B,V) → V ⊗ K_{p,1}(B,V)` in the fixed cohomology
/// bases; block `i` of the target holds the coordinates of `[ι_{v_i^*} α]`.
pub struct GlobalDel {
    pub p: usize,
    pub source: CohomologyBasis,
    pub target: CohomologyBasis,
    pub matrix: PrimeFieldMatrix,
}

impl GlobalDel {
    /// `Σ_i c_i [ι_{v_i^*} α]` for the class with coordinates `coords`.
    pub fn evaluate(&self, prime: Prime, coords: &SparseVec, values: &[u64]) -> SparseVec {
        let dense = self.matrix.mul_dense(&coords.to_dense(self.matrix.cols()));
        let k = self.target.dim();
        let mut out = vec![0u64; k];
        for (i, &c) in values.iter().enumerate() {
            for j in 0..k {
                out[j] = prime.mul_add(out[j], c, dense[i * k + j]);
            }
        }
        SparseVec::from_dense(&out)
    }
}

pub fn del_global(module: &GradedModule, p: usize) -> Result<GlobalDel> {
    standing_hypotheses(module)?;
    let prime = module.prime;
    let n = module.n_generators();
    let source = CohomologyBasis::new(module, p + 1, 1)?;
    let target = CohomologyBasis::new(module, p, 1)?;
    let db = module.dim(1);
    let k = target.dim();
    let mut cols = Vec::with_capacity(source.dim());
    for alpha in source.representatives() {
        let mut e = Vec::new();
        for i in 0..n {
            let mut phi = vec![0u64; n];
            phi[i] = 1;
            let c = target.class_coords(&contract(prime, db, n, p + 1, alpha, &phi))?;
            e.extend(c.iter().map(|(j, v)| ((i * k + j) as u32, v)));
        }
        cols.push(SparseVec::from_entries(prime, e));
    }
    let matrix = PrimeFieldMatrix::from_columns(n * k, prime, &cols)?;
    Ok(GlobalDel { p, source, target, matrix })
}

/// Outcome of the two-route comparison `∂_x = (ev_x ⊗ id) ∘ H^0(∂)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub cochains_equal: bool,
    pub classes_equal: bool,
}

/// Compares `η_x(π_x(α))` with `ι_{ev_x} α` as cochains and, through `H^0(∂)`, as classes.
pub fn check_del_identity(
    module: &GradedModule,
    del: &GlobalDel,
    ctx: &ProjectionContext,
    alpha: &SyzygyClass,
) -> Result<IdentityCheck> {
    let prime = module.prime;
    let route1 = lift_eta(&project_syzygy(alpha, module, ctx)?, module, ctx)?;
    let direct = contract(prime, module.dim(1), ctx.n_v(), alpha.p, &alpha.representative, &ctx.split.values);
    let coords = del.source.class_coords(&alpha.representative)?;
    let via_global = del.evaluate(prime, &coords, &ctx.split.values);
    Ok(IdentityCheck {
        cochains_equal: route1.representative == direct,
        classes_equal: del.target.class_coords(&route1.representative)? == via_global,
    })
}

/// Whether a `W_x`-cocycle at `(p, 1)` is a boundary of `d_{p+1,0}` over `W_x`.
pub fn is_w_boundary(ctx: &ProjectionContext, beta: &SyzygyClass) -> Result<bool> {
    let d = assemble_differential(&ctx.over_w, beta.p + 1, beta.q - 1)?;
    let mut e = Echelon::new(ctx.over_w.prime, d.rows());
    e.insert_all(&d.col_vecs());
    Ok(e.contains(&beta.representative))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalReport {
    pub survived: Vec<bool>,
    pub fraction: f64,
}

/// Fraction of points where `π_x(α)` is a nonzero class.
pub fn survival_sample(alpha: &SyzygyClass, module: &GradedModule, points: &[Vec<u64>]) -> Result<SurvivalReport> {
    let basis = CohomologyBasis::new(module, alpha.p, alpha.q)?;
    if basis.is_zero_class(&alpha.representative)? {
        return Err(Error::ZeroClass);
    }
    let mut survived = Vec::with_capacity(points.len());
    for x in points {
        let ctx = ProjectionContext::new(module, x)?;
        let beta = project_syzygy(alpha, module, &ctx)?;
        survived.push(!is_w_boundary(&ctx, &beta)?);
    }
    let fraction =
        if points.is_empty() { 0.0 } else { survived.iter().filter(|&&s| s).count() as f64 / points.len() as f64 };
    Ok(SurvivalReport { survived, fraction })
}

/// The map `K_{p,1}(T, W_x) → K_{p,1}(B, W_x)` induced by the inclusion of the
/// point-truncated module, and its image for span tests.
pub struct ContainmentCheck {
    pub p: usize,
    pub dim_truncated: usize,
    pub dim_ambient: usize,
    pub injective_rank: usize,
    target: CohomologyBasis,
    image: Echelon,
}

impl ContainmentCheck {
    pub fn new(module: &GradedModule, ctx: &ProjectionContext, truncated: &GradedModule, p: usize) -> Result<Self> {
        let prime = module.prime;
        if truncated.n_generators() != ctx.n_w() {
            return Err(Error::DimensionMismatch("truncated module must be generated by W_x".into()));
        }
        let target = CohomologyBasis::new(&ctx.over_w, p, 1)?;
        let source = CohomologyBasis::new(truncated, p, 1)?;
        // Inclusion T_1 → B_1 on basis elements.
        let (t1, b1) = (&truncated.pieces[1], &module.pieces[1]);
        let incl: Vec<SparseVec> = t1.reps().iter().map(|r| b1.coords(r)).collect::<Result<_>>()?;
        let (dt, db) = (t1.dim(), b1.dim());
        let mut image = Echelon::new(prime, target.dim());
        let mut rank = 0;
        for z in source.representatives() {
            let mut e = Vec::new();
            for (col, v) in z.iter() {
                let (rs, t) = (col / dt, col % dt);
                e.extend(incl[t].iter().map(|(b, x)| ((rs * db + b) as u32, prime.mul(v, x))));
            }
            let c = target.class_coords(&SparseVec::from_entries(prime, e))?;
            if image.insert(&c).is_some() {
                rank += 1;
            }
        }
        if rank != source.dim() {
            return Err(Error::Construction(format!(
                "K_{{{p},1}}(T) → K_{{{p},1}}(B, W_x) has rank {rank} < {}",
                source.dim()
            )));
        }
        Ok(ContainmentCheck {
            p,
            dim_truncated: source.dim(),
            dim_ambient: target.dim(),
            injective_rank: rank,
            target,
            image,
        })
    }

    pub fn contains(&self, projected: &SyzygyClass) -> Result<bool> {
        Ok(self.image.contains(&self.target.class_coords(&projected.representative)?))
    }
}

/// Whether `projected` lies in the image of `K_{p,1}(T, W_x)`.
pub fn ehbauer_membership(
    projected: &SyzygyClass,
    module: &GradedModule,
    ctx: &ProjectionContext,
    truncated: &GradedModule,
) -> Result<bool> {
    if projected.representative.is_zero() {
        return Ok(true);
    }
    ContainmentCheck::new(module, ctx, truncated, projected.p)?.contains(projected)
}

/// The truncated module for `L - x` generated by the `w_i` of the context.
pub fn truncated_for_context(
    module: &GradedModule,
    ctx: &ProjectionContext,
    point: &TruncationPoint,
) -> Result<GradedModule> {
    build_point_truncated_module(module, std::slice::from_ref(point), Some(ctx.over_w.generators.clone()))
}

/// Per-point dimensions for the drop check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropReport {
    pub p_plus_1: usize,
    pub dim_source: usize,
    pub dims: Vec<usize>,
    pub passed: bool,
}

/// For each point, `dim K_{p,1}` of the module truncated at that point, given
/// `K_{p+1,1} ≠ 0` for the module itself.
pub fn generic_drop_check(module: &GradedModule, p_plus_1: usize, points: &[TruncationPoint]) -> Result<DropReport> {
    if p_plus_1 < 2 {
        return Err(Error::Window { p: p_plus_1, q: 1, reason: "needs p >= 1".into() });
    }
    let dim_source = KoszulComplex::new(module).cell(p_plus_1, 1)?.dim_k;
    if dim_source == 0 {
        return Err(Error::Hypothesis(format!("K_{{{p_plus_1},1}} vanishes, nothing to drop")));
    }
    let mut dims = Vec::with_capacity(points.len());
    for pt in points {
        let t = build_point_truncated_module(module, std::slice::from_ref(pt), None)?;
        dims.push(KoszulComplex::new(&t).cell(p_plus_1 - 1, 1)?.dim_k);
    }
    let passed = dims.iter().all(|&d| d > 0);
    Ok(DropReport { p_plus_1, dim_source, dims, passed })
}

/// Ranks around `K_{p+1,1}(B,W_x) → K_{p+1,1}(B,V) → K_{p,1}(B,W_x)` at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessCheck {
    pub p_plus_1: usize,
    pub dim_over_w: usize,
    pub rank_eta: usize,
    pub rank_pi: usize,
    pub dim_over_v: usize,
    /// `η_x` is injective on classes.
    pub eta_injective: bool,
    /// `rank η_x + rank π_x = dim K_{p+1,1}(B,V)`.
    pub exact: bool,
}

/// Lifts a basis of `K_{p+1,1}(B,W_x)` and projects a basis of `K_{p+1,1}(B,V)`,
/// recording the ranks of both maps on classes.
pub fn exactness_check(module: &GradedModule, ctx: &ProjectionContext, p_plus_1: usize) -> Result<ExactnessCheck> {
    let prime = module.prime;
    let over_v = CohomologyBasis::new(module, p_plus_1, 1)?;
    let over_w = CohomologyBasis::new(&ctx.over_w, p_plus_1, 1)?;
    let below = CohomologyBasis::new(&ctx.over_w, p_plus_1 - 1, 1)?;
    let mut lifted = Echelon::new(prime, over_v.dim());
    for r in over_w.representatives() {
        let beta = SyzygyClass::new(&ctx.over_w, p_plus_1, 1, r.clone())?;
        lifted.insert(&over_v.class_coords(&lift_eta(&beta, module, ctx)?.representative)?);
    }
    let mut projected = Echelon::new(prime, below.dim());
    for r in over_v.representatives() {
        let alpha = SyzygyClass::new(module, p_plus_1, 1, r.clone())?;
        projected.insert(&below.class_coords(&project_syzygy(&alpha, module, ctx)?.representative)?);
    }
    let (rank_eta, rank_pi) = (lifted.rank(), projected.rank());
    Ok(ExactnessCheck {
        p_plus_1,
        dim_over_w: over_w.dim(),
        rank_eta,
        rank_pi,
        dim_over_v: over_v.dim(),
        eta_injective: rank_eta == over_w.dim(),
        exact: rank_eta + rank_pi == over_v.dim(),
    })
}
