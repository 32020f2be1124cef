use rayon::prelude::*;

use super::plane::{plane_restriction, random_plane_curve};
use super::{guard_cell, CheckRecord, Quantity, Run, Scenario, ScenarioConfig, ScenarioReport};
use crate::error::{Error, Result};
use crate::ff_linalg::{combine, rank, PrimeFieldMatrix};
use crate::graded_modules::{
    find_rational_points, local_branch_expansion, GradedModule, PointOnCurve, TruncationPoint,
};
use crate::koszul::{assemble_differential, CohomologyBasis, KoszulComplex};
use crate::projection::{
    check_del_identity, del_global, exactness_check, generic_drop_check, lift_eta, project_syzygy, survival_sample,
    truncated_for_context, ContainmentCheck, ExactnessCheck, GlobalDel, ProjectionContext, SyzygyClass,
};

const CURVE_STREAM: u64 = 1;
const POINT_STREAM: u64 = 7;
const CLASS_STREAM: u64 = 8;

/// Everything computed at one point.
struct PointResult {
    exactness: Option<ExactnessCheck>,
    identity_ok: Option<bool>,
    containment: Option<(usize, usize, usize, bool)>,
    complex_ok: Option<bool>,
}

/// `d_{p-1,q+1} ∘ d_{p,q} = 0` for the pairs meeting the strand.
fn complex_ok(module: &GradedModule, strand: usize) -> Result<bool> {
    let n = module.n_generators();
    let mut ok = true;
    for p in [strand, strand + 1] {
        if p > n || p < 2 {
            continue;
        }
        let a: PrimeFieldMatrix = assemble_differential(module, p, 0)?;
        let b = assemble_differential(module, p - 1, 1)?;
        ok &= b.matmul(&a)?.is_zero();
    }
    Ok(ok)
}

fn truncation_point(
    module: &GradedModule,
    f: &crate::graded_modules::Poly,
    x: &PointOnCurve,
) -> Result<TruncationPoint> {
    let b = local_branch_expansion(module.prime, f, x, module.qmax() + 1)?;
    Ok(TruncationPoint::from_branch(&b, 1))
}

pub fn run_projection_study(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    let mut run = Run::new(cfg)?;
    let Scenario::ProjectionStudy { d, polarization, strand, samples, points } = cfg.scenario else {
        return Err(Error::Config("not a projection study".into()));
    };
    let prime = cfg.prime.primary(run.seed)?;
    run.add_prime(prime.value());
    let d = d as i64;
    let n_pol = polarization.map_or(d - 1, |n| n as i64);
    let f = random_plane_curve(&run, prime, d, CURVE_STREAM)?;
    let a = plane_restriction(prime, d, n_pol, &f)?;
    let h0 = a.n_generators();
    let gonality = (d - 1) as usize;
    let strand = strand.unwrap_or_else(|| h0.saturating_sub(gonality + 1));
    if strand < 2 || strand > h0 {
        return Err(Error::Config(format!("strand p+1 = {strand} outside 2..={h0}")));
    }
    for (p, q) in [(strand, 1), (strand - 1, 1)] {
        guard_cell(&a, p, q, run.limit())?;
    }
    let cx = KoszulComplex::new(&a);
    let dim_strand = cx.cell(strand, 1)?.dim_k;
    run.report.betti_tables.push(crate::koszul::BettiTable {
        label: crate::koszul::describe(&a),
        prime,
        entries: [((strand, 1), dim_strand)].into_iter().collect(),
    });
    if dim_strand == 0 {
        return Err(Error::Hypothesis(format!(
            "K_{strand},1 vanishes for this module, so there is nothing to project or drop"
        )));
    }
    run.report.note_nonvanishing();
    let pts = find_rational_points(prime, &f, samples.max(points), run.sub_seed(POINT_STREAM))?;
    let coords: Vec<Vec<u64>> = pts.iter().map(|x| x.coords.to_vec()).collect();
    let per_point = &pts[..points.min(pts.len())];
    run.report.push(
        CheckRecord::info("setup", format!("plane curve of degree {d}, L = O_X({n_pol}), strand p+1 = {strand}"))
            .compute(Quantity::computed("h0", h0))
            .compute(Quantity::computed("dim_K_strand", dim_strand))
            .compute(Quantity::computed("points", coords.clone())),
    );
    run.lap("setup");

    let needs_classes = ["global_injective", "identity", "survival", "adversarial", "containment", "exactness"]
        .iter()
        .any(|c| run.wants(c));
    let del: Option<GlobalDel> = if needs_classes { Some(del_global(&a, strand - 1)?) } else { None };
    if let (Some(del), true) = (&del, run.wants("global_injective")) {
        let r = rank(&del.matrix);
        run.report.push(
            CheckRecord::new(
                "global_injective",
                "H^0(d): K_p+1,1(B,V) -> V (x) K_p,1(B,V) is injective",
                r == del.source.dim(),
            )
            .expect(Quantity::formula("rank", del.source.dim()))
            .compute(Quantity::computed("rank", r))
            .compute(Quantity::computed("shape", vec![del.matrix.rows(), del.matrix.cols()])),
        );
        run.lap("global_injective");
    }

    if run.wants("complex") {
        let ok = complex_ok(&a, strand)?;
        run.report.push(CheckRecord::new("complex", "d o d = 0 on the pairs meeting the strand of B over V", ok));
    }

    let results: Vec<PointResult> = per_point
        .par_iter()
        .map(|x| -> Result<PointResult> {
            let ctx = ProjectionContext::new(&a, &x.coords)?;
            let exactness = if cfg.wants("exactness") || cfg.wants("lift_injective") {
                Some(exactness_check(&a, &ctx, strand)?)
            } else {
                None
            };
            let identity_ok = match (&del, cfg.wants("identity")) {
                (Some(del), true) => {
                    let mut ok = true;
                    for r in del.source.representatives() {
                        let alpha = SyzygyClass::new(&a, strand, 1, r.clone())?;
                        let id = check_del_identity(&a, del, &ctx, &alpha)?;
                        ok &= id.cochains_equal && id.classes_equal;
                    }
                    Some(ok)
                }
                _ => None,
            };
            let containment = match (&del, cfg.wants("containment")) {
                (Some(del), true) => {
                    let t = truncated_for_context(&a, &ctx, &truncation_point(&a, &f, x)?)?;
                    let cc = ContainmentCheck::new(&a, &ctx, &t, strand - 1)?;
                    let mut members = 0;
                    for r in del.source.representatives() {
                        let alpha = SyzygyClass::new(&a, strand, 1, r.clone())?;
                        if cc.contains(&project_syzygy(&alpha, &a, &ctx)?)? {
                            members += 1;
                        }
                    }
                    Some((members, del.source.dim(), cc.dim_truncated, cc.injective_rank == cc.dim_truncated))
                }
                _ => None,
            };
            let complex_ok = if cfg.wants("complex") { Some(complex_ok(&ctx.over_w, strand)?) } else { None };
            Ok(PointResult { exactness, identity_ok, containment, complex_ok })
        })
        .collect::<Result<_>>()?;
    run.lap("per_point");

    if run.wants("complex") {
        let ok = results.iter().all(|r| r.complex_ok == Some(true));
        run.report.push(CheckRecord::new(
            "complex",
            "d o d = 0 on the pairs meeting the strand of B over each W_x",
            ok,
        ));
    }
    if run.wants("lift_injective") {
        let e: Vec<&ExactnessCheck> = results.iter().filter_map(|r| r.exactness.as_ref()).collect();
        let ok = e.iter().all(|c| c.eta_injective && c.dim_over_w <= c.dim_over_v);
        run.report.push(
            CheckRecord::new("lift_injective", "eta_x is injective on classes at every sampled point", ok)
                .compute(Quantity::computed("dims_over_w", e.iter().map(|c| c.dim_over_w).collect::<Vec<_>>()))
                .compute(Quantity::computed("ranks_eta", e.iter().map(|c| c.rank_eta).collect::<Vec<_>>())),
        );
    }
    if run.wants("exactness") {
        let e: Vec<&ExactnessCheck> = results.iter().filter_map(|r| r.exactness.as_ref()).collect();
        let ok = e.iter().all(|c| c.exact);
        run.report.push(
            CheckRecord::new("exactness", "rank eta_x + rank pi_x = dim K_p+1,1(B,V) at every sampled point", ok)
                .compute(Quantity::computed(
                    "per_point",
                    e.iter().map(|c| vec![c.rank_eta, c.rank_pi, c.dim_over_v]).collect::<Vec<_>>(),
                )),
        );
    }
    if run.wants("identity") {
        let ok = results.iter().all(|r| r.identity_ok == Some(true));
        run.report.push(CheckRecord::new(
            "identity",
            "eta_x(pi_x(a)) = (ev_x (x) id)(H^0(d)(a)) for every basis class, as cochains and as classes",
            ok,
        ));
    }
    if run.wants("containment") {
        let c: Vec<(usize, usize, usize, bool)> = results.iter().filter_map(|r| r.containment).collect();
        let ok = c.iter().all(|&(m, t, _, inj)| m == t && inj);
        run.report.push(
            CheckRecord::new("containment", "every projected basis class lies in the image of K_p,1(L - x)", ok)
                .compute(Quantity::computed(
                    "members_total_dimT_injective",
                    c.iter().map(|&(m, t, dt, inj)| serde_json::json!([m, t, dt, inj])).collect::<Vec<_>>(),
                )),
        );
    }

    if let Some(del) = &del {
        let alpha = {
            let mut rng = run.rng(CLASS_STREAM);
            let combo: Vec<u64> = (0..del.source.dim()).map(|_| prime.random_element(&mut rng)).collect();
            SyzygyClass::new(&a, strand, 1, combine(prime, del.source.representatives(), &combo))?
        };
        if run.wants("survival") {
            let s = survival_sample(&alpha, &a, &coords[..samples.min(coords.len())])?;
            run.report.push(
                CheckRecord::new(
                    "survival",
                    "a random nonzero class projects to a nonzero class at >= 90% of points",
                    s.fraction >= 0.9,
                )
                .expect(Quantity::formula("min_fraction", 0.9))
                .compute(Quantity::computed("fraction", s.fraction))
                .compute(Quantity::computed("survived", s.survived)),
            );
            run.lap("survival");
        }
        if run.wants("adversarial") {
            let ctx = ProjectionContext::new(&a, &coords[0])?;
            let over_w = CohomologyBasis::new(&ctx.over_w, strand, 1)?;
            if over_w.dim() == 0 {
                run.report
                    .push(CheckRecord::info("adversarial", "K_p+1,1(B, W_x) = 0 at the first point; no class to lift"));
            } else {
                let beta = SyzygyClass::new(&ctx.over_w, strand, 1, over_w.representatives()[0].clone())?;
                let lifted = lift_eta(&beta, &a, &ctx)?;
                let s = survival_sample(&lifted, &a, &coords[..points.min(coords.len())])?;
                let ok = !s.survived[0] && s.survived[1..].iter().all(|&x| x);
                run.report.push(
                    CheckRecord::new(
                        "adversarial",
                        "a class lifted from W_x dies at x and survives at the other points",
                        ok,
                    )
                    .compute(Quantity::computed("survived", s.survived)),
                );
            }
            run.lap("adversarial");
        }
    }

    if run.wants("drop") {
        for p in [strand, strand - 1] {
            guard_cell(&a, p, 1, run.limit())?;
        }
        let tps = per_point.iter().map(|x| truncation_point(&a, &f, x)).collect::<Result<Vec<_>>>()?;
        let r = generic_drop_check(&a, strand, &tps)?;
        run.report.push(
            CheckRecord::new("drop", format!("K_{},1(X, L - x) != 0 at every sampled point", strand - 1), r.passed)
                .compute(Quantity::computed("dim_source", r.dim_source))
                .compute(Quantity::computed("dims", r.dims)),
        );
        run.lap("drop");
    }
    run.invariants(&[("restriction", &a)])?;
    Ok(run.finish())
}
