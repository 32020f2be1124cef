use super::{mk_record, CheckRecord, Quantity, Run, Scenario, ScenarioConfig, ScenarioReport};
use crate::error::{Error, Result};
use crate::ff_linalg::Prime;
use crate::graded_modules::{
    build_ambient_module, build_point_truncated_module, build_restriction_module, find_colinear_points,
    local_branch_expansion, random_section, GradedModule, Poly, TruncationPoint,
};
use crate::koszul::{duality_instance_check, KoszulComplex};
use crate::multilinear::{DivisorClass, SurfaceModel};

const CURVE_STREAM: u64 = 1;
const SECOND_CURVE_STREAM: u64 = 2;
const SWEEP_STREAM: u64 = 3;

/// `h^0 O_{P^2}(k)`.
fn plane_sections(k: i64) -> i64 {
    if k < 0 {
        0
    } else {
        (k + 1) * (k + 2) / 2
    }
}

pub(crate) fn plane_ambient(prime: Prime, k: i64) -> Result<GradedModule> {
    build_ambient_module(prime, &SurfaceModel::plane(), &DivisorClass::Degree(0), &DivisorClass::Degree(k), 2)
}

/// The restriction of `O(n)` to the plane curve `f` of degree `d`.
pub(crate) fn plane_restriction(prime: Prime, d: i64, n: i64, f: &Poly) -> Result<GradedModule> {
    build_restriction_module(&plane_ambient(prime, n)?, f, &DivisorClass::Degree(d))
}

pub(crate) fn random_plane_curve(run: &Run, prime: Prime, d: i64, stream: u64) -> Result<Poly> {
    random_section(prime, &SurfaceModel::plane(), &DivisorClass::Degree(d), &mut run.rng(stream))
}

pub fn run_plane_curve(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    let mut run = Run::new(cfg)?;
    let Scenario::PlaneCurve { d, colinear_sweep } = &cfg.scenario else {
        return Err(Error::Config("not a plane curve scenario".into()));
    };
    let d = *d as i64;
    let k = d - 1;
    let prime = cfg.prime.primary(run.seed)?;
    run.add_prime(prime.value());
    let genus = (d - 1) * (d - 2) / 2;

    if run.wants("surface_threshold") {
        let amb = plane_ambient(prime, k)?;
        let n = amb.n_generators();
        let threshold = plane_sections(k) - k;
        let t = run.strand(&amb, 1..n)?;
        let first_zero = (1..n).find(|&p| t.get(p, 1) == Some(0));
        let exact = (1..n).all(|p| (t.get(p, 1) == Some(0)) == (p as i64 >= threshold));
        run.report.push(
            CheckRecord::new(
                "surface_threshold",
                format!("K_p,1(P2, O({k})) = 0 exactly for p >= h0 O({k}) - {k}"),
                exact,
            )
            .expect(Quantity::formula("N", threshold))
            .compute(Quantity::computed("dim_V", n))
            .compute(Quantity::computed("first_vanishing_p", first_zero)),
        );
        run.report.note_nonvanishing();
        run.invariants(&[("surface", &amb)])?;
        run.lap("surface_threshold");
    }

    let f = random_plane_curve(&run, prime, d, CURVE_STREAM)?;
    let a = plane_restriction(prime, d, k, &f)?;
    let rr_h0 = k * d - genus + 1;

    if run.wants("genus") {
        let data = a.restriction.as_ref().expect("restriction module");
        let ok = data.curve_genus == Some(genus) && data.h0 as i64 == rr_h0 && data.a1_identified;
        run.report.push(
            CheckRecord::new("genus", "genus (d-1)(d-2)/2 agrees with adjunction and Riemann-Roch gives dim A_1", ok)
                .expect(Quantity::formula("genus", genus))
                .expect(Quantity::formula("h0", rr_h0))
                .compute(Quantity::computed("adjunction_genus", data.curve_genus))
                .compute(Quantity::computed("dim_A1", data.h0))
                .compute(Quantity::computed("degree", data.degree)),
        );
    }

    if run.wants("mk") {
        let v = run.mk(&a, (k - 1) as usize)?;
        run.report.push(mk_record("mk", &format!("(M_{}) for (X, O_X({k}))", k - 1), &v, Some(rr_h0)));
        run.lap("mk");
    }

    if run.wants("mk_second_prime") {
        let p2 = cfg.prime.secondary(run.seed)?;
        run.add_prime(p2.value());
        let f2 = random_plane_curve(&run, p2, d, SECOND_CURVE_STREAM)?;
        let a2 = plane_restriction(p2, d, k, &f2)?;
        let v = run.mk(&a2, (k - 1) as usize)?;
        run.report.push(mk_record(
            "mk_second_prime",
            &format!("(M_{}) for (X, O_X({k})) over a second prime {p2}", k - 1),
            &v,
            Some(rr_h0),
        ));
        run.lap("mk_second_prime");
    }

    if run.wants("failure_lower_degree") {
        if k > 2 {
            // N(k-1) - 1 = h0 O(k-1) - (k-1) - 1.
            let p = (plane_sections(k - 1) - k) as usize;
            let amb = plane_ambient(prime, k - 1)?;
            let lower = plane_restriction(prime, d, k - 1, &f)?;
            let surf = run.strand(&amb, [p])?.get(p, 1).unwrap_or(0);
            let curve = run.strand(&lower, [p])?.get(p, 1).unwrap_or(0);
            let ok = surf > 0 && curve >= surf;
            run.report.push(
                CheckRecord::new(
                    "failure_lower_degree",
                    format!(
                        "K_{p},1(X, O_X({})) contains K_{p},1(P2, O({})) != 0, so (M_{}) fails",
                        k - 1,
                        k - 1,
                        k - 1
                    ),
                    ok,
                )
                .expect(Quantity::formula("p", p))
                .compute(Quantity::computed("surface_dim", surf))
                .compute(Quantity::computed("curve_dim", curve)),
            );
            run.report.note_nonvanishing();
            run.invariants(&[("lower-degree restriction", &lower)])?;
        } else {
            run.report.push(CheckRecord::info(
                "failure_lower_degree",
                format!("not applicable: O_X({}) is below the k >= 2 range where the surface threshold applies", k - 1),
            ));
        }
        run.lap("failure_lower_degree");
    }

    if run.wants("duality") {
        if k <= 3 {
            let (ok, rows) = duality_instance_check(prime, k)?;
            run.report.push(
                CheckRecord::new("duality", format!("dim K_p,1(P2, O({k})) = dim K_r-p-2,2(P2, O(-3), O({k}))"), ok)
                    .compute(Quantity::computed(
                        "rows",
                        rows.iter()
                            .map(|r| vec![r.p as i64, r.k_p1 as i64, r.dual_index, r.k_dual as i64])
                            .collect::<Vec<_>>(),
                    )),
            );
        } else {
            run.report.push(CheckRecord::info("duality", format!("skipped for k = {k} > 3")));
        }
        run.lap("duality");
    }

    run.invariants(&[("restriction", &a)])?;

    for &gamma in colinear_sweep {
        let rec = colinear_verdict(&run, prime, &f, &a, d, gamma)?;
        run.report.push(rec);
    }
    Ok(run.finish())
}

/// `(M_{k-1})` for `O_X(k) - x_1 - ... - x_γ` with the points on one line. Recorded only.
fn colinear_verdict(run: &Run, prime: Prime, f: &Poly, a: &GradedModule, d: i64, gamma: usize) -> Result<CheckRecord> {
    let k = (d - 1) as usize;
    let module = if gamma == 0 {
        a.clone()
    } else {
        let pts = find_colinear_points(prime, f, gamma, run.sub_seed(SWEEP_STREAM + gamma as u64))?;
        let tps = pts
            .iter()
            .map(|x| local_branch_expansion(prime, f, x, a.qmax()).map(|b| TruncationPoint::from_branch(&b, 1)))
            .collect::<Result<Vec<_>>>()?;
        build_point_truncated_module(a, &tps, None)?
    };
    let h0 = module.n_generators();
    let threshold = (h0 as i64 - k as i64).max(1) as usize;
    let cx = KoszulComplex::new(&module);
    let mut dims = Vec::new();
    for p in threshold..h0 {
        dims.push(vec![p, run.cell(&cx, p, 1)?]);
    }
    let holds = dims.iter().all(|x| x[1] == 0);
    Ok(CheckRecord::info(
        "colinear_sweep",
        format!("(M_{}) for O_X({}) minus {gamma} colinear points (exploratory)", k - 1, k),
    )
    .compute(Quantity::computed("gamma", gamma))
    .compute(Quantity::computed("h0", h0))
    .compute(Quantity::computed("window_dims", dims))
    .compute(Quantity::computed("holds", holds)))
}
