use std::collections::HashSet;

use super::{mk_record, CheckRecord, HirzebruchMode, Quantity, Run, Scenario, ScenarioConfig, ScenarioReport};
use crate::error::{Error, Result};
use crate::ff_linalg::Prime;
use crate::graded_modules::{build_ambient_module, build_restriction_module, random_section};
use crate::multilinear::{BasePoint, DivisorClass, SurfaceModel};

const POINT_STREAM: u64 = 5;
const CURVE_STREAM: u64 = 6;

/// Base points on `P^1 x P^1` no two of which share a ruling line.
fn general_points(run: &Run, prime: Prime, gamma: usize) -> Result<Vec<BasePoint>> {
    let mut rng = run.rng(POINT_STREAM);
    let (mut xs, mut ys) = (HashSet::new(), HashSet::new());
    let mut pts = Vec::with_capacity(gamma);
    for _ in 0..100 * (gamma + 1) {
        if pts.len() == gamma {
            break;
        }
        let (a, b) = (prime.random_element(&mut rng), prime.random_element(&mut rng));
        if xs.insert(a) && ys.insert(b) {
            pts.push(BasePoint { a, b });
        }
    }
    if pts.len() < gamma {
        return Err(Error::PointBudget { requested: gamma, partial: pts.iter().map(|p| [p.a, p.b, 1]).collect() });
    }
    Ok(pts)
}

pub fn run_quadric_nodal(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    let mut run = Run::new(cfg)?;
    let Scenario::QuadricNodal { k, m, gamma } = cfg.scenario else {
        return Err(Error::Config("not a nodal quadric scenario".into()));
    };
    let prime = cfg.prime.primary(run.seed)?;
    run.add_prime(prime.value());
    let (ki, mi, gi) = (k as i64, m as i64, gamma as i64);
    let pts = general_points(&run, prime, gamma as usize)?;
    let s = SurfaceModel::quadric_blowup(pts.clone())?;
    let h = DivisorClass::Blowup { a: ki - 1, b: mi - 1, mults: vec![1; gamma as usize] };
    let x = DivisorClass::Blowup { a: ki, b: mi, mults: vec![2; gamma as usize] };
    let f = random_section(prime, &s, &x, &mut run.rng(CURVE_STREAM))?;
    let amb = build_ambient_module(prime, &s, &h.zero_like(), &h, 2)?;
    let a = build_restriction_module(&amb, &f, &x)?;
    let data = a.restriction.clone().expect("restriction module");
    let g = (ki - 1) * (mi - 1) - gi;
    let n = amb.n_generators();
    run.report.push(
        CheckRecord::info("base_points", "sampled base points, pairwise on distinct rulings")
            .compute(Quantity::computed("points", pts.iter().map(|p| vec![p.a, p.b]).collect::<Vec<_>>())),
    );

    if run.wants("genus") {
        let ok = data.curve_genus == Some(g) && data.expected_h0 == Some(data.h0 as i64) && data.a1_identified;
        run.report.push(
            CheckRecord::new(
                "genus",
                "g = (k-1)(m-1) - gamma agrees with adjunction; dim A_1 matches Riemann-Roch",
                ok,
            )
            .expect(Quantity::formula("genus", g))
            .compute(Quantity::computed("adjunction_genus", data.curve_genus))
            .compute(Quantity::computed("degree", data.degree))
            .compute(Quantity::computed("dim_A1", data.h0)),
        );
    }
    if run.wants("dim_v") {
        let formula = ki * (mi - 1) - gi;
        let ok = n as i64 - ki == formula && data.h0 == n;
        run.report.push(
            CheckRecord::new("dim_v", "dim V - k = k(m-1) - gamma, and V = H^0(X, H|X)", ok)
                .expect(Quantity::formula("dim_V_minus_k", formula))
                .compute(Quantity::computed("dim_V", n))
                .compute(Quantity::computed("dim_A1", data.h0)),
        );
    }
    let mut verdict = None;
    if run.wants("mk") {
        let v = run.mk(&a, (k - 1) as usize)?;
        run.report.push(
            mk_record("mk", &format!("(M_{}) for (X, H|X)", k - 1), &v, None)
                .expect(Quantity::formula("threshold", n as i64 - ki)),
        );
        verdict = Some(v);
        run.lap("mk");
    }
    if run.wants("surface_cross_check") {
        if gamma == 0 {
            let hcfg = ScenarioConfig {
                scenario: Scenario::Hirzebruch { e: 0, k, m, mode: HirzebruchMode::Gonality },
                checks: vec!["mk".into()],
                ..cfg.clone()
            };
            let other = super::run_hirzebruch(&hcfg)?;
            let theirs = other
                .check("mk")
                .and_then(|c| c.computed.iter().find(|q| q.name == "window_dims"))
                .map(|q| q.value.clone());
            let ours = verdict
                .as_ref()
                .map(|v| serde_json::json!(v.witnesses.iter().map(|&(p, d)| vec![p, d]).collect::<Vec<_>>()));
            let ok = ours.is_some() && ours == theirs;
            run.report.push(
                CheckRecord::new("surface_cross_check", "gamma = 0 agrees with the Sigma_0 builder", ok)
                    .compute(Quantity::computed("blowup_window", ours))
                    .compute(Quantity::computed("hirzebruch_window", theirs)),
            );
        } else {
            run.report.push(CheckRecord::info("surface_cross_check", "only defined for gamma = 0"));
        }
    }
    run.invariants(&[("surface", &amb), ("restriction", &a)])?;
    Ok(run.finish())
}
