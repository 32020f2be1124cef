//! End-to-end acceptance suite. Prints one line per criterion and exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use syzygy_core::ff_linalg::Prime;
use syzygy_core::graded_modules::{build_ambient_module, build_restriction_module, random_section, GradedModule};
use syzygy_core::koszul::{assemble_differential, check_mk, duality_instance_check, euler_check, KoszulComplex};
use syzygy_core::multilinear::{binomial, wedge_rank_in, wedge_unrank, BasePoint, DivisorClass, SurfaceModel};
use syzygy_core::scenarios::*;
use syzygy_core::{kernel_basis, rank};

const SEED: u64 = 1;

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

fn config(s: Scenario, checks: &[&str]) -> ScenarioConfig {
    let mut c = ScenarioConfig::new(s, SEED);
    c.checks = checks.iter().map(|s| s.to_string()).collect();
    c
}

fn prime() -> Prime {
    PrimePolicy::default().primary(SEED).expect("default prime")
}

fn plane_ambient(k: i64) -> GradedModule {
    build_ambient_module(prime(), &SurfaceModel::plane(), &DivisorClass::Degree(0), &DivisorClass::Degree(k), 2)
        .expect("plane module")
}

fn strand_dims(m: &GradedModule, ps: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let cx = KoszulComplex::new(m);
    ps.into_iter().map(|p| cx.cell(p, 1).expect("cell").dim_k).collect()
}

fn dense_dim(m: &GradedModule, p: usize) -> usize {
    let pv = m.prime.value();
    let out = assemble_differential(m, p, 1).expect("outgoing");
    let inc = assemble_differential(m, p + 1, 0).expect("incoming");
    m.dim(1) * binomial(m.n_generators(), p)
        - common::dense_rank(out.to_dense(), pv)
        - common::dense_rank(inc.to_dense(), pv)
}

/// Fails the record list unless every listed id is present and passed.
fn all_pass(r: &ScenarioReport, ids: &[&str]) -> (bool, String) {
    let mut missing = vec![];
    for id in ids {
        let recs: Vec<_> = r.checks.iter().filter(|c| c.id == *id).collect();
        if recs.is_empty() || recs.iter().any(|c| c.status != Status::Pass) {
            missing.push(*id);
        }
    }
    let ok = missing.is_empty() && r.passed();
    (ok, if ok { String::new() } else { format!("failed or missing: {missing:?}") })
}

fn computed<'a>(r: &'a ScenarioReport, id: &str, name: &str) -> Option<&'a serde_json::Value> {
    r.check(id)?.computed.iter().find(|q| q.name == name).map(|q| &q.value)
}

fn veronese() -> Outcome {
    let m = plane_ambient(2);
    let dims = strand_dims(&m, 1..=5);
    let oracle: Vec<usize> = (1..=5).map(|p| dense_dim(&m, p)).collect();
    let threshold = m.n_generators() - 2;
    let ok = dims == [6, 8, 3, 0, 0] && oracle == dims && threshold == 4 && dims[2] > 0;
    Ok((ok, format!("dims {dims:?}, dense oracle {oracle:?}, N(2) = {threshold}")))
}

fn cubic_sharpness() -> Outcome {
    let m = plane_ambient(3);
    let dims = strand_dims(&m, 6..=9);
    let ok = dims[0] > 0 && dims[1..].iter().all(|&d| d == 0);
    Ok((ok, format!("K_p,1 for p = 6..9: {dims:?}")))
}

fn quartic_m2(reports: &mut Vec<ScenarioReport>) -> Outcome {
    let r = run_scenario(&config(Scenario::PlaneCurve { d: 4, colinear_sweep: vec![] }, &["mk", "mk_second_prime"]))?;
    let (mut ok, mut detail) = all_pass(&r, &["mk", "mk_second_prime"]);
    let w1 = computed(&r, "mk", "window_dims").cloned();
    let w2 = computed(&r, "mk_second_prime", "window_dims").cloned();
    let expected = serde_json::json!([[7, 0], [8, 0], [9, 0]]);
    ok &= w1.as_ref() == Some(&expected) && w2.as_ref() == Some(&expected);
    ok &= r.primes.len() == 2 && r.primes[0] != r.primes[1] && r.primes.iter().all(|&p| 64 - p.leading_zeros() == 31);
    detail.push_str(&format!("primes {:?}, windows {} / {}", r.primes, w1.unwrap_or_default(), w2.unwrap_or_default()));
    reports.push(r);
    Ok((ok, detail))
}

fn quintic_failure(reports: &mut Vec<ScenarioReport>) -> Outcome {
    let r = run_scenario(&config(Scenario::PlaneCurve { d: 5, colinear_sweep: vec![] }, &["failure_lower_degree"]))?;
    let (mut ok, mut detail) = all_pass(&r, &["failure_lower_degree"]);
    let p = computed(&r, "failure_lower_degree", "curve_dim").and_then(|v| v.as_u64()).unwrap_or(0);
    ok &= p > 0
        && r.check("failure_lower_degree").is_some_and(|c| c.expected.iter().any(|q| q.name == "p" && q.value == 6));
    // Independent route: the (M_3) window for O_X(3) directly.
    let f = random_section(
        prime(),
        &SurfaceModel::plane(),
        &DivisorClass::Degree(5),
        &mut ChaCha8Rng::seed_from_u64(SEED),
    )?;
    let a = build_restriction_module(&plane_ambient(3), &f, &DivisorClass::Degree(5))?;
    let v = check_mk(&a, 3)?;
    let direct = v.witnesses.iter().find(|w| w.0 == 6).map_or(0, |w| w.1);
    ok &= !v.verdict && direct > 0;
    detail.push_str(&format!("dim K_6,1(X, O_X(3)) = {p} (scenario), {direct} (second curve)"));
    reports.push(r);
    Ok((ok, detail))
}

fn duality() -> Outcome {
    let (ok, rows) = duality_instance_check(prime(), 2)?;
    let pairs: Vec<(usize, usize)> = rows.iter().map(|r| (r.k_p1, r.k_dual)).collect();
    Ok((ok, format!("(K_p,1, K_r-p-2,2) for p = 0..: {pairs:?}")))
}

fn hirzebruch(reports: &mut Vec<ScenarioReport>) -> Outcome {
    let r = run_scenario(&config(Scenario::Hirzebruch { e: 1, k: 3, m: 4, mode: HirzebruchMode::Gonality }, &[]))?;
    let (mut ok, mut detail) = all_pass(&r, &["genus", "h0", "mk", "surface_vanishing", "invariants"]);
    let g = computed(&r, "genus", "adjunction_genus").cloned();
    ok &= g == Some(serde_json::json!(3));
    detail.push_str(&format!(
        "g = {}, h0 = {}, (M_2) window {}, surface window {}",
        g.unwrap_or_default(),
        computed(&r, "h0", "dim_A1").cloned().unwrap_or_default(),
        computed(&r, "mk", "window_dims").cloned().unwrap_or_default(),
        computed(&r, "surface_vanishing", "window_dims").cloned().unwrap_or_default(),
    ));
    reports.push(r);
    Ok((ok, detail))
}

fn canonical(reports: &mut Vec<ScenarioReport>) -> Outcome {
    let r = run_scenario(&config(Scenario::Hirzebruch { e: 0, k: 3, m: 4, mode: HirzebruchMode::Canonical }, &[]))?;
    let (mut ok, mut detail) = all_pass(&r, &["genus", "h0", "canonical_vanishing", "canonical_nonvanishing"]);
    let g = computed(&r, "genus", "adjunction_genus").cloned();
    let h0 = computed(&r, "h0", "dim_A1").cloned();
    let k3 = computed(&r, "canonical_nonvanishing", "dim").cloned();
    let first = r
        .check("canonical_vanishing")
        .and_then(|c| c.expected.iter().find(|q| q.name == "first_p"))
        .map(|q| q.value.clone());
    ok &= g == Some(serde_json::json!(6)) && h0 == Some(serde_json::json!(6)) && first == Some(serde_json::json!(4));
    detail.push_str(&format!(
        "g = {}, h0(K_X) = {}, window {}, dim K_3,1 = {}",
        g.unwrap_or_default(),
        h0.unwrap_or_default(),
        computed(&r, "canonical_vanishing", "window_dims").cloned().unwrap_or_default(),
        k3.unwrap_or_default()
    ));
    reports.push(r);
    Ok((ok, detail))
}

fn quadric(reports: &mut Vec<ScenarioReport>) -> Outcome {
    let r = run_scenario(&config(Scenario::QuadricNodal { k: 3, m: 3, gamma: 1 }, &[]))?;
    let (mut ok, mut detail) = all_pass(&r, &["genus", "dim_v", "mk", "invariants"]);
    let g = computed(&r, "genus", "adjunction_genus").cloned();
    let dim_v = computed(&r, "dim_v", "dim_V").cloned();
    let window = computed(&r, "mk", "window_dims").cloned().unwrap_or_default();
    let starts_at_5 = window.as_array().and_then(|w| w.first()).and_then(|x| x[0].as_u64()) == Some(5);
    ok &= g == Some(serde_json::json!(3)) && dim_v == Some(serde_json::json!(8)) && starts_at_5;
    detail.push_str(&format!("g = {}, dim V = {}, window {window}", g.unwrap_or_default(), dim_v.unwrap_or_default()));
    reports.push(r);
    Ok((ok, detail))
}

fn add_divisor(reports: &mut Vec<ScenarioReport>) -> Outcome {
    let r = run_scenario(&config(
        Scenario::AddDivisor { e: 0, k: 3, m: 4, divisor: DivisorSpec::Fibers { count: 1 } },
        &[],
    ))?;
    let (ok, mut detail) = all_pass(&r, &["base_mk", "enlarged_mk", "invariants"]);
    detail.push_str(&format!(
        "L_0 window {}, L_0 + f window {}",
        computed(&r, "base_mk", "window_dims").cloned().unwrap_or_default(),
        computed(&r, "enlarged_mk", "window_dims").cloned().unwrap_or_default()
    ));
    reports.push(r);
    Ok((ok, detail))
}

fn projection(reports: &mut Vec<ScenarioReport>) -> Outcome {
    let quartic = Scenario::ProjectionStudy { d: 4, polarization: None, strand: None, samples: 20, points: 5 };
    let r = run_scenario(&config(quartic, &[]))?;
    let ids = [
        "complex",
        "global_injective",
        "lift_injective",
        "exactness",
        "identity",
        "survival",
        "adversarial",
        "containment",
        "drop",
    ];
    let (mut ok, mut detail) = all_pass(&r, &ids);
    let quintic = Scenario::ProjectionStudy { d: 5, polarization: Some(3), strand: Some(6), samples: 5, points: 5 };
    let q = run_scenario(&config(quintic, &["drop"]))?;
    let (ok_q, detail_q) = all_pass(&q, &["drop"]);
    let drops = computed(&q, "drop", "dims").and_then(|v| v.as_array()).map_or(0, |a| a.len());
    ok &= ok_q && drops == 5;
    detail.push_str(&detail_q);
    detail.push_str(&format!(
        "quartic survival {}, containment {}; quintic K_6,1 = {} drops to {} at 5 points",
        computed(&r, "survival", "fraction").cloned().unwrap_or_default(),
        computed(&r, "containment", "members_total_dimT_injective").cloned().unwrap_or_default(),
        computed(&q, "drop", "dim_source").cloned().unwrap_or_default(),
        computed(&q, "drop", "dims").cloned().unwrap_or_default(),
    ));
    reports.push(r);
    reports.push(q);
    Ok((ok, detail))
}

/// Every module the criteria above build, reconstructed through the public builders.
fn acceptance_modules() -> Result<Vec<(String, GradedModule)>, Box<dyn std::error::Error>> {
    let p = prime();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = vec![
        ("plane O(2)".to_string(), plane_ambient(2)),
        ("plane O(3)".to_string(), plane_ambient(3)),
        ("plane O(-3) twisted by O(2)".to_string(), {
            build_ambient_module(p, &SurfaceModel::plane(), &DivisorClass::Degree(-3), &DivisorClass::Degree(2), 3)?
        }),
    ];
    for d in [4, 5] {
        let f = random_section(p, &SurfaceModel::plane(), &DivisorClass::Degree(d), &mut rng)?;
        out.push((
            format!("degree {d} curve, O_X(3)"),
            build_restriction_module(&plane_ambient(3), &f, &DivisorClass::Degree(d))?,
        ));
    }
    for (e, k, m) in [(1, 3, 4), (0, 3, 4)] {
        let s = SurfaceModel::hirzebruch(e);
        let x = DivisorClass::Ruled { a: k, b: m };
        let f = random_section(p, &s, &x, &mut rng)?;
        let l = DivisorClass::h_ab(k, m);
        let amb = build_ambient_module(p, &s, &l.zero_like(), &l, 2)?;
        out.push((format!("Sigma_{e} H_{k},{m} restricted"), build_restriction_module(&amb, &f, &x)?));
        out.push((format!("Sigma_{e} H_{k},{m}"), amb));
        let kx = s.canonical_class().add(&x)?;
        let kamb = build_ambient_module(p, &s, &kx.zero_like(), &kx, 2)?;
        out.push((format!("Sigma_{e} canonical restriction"), build_restriction_module(&kamb, &f, &x)?));
    }
    let s = SurfaceModel::quadric_blowup(vec![BasePoint { a: 5, b: 9 }])?;
    let h = DivisorClass::Blowup { a: 2, b: 2, mults: vec![1] };
    let x = DivisorClass::Blowup { a: 3, b: 3, mults: vec![2] };
    let f = random_section(p, &s, &x, &mut rng)?;
    let amb = build_ambient_module(p, &s, &h.zero_like(), &h, 2)?;
    out.push(("nodal quadric restriction".into(), build_restriction_module(&amb, &f, &x)?));
    out.push(("blown-up quadric".into(), amb));
    Ok(out)
}

fn invariants(reports: &[ScenarioReport]) -> Outcome {
    let mut failures = vec![];
    let mut matrices = 0;
    for (name, m) in acceptance_modules()? {
        if !m.check_commutativity() {
            failures.push(format!("{name}: action does not commute"));
        }
        for l in 0..=m.qmax() {
            if !euler_check(&m, l)?.passed {
                failures.push(format!("{name}: Euler characteristic at weight {l}"));
            }
        }
        for q in 0..m.action.len() {
            for p in 1..=m.n_generators() {
                let d = assemble_differential(&m, p, q)?;
                matrices += 1;
                if d.cols() != rank(&d) + kernel_basis(&d).dimension() {
                    failures.push(format!("{name}: rank + nullity at ({p}, {q})"));
                }
            }
        }
    }
    let mut subsets = 0usize;
    for n in 0..=16 {
        for p in 0..=n {
            for r in 0..binomial(n, p) {
                let s = wedge_unrank(r, p, n)?;
                subsets += 1;
                if wedge_rank_in(&s, n)? != r {
                    failures.push(format!("wedge round trip n={n}, p={p}, rank={r}"));
                }
            }
        }
    }
    for r in reports {
        for c in r.checks.iter().filter(|c| c.id == "invariants" && c.status != Status::Pass) {
            failures.push(format!("scenario invariant: {}", c.claim));
        }
    }
    let ok = failures.is_empty();
    Ok((ok, format!("{matrices} matrices, {subsets} subsets; failures: {failures:?}")))
}

type Criterion = Box<dyn FnOnce(&mut Vec<ScenarioReport>) -> Outcome>;

fn main() -> ExitCode {
    // Skip when the harness is only listing tests.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mut reports = Vec::new();
    let criteria: Vec<(&str, u64, Criterion)> = vec![
        ("Veronese threshold K_p,1(P2, O(2))", 1, Box::new(|_| veronese())),
        ("threshold sharpness for O(3)", 30, Box::new(|_| cubic_sharpness())),
        ("(M_2) for the plane quartic over two primes", 30, Box::new(quartic_m2)),
        ("(M_3) fails for O_X(3) on the plane quintic", 120, Box::new(quintic_failure)),
        ("duality instance for O(2)", 30, Box::new(|_| duality())),
        ("ruled surface e=1, k=3, m=4", 120, Box::new(hirzebruch)),
        ("canonical curve on Sigma_0, k=3, m=4", 60, Box::new(canonical)),
        ("nodal quadric k=3, m=3, one node", 60, Box::new(quadric)),
        ("adding a fiber keeps (M_2)", 120, Box::new(add_divisor)),
        ("projection suite", 300, Box::new(projection)),
    ];
    let mut failed = 0;
    let mut report = |n: usize, name: &str, limit: u64, elapsed: Duration, outcome: Outcome| {
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok && elapsed.as_secs() < limit, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} [{verdict}] {name} ({:.2}s, limit {limit}s): {detail}", elapsed.as_secs_f64());
    };
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let outcome = run(&mut reports);
        report(i + 1, name, limit, t.elapsed(), outcome);
    }
    let t = Instant::now();
    let outcome = invariants(&reports);
    report(11, "invariant suite", 60, t.elapsed(), outcome);
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
