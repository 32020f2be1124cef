use super::{
    mk_record, CheckRecord, DivisorSpec, HirzebruchMode, Quantity, Run, Scenario, ScenarioConfig, ScenarioReport,
};
use crate::error::{Error, Result};
use crate::ff_linalg::Prime;
use crate::graded_modules::{build_ambient_module, build_restriction_module, random_section, GradedModule, Poly};
use crate::koszul::KoszulComplex;
use crate::multilinear::{ruled_section_count, DivisorClass, SurfaceModel};

const CURVE_STREAM: u64 = 1;

/// `g = (k-1)(m-1-ke/2)` for `X ≡ kC_0 + mf`.
fn ruled_genus(e: i64, k: i64, m: i64) -> i64 {
    (k - 1) * (2 * (m - 1) - k * e) / 2
}

/// A random curve in `|kC_0 + mf|` on `Σ_e`.
pub(crate) fn ruled_curve(
    run: &Run,
    prime: Prime,
    e: u32,
    k: i64,
    m: i64,
) -> Result<(SurfaceModel, DivisorClass, Poly)> {
    let s = SurfaceModel::hirzebruch(e);
    let x = DivisorClass::Ruled { a: k, b: m };
    let f = random_section(prime, &s, &x, &mut run.rng(CURVE_STREAM))?;
    Ok((s, x, f))
}

pub(crate) fn ruled_restriction(
    prime: Prime,
    s: &SurfaceModel,
    polarization: &DivisorClass,
    x: &DivisorClass,
    f: &Poly,
) -> Result<GradedModule> {
    let amb = build_ambient_module(prime, s, &polarization.zero_like(), polarization, 2)?;
    build_restriction_module(&amb, f, x)
}

fn genus_record(a: &GradedModule, formula: i64) -> CheckRecord {
    let data = a.restriction.as_ref().expect("restriction module");
    let ok = data.curve_genus == Some(formula) && data.expected_h0 == Some(data.h0 as i64) && data.a1_identified;
    CheckRecord::new("genus", "genus formula agrees with adjunction and dim A_1 matches Riemann-Roch", ok)
        .expect(Quantity::formula("genus", formula))
        .compute(Quantity::computed("adjunction_genus", data.curve_genus))
        .compute(Quantity::computed("degree", data.degree))
        .compute(Quantity::computed("riemann_roch_h0", data.expected_h0))
        .compute(Quantity::computed("dim_A1", data.h0))
}

pub fn run_hirzebruch(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    let mut run = Run::new(cfg)?;
    let Scenario::Hirzebruch { e, k, m, mode } = cfg.scenario else {
        return Err(Error::Config("not a Hirzebruch scenario".into()));
    };
    let prime = cfg.prime.primary(run.seed)?;
    run.add_prime(prime.value());
    let (ei, ki, mi) = (e as i64, k as i64, m as i64);
    let g = ruled_genus(ei, ki, mi);
    let (s, x, f) = ruled_curve(&run, prime, e, ki, mi)?;
    match mode {
        HirzebruchMode::Gonality => {
            let l = DivisorClass::h_ab(ki, mi);
            let a = ruled_restriction(prime, &s, &l, &x, &f)?;
            if run.wants("genus") {
                run.report.push(genus_record(&a, g));
            }
            let h0 = a.restriction.as_ref().map_or(0, |r| r.h0);
            if run.wants("h0") {
                let deg = s.intersection(&l, &x)?;
                let rr = deg - g + 1;
                run.report.push(
                    CheckRecord::new("h0", "h0(L) = deg L - g + 1 with deg L = H_k,m . X", rr == h0 as i64)
                        .expect(Quantity::formula("deg_L", deg))
                        .expect(Quantity::formula("h0", rr))
                        .compute(Quantity::computed("dim_A1", h0)),
                );
            }
            if run.wants("mk") {
                let v = run.mk(&a, (k - 1) as usize)?;
                run.report.push(mk_record("mk", &format!("(M_{}) for (X, H_{k},{m}|X)", k - 1), &v, None));
                run.lap("mk");
            }
            if run.wants("surface_vanishing") {
                let amb = build_ambient_module(prime, &s, &l.zero_like(), &l, 2)?;
                let n = amb.n_generators();
                let formula_h0 = ruled_section_count(ei, ki - 1, mi - 1) as i64;
                let threshold = formula_h0 - ki;
                let t = run.strand(&amb, (threshold.max(1) as usize)..n)?;
                let ok = n as i64 == formula_h0 && t.entries.values().all(|&d| d == 0);
                run.report.push(
                    CheckRecord::new(
                        "surface_vanishing",
                        format!("K_p,1(Sigma_{e}, H_{k},{m}) = 0 for p >= N({k},{m})"),
                        ok,
                    )
                    .expect(Quantity::formula("h0_surface", formula_h0))
                    .expect(Quantity::formula("N", threshold))
                    .compute(Quantity::computed("dim_V", n))
                    .compute(Quantity::computed(
                        "window_dims",
                        t.entries.iter().map(|(&(p, _), &d)| vec![p, d]).collect::<Vec<_>>(),
                    )),
                );
                run.invariants(&[("surface", &amb)])?;
                run.lap("surface_vanishing");
            }
            run.invariants(&[("restriction", &a)])?;
        }
        HirzebruchMode::Canonical => {
            let kx = s.canonical_class().add(&x)?;
            let a = ruled_restriction(prime, &s, &kx, &x, &f)?;
            if run.wants("genus") {
                run.report.push(genus_record(&a, g));
            }
            let h0 = a.restriction.as_ref().map_or(0, |r| r.h0);
            if run.wants("h0") {
                run.report.push(
                    CheckRecord::new("h0", "h0(K_X) = g", h0 as i64 == g)
                        .expect(Quantity::formula("h0", g))
                        .compute(Quantity::computed("dim_A1", h0)),
                );
            }
            if run.wants("canonical_vanishing") {
                // p >= g - k + 1 = h0 - (k-2) - 1.
                let v = run.mk(&a, (k - 2) as usize)?;
                run.report.push(
                    mk_record("canonical_vanishing", &format!("K_p,1(X, K_X) = 0 for p >= g - {k} + 1"), &v, Some(g))
                        .expect(Quantity::formula("first_p", g - ki + 1)),
                );
                run.lap("canonical_vanishing");
            }
            if run.wants("canonical_nonvanishing") {
                let p = (g - ki).max(1) as usize;
                let cx = KoszulComplex::new(&a);
                let dim = run.cell(&cx, p, 1)?;
                run.report.betti_tables.push(crate::koszul::BettiTable {
                    label: crate::koszul::describe(&a),
                    prime,
                    entries: [((p, 1), dim)].into_iter().collect(),
                });
                run.report.push(
                    CheckRecord::new("canonical_nonvanishing", format!("K_{p},1(X, K_X) != 0 at p = g - {k}"), dim > 0)
                        .expect(Quantity::formula("p", p))
                        .compute(Quantity::computed("dim", dim)),
                );
                run.report.note_nonvanishing();
                run.lap("canonical_nonvanishing");
            }
            run.invariants(&[("canonical restriction", &a)])?;
        }
    }
    Ok(run.finish())
}

pub fn run_add_divisor(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    let mut run = Run::new(cfg)?;
    let Scenario::AddDivisor { e, k, m, divisor } = &cfg.scenario else {
        return Err(Error::Config("not an add-divisor scenario".into()));
    };
    let d = match divisor {
        DivisorSpec::Fibers { count } => DivisorClass::Ruled { a: 0, b: *count },
        DivisorSpec::Ruled { a, b } => DivisorClass::Ruled { a: *a, b: *b },
        DivisorSpec::Point => return Err(Error::Unsupported(
            "a single point is not the restriction of an ambient class; use the point-level generic_drop_check instead"
                .into(),
        )),
    };
    let prime = cfg.prime.primary(run.seed)?;
    run.add_prime(prime.value());
    let (ki, mi) = (*k as i64, *m as i64);
    let (s, x, f) = ruled_curve(&run, prime, *e, ki, mi)?;
    let l0 = DivisorClass::h_ab(ki, mi);
    let l = l0.add(&d)?;
    let a0 = ruled_restriction(prime, &s, &l0, &x, &f)?;
    let a = ruled_restriction(prime, &s, &l, &x, &f)?;
    let kk = (*k - 1) as usize;
    let mut verdicts = Vec::new();
    for (id, name, module) in [("base_mk", "L_0 = H_k,m|X", &a0), ("enlarged_mk", "L_0 + D", &a)] {
        if run.wants(id) {
            let v = run.mk(module, kk)?;
            verdicts.push(v.verdict);
            run.report.push(
                mk_record(id, &format!("(M_{kk}) for {name} with D = {d}"), &v, None)
                    .compute(Quantity::computed("class", module.label.polarization.clone())),
            );
            run.lap(id);
        }
    }
    if verdicts.len() == 2 {
        run.report.push(
            CheckRecord::info("side_by_side", "verdicts for L_0 and L_0 + D")
                .compute(Quantity::computed("base", verdicts[0]))
                .compute(Quantity::computed("enlarged", verdicts[1])),
        );
    }
    run.invariants(&[("base restriction", &a0), ("enlarged restriction", &a)])?;
    Ok(run.finish())
}
