//! Scenario runner: builds the case-study modules, runs their checks and assembles
//! reproducible reports.

mod config;
mod hirzebruch;
mod plane;
mod quadric;
mod report;
mod study;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use config::{DivisorSpec, HirzebruchMode, OutputFormat, PrimePolicy, Scenario, ScenarioConfig, DEFAULT_NNZ_LIMIT};
pub use hirzebruch::{run_add_divisor, run_hirzebruch};
pub use plane::run_plane_curve;
pub use quadric::run_quadric_nodal;
pub use report::{
    emit_report, parse_report, CheckRecord, Provenance, Quantity, ScenarioReport, Status, Timing, CAVEAT_NONVANISHING,
    CAVEAT_SMOOTHNESS, CAVEAT_VANISHING, SCHEMA_VERSION,
};
pub use study::run_projection_study;

use crate::error::{Error, Result};
use crate::graded_modules::GradedModule;
use crate::koszul::{check_mk, describe, differential_nnz, euler_check, BettiTable, KoszulComplex, MkVerdict};

/// Runs whichever scenario the config describes.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    match cfg.scenario {
        Scenario::PlaneCurve { .. } => run_plane_curve(cfg),
        Scenario::Hirzebruch { .. } => run_hirzebruch(cfg),
        Scenario::QuadricNodal { .. } => run_quadric_nodal(cfg),
        Scenario::ProjectionStudy { .. } => run_projection_study(cfg),
        Scenario::AddDivisor { .. } => run_add_divisor(cfg),
    }
}

/// Refuses differentials above the configured size.
pub fn guard_cell(module: &GradedModule, p: usize, q: usize, limit: usize) -> Result<()> {
    let n = module.n_generators();
    let check = |p: usize, q: usize| -> Result<()> {
        if p >= 1 && p <= n && q < module.action.len() {
            let nnz = differential_nnz(module, p, q)?;
            if nnz > limit {
                return Err(Error::Guardrail { nnz, limit });
            }
        }
        Ok(())
    };
    check(p, q)?;
    if q > 0 {
        check(p + 1, q - 1)?;
    }
    Ok(())
}

/// State shared by the runners: the config, the report under construction and the clock.
pub(crate) struct Run {
    pub cfg: ScenarioConfig,
    pub report: ScenarioReport,
    pub seed: u64,
    started: Instant,
}

impl Run {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Run {
            cfg: cfg.clone(),
            report: ScenarioReport::new(cfg.clone()),
            seed: cfg.seed()?,
            started: Instant::now(),
        })
    }

    /// An independent random stream for each purpose.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }

    pub fn sub_seed(&self, stream: u64) -> u64 {
        use rand::Rng;
        self.rng(stream).gen()
    }

    pub fn wants(&self, id: &str) -> bool {
        self.cfg.wants(id)
    }

    pub fn lap(&mut self, step: &str) {
        if self.cfg.timings {
            let seconds = self.started.elapsed().as_secs_f64();
            self.report.timings.push(Timing { step: step.into(), seconds });
            self.started = Instant::now();
        }
    }

    pub fn add_prime(&mut self, p: u64) {
        if !self.report.primes.contains(&p) {
            self.report.primes.push(p);
        }
    }

    pub fn limit(&self) -> usize {
        self.cfg.nnz_limit()
    }

    pub fn cell(&self, cx: &KoszulComplex, p: usize, q: usize) -> Result<usize> {
        guard_cell(cx.module, p, q, self.limit())?;
        Ok(cx.cell(p, q)?.dim_k)
    }

    /// `K_{p,1}` over `ps`, recorded as a Betti table.
    pub fn strand(&mut self, module: &GradedModule, ps: impl IntoIterator<Item = usize>) -> Result<BettiTable> {
        let ps: Vec<usize> = ps.into_iter().collect();
        for &p in &ps {
            guard_cell(module, p, 1, self.limit())?;
        }
        let cx = KoszulComplex::new(module);
        let mut entries = BTreeMap::new();
        for p in ps {
            entries.insert((p, 1), cx.cell(p, 1)?.dim_k);
        }
        let t = BettiTable { label: describe(module), prime: module.prime, entries };
        self.report.betti_tables.push(t.clone());
        Ok(t)
    }

    /// Property `(M_k)` with the guardrail applied to its window, recorded as a table.
    pub fn mk(&mut self, module: &GradedModule, k: usize) -> Result<MkVerdict> {
        let data = module.restriction.as_ref().map(|r| r.h0).unwrap_or(0);
        let start = (data as i64 - k as i64 - 1).max(1) as usize;
        for p in start..module.n_generators() {
            guard_cell(module, p, 1, self.limit())?;
        }
        let v = check_mk(module, k)?;
        let entries = v.witnesses.iter().map(|&(p, d)| ((p, 1), d)).collect();
        self.report.betti_tables.push(BettiTable { label: describe(module), prime: module.prime, entries });
        Ok(v)
    }

    /// Euler characteristic along every stored strand and commutativity of the action.
    pub fn invariants(&mut self, modules: &[(&str, &GradedModule)]) -> Result<()> {
        if !self.wants("invariants") {
            return Ok(());
        }
        for (name, m) in modules {
            let mut euler = Vec::new();
            for l in 0..=m.qmax() {
                euler.push(euler_check(m, l)?);
            }
            let commute = m.check_commutativity();
            let passed = commute && euler.iter().all(|e| e.passed);
            self.report.push(
                CheckRecord::new(
                    "invariants",
                    format!("Euler characteristic and commuting action on the {name} module"),
                    passed,
                )
                .compute(Quantity::computed("commuting_action", commute))
                .compute(Quantity::computed(
                    "euler_strands",
                    euler.iter().map(|e| vec![e.weight as i64, e.chain_side, e.cohomology_side]).collect::<Vec<_>>(),
                )),
            );
        }
        Ok(())
    }

    pub fn finish(mut self) -> ScenarioReport {
        self.lap("finish");
        self.report
    }
}

/// Report record for an `(M_k)` verdict, with the threshold recomputed from `dim A_1`.
pub(crate) fn mk_record(id: &str, claim: &str, v: &MkVerdict, formula_h0: Option<i64>) -> CheckRecord {
    let mut r = CheckRecord::new(id, claim, v.verdict)
        .expect(Quantity::formula("verdict", true))
        .compute(Quantity::computed("h0", v.h0))
        .compute(Quantity::computed("threshold", v.threshold))
        .compute(Quantity::computed("window_dims", v.witnesses.iter().map(|&(p, d)| vec![p, d]).collect::<Vec<_>>()))
        .compute(Quantity::computed("verdict", v.verdict));
    if let Some(h) = formula_h0 {
        r = r.expect(Quantity::formula("h0", h)).expect(Quantity::formula("threshold", h - v.k as i64 - 1));
        if h != v.h0 as i64 {
            r.status = Status::Fail;
        }
    }
    r
}
