use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{OutputFormat, ScenarioConfig};
use crate::error::{Error, Result};
use crate::koszul::BettiTable;

pub const SCHEMA_VERSION: u32 = 1;

/// Where a number in a report comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// A closed-form prediction.
    PaperFormula,
    /// The output of an exact computation.
    Computed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub value: Value,
    pub provenance: Provenance,
}

impl Quantity {
    pub fn formula(name: &str, value: impl Into<Value>) -> Self {
        Quantity { name: name.into(), value: value.into(), provenance: Provenance::PaperFormula }
    }

    pub fn computed(name: &str, value: impl Into<Value>) -> Self {
        Quantity { name: name.into(), value: value.into(), provenance: Provenance::Computed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Recorded without a claim.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub claim: String,
    pub expected: Vec<Quantity>,
    pub computed: Vec<Quantity>,
    pub status: Status,
}

impl CheckRecord {
    pub fn new(id: &str, claim: impl Into<String>, passed: bool) -> Self {
        CheckRecord {
            id: id.into(),
            claim: claim.into(),
            expected: vec![],
            computed: vec![],
            status: if passed { Status::Pass } else { Status::Fail },
        }
    }

    pub fn info(id: &str, claim: impl Into<String>) -> Self {
        CheckRecord { status: Status::Info, ..CheckRecord::new(id, claim, true) }
    }

    pub fn expect(mut self, q: Quantity) -> Self {
        self.expected.push(q);
        self
    }

    pub fn compute(mut self, q: Quantity) -> Self {
        self.computed.push(q);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub step: String,
    pub seconds: f64,
}

/// Result of one scenario run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema_version: u32,
    pub config: ScenarioConfig,
    pub primes: Vec<u64>,
    pub checks: Vec<CheckRecord>,
    pub betti_tables: Vec<BettiTable>,
    pub caveats: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<Timing>,
}

pub const CAVEAT_VANISHING: &str =
    "vanishing over GF(p) bounds the characteristic-zero Betti numbers from above, so it certifies vanishing for a lift of the instance";
pub const CAVEAT_NONVANISHING: &str =
    "nonvanishing over GF(p) is a statement about the reduction; it matches characteristic zero only where the mod-p rank equals the generic rank";
pub const CAVEAT_SMOOTHNESS: &str =
    "the random curve's smoothness is checked only at points where branch expansions are taken";

impl ScenarioReport {
    pub fn new(config: ScenarioConfig) -> Self {
        ScenarioReport {
            schema_version: SCHEMA_VERSION,
            config,
            primes: vec![],
            checks: vec![],
            betti_tables: vec![],
            caveats: vec![CAVEAT_VANISHING.into(), CAVEAT_SMOOTHNESS.into()],
            timings: vec![],
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn push(&mut self, c: CheckRecord) {
        self.checks.push(c);
    }

    pub fn note_nonvanishing(&mut self) {
        if !self.caveats.iter().any(|c| c == CAVEAT_NONVANISHING) {
            self.caveats.push(CAVEAT_NONVANISHING.into());
        }
    }
}

/// Serializes a report in the requested format.
pub fn emit_report(report: &ScenarioReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Structured => serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string())),
        OutputFormat::Csv => emit_csv(report),
        OutputFormat::Text => Ok(emit_text(report)),
    }
}

/// Reads back a structured report.
pub fn parse_report(s: &str) -> Result<ScenarioReport> {
    let r: ScenarioReport = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    if r.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("schema version {} is not {SCHEMA_VERSION}", r.schema_version)));
    }
    Ok(r)
}

fn emit_csv(report: &ScenarioReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["table", "prime", "p", "q", "dim"]).map_err(io)?;
    for t in &report.betti_tables {
        for (&(p, q), &dim) in &t.entries {
            w.write_record([t.label.clone(), t.prime.to_string(), p.to_string(), q.to_string(), dim.to_string()])
                .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn render_quantities(qs: &[Quantity]) -> String {
    qs.iter()
        .map(|q| {
            let tag = match q.provenance {
                Provenance::PaperFormula => "formula",
                Provenance::Computed => "computed",
            };
            format!("{} = {} [{tag}]", q.name, q.value)
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn render_table(out: &mut String, t: &BettiTable) {
    let _ = writeln!(out, "Betti table: {} over GF({})", t.label, t.prime);
    let ps: std::collections::BTreeSet<usize> = t.entries.keys().map(|&(p, _)| p).collect();
    let qs: std::collections::BTreeSet<usize> = t.entries.keys().map(|&(_, q)| q).collect();
    let _ = write!(out, "  {:>4}", "q\\p");
    for p in &ps {
        let _ = write!(out, " {p:>7}");
    }
    out.push('\n');
    for q in &qs {
        let _ = write!(out, "  {q:>4}");
        for p in &ps {
            match t.get(*p, *q) {
                Some(d) => {
                    let _ = write!(out, " {d:>7}");
                }
                None => {
                    let _ = write!(out, " {:>7}", ".");
                }
            }
        }
        out.push('\n');
    }
}

fn emit_text(report: &ScenarioReport) -> String {
    let mut out = String::new();
    let cfg = &report.config;
    let _ = writeln!(out, "scenario: {}", serde_json::to_string(&cfg.scenario).unwrap_or_default());
    let _ = writeln!(out, "prime policy: {}, seed: {:?}", cfg.prime, cfg.seed);
    let _ = writeln!(out, "primes used: {:?}", report.primes);
    out.push('\n');
    for t in &report.betti_tables {
        render_table(&mut out, t);
        out.push('\n');
    }
    for c in &report.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        };
        let _ = writeln!(out, "[{tag}] {}: {}", c.id, c.claim);
        if !c.expected.is_empty() {
            let _ = writeln!(out, "       expected: {}", render_quantities(&c.expected));
        }
        if !c.computed.is_empty() {
            let _ = writeln!(out, "       computed: {}", render_quantities(&c.computed));
        }
    }
    if !report.timings.is_empty() {
        out.push('\n');
        for t in &report.timings {
            let _ = writeln!(out, "time {}: {:.3}s", t.step, t.seconds);
        }
    }
    out.push('\n');
    for c in &report.caveats {
        let _ = writeln!(out, "note: {c}");
    }
    let _ = writeln!(out, "overall: {}", if report.passed() { "PASS" } else { "FAIL" });
    out
}
