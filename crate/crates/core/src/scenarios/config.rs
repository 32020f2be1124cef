use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff_linalg::{random_prime, Prime, DEFAULT_PRIME_BITS};

/// How the working prime is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PrimePolicy {
    /// A random prime with this many bits, drawn from the seed.
    Auto {
        bits: u32,
    },
    Explicit(u64),
}

impl Default for PrimePolicy {
    fn default() -> Self {
        PrimePolicy::Auto { bits: DEFAULT_PRIME_BITS }
    }
}

impl fmt::Display for PrimePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimePolicy::Auto { bits } => write!(f, "auto:{bits}"),
            PrimePolicy::Explicit(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for PrimePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("prime policy `{s}` is neither `auto:<bits>` nor an integer"));
        match s.strip_prefix("auto:") {
            Some(bits) => Ok(PrimePolicy::Auto { bits: bits.parse().map_err(|_| bad())? }),
            None if s == "auto" => Ok(PrimePolicy::default()),
            None => Ok(PrimePolicy::Explicit(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl TryFrom<String> for PrimePolicy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PrimePolicy> for String {
    fn from(p: PrimePolicy) -> String {
        p.to_string()
    }
}

// Separates the second prime's draw from the first for the same seed.
const SECOND_PRIME_STREAM: u64 = 0x5851_f42d_4c95_7f2d;

impl PrimePolicy {
    /// The working prime.
    pub fn primary(&self, seed: u64) -> Result<Prime> {
        match *self {
            PrimePolicy::Auto { bits } => random_prime(bits, seed),
            PrimePolicy::Explicit(p) => Prime::new(p),
        }
    }

    /// A second prime of the same size, different from the primary one.
    pub fn secondary(&self, seed: u64) -> Result<Prime> {
        let first = self.primary(seed)?;
        let bits = first.bits().max(crate::ff_linalg::MIN_PRIME_BITS);
        let mut s = seed ^ SECOND_PRIME_STREAM;
        loop {
            let p = random_prime(bits, s)?;
            if p != first {
                return Ok(p);
            }
            s = s.wrapping_add(1);
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HirzebruchMode {
    #[default]
    Gonality,
    Canonical,
}

/// A divisor added to the polarization of a Hirzebruch scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DivisorSpec {
    /// `count` fibers of the ruling, restricted to the curve.
    Fibers { count: i64 },
    /// The restriction of the ambient class `aC_0 + bf`.
    Ruled { a: i64, b: i64 },
    /// A single point of the curve, which is not the restriction of an ambient class.
    Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    PlaneCurve {
        d: u32,
        /// Numbers of colinear points to subtract from `O_X(d-1)` in the exploratory sweep.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        colinear_sweep: Vec<usize>,
    },
    Hirzebruch {
        e: u32,
        k: u32,
        m: u32,
        #[serde(default)]
        mode: HirzebruchMode,
    },
    QuadricNodal {
        k: u32,
        m: u32,
        gamma: u32,
    },
    ProjectionStudy {
        d: u32,
        /// Degree `n` of `L = O_X(n)`; defaults to `d - 1`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        polarization: Option<u32>,
        /// The strand `p + 1`; defaults to `h^0 L - (d - 1) - 1`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        strand: Option<usize>,
        /// Points for the survival sample.
        #[serde(default = "default_samples")]
        samples: usize,
        /// Points for the per-point checks.
        #[serde(default = "default_points")]
        points: usize,
    },
    AddDivisor {
        e: u32,
        k: u32,
        m: u32,
        divisor: DivisorSpec,
    },
}

/// Whether `(k-1)(m-1-ke/2)` is an integer.
fn genus_is_integral(e: i64, k: i64, m: i64) -> bool {
    ((k - 1) * (2 * (m - 1) - k * e)) % 2 == 0
}

fn default_samples() -> usize {
    20
}

fn default_points() -> usize {
    5
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Structured,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            "structured" | "json" => Ok(OutputFormat::Structured),
            _ => Err(Error::Config(format!("unknown output format `{s}`"))),
        }
    }
}

/// Largest Koszul matrix, in nonzero entries, run without `force`.
pub const DEFAULT_NNZ_LIMIT: usize = 20_000_000;

/// A complete scenario description. Mirrors the TOML config file field for field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub prime: PrimePolicy,
    pub seed: Option<u64>,
    /// Check ids to run; empty means all.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<String>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub force: bool,
    /// Record wall-clock timings. Off by default so reports are reproducible.
    #[serde(default)]
    pub timings: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario, seed: u64) -> Self {
        ScenarioConfig {
            scenario,
            prime: PrimePolicy::default(),
            seed: Some(seed),
            checks: vec![],
            format: OutputFormat::default(),
            force: false,
            timings: false,
            threads: None,
        }
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| Error::Config("a seed is required: every scenario draws a random curve".into()))
    }

    pub fn nnz_limit(&self) -> usize {
        if self.force {
            usize::MAX
        } else {
            DEFAULT_NNZ_LIMIT
        }
    }

    /// Whether the check `id` was selected.
    pub fn wants(&self, id: &str) -> bool {
        self.checks.is_empty() || self.checks.iter().any(|c| c == id)
    }

    pub fn check_ids(&self) -> &'static [&'static str] {
        match self.scenario {
            Scenario::PlaneCurve { .. } => &[
                "surface_threshold",
                "mk",
                "mk_second_prime",
                "failure_lower_degree",
                "duality",
                "genus",
                "invariants",
            ],
            Scenario::Hirzebruch { mode: HirzebruchMode::Gonality, .. } => {
                &["genus", "h0", "mk", "surface_vanishing", "invariants"]
            }
            Scenario::Hirzebruch { mode: HirzebruchMode::Canonical, .. } => {
                &["genus", "h0", "canonical_vanishing", "canonical_nonvanishing", "invariants"]
            }
            Scenario::QuadricNodal { .. } => &["genus", "dim_v", "mk", "surface_cross_check", "invariants"],
            Scenario::ProjectionStudy { .. } => &[
                "complex",
                "global_injective",
                "lift_injective",
                "exactness",
                "identity",
                "survival",
                "adversarial",
                "containment",
                "drop",
            ],
            Scenario::AddDivisor { .. } => &["base_mk", "enlarged_mk", "invariants"],
        }
    }

    /// Checks the parameter constraints of the chosen scenario.
    pub fn validate(&self) -> Result<()> {
        self.seed()?;
        if let PrimePolicy::Auto { bits } = self.prime {
            if !(crate::ff_linalg::MIN_PRIME_BITS..=crate::ff_linalg::MAX_PRIME_BITS).contains(&bits) {
                return Err(Error::PrimeBits(bits));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        if let Some(bad) = self.checks.iter().find(|c| !self.check_ids().contains(&c.as_str())) {
            return Err(Error::Config(format!("unknown check `{bad}`; available: {}", self.check_ids().join(", "))));
        }
        let fail = |msg: String| Err(Error::Config(msg));
        match &self.scenario {
            Scenario::PlaneCurve { d, colinear_sweep } => {
                if *d < 3 {
                    return fail(format!("plane curve degree d = {d} must be at least 3"));
                }
                if let Some(g) = colinear_sweep.iter().find(|&&g| g > *d as usize) {
                    return fail(format!("a line meets the curve in at most {d} points, asked for {g}"));
                }
            }
            Scenario::Hirzebruch { e, k, m, mode } => {
                let (e, k, m) = (*e as i64, *k as i64, *m as i64);
                match mode {
                    HirzebruchMode::Gonality => {
                        if k < 2 || m < (k * e).max(k + e) {
                            return fail(format!(
                                "gonality mode needs k >= 2 and m >= max(ke, k+e); got e={e}, k={k}, m={m}"
                            ));
                        }
                    }
                    HirzebruchMode::Canonical => {
                        if k < 3 || m < (k * e + 1).max(k + 1).max(k + 2 * e) {
                            return fail(format!(
                                "canonical mode needs k >= 3 and m >= max(ke+1, k+1, k+2e); got e={e}, k={k}, m={m}"
                            ));
                        }
                    }
                }
                if !genus_is_integral(e, k, m) {
                    return fail(format!("(k-1)(m-1-ke/2) is not an integer for e={e}, k={k}, m={m}"));
                }
            }
            Scenario::QuadricNodal { k, m, gamma } => {
                if *k < 3 || m < k || *gamma + 2 > *k {
                    return fail(format!(
                        "needs k >= 3, m >= k and 0 <= gamma <= k-2; got k={k}, m={m}, gamma={gamma}"
                    ));
                }
            }
            Scenario::ProjectionStudy { d, polarization, strand, samples, points } => {
                if *d < 3 {
                    return fail(format!("plane curve degree d = {d} must be at least 3"));
                }
                if polarization == &Some(0) {
                    return fail("polarization degree must be positive".into());
                }
                if strand.is_some_and(|s| s < 2) {
                    return fail("the strand p+1 must be at least 2".into());
                }
                if *samples == 0 || *points == 0 {
                    return fail("sample and point counts must be positive".into());
                }
            }
            Scenario::AddDivisor { e, k, m, divisor } => {
                let (e, k, m) = (*e as i64, *k as i64, *m as i64);
                if k < 2 || m < (k * e).max(k + e) || !genus_is_integral(e, k, m) {
                    return fail(format!("base Hirzebruch scenario e={e}, k={k}, m={m} violates its constraints"));
                }
                match divisor {
                    DivisorSpec::Fibers { count } if *count < 0 => {
                        return fail("fiber count must be nonnegative".into())
                    }
                    DivisorSpec::Ruled { a, b } if *a < 0 || *b < 0 || *b < *a * e => {
                        return fail(format!("{a}C0+{b}f is not effective and base-point free on the surface"))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}
