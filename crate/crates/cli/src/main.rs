use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use syzygy_core::scenarios::{
    emit_report, run_scenario, DivisorSpec, HirzebruchMode, OutputFormat, PrimePolicy, Scenario, ScenarioConfig,
};
use syzygy_core::Error;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

/// Runs Koszul cohomology scenarios and reports per-check verdicts.
///
/// Exit status: 0 when every check passes, 1 when a mathematical check fails,
/// 2 on configuration errors.
#[derive(Parser, Debug)]
#[command(name = "syzygy", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Load the scenario from a TOML config file instead of a subcommand.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Working prime: an integer, or `auto:<bits>` for a random prime of that size.
    #[arg(long, global = true, value_name = "N|auto:BITS")]
    prime: Option<String>,

    /// Seed for every random choice (curves, points, primes).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for per-point pipelines.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Run past the matrix-size guardrail.
    #[arg(long, global = true)]
    force: bool,

    /// Record wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,

    /// Run only these checks (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    checks: Vec<String>,

    /// Print the resolved config as TOML and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Csv,
    Structured,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Csv => OutputFormat::Csv,
            Format::Structured => OutputFormat::Structured,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Gonality,
    Canonical,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smooth plane curve of degree d with L = O_X(d-1).
    Plane {
        #[arg(short, long)]
        degree: u32,
        /// Exploratory sweep: numbers of colinear points to subtract from O_X(d-1).
        #[arg(long = "colinear-sweep", visible_alias = "problem-5-4", value_delimiter = ',', value_name = "GAMMA,...")]
        colinear_sweep: Vec<usize>,
    },
    /// Curve in |kC_0 + mf| on the Hirzebruch surface Sigma_e.
    Hirzebruch {
        #[arg(short)]
        e: u32,
        #[arg(short)]
        k: u32,
        #[arg(short)]
        m: u32,
        #[arg(long, value_enum, default_value = "gonality")]
        mode: Mode,
    },
    /// Nodal curve on P1 x P1 blown up at gamma general points.
    QuadricNodal {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        m: u32,
        #[arg(short, long)]
        gamma: u32,
    },
    /// Projection-of-syzygies study on a plane curve.
    Project {
        #[arg(short, long)]
        degree: u32,
        /// Degree n of L = O_X(n); defaults to d-1.
        #[arg(long)]
        polarization: Option<u32>,
        /// The strand p+1 to project from.
        #[arg(long)]
        strand: Option<usize>,
        /// Points in the survival sample.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Points for the per-point checks.
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
    /// Compares (M_{k-1}) for L_0 = H_k,m|X and L_0 + D on a Hirzebruch surface.
    AddDivisor {
        #[arg(short)]
        e: u32,
        #[arg(short)]
        k: u32,
        #[arg(short)]
        m: u32,
        #[command(flatten)]
        divisor: DivisorArgs,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct DivisorArgs {
    /// Add this many fibers.
    #[arg(long)]
    fibers: Option<i64>,
    /// Add the class aC_0 + bf, given as `a,b`.
    #[arg(long, value_delimiter = ',', num_args = 2, value_name = "A,B")]
    ruled: Option<Vec<i64>>,
    /// Add a single point (not realizable on the surface; reported as unsupported).
    #[arg(long)]
    point: bool,
}

impl DivisorArgs {
    fn spec(&self) -> DivisorSpec {
        match (self.fibers, &self.ruled) {
            (Some(count), _) => DivisorSpec::Fibers { count },
            (_, Some(ab)) => DivisorSpec::Ruled { a: ab[0], b: ab[1] },
            _ => DivisorSpec::Point,
        }
    }
}

impl Command {
    fn scenario(&self) -> Scenario {
        match self {
            Command::Plane { degree, colinear_sweep } => {
                Scenario::PlaneCurve { d: *degree, colinear_sweep: colinear_sweep.clone() }
            }
            Command::Hirzebruch { e, k, m, mode } => Scenario::Hirzebruch {
                e: *e,
                k: *k,
                m: *m,
                mode: match mode {
                    Mode::Gonality => HirzebruchMode::Gonality,
                    Mode::Canonical => HirzebruchMode::Canonical,
                },
            },
            Command::QuadricNodal { k, m, gamma } => Scenario::QuadricNodal { k: *k, m: *m, gamma: *gamma },
            Command::Project { degree, polarization, strand, samples, points } => Scenario::ProjectionStudy {
                d: *degree,
                polarization: *polarization,
                strand: *strand,
                samples: *samples,
                points: *points,
            },
            Command::AddDivisor { e, k, m, divisor } => {
                Scenario::AddDivisor { e: *e, k: *k, m: *m, divisor: divisor.spec() }
            }
        }
    }
}

/// Builds the config from a file or a subcommand, with flags overriding file values.
fn resolve(cli: &Cli) -> Result<ScenarioConfig, Error> {
    let mut cfg = match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => return Err(Error::Config("give either --config or a subcommand, not both".into())),
        (None, None) => return Err(Error::Config("a subcommand or --config is required".into())),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            ScenarioConfig::from_toml(&text)?
        }
        (None, Some(cmd)) => {
            let mut c = ScenarioConfig::new(cmd.scenario(), 0);
            c.seed = None;
            c
        }
    };
    if let Some(p) = &cli.prime {
        cfg.prime = p.parse::<PrimePolicy>()?;
    }
    if let Some(s) = cli.seed {
        cfg.seed = Some(s);
    }
    if let Some(f) = cli.format {
        cfg.format = f.into();
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    cfg.force |= cli.force;
    cfg.timings |= cli.timings;
    if !cli.checks.is_empty() {
        cfg.checks = cli.checks.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_)
            | Error::PrimeBits(_)
            | Error::InvalidPrime(_)
            | Error::PrimeTooSmall { .. }
            | Error::Guardrail { .. }
            | Error::Unsupported(_)
            | Error::Hypothesis(_)
            | Error::Parse(_)
            | Error::Io(_)
    )
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let cfg = resolve(cli)?;
    if cli.print_config {
        print!("{}", cfg.to_toml()?);
        return Ok(true);
    }
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let report = run_scenario(&cfg)?;
    let text = emit_report(&report, cfg.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_config_error(&e) { EXIT_CONFIG } else { EXIT_CHECK_FAILED })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_errors_are_classified() {
        assert!(is_config_error(&Error::Config("x".into())));
        assert!(is_config_error(&Error::Guardrail { nnz: 2, limit: 1 }));
        assert!(!is_config_error(&Error::EmptyGenerators));
    }

    #[test]
    fn flags_override_and_validate() {
        let cli = Cli::parse_from(["syzygy", "plane", "-d", "3", "--seed", "5", "--format", "csv"]);
        let cfg = resolve(&cli).unwrap();
        assert_eq!(cfg.seed, Some(5));
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert!(resolve(&Cli::parse_from(["syzygy"])).is_err());
    }
}
