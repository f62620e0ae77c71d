use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use ehrlimit::algebra::expand_rational_prefix;
use ehrlimit::error::Error;
use ehrlimit::fpp;
use ehrlimit::limits::{self, json_integer, Family, DEFAULT_BUDGET, DEFAULT_WINDOW};
use ehrlimit::oracle;
use ehrlimit::simplex::{self, FamilySpec, LatticeSimplex};
use ehrlimit::verify::{self, Suite, SuiteOptions};

const ORACLE_MAX_DIM: usize = 7;
const ORACLE_MAX_T: u64 = 6;

#[derive(Parser)]
#[command(
    name = "ehrlimit",
    version,
    about = "h*-polynomials of lattice simplices and prefixes of Ehrhart limits"
)]
struct Cli {
    /// Worker threads for parallel enumeration (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the h*-polynomial of a simplex.
    Hstar(HstarArgs),
    /// Compute a prefix of an Ehrhart limit.
    Limit(LimitArgs),
    /// Run a named check suite.
    Verify(VerifyArgs),
    /// Count lattice points in dilates and compare with h*.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    #[value(name = "S")]
    S,
    Delta,
    Qn,
    Bidiagonal,
    Multidiagonal,
    Crosspolytope,
    Freesum,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyName>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    /// Comma-separated band entries.
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<u64>>,
    /// Comma-separated weights.
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<u64>>,
    /// Number of `S_d` summands in the free-sum family.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct SimplexSource {
    #[command(flatten)]
    family: FamilyArgs,
    /// Simplex file: JSON `{"vertices": ...}` or a whitespace matrix with vertices as columns.
    #[arg(long, conflicts_with = "family")]
    matrix: Option<PathBuf>,
    /// Accept matrix files that are not triangular (slower subgroup enumeration).
    #[arg(long, requires = "matrix")]
    general: bool,
}

#[derive(Args)]
struct HstarArgs {
    #[command(flatten)]
    source: SimplexSource,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Certified,
    Empirical,
}

#[derive(Args)]
struct LimitArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Highest coefficient index `r`.
    #[arg(long)]
    degree: usize,
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    /// Last schedule index evaluated in empirical mode.
    #[arg(long, default_value_t = 40)]
    d_max: usize,
    /// Maximum parallelepiped points per enumeration (default 2^22, or EHRLIMIT_BUDGET).
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: eq1-consistency, freesum-product, join-product, pyramid-invariance,
    /// m2-closedform, lemma-powers, fkh-census, jacobsthal, recursion, height-bounds.
    suite: String,
    #[arg(long)]
    max: Option<u32>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    t_max: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    source: SimplexSource,
    #[arg(long)]
    t_max: u64,
    #[arg(long)]
    json: bool,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

type CliResult = Result<u8, Failure>;

fn required<T: Clone>(value: &Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    value
        .clone()
        .ok_or_else(|| Failure::usage(format!("--family {family} needs --{flag}")))
}

impl FamilyArgs {
    fn name(&self) -> Result<FamilyName, Failure> {
        self.family
            .ok_or_else(|| Failure::usage("either --family or --matrix is required"))
    }

    fn simplex_spec(&self) -> Result<FamilySpec, Failure> {
        Ok(match self.name()? {
            FamilyName::S => FamilySpec::StandardReflexive {
                d: required(&self.d, "d", "S")?,
            },
            FamilyName::Delta => FamilySpec::Weighted {
                q: required(&self.q, "q", "delta")?,
            },
            FamilyName::Qn => FamilySpec::QOfN {
                n: required(&self.n, "n", "qn")?,
            },
            FamilyName::Bidiagonal => FamilySpec::Bidiagonal {
                m: required(&self.m, "m", "bidiagonal")?,
                d: required(&self.d, "d", "bidiagonal")?,
            },
            FamilyName::Multidiagonal => FamilySpec::Multidiagonal {
                a: required(&self.a, "a", "multidiagonal")?,
                d: required(&self.d, "d", "multidiagonal")?,
            },
            FamilyName::Crosspolytope | FamilyName::Freesum => {
                return Err(Failure::usage(
                    "this family is not a single simplex; use `limit`",
                ))
            }
        })
    }

    fn limit_family(&self) -> Result<Family, Failure> {
        Ok(match self.name()? {
            FamilyName::S => Family::StandardReflexive,
            FamilyName::Qn => Family::QOfN,
            FamilyName::Bidiagonal => Family::Bidiagonal {
                m: required(&self.m, "m", "bidiagonal")?,
            },
            FamilyName::Multidiagonal => Family::Multidiagonal {
                a: required(&self.a, "a", "multidiagonal")?,
            },
            FamilyName::Crosspolytope => Family::Crosspolytope,
            FamilyName::Freesum => Family::FreeSum {
                base: FamilySpec::Weighted {
                    q: self.q.clone().unwrap_or_else(|| vec![1]),
                },
                k: self.k.unwrap_or(1),
            },
            FamilyName::Delta => {
                return Err(Failure::usage("delta has no dimension schedule; use qn"))
            }
        })
    }
}

impl SimplexSource {
    fn load(&self) -> Result<LatticeSimplex, Failure> {
        let Some(path) = &self.matrix else {
            return Ok(self.family.simplex_spec()?.build()?);
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let p = simplex::parse_simplex(&text)?;
        if !self.general && !p.is_triangular() {
            return Err(Failure {
                code: 3,
                message:
                    "matrix is not in triangular normal form (pass --general to enumerate anyway)"
                        .into(),
            });
        }
        Ok(p)
    }
}

fn join_spaced(values: &[BigInt]) -> String {
    values
        .iter()
        .map(BigInt::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn numbers(values: &[BigInt]) -> Vec<serde_json::Number> {
    values.iter().map(json_integer).collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serializes")
}

fn cmd_hstar(args: &HstarArgs) -> CliResult {
    let p = args.source.load()?;
    let h = fpp::hstar(&p)?;
    if args.json {
        #[derive(Serialize)]
        struct Out {
            hstar: Vec<serde_json::Number>,
            dim: usize,
            volume: serde_json::Number,
        }
        println!(
            "{}",
            to_json(&Out {
                hstar: numbers(h.coeffs()),
                dim: p.dim(),
                volume: json_integer(&p.normalized_volume()),
            })
        );
    } else {
        println!("{h}");
    }
    Ok(0)
}

fn budget(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("EHRLIMIT_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::usage(format!("EHRLIMIT_BUDGET is not a nonnegative integer: {v}"))
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn cmd_limit(args: &LimitArgs) -> CliResult {
    let family = args.family.limit_family()?;
    let budget = budget(args.budget)?;
    let report = match args.mode {
        Mode::Certified => limits::limit_prefix_certified(&family, args.degree, budget)?,
        Mode::Empirical => {
            limits::stabilize_empirical(&family, args.degree, args.window, args.d_max, budget)?
        }
    };
    println!("{}", report.to_json());
    if report.is_stable() {
        Ok(0)
    } else {
        eprintln!(
            "no stabilization by index {}: unstable coefficients {:?}",
            args.d_max,
            report.unstable()
        );
        Ok(4)
    }
}

fn cmd_verify(args: &VerifyArgs) -> CliResult {
    let suite: Suite = args.suite.parse()?;
    let opts = SuiteOptions {
        max: args.max,
        d: args.d,
        t_max: args.t_max,
    };
    let checks = verify::run_suite(suite, opts)?;
    for check in &checks {
        println!("{check}");
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    println!("{suite}: {passed}/{} passed", checks.len());
    Ok(if passed == checks.len() { 0 } else { 1 })
}

fn cmd_oracle(args: &OracleArgs) -> CliResult {
    let p = args.source.load()?;
    if p.dim() > ORACLE_MAX_DIM || args.t_max > ORACLE_MAX_T {
        return Err(Failure {
            code: 6,
            message: format!(
                "oracle limited to dimension <= {ORACLE_MAX_DIM} and t-max <= {ORACLE_MAX_T} (got {} and {})",
                p.dim(),
                args.t_max
            ),
        });
    }
    let counted = oracle::ehrhart_prefix_by_counting(&p, args.t_max)?;
    let expected = expand_rational_prefix(&fpp::hstar(&p)?, p.dim() + 1, args.t_max as usize);
    let consistent = counted.coeffs() == expected.coeffs();
    if args.json {
        #[derive(Serialize)]
        struct Out {
            counts: Vec<serde_json::Number>,
            expected: Vec<serde_json::Number>,
            consistent: bool,
        }
        println!(
            "{}",
            to_json(&Out {
                counts: numbers(counted.coeffs()),
                expected: numbers(expected.coeffs()),
                consistent,
            })
        );
    } else {
        let verdict = if consistent {
            "consistent"
        } else {
            "inconsistent"
        };
        println!("{} {verdict}", join_spaced(counted.coeffs()));
    }
    Ok(if consistent { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match &cli.command {
        Command::Hstar(args) => cmd_hstar(args),
        Command::Limit(args) => cmd_limit(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
