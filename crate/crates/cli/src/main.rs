//! Command-line surface for the group-moments library.
//!
//! Exit codes: 0 success, 1 domain or validation error, 2 adaptive
//! truncation failed its stopping rule (the diagnostics are printed so the
//! partial sums are not lost).

mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use group_moments::error::Error;
use group_moments::group_oracle::brute_sur_count;
use group_moments::inversion::{
    invert, invert_fixed_level, invert_multi, moments_from_distribution, Diagnostics,
    Distribution, MomentTable, MultiMomentTable, TruncationPolicy,
};
use group_moments::partitions::{enumerate_conjugate_interlacing, enumerate_up_to, Partition};
use group_moments::scalar::{parse_rat, rat_decimal, rat_string, Rat};
use group_moments::simulator::{closed_loop_report, SimConfig};

#[derive(Parser)]
#[command(
    name = "groupmoments",
    version,
    about = "Exact distributions of random finite abelian p-groups from surjection moments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of surjections from the group of type lambda onto type mu.
    SurCount {
        /// Partition as a JSON array, e.g. [1,1]
        #[arg(long)]
        lambda: String,
        /// Partition as a JSON array, e.g. [1]
        #[arg(long)]
        mu: String,
        /// Residue cardinality (prime, or prime power for DVR modules)
        #[arg(long)]
        p: u64,
        /// Count by brute-force group enumeration instead of the formula
        #[arg(long)]
        brute: bool,
    },
    /// Moment table of a distribution file (JSON schema: {"entries": [...]}).
    Moments {
        /// Path to the distribution JSON
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        p: u64,
        /// JSON list of target partitions, e.g. [[1],[1,1]]; default is the
        /// downward closure of the support (a complete table)
        #[arg(long)]
        mu_list: Option<String>,
        /// Write the table here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover Pr(G = G_nu) from a moment table file.
    Invert(InvertArgs),
    /// Recover Pr(G/p^d G = G_nu) from moments of p^d-torsion targets.
    InvertFixedLevel {
        #[command(flatten)]
        args: InvertArgs,
        /// Torsion level d >= 1
        #[arg(long)]
        d: u32,
    },
    /// Multi-prime inversion from a dense or tensor multi-moment file.
    InvertMulti {
        /// Path to the multi-prime moment JSON
        #[arg(long)]
        moments: PathBuf,
        /// JSON list of partitions, one per prime, e.g. [[1],[1]]
        #[arg(long)]
        nu_tuple: String,
        /// Comma-separated distinct moduli, e.g. 2,3
        #[arg(long)]
        primes: String,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long)]
        cap: Option<u32>,
        /// Decimal preview with this many digits, labeled, exact value first
        #[arg(long)]
        digits: Option<usize>,
    },
    /// Run the identity suites and print pass/fail counts.
    Verify {
        /// all | hl-cancellation | coeff-consistency | sur-formula |
        /// specs-cancel | beta-duality
        #[arg(long, default_value = "all")]
        suite: String,
        /// Size bound on the partitions swept (suite-specific default)
        #[arg(long)]
        max_size: Option<u64>,
        /// Hall-Littlewood parameter t
        #[arg(long, default_value = "1/2")]
        t: String,
        /// Macdonald parameter q for the generic suites
        #[arg(long, default_value = "1/3")]
        q: String,
        /// Telescoping parameter u
        #[arg(long, default_value = "2/7")]
        u: String,
        /// Modulus for the surjection-formula suite
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Sample random-matrix cokernels and close the loop through inversion.
    Simulate {
        /// SimConfig file (JSON or TOML); flags below override fields
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        shards: Option<u32>,
        /// Probe every nu with |nu| <= this depth
        #[arg(long, default_value_t = 3)]
        probe_depth: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition enumeration utilities.
    Partitions {
        #[command(subcommand)]
        command: PartitionsCommand,
    },
}

#[derive(Args)]
struct InvertArgs {
    /// Path to the moment table JSON ({"p": 2, "entries": [...]})
    #[arg(long)]
    moments: PathBuf,
    /// Target partition as a JSON array
    #[arg(long)]
    nu: String,
    /// Modulus; defaults to the table's own
    #[arg(long)]
    p: Option<u64>,
    /// exact | cap | adaptive
    #[arg(long, default_value = "exact")]
    mode: String,
    /// First-column cap (cap mode)
    #[arg(long)]
    cap: Option<u32>,
    /// Block tolerance as a rational, e.g. 1/1000000 (adaptive mode)
    #[arg(long)]
    tolerance: Option<String>,
    /// Consecutive small blocks required to stop (adaptive mode)
    #[arg(long, default_value_t = 3)]
    window: u32,
    /// Hard cap for adaptive mode
    #[arg(long)]
    hard_cap: Option<u32>,
    /// Extend the table with the all-ones provider beyond its entries
    #[arg(long)]
    ones_tail: bool,
    /// Decimal preview with this many digits, labeled, exact value first
    #[arg(long)]
    digits: Option<usize>,
}

#[derive(Subcommand)]
enum PartitionsCommand {
    /// All partitions of size at most max-size, graded then lexicographic
    /// descending within a grade.
    List {
        #[arg(long)]
        max_size: u64,
    },
    /// Conjugate (reflected Ferrers diagram) of a partition.
    Conjugate {
        #[arg(long)]
        lambda: String,
    },
    /// The inversion summation domain: all mu whose conjugate interlaces
    /// above conjugate(nu), first column capped.
    Domain {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        cap: u32,
    },
}

#[derive(Debug)]
enum AppError {
    Lib(Error),
    Message(String),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Lib(e)
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Lib(e) => write!(f, "{e}"),
            AppError::Message(m) => write!(f, "{m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are successes, anything else is a usage error
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Lib(Error::AdaptiveNonConvergence(diag))) => {
            eprintln!("error: adaptive truncation did not converge; partial report follows");
            println!(
                "{}",
                serde_json::to_string_pretty(&*diag).expect("diagnostics serialize")
            );
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::SurCount { lambda, mu, p, brute } => {
            let lambda = parse_partition(&lambda)?;
            let mu = parse_partition(&mu)?;
            let count = if brute {
                brute_sur_count(&lambda, &mu, p)?
            } else {
                group_moments::hall_littlewood::surjection_count(&lambda, &mu, p)?
            };
            println!("{count}");
            Ok(())
        }
        Command::Moments { dist, p, mu_list, out } => {
            let dist: Distribution = read_json(&dist)?;
            let mus = match mu_list {
                Some(list) => parse_partition_list(&list)?,
                None => group_moments::inversion::moment_probe_set(&dist),
            };
            let table = moments_from_distribution(&dist, p, &mus)?;
            write_json(out.as_deref(), &table)
        }
        Command::Invert(args) => {
            let (value, diag) = run_invert(&args, None)?;
            print_value(&value, &diag, args.digits);
            Ok(())
        }
        Command::InvertFixedLevel { args, d } => {
            let (value, diag) = run_invert(&args, Some(d))?;
            print_value(&value, &diag, args.digits);
            Ok(())
        }
        Command::InvertMulti {
            moments,
            nu_tuple,
            primes,
            mode,
            cap,
            digits,
        } => {
            let table: MultiMomentTable = read_json(&moments)?;
            let nu_tuple = parse_partition_list(&nu_tuple)?;
            let primes = parse_primes(&primes)?;
            let policy = match mode.as_str() {
                "exact" => TruncationPolicy::exact(),
                "cap" => TruncationPolicy::cap(cap.ok_or_else(|| {
                    AppError::Message("--cap is required in cap mode".into())
                })?),
                other => {
                    return Err(AppError::Message(format!(
                        "unsupported multi-prime mode {other:?}; use exact or cap"
                    )))
                }
            };
            let (value, diag) = invert_multi(&table, &nu_tuple, &primes, &policy)?;
            print_value(&value, &diag, digits);
            Ok(())
        }
        Command::Verify {
            suite,
            max_size,
            t,
            q,
            u,
            p,
        } => {
            let t = parse_rat(&t)?;
            let q = parse_rat(&q)?;
            let u = parse_rat(&u)?;
            let report = verify::run_suites(&suite, max_size, &t, &q, &u, p)?;
            print!("{report}");
            if report.all_passed() {
                Ok(())
            } else {
                Err(AppError::Message("verification failures above".into()))
            }
        }
        Command::Simulate {
            config,
            p,
            d,
            n,
            samples,
            seed,
            shards,
            probe_depth,
            out,
        } => {
            let mut cfg = match config {
                Some(path) => read_sim_config(&path)?,
                None => SimConfig {
                    p: 2,
                    d: 1,
                    n: 10,
                    sample_count: 10_000,
                    seed: 0,
                    shard_count: 1,
                },
            };
            if let Some(p) = p {
                cfg.p = p;
            }
            if let Some(d) = d {
                cfg.d = d;
            }
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(samples) = samples {
                cfg.sample_count = samples;
            }
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(shards) = shards {
                cfg.shard_count = shards;
            }
            let report = closed_loop_report(&cfg, probe_depth)?;
            write_json(out.as_deref(), &report)
        }
        Command::Partitions { command } => match command {
            PartitionsCommand::List { max_size } => {
                let all = enumerate_up_to(max_size);
                println!("{}", serde_json::to_string(&all).expect("serialize"));
                Ok(())
            }
            PartitionsCommand::Conjugate { lambda } => {
                let lambda = parse_partition(&lambda)?;
                println!(
                    "{}",
                    serde_json::to_string(&lambda.conjugate()).expect("serialize")
                );
                Ok(())
            }
            PartitionsCommand::Domain { nu, cap } => {
                let nu = parse_partition(&nu)?;
                let domain = enumerate_conjugate_interlacing(&nu, cap)?;
                println!("{}", serde_json::to_string(&domain).expect("serialize"));
                Ok(())
            }
        },
    }
}

fn run_invert(args: &InvertArgs, level: Option<u32>) -> Result<(Rat, Diagnostics), AppError> {
    let mut table: MomentTable = read_json(&args.moments)?;
    if args.ones_tail {
        let entries = table.entries().clone();
        table = MomentTable::with_provider(
            table.p(),
            entries,
            std::sync::Arc::new(|_: &Partition| Rat::new(1.into(), 1.into())),
        )?;
    }
    let nu = parse_partition(&args.nu)?;
    let p = args.p.unwrap_or_else(|| table.p());
    let policy = match args.mode.as_str() {
        "exact" => TruncationPolicy::exact(),
        "cap" => TruncationPolicy::cap(
            args.cap
                .ok_or_else(|| AppError::Message("--cap is required in cap mode".into()))?,
        ),
        "adaptive" => {
            let tolerance = args
                .tolerance
                .as_deref()
                .ok_or_else(|| AppError::Message("--tolerance is required in adaptive mode".into()))?;
            TruncationPolicy::adaptive(
                parse_rat(tolerance)?,
                args.window,
                args.hard_cap.ok_or_else(|| {
                    AppError::Message("--hard-cap is required in adaptive mode".into())
                })?,
            )
        }
        other => {
            return Err(AppError::Message(format!(
                "unknown mode {other:?}; use exact, cap, or adaptive"
            )))
        }
    };
    let result = match level {
        Some(d) => invert_fixed_level(&table, &nu, p, d, &policy)?,
        None => invert(&table, &nu, p, &policy)?,
    };
    Ok(result)
}

fn print_value(value: &Rat, diag: &Diagnostics, digits: Option<usize>) {
    println!("{}", rat_string(value));
    if let Some(digits) = digits {
        println!("~ {} ({digits} digits, display only)", rat_decimal(value, digits));
    }
    println!(
        "diagnostics: {}",
        serde_json::to_string(diag).expect("diagnostics serialize")
    );
}

fn parse_partition(s: &str) -> Result<Partition, AppError> {
    serde_json::from_str(s)
        .map_err(|e| AppError::Message(format!("bad partition {s:?}: {e}")))
}

fn parse_partition_list(s: &str) -> Result<Vec<Partition>, AppError> {
    serde_json::from_str(s)
        .map_err(|e| AppError::Message(format!("bad partition list {s:?}: {e}")))
}

fn parse_primes(s: &str) -> Result<Vec<u64>, AppError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|e| AppError::Message(format!("bad modulus {x:?}: {e}")))
        })
        .collect()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Message(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| AppError::Message(format!("cannot parse {}: {e}", path.display())))
}

fn read_sim_config(path: &Path) -> Result<SimConfig, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Message(format!("cannot read {}: {e}", path.display())))?;
    if path.extension().and_then(|e| e.to_str()) == Some("toml") {
        toml::from_str(&text)
            .map_err(|e| AppError::Message(format!("cannot parse {}: {e}", path.display())))
    } else {
        serde_json::from_str(&text)
            .map_err(|e| AppError::Message(format!("cannot parse {}: {e}", path.display())))
    }
}

fn write_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<(), AppError> {
    let text = serde_json::to_string_pretty(value).expect("serialize");
    match out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| AppError::Message(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_and_prime_parsing() {
        assert_eq!(
            parse_partition("[2,1]").unwrap(),
            group_moments::partitions::ptn(&[2, 1])
        );
        assert!(parse_partition("[1,2]").is_err());
        assert_eq!(parse_primes("2, 3").unwrap(), vec![2, 3]);
        assert!(parse_primes("2,x").is_err());
    }
}
