//! Batch command-line surface: compute indices, color graphs, generate
//! corpora, run the verification sweep and the property suites.
//!
//! Machine output is line-delimited JSON on stdout; human-readable
//! summaries go to stderr. Exit codes are a stable contract:
//! 0 colored/ok, 1 sweep violation, 2 parse error, 3 capacity error,
//! 4 certificate, 5 budget exhausted.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use goldberg_lab::colorer::{self, ColorerOptions, Verdict};
use goldberg_lab::graph::Multigraph;
use goldberg_lab::{coloring, fractional, oracle, props, verify, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

#[derive(Parser)]
#[command(name = "goldberg-lab", about = "multigraph edge-coloring laboratory")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact chromatic index of a graph file.
    ChiPrime {
        file: PathBuf,
        /// Write the witness coloring JSON here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Exact fractional chromatic index with its witness set.
    ChiF { file: PathBuf },
    /// Color a graph with a fixed or automatic number of colors.
    Color {
        file: PathBuf,
        /// Number of colors to use.
        #[arg(long, conflicts_with = "auto")]
        colors: Option<u32>,
        /// Start at max(max_degree + 1, ceil(chi_f)) and ladder up.
        #[arg(long)]
        auto: bool,
        /// Emit growth-step trace events as JSON lines.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the per-edge step budget.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Sweep a corpus and assert the sandwich and Goldberg inequalities.
    Verify(VerifyArgs),
    /// Run a structural property suite over generated k-triples.
    Props {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print a generated instance in edge-list format.
    Generate {
        #[command(subcommand)]
        family: GenerateFamily,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    family: SweepFamily,
    #[arg(long, default_value_t = 4)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    max_mu: usize,
    /// Number of random instances (random family only).
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    edge_prob: f64,
    /// Skip instances repeating a degree-sequence/multiplicity key.
    #[arg(long)]
    dedupe: bool,
    /// Corrupt results on purpose; the sweep must then report
    /// violations. A negative control, not a user feature.
    #[arg(long, value_enum)]
    inject_fault: Option<FaultArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFamily {
    Random,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    ChiPlusOne,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Tashkinov,
    Ett,
}

#[derive(Subcommand)]
enum GenerateFamily {
    Shannon {
        #[arg(long)]
        mu: usize,
    },
    Ring {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mu: usize,
    },
    Petersen,
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mu: usize,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mu_max: usize,
        #[arg(long)]
        edge_prob: f64,
        #[arg(long)]
        seed: u64,
    },
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } => EXIT_PARSE,
        Error::Capacity { .. } => EXIT_CAPACITY,
        _ => EXIT_PARSE,
    }
}

fn load_graph(path: &Path) -> Result<Multigraph, Error> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        Multigraph::from_json(&text)
    } else {
        Multigraph::parse(&text)
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::ChiPrime { file, witness } => cmd_chi_prime(&file, witness.as_deref()),
        Command::ChiF { file } => cmd_chi_f(&file),
        Command::Color {
            file,
            colors,
            auto,
            trace,
            seed,
            budget,
        } => cmd_color(&file, colors, auto, trace, seed, budget),
        Command::Verify(args) => cmd_verify(args),
        Command::Props { suite, count, seed } => cmd_props(suite, count, seed),
        Command::Generate { family } => cmd_generate(family),
    }
}

fn cmd_chi_prime(file: &Path, witness: Option<&Path>) -> Result<i32, Error> {
    let g = load_graph(file)?;
    let chi = oracle::chi_prime_exact(&g)?;
    if let Some(out) = witness {
        let doc = match oracle::is_k_colorable(&g, chi) {
            (true, Some(colors)) => witness_json(chi, &colors),
            _ => serde_json::json!({ "k": chi, "colors": {} }).to_string(),
        };
        std::fs::write(out, doc)?;
    }
    println!("{chi}");
    Ok(EXIT_OK)
}

fn witness_json(k: u32, colors: &[u32]) -> String {
    let map: std::collections::BTreeMap<String, u32> = colors
        .iter()
        .enumerate()
        .map(|(e, &c)| (e.to_string(), c))
        .collect();
    serde_json::json!({ "k": k, "colors": map }).to_string()
}

fn cmd_chi_f(file: &Path) -> Result<i32, Error> {
    let g = load_graph(file)?;
    let r = fractional::chi_f_exact(&g)?;
    let witness = r
        .witness
        .as_ref()
        .map(|w| serde_json::json!(w.vertices))
        .unwrap_or(serde_json::Value::Null);
    println!(
        "{}",
        serde_json::json!({
            "chi_f": format!("{}/{}", r.chi_f.numer(), r.chi_f.denom()),
            "ceil": r.ceil_chi_f,
            "witness": witness,
        })
    );
    Ok(EXIT_OK)
}

fn cmd_color(
    file: &Path,
    colors: Option<u32>,
    auto: bool,
    trace: bool,
    seed: u64,
    budget: Option<u64>,
) -> Result<i32, Error> {
    if colors.is_none() && !auto {
        return Err(Error::Usage("pass --colors K or --auto".into()));
    }
    let g = load_graph(file)?;
    let opts = ColorerOptions {
        budget_per_edge: budget,
        seed,
        record_ett_checks: false,
        trace,
    };
    let (k, outcome) = match colors {
        Some(k) => (k, colorer::color_with_opts(&g, k, &opts)?),
        None => colorer::color_auto_opts(&g, &opts)?,
    };
    for ev in &outcome.trace {
        println!("{}", serde_json::to_string(ev).expect("trace serializes"));
    }
    let stats = &outcome.stats;
    eprintln!(
        "k={k} verdict={:?} steps={} flips={} ett_extensions={}",
        outcome.verdict, stats.steps, stats.flips, stats.ett_extensions
    );
    match outcome.verdict {
        Verdict::Colored => {
            let coloring = outcome.coloring.expect("colored outcome has a coloring");
            debug_assert!(coloring::is_proper_total(&g, k, &coloring));
            let map: std::collections::BTreeMap<String, u32> = coloring
                .iter()
                .enumerate()
                .map(|(e, &c)| (e.to_string(), c))
                .collect();
            println!(
                "{}",
                serde_json::json!({ "verdict": "colored", "k": k, "colors": map })
            );
            Ok(EXIT_OK)
        }
        Verdict::Certificate => {
            let cert = outcome.certificate.expect("certificate outcome has a set");
            println!(
                "{}",
                serde_json::json!({
                    "verdict": "certificate",
                    "k": k,
                    "x": cert.vertices,
                    "density": cert.density,
                })
            );
            Ok(EXIT_CERTIFICATE)
        }
        Verdict::BudgetExhausted => {
            println!(
                "{}",
                serde_json::json!({
                    "verdict": "budget_exhausted",
                    "k": k,
                    "steps": stats.steps,
                })
            );
            Ok(EXIT_BUDGET)
        }
    }
}

fn threads_from_env() -> Option<usize> {
    std::env::var("GOLDBERG_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Error> {
    let family = match args.family {
        SweepFamily::Exhaustive => verify::Family::Exhaustive {
            max_n: args.max_n,
            max_mu: args.max_mu,
        },
        SweepFamily::Random => verify::Family::Random {
            max_n: args.max_n,
            max_mu: args.max_mu,
            count: args.count,
            seed: args.seed,
            edge_prob: args.edge_prob,
        },
    };
    let config = verify::SweepConfig {
        family,
        dedupe: args.dedupe,
        fault: args.inject_fault.map(|FaultArg::ChiPlusOne| verify::Fault::ChiPlusOne),
        threads: threads_from_env(),
    };
    let report = verify::run_sweep(&config)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for rec in &report.records {
        writeln!(out, "{}", serde_json::to_string(rec).expect("record serializes"))?;
    }
    for v in &report.violations {
        writeln!(out, "{}", serde_json::to_string(v).expect("violation serializes"))?;
    }
    eprintln!(
        "instances={} sandwich_failures={} goldberg_failures={} elementary_failures={} violations={}",
        report.instances,
        report.sandwich_failures,
        report.goldberg_failures,
        report.elementary_failures,
        report.violations.len()
    );
    Ok(if report.clean() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn cmd_props(suite: Suite, count: usize, seed: u64) -> Result<i32, Error> {
    match suite {
        Suite::Tashkinov => {
            let report = props::run_tashkinov_suite(count, seed)?;
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            eprintln!(
                "triples={} clean={} elementary={}/{} containment={}/{}",
                report.triples,
                report.clean(),
                report.elementary.pass,
                report.elementary.total(),
                report.chain_containment.pass,
                report.chain_containment.total(),
            );
            Ok(if report.clean() { EXIT_OK } else { EXIT_VIOLATION })
        }
        Suite::Ett => {
            let report = props::run_ett_suite(count, seed)?;
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            eprintln!(
                "triples={} clean={} etts_with_rungs={} elementary_under_hypotheses={}/{}",
                report.triples,
                report.clean(),
                report.etts_with_rungs,
                report.elementary_under_hypotheses.pass,
                report.elementary_under_hypotheses.total(),
            );
            Ok(if report.clean() { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

fn cmd_generate(family: GenerateFamily) -> Result<i32, Error> {
    let g = match family {
        GenerateFamily::Shannon { mu } => Multigraph::shannon(mu)?,
        GenerateFamily::Ring { n, mu } => Multigraph::ring(n, mu)?,
        GenerateFamily::Petersen => Multigraph::petersen(),
        GenerateFamily::Complete { n, mu } => Multigraph::complete(n, mu)?,
        GenerateFamily::Random {
            n,
            mu_max,
            edge_prob,
            seed,
        } => Multigraph::random(n, mu_max, edge_prob, seed)?,
    };
    print!("{}", g.serialize());
    Ok(EXIT_OK)
}
