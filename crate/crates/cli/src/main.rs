//! Command-line surface for the interpoint library.
//!
//! Every value-producing subcommand prints a single JSON document:
//! `{"value": sqrt, "value_sq": raw}` plus, under `--json-stats`, a
//! `"stats"` object; `--no-timing` nulls the timing field so output is
//! byte-identical across runs with the same seed. Exit code 1 flags
//! input or contract errors, 2 an internal construction failure.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::Serialize;

use interpoint::config::CountStrategy;
use interpoint::oracle;
use interpoint::udg::RspInstance;
use interpoint::{Config, Error, Rng, SqInterval};

#[derive(Parser)]
#[command(
    name = "interpoint",
    about = "Interpoint-distance selection and optimization for planar point sets",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// RNG seed; identical seeds give byte-identical output.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include the stats object in the JSON document.
    #[arg(long)]
    json_stats: bool,
    /// Report null timing so output is reproducible byte-for-byte.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// k-th smallest pairwise distance of one point set.
    Select {
        /// Point file, one `x y` per line.
        #[arg(long)]
        points: PathBuf,
        /// Rank, 1-based over unordered pairs.
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        common: Common,
    },
    /// k-th smallest cross distance between two point sets.
    SelectBipartite {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Rank, 1-based over ordered cross pairs.
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Number of unordered pairs with squared distance at most a bound.
    Count {
        #[arg(long)]
        points: PathBuf,
        /// Squared distance bound (inclusive).
        #[arg(long)]
        delta_sq: f64,
        /// Counting strategy.
        #[arg(long, value_enum, default_value_t = StrategyArg::Grid)]
        strategy: StrategyArg,
        #[command(flatten)]
        common: Common,
    },
    /// Batched range search over an interval of squared distances.
    Brs {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Interval low end (squared, exclusive).
        #[arg(long)]
        lo: f64,
        /// Interval high end (squared, inclusive; "inf" accepted).
        #[arg(long)]
        hi: f64,
        /// Resolve every pair (no uncertain residue).
        #[arg(long)]
        complete: bool,
        /// Target uncertain-pair budget; picks the cutting parameter.
        #[arg(long, value_name = "L")]
        l: Option<f64>,
        /// Cutting parameter for a single partial round.
        #[arg(long)]
        r: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Both-walkers-jump traversal distance of two sequences.
    Dfd2 {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// One-walker-jumps traversal distance of two sequences.
    Dfd1 {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Least disk radius connecting two points within a path budget.
    Rsp {
        #[arg(long)]
        points: PathBuf,
        /// Source point index.
        #[arg(long)]
        s: u32,
        /// Target point index.
        #[arg(long)]
        t: u32,
        /// Path budget: hop count (unweighted) or length (weighted).
        #[arg(long)]
        lambda: f64,
        /// Sum edge lengths instead of counting hops.
        #[arg(long)]
        weighted: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Scaling measurements, CSV on stdout.
    Bench {
        #[command(subcommand)]
        what: BenchCmd,
    },
    /// Brute-force reference answers for spot checks.
    Oracle {
        #[command(subcommand)]
        what: OracleCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Brute,
    Grid,
    Brs,
}

impl From<StrategyArg> for CountStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Brute => CountStrategy::Brute,
            StrategyArg::Grid => CountStrategy::Grid,
            StrategyArg::Brs => CountStrategy::Brs,
        }
    }
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Complete range search over uniform instances of growing size.
    Brs {
        /// Instance sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        /// Seeds per size.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// k-th smallest pairwise distance by full enumeration.
    Kth {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        k: u64,
    },
    /// Both-jump traversal distance by explicit-graph sweep.
    Dfd2 {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// One-jump traversal distance by explicit-graph sweep.
    Dfd1 {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Reverse shortest path by sorted-distance sweep.
    Rsp {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        weighted: bool,
    },
    /// Pair count at a squared bound by full scan.
    Count {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        delta_sq: f64,
    },
}

#[derive(Serialize)]
struct Stats {
    stages: u64,
    decision_calls: u64,
    gamma_edges: u64,
    pi_pairs: u64,
    shrink_rounds: Option<u64>,
    time_ms: Option<f64>,
}

#[derive(Serialize)]
struct ValueDoc {
    value: f64,
    value_sq: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<Stats>,
}

#[derive(Serialize)]
struct CountDoc {
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<Stats>,
}

#[derive(Serialize)]
struct BrsDoc {
    gamma_bicliques: u64,
    gamma_edges: u64,
    sum_gamma_a_sides: u64,
    pi_bicliques: u64,
    pi_pairs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<Stats>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not failures; everything else is a
            // usage error and exits 1.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Construction(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

enum CliError {
    Usage(String),
    Construction(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ConstructionFailure(_) => CliError::Construction(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<String> for CliError {
    fn from(msg: String) -> Self {
        CliError::Usage(msg)
    }
}

fn stats_doc(
    common: &Common,
    stages: u64,
    decision_calls: u64,
    gamma_edges: u64,
    pi_pairs: u64,
    shrink_rounds: Option<u64>,
    started: Instant,
) -> Option<Stats> {
    if !common.json_stats {
        return None;
    }
    Some(Stats {
        stages,
        decision_calls,
        gamma_edges,
        pi_pairs,
        shrink_rounds,
        time_ms: if common.no_timing {
            None
        } else {
            Some(started.elapsed().as_secs_f64() * 1e3)
        },
    })
}

fn print_json<T: Serialize>(doc: &T) {
    println!("{}", serde_json::to_string(doc).expect("serialize"));
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    let cfg = Config::default();
    match cmd {
        Cmd::Select { points, k, common } => {
            let p = io::read_point_set(&points)?;
            let mut rng = Rng::seed_from_u64(common.seed);
            let started = Instant::now();
            let rep = interpoint::selection::select_distance_report(&p, k, &cfg, &mut rng)?;
            print_json(&ValueDoc {
                value: rep.value.sqrt(),
                value_sq: rep.value,
                stats: stats_doc(
                    &common,
                    rep.stages as u64,
                    rep.decision_calls,
                    rep.gamma_edges,
                    rep.pi_pairs,
                    None,
                    started,
                ),
            });
        }
        Cmd::SelectBipartite { a, b, k, common } => {
            let a = io::read_point_set(&a)?;
            let b = io::read_point_set(&b)?;
            let mut rng = Rng::seed_from_u64(common.seed);
            let started = Instant::now();
            let rep = interpoint::selection::select_distance_bipartite_report(
                &a, &b, k, &cfg, &mut rng,
            )?;
            print_json(&ValueDoc {
                value: rep.value.sqrt(),
                value_sq: rep.value,
                stats: stats_doc(
                    &common,
                    rep.stages as u64,
                    rep.decision_calls,
                    rep.gamma_edges,
                    rep.pi_pairs,
                    None,
                    started,
                ),
            });
        }
        Cmd::Count {
            points,
            delta_sq,
            strategy,
            common,
        } => {
            let p = io::read_point_set(&points)?;
            let mut rng = Rng::seed_from_u64(common.seed);
            let started = Instant::now();
            let count = interpoint::selection::count_pairs_at_most(
                &p,
                delta_sq,
                strategy.into(),
                &cfg,
                &mut rng,
            )?;
            print_json(&CountDoc {
                count,
                stats: stats_doc(&common, 0, 1, 0, 0, None, started),
            });
        }
        Cmd::Brs {
            a,
            b,
            lo,
            hi,
            complete,
            l,
            r,
            common,
        } => {
            let a = io::read_point_set(&a)?;
            let b = io::read_point_set(&b)?;
            let interval = SqInterval::new(lo, hi)?;
            let mut rng = Rng::seed_from_u64(common.seed);
            let started = Instant::now();
            let out = if complete {
                if l.is_some() || r.is_some() {
                    return Err(CliError::Usage(
                        "--complete excludes --l and --r".into(),
                    ));
                }
                interpoint::brs::complete_brs(&a, &b, interval, &cfg, &mut rng, false)?
            } else if let Some(l) = l {
                if r.is_some() {
                    return Err(CliError::Usage("--l excludes --r".into()));
                }
                interpoint::brs::brs_for_L(&a, &b, interval, l, &cfg, &mut rng)?
            } else {
                let total = (a.len() + b.len()) as f64;
                let r = r.unwrap_or_else(|| (total.cbrt() / total.max(2.0).log2()).max(8.0));
                interpoint::brs::partial_brs(&a, &b, interval, r, &cfg, &mut rng)?
            };
            print_json(&BrsDoc {
                gamma_bicliques: out.gamma.len() as u64,
                gamma_edges: out.gamma_edges(),
                sum_gamma_a_sides: out.sum_gamma_a_sides(),
                pi_bicliques: out.pi.len() as u64,
                pi_pairs: out.pi_pairs(),
                stats: stats_doc(
                    &common,
                    1,
                    0,
                    out.gamma_edges(),
                    out.pi_pairs(),
                    None,
                    started,
                ),
            });
        }
        Cmd::Dfd2 { a, b, common } => {
            let inst = interpoint::dfd::DfdInstance::new(
                io::read_point_sequence(&a)?,
                io::read_point_sequence(&b)?,
            )?;
            let mut rng = Rng::seed_from_u64(common.seed);
            let started = Instant::now();
            let rep = interpoint::dfd::dfd2_report(&inst, &cfg, &mut rng)?;
            print_opt_report(&common, &rep, started);
        }
        Cmd::Dfd1 { a, b, common } => {
            let inst = interpoint::dfd::DfdInstance::new(
                io::read_point_sequence(&a)?,
                io::read_point_sequence(&b)?,
            )?;
            let mut rng = Rng::seed_from_u64(common.seed);
            let started = Instant::now();
            let rep = interpoint::dfd::dfd1_report(&inst, &cfg, &mut rng)?;
            print_opt_report(&common, &rep, started);
        }
        Cmd::Rsp {
            points,
            s,
            t,
            lambda,
            weighted,
            common,
        } => {
            let inst = RspInstance::new(io::read_point_set(&points)?, s, t, lambda, weighted)?;
            let mut rng = Rng::seed_from_u64(common.seed);
            let started = Instant::now();
            let rep = interpoint::udg::rsp_report(&inst, &cfg, &mut rng)?;
            print_opt_report(&common, &rep, started);
        }
        Cmd::Bench { what } => match what {
            BenchCmd::Brs { n, seeds, common } => bench_brs(&n, seeds, &common, &cfg)?,
        },
        Cmd::Oracle { what } => run_oracle(what)?,
    }
    Ok(())
}

fn print_opt_report(common: &Common, rep: &interpoint::framework::OptReport, started: Instant) {
    print_json(&ValueDoc {
        value: rep.value.sqrt(),
        value_sq: rep.value,
        stats: stats_doc(
            common,
            rep.stages as u64,
            rep.decision_calls,
            rep.gamma_edges,
            rep.pi_pairs,
            rep.shrink_rounds.map(|r| r as u64),
            started,
        ),
    });
}

/// Uniform points in a fixed square with the interval scaled so the
/// expected number of in-range pairs grows linearly with n.
fn bench_brs(sizes: &[u64], seeds: u64, common: &Common, cfg: &Config) -> Result<(), CliError> {
    use rand::Rng as _;
    const SPAN: f64 = 1000.0;
    println!("n,gamma_edges,sum_sides,pi_pairs,millis");
    for &n in sizes {
        if n < 2 {
            return Err(CliError::Usage("bench sizes must be at least 2".into()));
        }
        for s in 0..seeds {
            let mut rng = Rng::seed_from_u64(common.seed ^ (n << 20) ^ s);
            let pts: Vec<interpoint::Point> = (0..n)
                .map(|_| {
                    interpoint::Point::new(
                        rng.gen_range(0.0..SPAN),
                        rng.gen_range(0.0..SPAN),
                    )
                })
                .collect();
            let p = interpoint::PointSet::new(pts)?;
            let interval = SqInterval::new(0.0, 4.0 * SPAN * SPAN / n as f64)?;
            let started = Instant::now();
            let out = interpoint::brs::complete_brs(&p, &p, interval, cfg, &mut rng, false)?;
            let millis = if common.no_timing {
                0.0
            } else {
                started.elapsed().as_secs_f64() * 1e3
            };
            println!(
                "{},{},{},{},{millis}",
                n,
                out.gamma_edges(),
                out.sum_gamma_a_sides(),
                out.pi_pairs()
            );
        }
    }
    Ok(())
}

fn run_oracle(what: OracleCmd) -> Result<(), CliError> {
    match what {
        OracleCmd::Kth { points, k } => {
            let p = io::read_point_set(&points)?;
            let v = oracle::brute_kth(&p, k)?;
            print_json(&ValueDoc {
                value: v.sqrt(),
                value_sq: v,
                stats: None,
            });
        }
        OracleCmd::Dfd2 { a, b } => {
            let a = io::read_point_sequence(&a)?;
            let b = io::read_point_sequence(&b)?;
            let v = oracle::brute_dfd2(&a, &b)?;
            print_json(&ValueDoc {
                value: v.sqrt(),
                value_sq: v,
                stats: None,
            });
        }
        OracleCmd::Dfd1 { a, b } => {
            let a = io::read_point_sequence(&a)?;
            let b = io::read_point_sequence(&b)?;
            let v = oracle::brute_dfd1(&a, &b)?;
            print_json(&ValueDoc {
                value: v.sqrt(),
                value_sq: v,
                stats: None,
            });
        }
        OracleCmd::Rsp {
            points,
            s,
            t,
            lambda,
            weighted,
        } => {
            let inst = RspInstance::new(io::read_point_set(&points)?, s, t, lambda, weighted)?;
            let v = oracle::brute_rsp(&inst)?;
            print_json(&ValueDoc {
                value: v.sqrt(),
                value_sq: v,
                stats: None,
            });
        }
        OracleCmd::Count { points, delta_sq } => {
            let p = io::read_point_set(&points)?;
            let mut count = 0u64;
            for i in 0..p.len() as u32 {
                for j in (i + 1)..p.len() as u32 {
                    if interpoint::sq_dist(p.get(i), p.get(j)) <= delta_sq {
                        count += 1;
                    }
                }
            }
            print_json(&CountDoc { count, stats: None });
        }
    }
    Ok(())
}
