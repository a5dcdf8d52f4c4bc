use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cyclecover::bench::{self, BenchConfig, Dataset};
use cyclecover::oracle::{self, Minimality};
use cyclecover::{
    load_edge_list, run_algorithm, scc_reduce, Algorithm, CoverSet, DiGraph, Error, GraphView,
    HopLimit, OrigId, VertexId, VertexOrder,
};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_OVERFLOW: u8 = 3;
const EXIT_INVALID: u8 = 4;
const EXIT_NOT_MINIMAL: u8 = 5;

/// Minimal hop-constrained cycle covers of directed graphs.
#[derive(Parser)]
#[command(name = "cyclecover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a cover.
    Cover(CoverArgs),
    /// Check that a cover file is valid (and optionally minimal).
    Verify(VerifyArgs),
    /// Run a k-sweep and write a CSV.
    Bench(BenchArgs),
    /// Write a seeded directed G(n, p) edge list.
    Gen(GenArgs),
    /// List every constrained cycle.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Limit {
    /// Longest cycle length to cover (at least 3).
    #[arg(long)]
    k: Option<u32>,
    /// Cover every simple cycle regardless of length.
    #[arg(long)]
    unbounded: bool,
}

impl Limit {
    fn hop_limit(&self) -> Result<HopLimit, CliError> {
        match (self.k, self.unbounded) {
            (_, true) => Ok(HopLimit::Unbounded),
            (Some(k), false) if k >= 3 => Ok(HopLimit::Bounded(k)),
            (Some(k), false) => Err(CliError::usage(format!(
                "--k {k}: cycles have at least 3 edges, k must be >= 3"
            ))),
            (None, false) => Err(CliError::usage("one of --k or --unbounded is required")),
        }
    }
}

#[derive(Args)]
struct CoverArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    limit: Limit,
    #[arg(long, value_parser = parse_algo)]
    algo: Algorithm,
    #[arg(long, default_value = "id", value_parser = parse_order)]
    order: VertexOrder,
    /// Drop vertices outside non-trivial strongly connected components first.
    #[arg(long)]
    scc_reduce: bool,
    /// Cover file; without it the cover goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    limit: Limit,
    #[arg(long)]
    cover: PathBuf,
    #[arg(long)]
    check_minimal: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Edge-list file, or gnp:N:P for a graph generated from --seed.
    #[arg(long = "input", required = true)]
    inputs: Vec<Dataset>,
    #[arg(long, default_value_t = 3)]
    k_min: u32,
    #[arg(long, default_value_t = 7)]
    k_max: u32,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',', value_parser = parse_algo,
          default_value = "bur,bur-plus,tdb,tdb-plus,tdb-plus-plus,darc-dv")]
    algos: Vec<Algorithm>,
    #[arg(long, default_value = "id", value_parser = parse_order)]
    order: VertexOrder,
    #[arg(long)]
    scc_reduce: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Validate each cover with the brute-force oracle on small instances.
    #[arg(long)]
    oracle_check: bool,
    #[arg(long, default_value_t = 14)]
    oracle_max_n: usize,
    #[arg(long, default_value_t = 120)]
    oracle_max_m: usize,
    /// Runs per cell; runtime_ms is the median.
    #[arg(long, default_value_t = 1)]
    repeat: usize,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    limit: Limit,
    #[arg(long, default_value_t = oracle::DEFAULT_CYCLE_CAP)]
    cap: usize,
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

fn parse_order(s: &str) -> Result<VertexOrder, String> {
    s.parse()
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Overflow { .. } | Error::TooLarge { .. } => EXIT_OVERFLOW,
            Error::Config(_) => EXIT_USAGE,
            _ => EXIT_IO,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Error::from(e).into()
    }
}

fn read_graph(path: &Path) -> Result<DiGraph, CliError> {
    let file = File::open(path).map_err(|e| CliError {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(load_edge_list(BufReader::new(file))?)
}

fn warn_if_k_exceeds_n(k: HopLimit, g: &DiGraph) {
    if let HopLimit::Bounded(k) = k {
        if k as usize > g.n() {
            eprintln!(
                "warning: k = {k} exceeds the vertex count {}; no simple cycle is that long",
                g.n()
            );
        }
    }
}

fn cmd_cover(args: CoverArgs) -> Result<u8, CliError> {
    let k = args.limit.hop_limit()?;
    let mut g = read_graph(&args.input)?;
    let (n, m) = (g.n(), g.m());
    warn_if_k_exceeds_n(k, &g);
    if args.scc_reduce {
        g = scc_reduce(&g).0;
    }
    let report = run_algorithm(&g, k, args.algo, args.order)?;
    let summary = format!(
        "algo={} k={} n={} m={} reduced_n={} cover={} runtime_ms={} nn_calls={} edge_visits={} unblock_visits={} bfs_prunes={}",
        args.algo,
        k,
        n,
        m,
        g.n(),
        report.cover.len(),
        report.runtime.as_millis(),
        report.nn_calls,
        report.edge_visits,
        report.unblock_visits,
        report.bfs_prunes,
    );
    match &args.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            bench::write_cover(&mut w, &g, &report.cover)?;
            w.flush()?;
            println!("{summary}");
        }
        None => {
            bench::write_cover(io::stdout().lock(), &g, &report.cover)?;
            eprintln!("{summary}");
        }
    }
    Ok(0)
}

fn read_cover(path: &Path, g: &DiGraph) -> Result<CoverSet, CliError> {
    let index: HashMap<OrigId, VertexId> = g.dense_index();
    let file = File::open(path).map_err(|e| CliError {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    })?;
    let mut ids = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let orig: OrigId = t.parse().map_err(|_| CliError {
            code: EXIT_IO,
            message: format!("{}:{}: invalid vertex id {t:?}", path.display(), i + 1),
        })?;
        let dense = index.get(&orig).ok_or_else(|| CliError {
            code: EXIT_IO,
            message: format!(
                "{}:{}: vertex {orig} does not occur in the graph",
                path.display(),
                i + 1
            ),
        })?;
        ids.push(*dense);
    }
    Ok(ids.into_iter().collect())
}

fn format_cycle(g: &DiGraph, c: &cyclecover::Cycle) -> String {
    c.to_orig(g)
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, CliError> {
    let k = args.limit.hop_limit()?;
    let g = read_graph(&args.input)?;
    let cover = read_cover(&args.cover, &g)?;
    if !args.check_minimal {
        return Ok(match oracle::uncovered_cycle(&g, k, &cover)? {
            None => {
                println!("valid cover of size {}", cover.len());
                0
            }
            Some(c) => {
                println!("invalid: uncovered cycle {}", format_cycle(&g, &c));
                EXIT_INVALID
            }
        });
    }
    Ok(match oracle::check_minimal(&g, k, &cover)? {
        Minimality::Minimal => {
            println!("valid minimal cover of size {}", cover.len());
            0
        }
        Minimality::Invalid(c) => {
            println!("invalid: uncovered cycle {}", format_cycle(&g, &c));
            EXIT_INVALID
        }
        Minimality::Removable(v) => {
            println!("not minimal: vertex {} can be removed", g.orig_id(v));
            EXIT_NOT_MINIMAL
        }
    })
}

fn cmd_bench(args: BenchArgs) -> Result<u8, CliError> {
    let threads = match std::env::var("CYCLECOVER_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("CYCLECOVER_THREADS={v:?} is not a number")))?,
        Err(_) => 0,
    };
    let cfg = BenchConfig {
        inputs: args.inputs,
        k_min: args.k_min,
        k_max: args.k_max,
        algorithms: args.algos,
        order: args.order,
        scc_reduce: args.scc_reduce,
        seed: args.seed,
        output: args.out,
        oracle_check: args.oracle_check,
        oracle_max_n: args.oracle_max_n,
        oracle_max_m: args.oracle_max_m,
        repeat: args.repeat,
        threads,
    };
    let rows = bench::cmd_bench(&cfg)?;
    for row in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "cell {} {} k={} failed: {}",
            row.dataset,
            row.algorithm,
            row.k,
            row.error.as_deref().unwrap_or_default()
        );
    }
    Ok(0)
}

fn cmd_gen(args: GenArgs) -> Result<u8, CliError> {
    bench::cmd_gen(args.n, args.p, args.seed, &args.out)?;
    Ok(0)
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<u8, CliError> {
    let k = args.limit.hop_limit()?;
    let g = read_graph(&args.input)?;
    let set = oracle::enumerate_with_cap(&GraphView::all_active(&g), k, args.cap)?;
    let mut out = BufWriter::new(io::stdout().lock());
    for c in set.iter() {
        writeln!(out, "{}", format_cycle(&g, c))?;
    }
    out.flush()?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Cover(a) => cmd_cover(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Enumerate(a) => cmd_enumerate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
