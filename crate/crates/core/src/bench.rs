//! Random graph generation and the k-sweep benchmark harness.
//!
//! A benchmark runs every `(dataset, algorithm, k)` cell, optionally checks
//! each cover with the brute-force oracle, and writes one CSV row per cell.
//! Rows come out in a fixed order no matter how many threads ran the cells,
//! so two runs with the same inputs differ only in `runtime_ms`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{load_edge_list, scc_reduce, DiGraph, HopLimit, OrigId, VertexId};
use crate::oracle::{self, CoverSet};
use crate::report::{Algorithm, RunReport, VertexOrder};
use crate::{run_algorithm, CSV_HEADER};

/// Directed G(n, p): each ordered pair `(u, v)`, `u != v`, is an edge with
/// probability `p`, drawn in lexicographic pair order from a ChaCha8 stream
/// seeded with `seed`.
pub fn generate_gnp(n: usize, p: f64, seed: u64) -> Vec<(VertexId, VertexId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in 0..n as VertexId {
            if u != v && rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// [`generate_gnp`] as a graph on dense ids `0..n`.
pub fn gnp_graph(n: usize, p: f64, seed: u64) -> DiGraph {
    DiGraph::from_edges(n, generate_gnp(n, p, seed))
}

/// Writes a G(n, p) edge list to `out`.
pub fn cmd_gen(n: usize, p: f64, seed: u64, out: &Path) -> Result<()> {
    if n == 0 || !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!(
            "need n >= 1 and 0 <= p <= 1, got n={n} p={p}"
        )));
    }
    let mut w = BufWriter::new(File::create(out)?);
    crate::graph::write_edge_list(
        &mut w,
        generate_gnp(n, p, seed)
            .into_iter()
            .map(|(u, v)| (u as OrigId, v as OrigId)),
    )?;
    w.flush()?;
    Ok(())
}

/// Where a benchmark dataset comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum Dataset {
    File(PathBuf),
    /// Generated with the benchmark seed.
    Gnp {
        n: usize,
        p: f64,
    },
}

impl Dataset {
    pub fn tag(&self, seed: u64) -> String {
        match self {
            Dataset::File(path) => path
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            Dataset::Gnp { n, p } => format!("gnp-n{n}-p{p}-s{seed}"),
        }
    }

    pub fn load(&self, seed: u64) -> Result<DiGraph> {
        match self {
            Dataset::File(path) => load_edge_list(BufReader::new(File::open(path)?)),
            Dataset::Gnp { n, p } => Ok(gnp_graph(*n, *p, seed)),
        }
    }
}

impl std::str::FromStr for Dataset {
    type Err = String;

    /// `gnp:N:P` for a generated graph, anything else is a path.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.strip_prefix("gnp:") {
            Some(spec) => {
                let (n, p) = spec.split_once(':').ok_or("expected gnp:N:P")?;
                let n = n.parse().map_err(|_| format!("bad vertex count {n:?}"))?;
                let p: f64 = p.parse().map_err(|_| format!("bad probability {p:?}"))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(format!("probability {p} outside [0, 1]"));
                }
                Ok(Dataset::Gnp { n, p })
            }
            None => Ok(Dataset::File(PathBuf::from(s))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub inputs: Vec<Dataset>,
    pub k_min: u32,
    pub k_max: u32,
    pub algorithms: Vec<Algorithm>,
    pub order: VertexOrder,
    pub scc_reduce: bool,
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// Validate every cover with the oracle on small enough instances.
    pub oracle_check: bool,
    pub oracle_max_n: usize,
    pub oracle_max_m: usize,
    /// Runs per cell; the reported runtime is the median.
    pub repeat: usize,
    /// Worker threads, 0 for sequential.
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            inputs: Vec::new(),
            k_min: 3,
            k_max: 7,
            algorithms: vec![Algorithm::BurPlus, Algorithm::TdbPlusPlus],
            order: VertexOrder::Id,
            scc_reduce: false,
            seed: 0,
            output: None,
            oracle_check: false,
            oracle_max_n: 14,
            oracle_max_m: 120,
            repeat: 1,
            threads: 0,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_min < 3 || self.k_min > self.k_max {
            return Err(Error::Config(format!(
                "need 3 <= k_min <= k_max, got {}..{}",
                self.k_min, self.k_max
            )));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms given".into()));
        }
        if self.inputs.is_empty() {
            return Err(Error::Config("no datasets given".into()));
        }
        if self.repeat == 0 {
            return Err(Error::Config("repeat must be at least 1".into()));
        }
        Ok(())
    }
}

/// One result line. Numeric fields are `None` when the cell failed; in that
/// case `valid` holds `error` and `error` the message (not written to CSV).
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub k: u32,
    pub cover_size: Option<usize>,
    pub runtime_ms: Option<u128>,
    pub nn_calls: Option<u64>,
    pub edge_visits: Option<u64>,
    pub unblock_visits: Option<u64>,
    pub bfs_prunes: Option<u64>,
    pub valid: Option<String>,
    pub minimal: Option<bool>,
    pub error: Option<String>,
}

impl CsvRow {
    fn record(&self) -> [String; 11] {
        fn opt<T: ToString>(x: &Option<T>) -> String {
            x.as_ref().map(T::to_string).unwrap_or_default()
        }
        [
            self.dataset.clone(),
            self.algorithm.name().to_string(),
            self.k.to_string(),
            opt(&self.cover_size),
            opt(&self.runtime_ms),
            opt(&self.nn_calls),
            opt(&self.edge_visits),
            opt(&self.unblock_visits),
            opt(&self.bfs_prunes),
            opt(&self.valid),
            opt(&self.minimal),
        ]
    }
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

fn run_cell(g: &DiGraph, dataset: &str, algorithm: Algorithm, k: u32, cfg: &BenchConfig) -> CsvRow {
    let limit = HopLimit::Bounded(k);
    let mut row = CsvRow {
        dataset: dataset.to_string(),
        algorithm,
        k,
        cover_size: None,
        runtime_ms: None,
        nn_calls: None,
        edge_visits: None,
        unblock_visits: None,
        bfs_prunes: None,
        valid: None,
        minimal: None,
        error: None,
    };
    let mut times = Vec::with_capacity(cfg.repeat);
    let mut last: Option<RunReport> = None;
    for _ in 0..cfg.repeat {
        match run_algorithm(g, limit, algorithm, cfg.order) {
            Ok(r) => {
                times.push(r.runtime);
                last = Some(r);
            }
            Err(e) => {
                row.valid = Some("error".into());
                row.error = Some(e.to_string());
                return row;
            }
        }
    }
    let report = last.expect("repeat >= 1");
    row.cover_size = Some(report.cover.len());
    row.runtime_ms = Some(median(times).as_millis());
    row.nn_calls = Some(report.nn_calls);
    row.edge_visits = Some(report.edge_visits);
    row.unblock_visits = Some(report.unblock_visits);
    row.bfs_prunes = Some(report.bfs_prunes);
    if cfg.oracle_check && g.n() <= cfg.oracle_max_n && g.m() <= cfg.oracle_max_m {
        match oracle::check_minimal(g, limit, &report.cover) {
            Ok(verdict) => {
                let valid = !matches!(verdict, oracle::Minimality::Invalid(_));
                row.valid = Some(valid.to_string());
                row.minimal = Some(verdict == oracle::Minimality::Minimal);
            }
            Err(e) => {
                row.valid = Some("error".into());
                row.error = Some(e.to_string());
            }
        }
    }
    row
}

/// Runs every cell of the sweep. Rows are ordered by dataset, then algorithm
/// (as listed in the config), then k.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<CsvRow>> {
    cfg.validate()?;
    let mut graphs = Vec::with_capacity(cfg.inputs.len());
    for ds in &cfg.inputs {
        let mut g = ds.load(cfg.seed)?;
        if cfg.scc_reduce {
            g = scc_reduce(&g).0;
        }
        graphs.push((ds.tag(cfg.seed), g));
    }
    let cells: Vec<(usize, usize, u32)> = (0..graphs.len())
        .flat_map(|d| {
            (0..cfg.algorithms.len())
                .flat_map(move |a| (cfg.k_min..=cfg.k_max).map(move |k| (d, a, k)))
        })
        .collect();
    let run = |&(d, a, k): &(usize, usize, u32)| {
        let (tag, g) = &graphs[d];
        run_cell(g, tag, cfg.algorithms[a], k, cfg)
    };
    let rows = if cfg.threads == 0 {
        cells.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        // par_iter().map().collect() keeps input order
        pool.install(|| cells.par_iter().map(run).collect())
    };
    Ok(rows)
}

/// Writes rows with the fixed header.
pub fn write_csv<W: Write>(out: W, rows: &[CsvRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.record()).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Runs the sweep and writes the CSV to `cfg.output` (or stdout).
pub fn cmd_bench(cfg: &BenchConfig) -> Result<Vec<CsvRow>> {
    let rows = run_bench(cfg)?;
    match &cfg.output {
        Some(path) => write_csv(BufWriter::new(File::create(path)?), &rows)?,
        None => write_csv(std::io::stdout().lock(), &rows)?,
    }
    Ok(rows)
}

/// Cover vertices as original ids, ascending, one per line.
pub fn write_cover<W: Write>(mut out: W, g: &DiGraph, cover: &CoverSet) -> std::io::Result<()> {
    let mut ids: Vec<OrigId> = cover.iter().map(|v| g.orig_id(v)).collect();
    ids.sort_unstable();
    for id in ids {
        writeln!(out, "{id}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes() {
        assert!(generate_gnp(5, 0.0, 1).is_empty());
        let all = generate_gnp(3, 1.0, 7);
        assert_eq!(all, vec![(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]);
        assert_eq!(generate_gnp(20, 0.3, 9), generate_gnp(20, 0.3, 9));
        assert_ne!(generate_gnp(20, 0.3, 9), generate_gnp(20, 0.3, 10));
    }

    #[test]
    fn dataset_parsing() {
        assert_eq!(
            "gnp:10:0.5".parse::<Dataset>().unwrap(),
            Dataset::Gnp { n: 10, p: 0.5 }
        );
        assert_eq!(
            "g.txt".parse::<Dataset>().unwrap(),
            Dataset::File("g.txt".into())
        );
        assert!("gnp:10".parse::<Dataset>().is_err());
        assert!("gnp:10:1.5".parse::<Dataset>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = BenchConfig {
            inputs: vec![Dataset::Gnp { n: 5, p: 0.5 }],
            ..BenchConfig::default()
        };
        assert!(cfg.validate().is_ok());
        cfg.k_min = 2;
        assert!(cfg.validate().is_err());
        cfg.k_min = 5;
        cfg.k_max = 4;
        assert!(cfg.validate().is_err());
        cfg.k_max = 5;
        cfg.algorithms.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn four_rows_for_two_algos_two_ks() {
        let cfg = BenchConfig {
            inputs: vec![Dataset::Gnp { n: 8, p: 0.3 }],
            k_min: 3,
            k_max: 4,
            algorithms: vec![Algorithm::Bur, Algorithm::TdbPlus],
            ..BenchConfig::default()
        };
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        let keys: Vec<_> = rows.iter().map(|r| (r.algorithm, r.k)).collect();
        assert_eq!(
            keys,
            vec![
                (Algorithm::Bur, 3),
                (Algorithm::Bur, 4),
                (Algorithm::TdbPlus, 3),
                (Algorithm::TdbPlus, 4)
            ]
        );
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    }

    #[test]
    fn failed_cell_is_recorded_in_row() {
        let cfg = BenchConfig {
            inputs: vec![Dataset::Gnp { n: 13, p: 0.5 }],
            k_min: 3,
            k_max: 3,
            algorithms: vec![Algorithm::Brute, Algorithm::Bur],
            ..BenchConfig::default()
        };
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows[0].valid.as_deref(), Some("error"));
        assert!(rows[0].cover_size.is_none());
        assert!(rows[1].cover_size.is_some());
    }
}
