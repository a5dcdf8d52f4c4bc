//! Minimal hop-constrained cycle covers of directed graphs.
//!
//! A *constrained cycle* is a simple directed cycle with between 3 and `k`
//! edges; self-loops and 2-cycles never count. A *cover* is a vertex set that
//! meets every constrained cycle, and it is *minimal* when no single vertex
//! can be dropped from it.
//!
//! The crate provides:
//!
//! * [`bottom_up`]: a greedy that grows a cover one found cycle at a time,
//!   plus a pruning pass that makes any cover minimal;
//! * [`top_down`]: starts from the full vertex set and releases vertices one
//!   by one, with three interchangeable existence tests;
//! * [`darc`]: an edge-cover baseline run on the line graph;
//! * [`oracle`]: brute-force enumeration and cover checks for small graphs;
//! * [`bench`]: random graphs and a CSV benchmark sweep.
//!
//! ```
//! use cyclecover::{parse_edge_list, run_algorithm, Algorithm, HopLimit, VertexOrder};
//!
//! let g = parse_edge_list("0 1\n1 2\n2 0\n2 3\n3 2\n").unwrap();
//! let report = run_algorithm(&g, HopLimit::Bounded(3), Algorithm::TdbPlusPlus, VertexOrder::Id).unwrap();
//! assert_eq!(report.cover.len(), 1);
//! ```

pub mod bench;
pub mod bottom_up;
pub mod darc;
mod error;
pub mod graph;
pub mod oracle;
pub mod report;
pub mod search;
pub mod top_down;

pub use error::{Error, Result};
pub use graph::{
    load_edge_list, parse_edge_list, scc_reduce, view_neighbors, Cycle, DiGraph, Direction,
    GraphView, HopLimit, OrigId, VertexId, VertexState,
};
pub use oracle::{CoverSet, CycleSet};
pub use report::{Algorithm, RunReport, VertexOrder};
pub use top_down::TopDownVariant;

/// Column names of the benchmark CSV, in order.
pub const CSV_HEADER: [&str; 11] = [
    "dataset",
    "algorithm",
    "k",
    "cover_size",
    "runtime_ms",
    "nn_calls",
    "edge_visits",
    "unblock_visits",
    "bfs_prunes",
    "valid",
    "minimal",
];

/// Runs one cover algorithm.
///
/// `Brute` fails with [`Error::TooLarge`] past 12 vertices; `DarcDv` needs a
/// bounded `k` and fails with [`Error::Overflow`] when a cycle listing hits
/// its cap.
pub fn run_algorithm(
    g: &DiGraph,
    k: HopLimit,
    algorithm: Algorithm,
    order: VertexOrder,
) -> Result<RunReport> {
    Ok(match algorithm {
        Algorithm::Brute => {
            let started = std::time::Instant::now();
            let cover = oracle::optimal_cover(g, k)?;
            let mut report = RunReport::new(Algorithm::Brute, k);
            report.picked = cover.vertices().to_vec();
            report.cover = cover;
            report.runtime = started.elapsed();
            report
        }
        Algorithm::Bur => bottom_up::run_bur(g, k, order),
        Algorithm::BurPlus => bottom_up::run_bur_plus(g, k, order),
        Algorithm::Tdb => top_down::run_tdb(g, k, TopDownVariant::Plain, order),
        Algorithm::TdbPlus => top_down::run_tdb(g, k, TopDownVariant::Block, order),
        Algorithm::TdbPlusPlus => top_down::run_tdb(g, k, TopDownVariant::BlockBfs, order),
        Algorithm::DarcDv => {
            if k.is_unbounded() {
                return Err(Error::Config("darc-dv needs a finite k".into()));
            }
            darc::run_darc_dv(g, k)?
        }
    })
}

/// Book chapters and the README, compiled as doc-tests so their snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/block-search.md")]
    mod block_search {}
    #[doc = include_str!("../../../book/src/bottom-up.md")]
    mod bottom_up {}
    #[doc = include_str!("../../../book/src/top-down.md")]
    mod top_down {}
    #[doc = include_str!("../../../book/src/darc.md")]
    mod darc {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
