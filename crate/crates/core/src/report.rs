use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::graph::{DiGraph, HopLimit, VertexId};
use crate::oracle::CoverSet;
use crate::search::SearchCounters;

/// Every cover algorithm the crate exposes, by CLI name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Exhaustive minimum cover, small graphs only.
    Brute,
    Bur,
    BurPlus,
    Tdb,
    TdbPlus,
    TdbPlusPlus,
    DarcDv,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Brute,
        Algorithm::Bur,
        Algorithm::BurPlus,
        Algorithm::Tdb,
        Algorithm::TdbPlus,
        Algorithm::TdbPlusPlus,
        Algorithm::DarcDv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Brute => "brute",
            Algorithm::Bur => "bur",
            Algorithm::BurPlus => "bur-plus",
            Algorithm::Tdb => "tdb",
            Algorithm::TdbPlus => "tdb-plus",
            Algorithm::TdbPlusPlus => "tdb-plus-plus",
            Algorithm::DarcDv => "darc-dv",
        }
    }

    /// Whether the algorithm guarantees a minimal cover.
    pub fn is_minimal(self) -> bool {
        matches!(
            self,
            Algorithm::Brute
                | Algorithm::BurPlus
                | Algorithm::Tdb
                | Algorithm::TdbPlus
                | Algorithm::TdbPlusPlus
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

/// Order in which the outer loops of the cover algorithms visit vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum VertexOrder {
    /// Ascending dense id.
    #[default]
    Id,
    /// Descending total degree, ties by ascending id.
    DegreeDesc,
}

impl VertexOrder {
    pub fn name(self) -> &'static str {
        match self {
            VertexOrder::Id => "id",
            VertexOrder::DegreeDesc => "degree-desc",
        }
    }

    pub fn sequence(self, g: &DiGraph) -> Vec<VertexId> {
        let mut order: Vec<VertexId> = g.vertices().collect();
        if self == VertexOrder::DegreeDesc {
            order.sort_by_key(|&v| (std::cmp::Reverse(g.in_degree(v) + g.out_degree(v)), v));
        }
        order
    }
}

impl FromStr for VertexOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "id" => Ok(VertexOrder::Id),
            "degree-desc" => Ok(VertexOrder::DegreeDesc),
            _ => Err(format!("unknown vertex order {s:?}")),
        }
    }
}

/// A cover plus the work it took to compute it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub dataset: String,
    pub k: HopLimit,
    pub cover: CoverSet,
    /// Cover vertices in the order they were selected, where the algorithm
    /// has such an order.
    pub picked: Vec<VertexId>,
    pub runtime: Duration,
    /// Cycle-search calls (find_cycle, node_necessary or edge searches).
    pub nn_calls: u64,
    pub edge_visits: u64,
    pub unblock_visits: u64,
    pub bfs_prunes: u64,
    pub bfs_edge_visits: u64,
}

impl RunReport {
    pub fn new(algorithm: Algorithm, k: HopLimit) -> Self {
        RunReport {
            algorithm,
            dataset: String::new(),
            k,
            cover: CoverSet::new(),
            picked: Vec::new(),
            runtime: Duration::ZERO,
            nn_calls: 0,
            edge_visits: 0,
            unblock_visits: 0,
            bfs_prunes: 0,
            bfs_edge_visits: 0,
        }
    }

    pub(crate) fn absorb(&mut self, c: &SearchCounters) {
        self.nn_calls += c.calls;
        self.edge_visits += c.edge_visits;
        self.unblock_visits += c.unblock_visits;
        self.bfs_prunes += c.bfs_prunes;
        self.bfs_edge_visits += c.bfs_edge_visits;
    }

    pub fn with_dataset(mut self, dataset: impl Into<String>) -> Self {
        self.dataset = dataset.into();
        self
    }
}
