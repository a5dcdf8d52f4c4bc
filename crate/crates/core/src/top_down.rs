//! Top-down covers: start with every vertex in the cover and release each one
//! whose release closes no constrained cycle among the released vertices.
//!
//! The three variants differ only in how the per-vertex test runs, so for a
//! fixed vertex order they return the same cover.

use std::time::Instant;

use crate::graph::{DiGraph, GraphView, HopLimit, VertexId, VertexState};
use crate::oracle::CoverSet;
use crate::report::{Algorithm, RunReport, VertexOrder};
use crate::search::{FilterVerdict, Searcher};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TopDownVariant {
    /// Plain depth-bounded DFS per vertex.
    Plain,
    /// Block-based existence check.
    Block,
    /// BFS filter first, block-based check only when the filter is inconclusive.
    BlockBfs,
}

impl TopDownVariant {
    pub fn algorithm(self) -> Algorithm {
        match self {
            TopDownVariant::Plain => Algorithm::Tdb,
            TopDownVariant::Block => Algorithm::TdbPlus,
            TopDownVariant::BlockBfs => Algorithm::TdbPlusPlus,
        }
    }
}

/// Runs the top-down cover with vertices visited in `order`.
///
/// The test for vertex `v` looks at the subgraph induced by the vertices
/// already released plus `v`; `v` is released when no constrained cycle
/// through it exists there, and kept in the cover otherwise.
pub fn run_tdb(g: &DiGraph, k: HopLimit, variant: TopDownVariant, order: VertexOrder) -> RunReport {
    run_tdb_observed(g, k, variant, order, |_, _, _| {})
}

/// [`run_tdb`] with a hook called after each decision with the view as it was
/// during the test (the tested vertex Active), the vertex, and whether the BFS
/// filter pruned it.
pub fn run_tdb_observed(
    g: &DiGraph,
    k: HopLimit,
    variant: TopDownVariant,
    order: VertexOrder,
    mut observe: impl FnMut(&GraphView<'_>, VertexId, bool),
) -> RunReport {
    let started = Instant::now();
    let mut view = GraphView::new(g, VertexState::Untested, &[VertexState::Active]);
    let mut searcher = Searcher::new(g.n());
    let mut kept = Vec::new();
    for v in order.sequence(g) {
        view.set_state(v, VertexState::Active);
        let (on_cycle, pruned) = match variant {
            TopDownVariant::Plain => (searcher.find_cycle(&view, k, v).is_some(), false),
            TopDownVariant::Block => (searcher.node_necessary(&view, v, k).is_some(), false),
            TopDownVariant::BlockBfs => match searcher.bfs_filter(&view, v, k) {
                FilterVerdict::Pruned => (false, true),
                FilterVerdict::NeedsVerify => {
                    (searcher.node_necessary(&view, v, k).is_some(), false)
                }
            },
        };
        observe(&view, v, pruned);
        if on_cycle {
            view.set_state(v, VertexState::Covered);
            kept.push(v);
        }
    }
    let mut report = RunReport::new(variant.algorithm(), k);
    report.absorb(searcher.counters());
    report.cover = kept.iter().copied().collect::<CoverSet>();
    report.picked = kept;
    report.runtime = started.elapsed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const VARIANTS: [TopDownVariant; 3] = [
        TopDownVariant::Plain,
        TopDownVariant::Block,
        TopDownVariant::BlockBfs,
    ];

    #[test]
    fn triangle_keeps_last_vertex() {
        let g = DiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        for variant in VARIANTS {
            let r = run_tdb(&g, 3.into(), variant, VertexOrder::Id);
            assert_eq!(r.cover.vertices(), &[2], "{variant:?}");
        }
    }

    #[test]
    fn dag_has_empty_cover() {
        let g = DiGraph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]);
        for variant in VARIANTS {
            for k in [
                HopLimit::Bounded(3),
                HopLimit::Bounded(7),
                HopLimit::Unbounded,
            ] {
                assert!(run_tdb(&g, k, variant, VertexOrder::Id).cover.is_empty());
            }
        }
    }

    #[test]
    fn bfs_prunes_only_in_filter_variant() {
        let g = DiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(
            run_tdb(&g, 3.into(), TopDownVariant::Block, VertexOrder::Id).bfs_prunes,
            0
        );
        let r = run_tdb(&g, 3.into(), TopDownVariant::BlockBfs, VertexOrder::Id);
        assert_eq!(r.bfs_prunes, 4);
        assert_eq!(r.nn_calls, 0);
        assert!(r.cover.is_empty());
    }

    #[test]
    fn degree_order_changes_visit_sequence() {
        // hub 3 sits on both triangles
        let g = DiGraph::from_edges(5, [(0, 1), (1, 3), (3, 0), (2, 4), (4, 3), (3, 2)]);
        let by_id = run_tdb(&g, 3.into(), TopDownVariant::Block, VertexOrder::Id);
        let by_deg = run_tdb(&g, 3.into(), TopDownVariant::Block, VertexOrder::DegreeDesc);
        assert_eq!(by_id.cover.vertices(), &[3]);
        assert_eq!(by_deg.cover.len(), 2);
    }
}
