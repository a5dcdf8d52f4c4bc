//! Bottom-up greedy cover driven by hit-times, and the minimal-pruning pass.
//!
//! For each vertex in turn, the greedy repeatedly finds a constrained cycle
//! through it, bumps the hit-time of every vertex on that cycle, and covers
//! the cycle vertex with the highest hit-time. Vertices that showed up on many
//! earlier cycles are likely to sit on many of the remaining ones.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{Cycle, DiGraph, GraphView, HopLimit, VertexId, VertexState};
use crate::oracle::CoverSet;
use crate::report::{Algorithm, RunReport, VertexOrder};
use crate::search::Searcher;

/// Number of discovered cycles each vertex has appeared on during a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitTimes(Vec<u64>);

impl HitTimes {
    pub fn new(n: usize) -> Self {
        HitTimes(vec![0; n])
    }

    pub fn get(&self, v: VertexId) -> u64 {
        self.0[v as usize]
    }

    pub fn record(&mut self, cycle: &Cycle) {
        for &v in cycle.vertices() {
            self.0[v as usize] += 1;
        }
    }
}

impl From<Vec<u64>> for HitTimes {
    fn from(h: Vec<u64>) -> Self {
        HitTimes(h)
    }
}

/// The cycle vertex with the largest hit-time; ties go to the earliest vertex
/// in the cycle's stored order.
pub fn find_cover_node(cycle: &Cycle, hits: &HitTimes) -> VertexId {
    let mut best = cycle.vertices()[0];
    for &v in &cycle.vertices()[1..] {
        if hits.get(v) > hits.get(best) {
            best = v;
        }
    }
    best
}

/// Greedy bottom-up cover. The report's `picked` holds the cover in the order
/// vertices were selected, which is the order [`minimal_prune`] expects.
pub fn run_bur(g: &DiGraph, k: HopLimit, order: VertexOrder) -> RunReport {
    let started = Instant::now();
    let mut view = GraphView::all_active(g);
    let mut searcher = Searcher::new(g.n());
    let mut hits = HitTimes::new(g.n());
    let mut picked = Vec::new();
    for v in order.sequence(g) {
        if view.state(v) == VertexState::Covered {
            continue;
        }
        while let Some(cycle) = searcher.find_cycle(&view, k, v) {
            hits.record(&cycle);
            let u = find_cover_node(&cycle, &hits);
            view.set_state(u, VertexState::Covered);
            picked.push(u);
            if u == v {
                break;
            }
        }
    }
    let mut report = RunReport::new(Algorithm::Bur, k);
    report.absorb(searcher.counters());
    report.cover = picked.iter().copied().collect();
    report.picked = picked;
    report.runtime = started.elapsed();
    report
}

/// Drops redundant vertices from a valid cover, visiting them in `order`.
///
/// A vertex is dropped when no constrained cycle passes through it once every
/// other vertex still in the cover is excluded. The check always uses the
/// current, shrinking cover. Fails with [`Error::InvalidCover`] if `order` is
/// not a cover to begin with.
pub fn minimal_prune(g: &DiGraph, k: HopLimit, order: &[VertexId]) -> Result<CoverSet> {
    minimal_prune_counted(g, k, order, &mut Searcher::new(g.n()))
}

fn minimal_prune_counted(
    g: &DiGraph,
    k: HopLimit,
    order: &[VertexId],
    searcher: &mut Searcher,
) -> Result<CoverSet> {
    for &v in order {
        if v as usize >= g.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: g.n(),
            });
        }
    }
    let mut view = GraphView::with_covered(g, order.iter().copied());
    if let Some(cycle) = find_uncovered(&view, k, searcher) {
        return Err(Error::InvalidCover {
            cycle: cycle.vertices().to_vec(),
        });
    }
    for &v in order {
        if view.state(v) != VertexState::Covered {
            continue;
        }
        view.set_state(v, VertexState::Active);
        if searcher.node_necessary(&view, v, k).is_some() {
            view.set_state(v, VertexState::Covered);
        }
    }
    Ok(view.vertices_in(VertexState::Covered).collect())
}

/// Some constrained cycle among the traversable vertices, if any. Each vertex
/// found cycle-free is hidden before the next check, since no remaining cycle
/// can use it.
fn find_uncovered(view: &GraphView<'_>, k: HopLimit, searcher: &mut Searcher) -> Option<Cycle> {
    let mut scratch = view.clone();
    for v in view.base().vertices() {
        if !scratch.is_traversable(v) {
            continue;
        }
        if let Some(c) = searcher.node_necessary(&scratch, v, k) {
            return Some(c);
        }
        scratch.set_state(v, VertexState::Untested);
    }
    None
}

/// Greedy cover followed by [`minimal_prune`].
pub fn run_bur_plus(g: &DiGraph, k: HopLimit, order: VertexOrder) -> RunReport {
    let started = Instant::now();
    let mut report = run_bur(g, k, order);
    let mut searcher = Searcher::new(g.n());
    let cover = minimal_prune_counted(g, k, &report.picked, &mut searcher)
        .expect("greedy output is always a valid cover");
    report.absorb(searcher.counters());
    report.algorithm = Algorithm::BurPlus;
    report.picked.retain(|&v| cover.contains(v));
    report.cover = cover;
    report.runtime = started.elapsed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_node_selection() {
        let c = Cycle::from_path(vec![0, 1, 2]);
        assert_eq!(find_cover_node(&c, &HitTimes::new(3)), 0);
        assert_eq!(find_cover_node(&c, &vec![1, 5, 3].into()), 1);
        assert_eq!(find_cover_node(&c, &vec![2, 2, 2].into()), 0);
    }

    #[test]
    fn triangle_and_disjoint_triangles() {
        let g = DiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        assert_eq!(run_bur(&g, 3.into(), VertexOrder::Id).cover.len(), 1);
        let g = DiGraph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!(run_bur(&g, 3.into(), VertexOrder::Id).cover.len(), 2);
    }

    /// Hub 0 sits on triangles (0, a, b) for five pairs, plus one extra
    /// triangle elsewhere. The first cycle through vertex 0 seeds all its
    /// vertices with hit-time 1 and covers 0 itself (first in order), so the
    /// greedy takes the hub immediately.
    #[test]
    fn hub_is_chosen() {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            let (a, b) = (1 + 2 * i, 2 + 2 * i);
            edges.extend([(0, a), (a, b), (b, 0)]);
        }
        let g = DiGraph::from_edges(11, edges);
        let r = run_bur(&g, 3.into(), VertexOrder::Id);
        assert_eq!(r.cover.vertices(), &[0]);
    }

    /// Vertex 0 is not on the hub's triangles; the first cycle found through
    /// the hub C = 1 starts at A = 0 and covers A, but the next cycle through
    /// the hub picks it because its hit-time is now the largest.
    #[test]
    fn hit_times_steer_to_hub() {
        // A=0, C=1, B=2: triangle A->B->C->A; C also on triangles with (3,4),(5,6),(7,8)
        let mut edges = vec![(0, 2), (2, 1), (1, 0)];
        for (a, b) in [(3, 4), (5, 6), (7, 8)] {
            edges.extend([(1, a), (a, b), (b, 1)]);
        }
        let g = DiGraph::from_edges(9, edges);
        let r = run_bur(&g, 3.into(), VertexOrder::Id);
        assert_eq!(r.picked, vec![0, 1]);
        assert!(r.cover.len() < 4);
    }

    #[test]
    fn prune_triangle_and_fixpoint() {
        let g = DiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        assert_eq!(
            minimal_prune(&g, 3.into(), &[0, 1]).unwrap().vertices(),
            &[1]
        );
        assert_eq!(
            minimal_prune(&g, 3.into(), &[1, 0]).unwrap().vertices(),
            &[0]
        );
        assert_eq!(minimal_prune(&g, 3.into(), &[2]).unwrap().vertices(), &[2]);
    }

    #[test]
    fn prune_rejects_non_cover() {
        let g = DiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        assert!(matches!(
            minimal_prune(&g, 3.into(), &[]),
            Err(Error::InvalidCover { .. })
        ));
        assert!(matches!(
            minimal_prune(&g, 3.into(), &[9]),
            Err(Error::VertexOutOfRange { vertex: 9, .. })
        ));
    }
}
