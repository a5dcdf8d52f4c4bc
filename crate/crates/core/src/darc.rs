//! Baseline: DARC edge cover run on the directed line graph, converted back to
//! a vertex cover (DARC-DV).
//!
//! Each original edge `(u, v)` becomes a line-graph vertex, and each length-2
//! path `u -> v -> w` becomes a line-graph edge whose middle vertex is `v`.
//! A constrained cycle of the original graph maps to a line-graph cycle of
//! the same length, so an edge cover of the line graph maps, via middle
//! vertices, to a vertex cover of the original.
//!
//! The converse does not hold: a closed trail that repeats a vertex (two
//! cycles sharing a vertex, walked one after the other) is a simple cycle in
//! the line graph too. DARC-DV therefore only searches line-graph cycles whose
//! middle vertices are pairwise distinct, which are exactly the images of the
//! original constrained cycles.

use std::collections::{HashMap, VecDeque};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{Cycle, DiGraph, GraphView, HopLimit, VertexId};
use crate::oracle::{CoverSet, DEFAULT_CYCLE_CAP};
use crate::report::{Algorithm, RunReport};

/// Index of an edge in lexicographic `(tail, head)` order.
pub type EdgeId = usize;

/// Directed line graph plus the maps back to the original graph.
#[derive(Clone, Debug)]
pub struct LineGraphMap {
    pub lg: DiGraph,
    /// Original edge represented by each line-graph vertex.
    pub edges: Vec<(VertexId, VertexId)>,
}

impl LineGraphMap {
    /// Line-graph vertex of the original edge `(u, v)`.
    pub fn from_edge(&self, u: VertexId, v: VertexId) -> Option<VertexId> {
        self.edges
            .binary_search(&(u, v))
            .ok()
            .map(|i| i as VertexId)
    }

    /// Original vertex in the middle of the line-graph edge `a -> b`.
    pub fn to_mid(&self, a: VertexId, _b: VertexId) -> VertexId {
        self.edges[a as usize].1
    }
}

/// Builds the directed line graph of `g`. Self-loops are left out: they are
/// never part of a constrained cycle.
pub fn build_line_graph(g: &DiGraph) -> LineGraphMap {
    let edges: Vec<(VertexId, VertexId)> = g.edges().filter(|(u, v)| u != v).collect();
    // edges are sorted, so the first edge leaving each vertex can be found by offset
    let mut first_out = vec![0usize; g.n() + 1];
    for &(u, _) in &edges {
        first_out[u as usize + 1] += 1;
    }
    for i in 0..g.n() {
        first_out[i + 1] += first_out[i];
    }
    let lg_edges = edges.iter().enumerate().flat_map(|(a, &(_, v))| {
        (first_out[v as usize]..first_out[v as usize + 1])
            .map(move |b| (a as VertexId, b as VertexId))
    });
    let lg = DiGraph::from_edges(edges.len(), lg_edges.collect::<Vec<_>>());
    LineGraphMap { lg, edges }
}

/// Dense numbering of a graph's edges in lexicographic order.
#[derive(Clone, Debug)]
struct EdgeIndex {
    offsets: Vec<usize>,
}

impl EdgeIndex {
    fn new(g: &DiGraph) -> Self {
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut acc = 0;
        for v in g.vertices() {
            offsets.push(acc);
            acc += g.out_degree(v);
        }
        offsets.push(acc);
        EdgeIndex { offsets }
    }

    fn id(&self, g: &DiGraph, u: VertexId, v: VertexId) -> EdgeId {
        let pos = g.out_neighbors(u).binary_search(&v).expect("edge present");
        self.offsets[u as usize] + pos
    }
}

/// Every constrained cycle containing the edge `e = (tail, head)`, each once.
///
/// Searches simple paths from `head` back to `tail` of at most `k - 1` edges
/// and at least 2. Fails with [`Error::Overflow`] past `cap` cycles.
pub fn cycles_through_edge(
    view: &GraphView<'_>,
    e: (VertexId, VertexId),
    k: HopLimit,
    cap: usize,
) -> Result<Vec<Cycle>> {
    let mut out = Vec::new();
    let mut visits = 0;
    let ok = walk_cycles_through(view, e, k, &|_, _| true, None, &mut visits, &mut |path| {
        if out.len() >= cap {
            return false;
        }
        out.push(Cycle::from_path(path.to_vec()));
        true
    });
    if ok {
        Ok(out)
    } else {
        Err(Error::Overflow { cap })
    }
}

/// DFS over cycles through `e` using only edges accepted by `allow`.
/// With `key`, cycles that repeat a key value are skipped.
/// `visit` receives each cycle as a path starting at `e`'s tail and returns
/// false to stop; the function returns false iff it was stopped.
fn walk_cycles_through(
    view: &GraphView<'_>,
    (tail, head): (VertexId, VertexId),
    k: HopLimit,
    allow: &dyn Fn(VertexId, VertexId) -> bool,
    key: Option<&[VertexId]>,
    visits: &mut u64,
    visit: &mut dyn FnMut(&[VertexId]) -> bool,
) -> bool {
    let max_len = k.max_len(view.n());
    if max_len < 3
        || tail == head
        || !view.is_traversable(tail)
        || !view.is_traversable(head)
        || !view.base().has_edge(tail, head)
    {
        return true;
    }
    let n = view.n();
    let mut on_path = vec![false; n];
    let mut path = vec![tail, head];
    on_path[tail as usize] = true;
    on_path[head as usize] = true;
    let mut key_used = match key {
        Some(key) => {
            if key[tail as usize] == key[head as usize] {
                return true;
            }
            let mut used = vec![false; key.iter().max().map_or(0, |&x| x as usize + 1)];
            used[key[tail as usize] as usize] = true;
            used[key[head as usize] as usize] = true;
            Some(used)
        }
        None => None,
    };
    let key_free = |used: &Option<Vec<bool>>, w: VertexId| match (key, used) {
        (Some(key), Some(used)) => !used[key[w as usize] as usize],
        _ => true,
    };
    // (vertex, next neighbor index)
    let mut frames: Vec<(VertexId, usize)> = vec![(head, 0)];
    let base = view.base();
    while let Some(&mut (u, ref mut next)) = frames.last_mut() {
        let adj = base.out_neighbors(u);
        let mut descend = None;
        while *next < adj.len() {
            let w = adj[*next];
            *next += 1;
            if w == u || !view.is_traversable(w) || !allow(u, w) {
                continue;
            }
            *visits += 1;
            if w == tail {
                if path.len() >= 3 && !visit(&path) {
                    return false;
                }
            } else if !on_path[w as usize] && path.len() < max_len && key_free(&key_used, w) {
                descend = Some(w);
                break;
            }
        }
        match descend {
            Some(w) => {
                on_path[w as usize] = true;
                if let (Some(key), Some(used)) = (key, key_used.as_mut()) {
                    used[key[w as usize] as usize] = true;
                }
                path.push(w);
                frames.push((w, 0));
            }
            None => {
                frames.pop();
                let v = path.pop().expect("path non-empty");
                on_path[v as usize] = false;
                if let (Some(key), Some(used)) = (key, key_used.as_mut()) {
                    used[key[v as usize] as usize] = false;
                }
            }
        }
    }
    true
}

/// Mutable state of one DARC run over the edges of a graph.
#[derive(Clone, Debug, Default)]
pub struct DarcState {
    /// Selected edges.
    pub selected: Vec<bool>,
    /// Released witness edges.
    pub witness: Vec<bool>,
    /// Prune candidates in insertion order.
    pub candidates: VecDeque<EdgeId>,
    in_candidates: Vec<bool>,
    /// Cycles recorded when all their edges were added at once.
    pub uncovered: Vec<Vec<EdgeId>>,
    /// Edge to the recorded cycle it belongs to (index into `uncovered`).
    pub owner: HashMap<EdgeId, usize>,
    /// Optional per-vertex key; cycles repeating a key are ignored.
    key: Option<Vec<VertexId>>,
    cap: usize,
    searches: u64,
    visits: u64,
}

impl DarcState {
    pub fn new(m: usize) -> Self {
        Self::with_cap(m, DEFAULT_CYCLE_CAP)
    }

    pub fn with_cap(m: usize, cap: usize) -> Self {
        DarcState {
            selected: vec![false; m],
            witness: vec![false; m],
            candidates: VecDeque::new(),
            in_candidates: vec![false; m],
            uncovered: Vec::new(),
            owner: HashMap::new(),
            key: None,
            cap,
            searches: 0,
            visits: 0,
        }
    }

    pub fn selected_count(&self) -> usize {
        self.selected.iter().filter(|&&s| s).count()
    }

    fn add_candidate(&mut self, e: EdgeId) {
        if !self.in_candidates[e] {
            self.in_candidates[e] = true;
            self.candidates.push_back(e);
        }
    }

    fn select(&mut self, e: EdgeId) {
        self.witness[e] = false;
        self.selected[e] = true;
        self.add_candidate(e);
    }
}

/// One AUGMENT step for edge `e` of `view`'s graph.
pub fn darc_augment(
    e: (VertexId, VertexId),
    st: &mut DarcState,
    view: &GraphView<'_>,
    k: HopLimit,
) -> Result<()> {
    let g = view.base();
    let index = EdgeIndex::new(g);
    augment_indexed(e, st, view, k, &index)
}

fn augment_indexed(
    e: (VertexId, VertexId),
    st: &mut DarcState,
    view: &GraphView<'_>,
    k: HopLimit,
    index: &EdgeIndex,
) -> Result<()> {
    let g = view.base();
    let id = index.id(g, e.0, e.1);
    if st.selected[id] {
        return Ok(());
    }
    if st.witness[id] {
        st.select(id);
        return Ok(());
    }
    st.searches += 1;
    let mut cycles = Vec::new();
    let cap = st.cap;
    let ok = walk_cycles_through(
        view,
        e,
        k,
        &|_, _| true,
        st.key.as_deref(),
        &mut st.visits,
        &mut |path| {
            if cycles.len() >= cap {
                return false;
            }
            cycles.push(path.to_vec());
            true
        },
    );
    if !ok {
        return Err(Error::Overflow { cap });
    }
    for path in cycles {
        let len = path.len();
        let ids: Vec<EdgeId> = (0..len)
            .map(|i| index.id(g, path[i], path[(i + 1) % len]))
            .collect();
        if ids.iter().any(|&x| st.selected[x]) {
            continue;
        }
        match ids.iter().copied().filter(|&x| st.witness[x]).min() {
            None => {
                let slot = st.uncovered.len();
                for &x in &ids {
                    st.select(x);
                    st.owner.insert(x, slot);
                }
                st.uncovered.push(ids);
            }
            Some(x) => st.select(x),
        }
    }
    Ok(())
}

/// PRUNE: drop each candidate edge whose removal leaves the selection a
/// feasible edge cover. Only cycles through the candidate can become
/// uncovered, so feasibility is a search for a cycle through it that avoids
/// every other selected edge.
pub fn darc_prune(st: &mut DarcState, view: &GraphView<'_>, k: HopLimit) {
    let index = EdgeIndex::new(view.base());
    prune_indexed(st, view, k, &index)
}

fn prune_indexed(st: &mut DarcState, view: &GraphView<'_>, k: HopLimit, index: &EdgeIndex) {
    let g = view.base();
    let edges: Vec<(VertexId, VertexId)> = g.edges().collect();
    while let Some(e) = st.candidates.pop_front() {
        st.in_candidates[e] = false;
        if !st.selected[e] {
            continue;
        }
        st.searches += 1;
        let selected = &st.selected;
        let allow = |u: VertexId, w: VertexId| !selected[index.id(g, u, w)];
        let mut found = false;
        walk_cycles_through(
            view,
            edges[e],
            k,
            &allow,
            st.key.as_deref(),
            &mut st.visits,
            &mut |_| {
                found = true;
                false
            },
        );
        if !found {
            st.selected[e] = false;
            st.witness[e] = true;
        }
    }
}

/// DARC over every edge of `g` in lexicographic order, then PRUNE.
pub fn run_darc(g: &DiGraph, k: HopLimit, cap: usize) -> Result<DarcState> {
    run_darc_keyed(g, k, cap, None)
}

fn run_darc_keyed(
    g: &DiGraph,
    k: HopLimit,
    cap: usize,
    key: Option<Vec<VertexId>>,
) -> Result<DarcState> {
    let view = GraphView::all_active(g);
    let index = EdgeIndex::new(g);
    let mut st = DarcState::with_cap(g.m(), cap);
    st.key = key;
    for e in g.edges().filter(|(u, v)| u != v) {
        augment_indexed(e, &mut st, &view, k, &index)?;
    }
    prune_indexed(&mut st, &view, k, &index);
    Ok(st)
}

/// DARC-DV: DARC on the line graph, selected line-graph edges mapped to their
/// middle vertices. Only line-graph cycles with distinct middle vertices are
/// considered.
pub fn run_darc_dv(g: &DiGraph, k: HopLimit) -> Result<RunReport> {
    run_darc_dv_capped(g, k, DEFAULT_CYCLE_CAP)
}

pub fn run_darc_dv_capped(g: &DiGraph, k: HopLimit, cap: usize) -> Result<RunReport> {
    let started = Instant::now();
    let map = build_line_graph(g);
    // a line-graph vertex (u, v) contributes v as the middle of its out-edges
    let heads = map.edges.iter().map(|&(_, v)| v).collect();
    let st = run_darc_keyed(&map.lg, k, cap, Some(heads))?;
    let cover: CoverSet = map
        .lg
        .edges()
        .zip(&st.selected)
        .filter(|(_, &sel)| sel)
        .map(|((a, b), _)| map.to_mid(a, b))
        .collect();
    let mut report = RunReport::new(Algorithm::DarcDv, k);
    report.cover = cover;
    report.nn_calls = st.searches;
    report.edge_visits = st.visits;
    report.runtime = started.elapsed();
    Ok(report)
}

/// True iff `selected` (indexed like [`DiGraph::edges`]) meets every
/// constrained cycle of `g`.
pub fn is_feasible_edge_cover(g: &DiGraph, k: HopLimit, selected: &[bool]) -> Result<bool> {
    let cycles = crate::oracle::enumerate_constrained_cycles(&GraphView::all_active(g), k)?;
    let index = EdgeIndex::new(g);
    let feasible = cycles
        .iter()
        .all(|c| c.edges().any(|(u, v)| selected[index.id(g, u, v)]));
    Ok(feasible)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> DiGraph {
        DiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn line_graph_of_triangle_and_pair() {
        let map = build_line_graph(&triangle());
        assert_eq!(map.edges, vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(map.lg.m(), 3);
        assert!(map.lg.has_edge(0, 1) && map.lg.has_edge(1, 2) && map.lg.has_edge(2, 0));
        assert_eq!(map.to_mid(0, 1), 1);
        assert_eq!(map.from_edge(2, 0), Some(2));

        let pair = DiGraph::from_edges(2, [(0, 1), (1, 0)]);
        let map = build_line_graph(&pair);
        assert_eq!(map.lg.n(), 2);
        assert!(map.lg.has_edge(0, 1) && map.lg.has_edge(1, 0));
    }

    #[test]
    fn cycles_through_an_edge() {
        let g = triangle();
        let view = GraphView::all_active(&g);
        assert_eq!(
            cycles_through_edge(&view, (0, 1), 3.into(), 10)
                .unwrap()
                .len(),
            1
        );

        let sq = DiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(
            cycles_through_edge(&GraphView::all_active(&sq), (0, 1), 3.into(), 10)
                .unwrap()
                .is_empty()
        );

        let k4 = DiGraph::from_edges(
            4,
            (0..4).flat_map(|u| (0..4).filter(move |&v| v != u).map(move |v| (u, v))),
        );
        let tris = cycles_through_edge(&GraphView::all_active(&k4), (0, 1), 3.into(), 10).unwrap();
        let got: Vec<_> = tris.iter().map(|c| c.vertices().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 1, 2], vec![0, 1, 3]]);
        assert!(matches!(
            cycles_through_edge(&GraphView::all_active(&k4), (0, 1), 4.into(), 2),
            Err(Error::Overflow { cap: 2 })
        ));
    }

    #[test]
    fn augment_fresh_triangle() {
        let g = triangle();
        let view = GraphView::all_active(&g);
        let mut st = DarcState::new(g.m());
        darc_augment((0, 1), &mut st, &view, 3.into()).unwrap();
        assert_eq!(st.selected, vec![true; 3]);
        assert_eq!(st.candidates.len(), 3);
        assert_eq!(st.uncovered, vec![vec![0, 1, 2]]);
        assert_eq!(st.owner.len(), 3);

        // already selected: no change
        let before = st.clone();
        darc_augment((1, 2), &mut st, &view, 3.into()).unwrap();
        assert_eq!(st.selected, before.selected);
        assert_eq!(st.candidates, before.candidates);
    }

    #[test]
    fn augment_witness_moves_to_selected() {
        let g = triangle();
        let view = GraphView::all_active(&g);
        let mut st = DarcState::new(g.m());
        st.witness[1] = true;
        darc_augment((1, 2), &mut st, &view, 3.into()).unwrap();
        assert_eq!(st.selected_count(), 1);
        assert!(st.selected[1] && !st.witness[1]);
        assert_eq!(st.candidates, VecDeque::from([1]));
    }

    #[test]
    fn augment_partially_witnessed_cycle_takes_lowest_witness() {
        let g = triangle();
        let view = GraphView::all_active(&g);
        let mut st = DarcState::new(g.m());
        st.witness[2] = true;
        st.witness[1] = true;
        darc_augment((0, 1), &mut st, &view, 3.into()).unwrap();
        assert_eq!(st.selected, vec![false, true, false]);
        assert!(st.witness[2]);
    }

    #[test]
    fn prune_triangle_keeps_one() {
        let g = triangle();
        let view = GraphView::all_active(&g);
        let mut st = DarcState::new(g.m());
        darc_augment((0, 1), &mut st, &view, 3.into()).unwrap();
        darc_prune(&mut st, &view, 3.into());
        assert_eq!(st.selected_count(), 1);
        assert!(is_feasible_edge_cover(&g, 3.into(), &st.selected).unwrap());

        // irredundant already: nothing changes
        let before = st.selected.clone();
        for e in 0..3 {
            st.add_candidate(e);
        }
        darc_prune(&mut st, &view, 3.into());
        assert_eq!(st.selected, before);
    }

    #[test]
    fn darc_dv_small_cases() {
        let r = run_darc_dv(&triangle(), 3.into()).unwrap();
        assert!(!r.cover.is_empty());
        assert!(crate::oracle::is_valid_cover(&triangle(), 3.into(), &r.cover).unwrap());

        let dag = DiGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        assert!(run_darc_dv(&dag, 5.into()).unwrap().cover.is_empty());
    }

    #[test]
    fn darc_dv_ignores_closed_trails() {
        // bidirected star: 1 -> 0 -> 2 -> 0 -> 1 is a line-graph cycle but no cycle of g
        let star = DiGraph::from_edges(3, [(0, 1), (1, 0), (0, 2), (2, 0)]);
        let map = build_line_graph(&star);
        let lg_cycles =
            crate::oracle::enumerate_constrained_cycles(&GraphView::all_active(&map.lg), 4.into())
                .unwrap();
        assert_eq!(lg_cycles.len(), 1);
        assert!(run_darc_dv(&star, 4.into()).unwrap().cover.is_empty());
    }
}
