//! Directed graph storage, edge-list ingestion, SCC reduction and the
//! vertex-state overlay every algorithm searches through.
//!
//! Vertices are remapped to dense ids `0..n` in order of first appearance in
//! the input. Adjacency lists are sorted ascending, which makes every search
//! in this crate visit neighbors in a fixed order and therefore produce the
//! same cover for the same input.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Dense vertex id. 32 bits is plenty for in-memory graphs of the sizes this
/// crate targets.
pub type VertexId = u32;

/// Identifier of a vertex as it appeared in the input file.
pub type OrigId = u64;

/// Upper bound on the length of the cycles an algorithm must hit.
///
/// `Bounded(k)` means cycles of length `3..=k`; `Unbounded` means every simple
/// cycle of length at least 3, which on a graph with `n` vertices is the same
/// as `Bounded(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HopLimit {
    Bounded(u32),
    Unbounded,
}

impl HopLimit {
    /// Longest cycle length that needs to be considered on a graph with `n`
    /// vertices.
    pub fn max_len(self, n: usize) -> usize {
        match self {
            HopLimit::Bounded(k) => (k as usize).min(n),
            HopLimit::Unbounded => n,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, HopLimit::Unbounded)
    }
}

impl From<u32> for HopLimit {
    fn from(k: u32) -> Self {
        HopLimit::Bounded(k)
    }
}

impl fmt::Display for HopLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HopLimit::Bounded(k) => write!(f, "{k}"),
            HopLimit::Unbounded => f.write_str("inf"),
        }
    }
}

/// Immutable directed graph with sorted, duplicate-free out- and in-adjacency.
///
/// Self-loops are stored (and flagged) but [`GraphView`] hides them, so no
/// search ever walks one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiGraph {
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    orig_ids: Vec<OrigId>,
    self_loop: Vec<bool>,
    m: usize,
}

impl DiGraph {
    /// Builds a graph on dense ids `0..n`. Each vertex's original id is its
    /// dense id. Duplicate edges are collapsed.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let orig_ids = (0..n as OrigId).collect();
        Self::with_orig_ids(orig_ids, edges)
    }

    /// Builds a graph whose dense vertex `i` carries original id `orig_ids[i]`.
    pub fn with_orig_ids(
        orig_ids: Vec<OrigId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Self {
        let n = orig_ids.len();
        let mut out_adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(
                (u as usize) < n && (v as usize) < n,
                "edge ({u}, {v}) out of range for {n} vertices"
            );
            out_adj[u as usize].push(v);
        }
        let mut in_adj = vec![Vec::new(); n];
        let mut self_loop = vec![false; n];
        let mut m = 0;
        for (u, list) in out_adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            m += list.len();
            for &v in list.iter() {
                if v as usize == u {
                    self_loop[u] = true;
                }
                in_adj[v as usize].push(u as VertexId);
            }
        }
        // in-lists come out sorted because tails are visited in ascending order
        DiGraph {
            out_adj,
            in_adj,
            orig_ids,
            self_loop,
            m,
        }
    }

    pub fn n(&self) -> usize {
        self.out_adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v as usize]
    }

    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v as usize]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj[v as usize].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj[v as usize].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.out_adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn has_self_loop(&self, v: VertexId) -> bool {
        self.self_loop[v as usize]
    }

    pub fn orig_id(&self, v: VertexId) -> OrigId {
        self.orig_ids[v as usize]
    }

    pub fn orig_ids(&self) -> &[OrigId] {
        &self.orig_ids
    }

    /// Map from original id back to dense id.
    pub fn dense_index(&self) -> HashMap<OrigId, VertexId> {
        self.orig_ids
            .iter()
            .enumerate()
            .map(|(i, &o)| (o, i as VertexId))
            .collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        0..self.n() as VertexId
    }

    /// All edges in lexicographic `(tail, head)` order, self-loops included.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u as VertexId, v)))
    }

    /// Subgraph induced by `keep` (dense ids of `self`, ascending). The result
    /// carries the original ids of the kept vertices.
    pub fn induced(&self, keep: &[VertexId]) -> DiGraph {
        let mut remap = vec![VertexId::MAX; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old as usize] = new as VertexId;
        }
        let orig_ids = keep.iter().map(|&v| self.orig_id(v)).collect();
        let edges = keep.iter().flat_map(|&u| {
            let remap = &remap;
            self.out_neighbors(u)
                .iter()
                .filter(move |&&v| remap[v as usize] != VertexId::MAX)
                .map(move |&v| (remap[u as usize], remap[v as usize]))
        });
        DiGraph::with_orig_ids(orig_ids, edges)
    }
}

/// Parses a whitespace-separated edge list. See [`load_edge_list`].
pub fn parse_edge_list(text: &str) -> Result<DiGraph> {
    load_edge_list(text.as_bytes())
}

/// Reads an edge list: one `u v` pair of non-negative integers per line,
/// `#` comment lines and blank lines ignored.
///
/// Original ids are remapped to dense ids in first-appearance order and
/// parallel edges are collapsed. Empty input yields the empty graph.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<DiGraph> {
    let mut index: HashMap<OrigId, VertexId> = HashMap::new();
    let mut orig_ids = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |id: OrigId| -> VertexId {
        *index.entry(id).or_insert_with(|| {
            orig_ids.push(id);
            (orig_ids.len() - 1) as VertexId
        })
    };
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next_id = |what: &str| -> Result<OrigId> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("missing {what} vertex"),
            })?;
            tok.parse::<OrigId>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid vertex id {tok:?}"),
            })
        };
        let u = next_id("source")?;
        let v = next_id("target")?;
        if let Some(extra) = tokens.next() {
            return Err(Error::Parse {
                line: lineno,
                message: format!("unexpected token {extra:?}"),
            });
        }
        let (du, dv) = (intern(u), intern(v));
        edges.push((du, dv));
    }
    Ok(DiGraph::with_orig_ids(orig_ids, edges))
}

/// Writes `edges` in edge-list format, one `u v` per line.
pub fn write_edge_list<W: std::io::Write>(
    mut out: W,
    edges: impl IntoIterator<Item = (OrigId, OrigId)>,
) -> std::io::Result<()> {
    for (u, v) in edges {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Drops every vertex outside a strongly connected component of size at least
/// two. Every simple cycle of length >= 2 lies inside one such component, so
/// the constrained cycles are preserved exactly.
///
/// Returns the reduced graph and, for each of its vertices, the dense id it
/// had in `g`.
pub fn scc_reduce(g: &DiGraph) -> (DiGraph, Vec<VertexId>) {
    use petgraph::graph::NodeIndex;

    let mut pg = petgraph::graph::DiGraph::<(), ()>::with_capacity(g.n(), g.m());
    for _ in 0..g.n() {
        pg.add_node(());
    }
    for (u, v) in g.edges().filter(|(u, v)| u != v) {
        pg.add_edge(NodeIndex::new(u as usize), NodeIndex::new(v as usize), ());
    }
    let mut keep: Vec<VertexId> = petgraph::algo::tarjan_scc(&pg)
        .into_iter()
        .filter(|comp| comp.len() >= 2)
        .flatten()
        .map(|ix| ix.index() as VertexId)
        .collect();
    keep.sort_unstable();
    (g.induced(&keep), keep)
}

/// Per-vertex participation state used by the cover algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexState {
    /// Participates in searches.
    Active,
    /// In the cover; its edges are suppressed.
    Covered,
    /// Not yet admitted (top-down only).
    Untested,
}

impl VertexState {
    fn bit(self) -> u8 {
        match self {
            VertexState::Active => 1,
            VertexState::Covered => 2,
            VertexState::Untested => 4,
        }
    }
}

/// A [`DiGraph`] seen through a per-vertex state overlay.
///
/// A vertex is traversable when its state is in the view's allow-set.
/// Neighbor iteration yields traversable neighbors only and never the vertex
/// itself, so self-loops are invisible to every search.
#[derive(Clone, Debug)]
pub struct GraphView<'g> {
    base: &'g DiGraph,
    state: Vec<VertexState>,
    allow: u8,
}

impl<'g> GraphView<'g> {
    pub fn new(base: &'g DiGraph, initial: VertexState, allow: &[VertexState]) -> Self {
        GraphView {
            base,
            state: vec![initial; base.n()],
            allow: allow.iter().fold(0, |acc, s| acc | s.bit()),
        }
    }

    /// Every vertex Active, only Active traversable.
    pub fn all_active(base: &'g DiGraph) -> Self {
        Self::new(base, VertexState::Active, &[VertexState::Active])
    }

    /// All vertices Active except `covered`, which are Covered.
    pub fn with_covered(base: &'g DiGraph, covered: impl IntoIterator<Item = VertexId>) -> Self {
        let mut view = Self::all_active(base);
        for v in covered {
            view.set_state(v, VertexState::Covered);
        }
        view
    }

    pub fn base(&self) -> &'g DiGraph {
        self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn state(&self, v: VertexId) -> VertexState {
        self.state[v as usize]
    }

    pub fn set_state(&mut self, v: VertexId, state: VertexState) {
        self.state[v as usize] = state;
    }

    pub fn is_traversable(&self, v: VertexId) -> bool {
        self.state[v as usize].bit() & self.allow != 0
    }

    pub fn vertices_in(&self, state: VertexState) -> impl Iterator<Item = VertexId> + '_ {
        self.base
            .vertices()
            .filter(move |&v| self.state(v) == state)
    }

    pub fn out_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.base
            .out_neighbors(v)
            .iter()
            .copied()
            .filter(move |&w| w != v && self.is_traversable(w))
    }

    pub fn in_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.base
            .in_neighbors(v)
            .iter()
            .copied()
            .filter(move |&w| w != v && self.is_traversable(w))
    }

    /// Number of traversable edges between traversable vertices.
    pub fn edge_count(&self) -> usize {
        self.base
            .vertices()
            .filter(|&v| self.is_traversable(v))
            .map(|v| self.out_neighbors(v).count())
            .sum()
    }
}

/// Direction for [`view_neighbors`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

/// Traversable neighbors of `v` in ascending order, self excluded.
pub fn view_neighbors(view: &GraphView<'_>, v: VertexId, direction: Direction) -> Vec<VertexId> {
    match direction {
        Direction::Out => view.out_neighbors(v).collect(),
        Direction::In => view.in_neighbors(v).collect(),
    }
}

/// A simple directed cycle stored in canonical rotation: the smallest dense
/// id first, direction preserved. The closing edge from the last vertex back
/// to the first is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    vertices: Vec<VertexId>,
}

impl Cycle {
    /// Canonicalizes a closed path given as its vertex sequence.
    pub fn from_path(mut path: Vec<VertexId>) -> Self {
        if let Some(pos) = path
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
        {
            path.rotate_left(pos);
        }
        Cycle { vertices: path }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// Consecutive edges including the closing one.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Checks the constrained-cycle invariants against `g`: length in `3..=k`,
    /// distinct vertices, every edge present, canonical rotation.
    pub fn is_constrained_in(&self, g: &DiGraph, k: HopLimit) -> bool {
        let len = self.len();
        if len < 3 || len > k.max_len(g.n()) {
            return false;
        }
        let mut seen = self.vertices.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != len || seen[0] != self.vertices[0] {
            return false;
        }
        if seen.last().is_some_and(|&v| v as usize >= g.n()) {
            return false;
        }
        self.edges().all(|(u, v)| g.has_edge(u, v))
    }

    /// Vertex sequence translated to original ids.
    pub fn to_orig(&self, g: &DiGraph) -> Vec<OrigId> {
        self.vertices.iter().map(|&v| g.orig_id(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> DiGraph {
        DiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn loads_triangle() {
        let g = parse_edge_list("0 1\n1 2\n2 0").unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!(g.out_neighbors(0), &[1]);
        assert_eq!(g.in_neighbors(0), &[2]);
    }

    #[test]
    fn collapses_duplicates() {
        let g = parse_edge_list("5 7\n5 7\n7 5\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 2));
        assert_eq!(g.orig_ids(), &[5, 7]);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
    }

    #[test]
    fn flags_self_loop() {
        let g = parse_edge_list("3 3\n3 4").unwrap();
        assert_eq!((g.n(), g.m()), (2, 2));
        assert!(g.has_self_loop(0));
        assert!(!g.has_self_loop(1));
        assert_eq!(g.out_neighbors(0), &[0, 1]);
    }

    #[test]
    fn comments_blank_lines_and_empty_input() {
        let g = parse_edge_list("# header\n\n  # indented\n1\t2\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        let empty = parse_edge_list("").unwrap();
        assert_eq!((empty.n(), empty.m()), (0, 0));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_edge_list("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_edge_list("0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("-1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn scc_reduce_drops_pendant() {
        let g = DiGraph::from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)]);
        let (r, keep) = scc_reduce(&g);
        assert_eq!(keep, vec![0, 1, 2]);
        assert_eq!(r.m(), 3);
        assert_eq!(r.orig_ids(), &[0, 1, 2]);
    }

    #[test]
    fn scc_reduce_empties_dag() {
        let g = DiGraph::from_edges(4, [(0, 1), (1, 2), (0, 3), (3, 3)]);
        let (r, keep) = scc_reduce(&g);
        assert!(keep.is_empty());
        assert_eq!((r.n(), r.m()), (0, 0));
    }

    #[test]
    fn view_hides_covered_and_self_loops() {
        let g = triangle();
        let mut view = GraphView::all_active(&g);
        assert_eq!(view_neighbors(&view, 0, Direction::Out), vec![1]);
        view.set_state(1, VertexState::Covered);
        assert!(view_neighbors(&view, 0, Direction::Out).is_empty());

        let loop_only = DiGraph::from_edges(1, [(0, 0)]);
        let view = GraphView::all_active(&loop_only);
        assert!(view_neighbors(&view, 0, Direction::Out).is_empty());
        assert!(view_neighbors(&view, 0, Direction::In).is_empty());
    }

    #[test]
    fn cycle_canonical_rotation() {
        let c = Cycle::from_path(vec![2, 0, 1]);
        assert_eq!(c.vertices(), &[0, 1, 2]);
        assert!(c.is_constrained_in(&triangle(), HopLimit::Bounded(3)));
        assert!(!c.is_constrained_in(&triangle(), HopLimit::Bounded(2)));
        // wrong direction
        assert!(!Cycle::from_path(vec![0, 2, 1]).is_constrained_in(&triangle(), 3.into()));
    }
}
