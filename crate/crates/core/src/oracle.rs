//! Brute-force ground truth for small instances.
//!
//! Nothing here is clever: cycles are listed by depth-first search anchored at
//! their smallest vertex, covers are checked against that listing, and the
//! existence test is a plain depth-bounded recursion. The cover algorithms
//! are tested against these routines, so they deliberately share no code
//! with [`crate::search`].

use std::collections::{BTreeSet, VecDeque};
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::graph::{Cycle, DiGraph, GraphView, HopLimit, VertexId};

/// Default cap on the number of cycles an enumeration may return.
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

/// Largest graph [`optimal_cover`] will attempt.
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// All constrained cycles of a view for one hop limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSet {
    pub cycles: BTreeSet<Cycle>,
    pub k: HopLimit,
}

impl CycleSet {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cycle> {
        self.cycles.iter()
    }

    /// Number of cycles of each length, indexed by length.
    pub fn length_histogram(&self) -> Vec<usize> {
        let mut hist = Vec::new();
        for c in &self.cycles {
            if hist.len() <= c.len() {
                hist.resize(c.len() + 1, 0);
            }
            hist[c.len()] += 1;
        }
        hist
    }
}

/// A set of vertices, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoverSet {
    vertices: Vec<VertexId>,
}

impl CoverSet {
    pub fn new() -> Self {
        Self::default()
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
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn is_subset(&self, other: &CoverSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    fn check_range(&self, n: usize) -> Result<()> {
        match self.vertices.last() {
            Some(&v) if v as usize >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<VertexId> for CoverSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut vertices: Vec<VertexId> = iter.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        CoverSet { vertices }
    }
}

/// Walks every constrained cycle of `view` once, in canonical form, ordered by
/// anchor (minimum vertex) and then by DFS order.
fn for_each_cycle<B>(
    view: &GraphView<'_>,
    k: HopLimit,
    mut visit: impl FnMut(Vec<VertexId>) -> ControlFlow<B>,
) -> Option<B> {
    fn dfs<B>(
        view: &GraphView<'_>,
        root: VertexId,
        max_len: usize,
        path: &mut Vec<VertexId>,
        on_path: &mut [bool],
        visit: &mut impl FnMut(Vec<VertexId>) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let u = *path.last().unwrap();
        for w in view.out_neighbors(u) {
            if w == root {
                if path.len() >= 3 {
                    visit(path.clone())?;
                }
            } else if w > root && !on_path[w as usize] && path.len() < max_len {
                on_path[w as usize] = true;
                path.push(w);
                dfs(view, root, max_len, path, on_path, visit)?;
                path.pop();
                on_path[w as usize] = false;
            }
        }
        ControlFlow::Continue(())
    }

    let max_len = k.max_len(view.n());
    if max_len < 3 {
        return None;
    }
    let mut on_path = vec![false; view.n()];
    let mut path = Vec::with_capacity(max_len);
    for root in view.base().vertices().filter(|&v| view.is_traversable(v)) {
        path.clear();
        path.push(root);
        if let ControlFlow::Break(b) = dfs(view, root, max_len, &mut path, &mut on_path, &mut visit)
        {
            return Some(b);
        }
    }
    None
}

/// Lists every simple directed cycle of length `3..=k` among traversable
/// vertices. Fails with [`Error::Overflow`] rather than truncating.
pub fn enumerate_constrained_cycles(view: &GraphView<'_>, k: HopLimit) -> Result<CycleSet> {
    enumerate_with_cap(view, k, DEFAULT_CYCLE_CAP)
}

pub fn enumerate_with_cap(view: &GraphView<'_>, k: HopLimit, cap: usize) -> Result<CycleSet> {
    let mut cycles = BTreeSet::new();
    let overflow = for_each_cycle(view, k, |path| {
        if cycles.len() >= cap {
            return ControlFlow::Break(());
        }
        // anchored at the minimum, so the path is already canonical
        cycles.insert(Cycle::from_path(path));
        ControlFlow::Continue(())
    });
    match overflow {
        Some(()) => Err(Error::Overflow { cap }),
        None => Ok(CycleSet { cycles, k }),
    }
}

/// First constrained cycle of the view in enumeration order, if any.
pub fn first_cycle(view: &GraphView<'_>, k: HopLimit) -> Option<Cycle> {
    for_each_cycle(view, k, |path| ControlFlow::Break(Cycle::from_path(path)))
}

/// Whether some constrained cycle passes through `v`. Plain depth-bounded
/// DFS with no pruning beyond the simple-path rule.
pub fn exists_cycle_through(view: &GraphView<'_>, v: VertexId, k: HopLimit) -> bool {
    fn reach(
        view: &GraphView<'_>,
        start: VertexId,
        u: VertexId,
        depth: usize,
        max_len: usize,
        on_path: &mut [bool],
    ) -> bool {
        for w in view.out_neighbors(u) {
            if w == start {
                if depth + 1 >= 3 && depth < max_len {
                    return true;
                }
            } else if !on_path[w as usize] && depth + 1 < max_len {
                on_path[w as usize] = true;
                let found = reach(view, start, w, depth + 1, max_len, on_path);
                on_path[w as usize] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }

    if !view.is_traversable(v) {
        return false;
    }
    let max_len = k.max_len(view.n());
    if max_len < 3 {
        return false;
    }
    let mut on_path = vec![false; view.n()];
    on_path[v as usize] = true;
    reach(view, v, v, 0, max_len, &mut on_path)
}

/// A constrained cycle of `g` that avoids every vertex of `cover`, if any.
pub fn uncovered_cycle(g: &DiGraph, k: HopLimit, cover: &CoverSet) -> Result<Option<Cycle>> {
    cover.check_range(g.n())?;
    let view = GraphView::with_covered(g, cover.iter());
    Ok(first_cycle(&view, k))
}

/// True iff `cover` intersects every constrained cycle of `g`.
pub fn is_valid_cover(g: &DiGraph, k: HopLimit, cover: &CoverSet) -> Result<bool> {
    Ok(uncovered_cycle(g, k, cover)?.is_none())
}

/// Outcome of a minimality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Minimality {
    Minimal,
    /// The set is not a cover; the cycle is a witness.
    Invalid(Cycle),
    /// The set is a cover but this vertex can be dropped.
    Removable(VertexId),
}

/// Checks validity, then that each cover vertex has a witness cycle among the
/// non-cover vertices plus itself.
pub fn check_minimal(g: &DiGraph, k: HopLimit, cover: &CoverSet) -> Result<Minimality> {
    if let Some(cycle) = uncovered_cycle(g, k, cover)? {
        return Ok(Minimality::Invalid(cycle));
    }
    let mut view = GraphView::with_covered(g, cover.iter());
    for v in cover.iter() {
        view.set_state(v, crate::graph::VertexState::Active);
        let needed = exists_cycle_through(&view, v, k);
        view.set_state(v, crate::graph::VertexState::Covered);
        if !needed {
            return Ok(Minimality::Removable(v));
        }
    }
    Ok(Minimality::Minimal)
}

pub fn is_minimal_cover(g: &DiGraph, k: HopLimit, cover: &CoverSet) -> Result<bool> {
    Ok(check_minimal(g, k, cover)? == Minimality::Minimal)
}

/// Minimum-size cover by exhaustive search over vertex subsets in order of
/// size. Only for graphs with at most [`EXHAUSTIVE_LIMIT`] vertices.
pub fn optimal_cover(g: &DiGraph, k: HopLimit) -> Result<CoverSet> {
    let n = g.n();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let cycles = enumerate_constrained_cycles(&GraphView::all_active(g), k)?;
    let masks: Vec<u32> = cycles
        .iter()
        .map(|c| c.vertices().iter().fold(0u32, |m, &v| m | (1 << v)))
        .collect();
    let mut subsets: Vec<u32> = (0..1u32 << n).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let best = subsets
        .into_iter()
        .find(|&s| masks.iter().all(|&m| m & s != 0))
        .expect("the full vertex set is always a cover");
    Ok((0..n as VertexId)
        .filter(|&v| best & (1 << v) != 0)
        .collect())
}

/// Shortest path lengths from every vertex to `target`, using only
/// traversable vertices outside `avoid` as intermediate or starting points.
/// `target` itself may be in `avoid`. Unreachable vertices map to `None`.
pub fn distances_to(view: &GraphView<'_>, target: VertexId, avoid: &[bool]) -> Vec<Option<u32>> {
    let mut dist = vec![None; view.n()];
    dist[target as usize] = Some(0);
    let mut queue = VecDeque::from([target]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize].unwrap();
        for w in view.in_neighbors(x) {
            if !avoid[w as usize] && dist[w as usize].is_none() {
                dist[w as usize] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}
