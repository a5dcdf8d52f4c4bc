//! Cycle search kernels.
//!
//! * [`Searcher::find_cycle`]: plain depth-bounded DFS for a constrained cycle
//!   through a start vertex.
//! * [`Searcher::node_necessary`]: the same question answered with per-vertex
//!   block values, which bound each call to `O(k·m)` edge explorations.
//! * [`unblock`]: lowers block values along reverse edges once a vertex is
//!   known to reach the start.
//! * [`Searcher::bfs_filter`]: a BFS lower bound on the length of any cycle
//!   through a vertex, used to skip the DFS when no short cycle can exist.
//!
//! # Blocks
//!
//! For the current search stack `S` and start vertex `s`, a block value is
//! sound when every path from `u` to `s` avoiding `S` has length at least
//! `u.block`. A vertex pushed at depth `d` and later popped without closing a
//! cycle could not get back to `s` within `k - d` hops, so it keeps
//! `block = k - d + 1`. A branch into `v` from depth `d` is skipped when
//! `d + 1 + v.block > k`.
//!
//! The only way to reach `s` without producing an answer is the 2-cycle
//! `s -> u -> s` from a depth-1 vertex. That vertex gets `block = 1` at once,
//! and again when it is popped, so that vertices blocked inside its own
//! subtree (while `u` was on the stack) are lowered too.
//!
//! Unbounded mode replaces the depth arithmetic with "blocked = unreachable":
//! popped vertices get `INF` and any vertex with a finite block may be
//! entered.

use std::collections::VecDeque;

use crate::graph::{Cycle, GraphView, HopLimit, VertexId};

/// Block value meaning "cannot reach the start at all".
pub const INF: u32 = u32::MAX;

/// Per-vertex block values with O(1) logical reset.
///
/// A vertex whose stamp differs from the current epoch reads as 0.
#[derive(Clone, Debug)]
pub struct BlockTable {
    block: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl BlockTable {
    pub fn new(n: usize) -> Self {
        BlockTable {
            block: vec![0; n],
            stamp: vec![0; n],
            epoch: 1,
        }
    }

    pub fn get(&self, v: VertexId) -> u32 {
        if self.stamp[v as usize] == self.epoch {
            self.block[v as usize]
        } else {
            0
        }
    }

    pub fn set(&mut self, v: VertexId, value: u32) {
        self.stamp[v as usize] = self.epoch;
        self.block[v as usize] = value;
    }

    /// Resets every vertex to 0 without touching the arrays.
    pub fn advance_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }
}

/// The DFS path from the start vertex to the current top.
#[derive(Clone, Debug)]
pub struct SearchStack {
    vertices: Vec<VertexId>,
    on_stack: Vec<bool>,
}

impl SearchStack {
    pub fn new(n: usize) -> Self {
        SearchStack {
            vertices: Vec::new(),
            on_stack: vec![false; n],
        }
    }

    pub fn push(&mut self, v: VertexId) {
        debug_assert!(!self.on_stack[v as usize]);
        self.on_stack[v as usize] = true;
        self.vertices.push(v);
    }

    pub fn pop(&mut self) -> Option<VertexId> {
        let v = self.vertices.pop()?;
        self.on_stack[v as usize] = false;
        Some(v)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.on_stack[v as usize]
    }

    pub fn top(&self) -> Option<VertexId> {
        self.vertices.last().copied()
    }

    /// Path length: one less than the number of stacked vertices.
    pub fn path_len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Membership markers indexed by vertex.
    pub fn markers(&self) -> &[bool] {
        &self.on_stack
    }

    pub fn clear(&mut self) {
        while self.pop().is_some() {}
    }
}

/// Work counters, accumulated over the lifetime of a [`Searcher`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchCounters {
    /// Search calls (find_cycle or node_necessary).
    pub calls: u64,
    /// Out-edges examined by DFS.
    pub edge_visits: u64,
    /// Vertices pushed onto a DFS stack.
    pub pushes: u64,
    /// In-edges examined by unblock cascades.
    pub unblock_visits: u64,
    /// Edges examined by filter BFS runs.
    pub bfs_edge_visits: u64,
    /// Vertices the BFS filter pruned.
    pub bfs_prunes: u64,
}

impl SearchCounters {
    /// Field-wise `self - earlier`.
    pub fn since(&self, earlier: &SearchCounters) -> SearchCounters {
        SearchCounters {
            calls: self.calls - earlier.calls,
            edge_visits: self.edge_visits - earlier.edge_visits,
            pushes: self.pushes - earlier.pushes,
            unblock_visits: self.unblock_visits - earlier.unblock_visits,
            bfs_edge_visits: self.bfs_edge_visits - earlier.bfs_edge_visits,
            bfs_prunes: self.bfs_prunes - earlier.bfs_prunes,
        }
    }
}

/// Outcome of [`Searcher::bfs_filter`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterVerdict {
    /// No constrained cycle can pass through the vertex.
    Pruned,
    /// The bound is inconclusive.
    NeedsVerify,
}

/// What just happened inside an observed [`Searcher::node_necessary_observed`] run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchEventKind {
    Push(VertexId),
    Pop(VertexId),
    /// An unblock cascade rooted at this vertex finished.
    Unblock(VertexId),
}

/// Snapshot handed to a search observer.
#[derive(Clone, Copy, Debug)]
pub struct SearchEvent<'a> {
    pub kind: SearchEventKind,
    pub start: VertexId,
    pub stack: &'a SearchStack,
    pub blocks: &'a BlockTable,
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    vertex: VertexId,
    next: usize,
    reached_start: bool,
}

/// Lowers `u.block` to `l` and cascades along in-edges: every in-neighbor `v`
/// outside the stack with `v.block > l + 1` is unblocked with `l + 1`.
///
/// Runs breadth-first so each vertex is lowered at most once per cascade.
pub fn unblock(
    u: VertexId,
    stack: &SearchStack,
    l: u32,
    blocks: &mut BlockTable,
    view: &GraphView<'_>,
    counters: &mut SearchCounters,
) {
    let mut queue = VecDeque::new();
    unblock_with(u, stack, l, blocks, view, counters, &mut queue);
}

fn unblock_with(
    u: VertexId,
    stack: &SearchStack,
    l: u32,
    blocks: &mut BlockTable,
    view: &GraphView<'_>,
    counters: &mut SearchCounters,
    queue: &mut VecDeque<(VertexId, u32)>,
) {
    debug_assert!(l >= 1);
    queue.clear();
    blocks.set(u, l);
    queue.push_back((u, l));
    while let Some((x, lx)) = queue.pop_front() {
        for v in view.in_neighbors(x) {
            counters.unblock_visits += 1;
            if stack.contains(v) {
                continue;
            }
            if blocks.get(v) > lx + 1 {
                blocks.set(v, lx + 1);
                queue.push_back((v, lx + 1));
            }
        }
    }
}

/// Reusable search state for one graph size.
///
/// Each searcher is confined to one thread; run concurrent searches with
/// separate searchers.
#[derive(Clone, Debug)]
pub struct Searcher {
    blocks: BlockTable,
    stack: SearchStack,
    frames: Vec<Frame>,
    push_count: Vec<u32>,
    push_stamp: Vec<u32>,
    max_pushes: u32,
    dist: Vec<u32>,
    dist_stamp: Vec<u32>,
    bfs_epoch: u32,
    queue: VecDeque<(VertexId, u32)>,
    bfs_queue: VecDeque<VertexId>,
    counters: SearchCounters,
}

impl Searcher {
    pub fn new(n: usize) -> Self {
        Searcher {
            blocks: BlockTable::new(n),
            stack: SearchStack::new(n),
            frames: Vec::new(),
            push_count: vec![0; n],
            push_stamp: vec![0; n],
            max_pushes: 0,
            dist: vec![0; n],
            dist_stamp: vec![0; n],
            bfs_epoch: 0,
            queue: VecDeque::new(),
            bfs_queue: VecDeque::new(),
            counters: SearchCounters::default(),
        }
    }

    pub fn counters(&self) -> &SearchCounters {
        &self.counters
    }

    pub fn blocks(&self) -> &BlockTable {
        &self.blocks
    }

    /// Highest number of times any single vertex was pushed during the most
    /// recent [`node_necessary`](Self::node_necessary) call.
    pub fn last_max_pushes(&self) -> u32 {
        self.max_pushes
    }

    /// Plain DFS for a constrained cycle through `start`: simple paths only,
    /// at most `k` edges, closing only back to `start`, length at least 3.
    pub fn find_cycle(
        &mut self,
        view: &GraphView<'_>,
        k: HopLimit,
        start: VertexId,
    ) -> Option<Cycle> {
        self.counters.calls += 1;
        let max_len = k.max_len(view.n());
        if max_len < 3 || !view.is_traversable(start) {
            return None;
        }
        let base = view.base();
        self.stack.clear();
        self.frames.clear();
        self.stack.push(start);
        self.counters.pushes += 1;
        self.frames.push(Frame {
            vertex: start,
            next: 0,
            reached_start: false,
        });

        while let Some(frame) = self.frames.last_mut() {
            let u = frame.vertex;
            let depth = self.stack.path_len();
            let adj = base.out_neighbors(u);
            let mut descend = None;
            while frame.next < adj.len() {
                let w = adj[frame.next];
                frame.next += 1;
                if w == u || !view.is_traversable(w) {
                    continue;
                }
                self.counters.edge_visits += 1;
                if w == start {
                    if depth + 1 >= 3 {
                        let cycle = Cycle::from_path(self.stack.vertices().to_vec());
                        self.stack.clear();
                        self.frames.clear();
                        return Some(cycle);
                    }
                } else if !self.stack.contains(w) && depth + 2 <= max_len {
                    descend = Some(w);
                    break;
                }
            }
            match descend {
                Some(w) => {
                    self.stack.push(w);
                    self.counters.pushes += 1;
                    self.frames.push(Frame {
                        vertex: w,
                        next: 0,
                        reached_start: false,
                    });
                }
                None => {
                    self.frames.pop();
                    self.stack.pop();
                }
            }
        }
        None
    }

    /// Block-based existence check: returns a witness constrained cycle
    /// through `s` iff one exists in the view.
    pub fn node_necessary(
        &mut self,
        view: &GraphView<'_>,
        s: VertexId,
        k: HopLimit,
    ) -> Option<Cycle> {
        self.node_necessary_observed(view, s, k, |_| {})
    }

    /// [`node_necessary`](Self::node_necessary) with a hook called after every
    /// push, pop and completed unblock cascade.
    pub fn node_necessary_observed(
        &mut self,
        view: &GraphView<'_>,
        s: VertexId,
        k: HopLimit,
        mut observe: impl FnMut(SearchEvent<'_>),
    ) -> Option<Cycle> {
        self.counters.calls += 1;
        self.blocks.advance_epoch();
        self.max_pushes = 0;
        let unbounded = k.is_unbounded();
        // with an unbounded limit, a simple cycle is still capped by n
        let kk = match k {
            HopLimit::Bounded(k) => k as usize,
            HopLimit::Unbounded => view.n(),
        };
        if kk < 3 || !view.is_traversable(s) {
            return None;
        }
        let base = view.base();
        self.stack.clear();
        self.frames.clear();
        self.stack.push(s);
        self.note_push(s);
        self.frames.push(Frame {
            vertex: s,
            next: 0,
            reached_start: false,
        });
        observe(SearchEvent {
            kind: SearchEventKind::Push(s),
            start: s,
            stack: &self.stack,
            blocks: &self.blocks,
        });

        loop {
            let frame = self.frames.last_mut()?;
            let u = frame.vertex;
            let depth = self.stack.path_len();
            let adj = base.out_neighbors(u);
            let mut descend = None;
            let mut close_two = false;
            if unbounded || depth < kk {
                while frame.next < adj.len() {
                    let v = adj[frame.next];
                    frame.next += 1;
                    if v == u || !view.is_traversable(v) {
                        continue;
                    }
                    self.counters.edge_visits += 1;
                    if v == s {
                        if depth + 1 >= 3 {
                            return Some(self.finish_success(view, s, &mut observe));
                        }
                        // s -> u -> s: reaches the start but is no answer
                        frame.reached_start = true;
                        close_two = true;
                        break;
                    }
                    if self.stack.contains(v) {
                        continue;
                    }
                    let b = self.blocks.get(v);
                    let open = if unbounded {
                        b != INF
                    } else {
                        (depth + 1) as u64 + b as u64 <= kk as u64
                    };
                    if open {
                        descend = Some(v);
                        break;
                    }
                }
            }
            if close_two {
                self.run_unblock(view, u, 1, s, &mut observe);
                continue;
            }
            match descend {
                Some(v) => {
                    let value = if unbounded {
                        INF
                    } else {
                        (kk - (depth + 1) + 1) as u32
                    };
                    self.blocks.set(v, value);
                    self.stack.push(v);
                    self.note_push(v);
                    self.frames.push(Frame {
                        vertex: v,
                        next: 0,
                        reached_start: false,
                    });
                    observe(SearchEvent {
                        kind: SearchEventKind::Push(v),
                        start: s,
                        stack: &self.stack,
                        blocks: &self.blocks,
                    });
                }
                None => {
                    let frame = self.frames.pop().expect("frame present");
                    if frame.reached_start {
                        self.run_unblock(view, u, 1, s, &mut observe);
                    }
                    self.stack.pop();
                    observe(SearchEvent {
                        kind: SearchEventKind::Pop(u),
                        start: s,
                        stack: &self.stack,
                        blocks: &self.blocks,
                    });
                }
            }
        }
    }

    fn note_push(&mut self, v: VertexId) {
        self.counters.pushes += 1;
        let i = v as usize;
        if self.push_stamp[i] != self.blocks.epoch {
            self.push_stamp[i] = self.blocks.epoch;
            self.push_count[i] = 0;
        }
        self.push_count[i] += 1;
        self.max_pushes = self.max_pushes.max(self.push_count[i]);
    }

    fn run_unblock(
        &mut self,
        view: &GraphView<'_>,
        u: VertexId,
        l: u32,
        s: VertexId,
        observe: &mut impl FnMut(SearchEvent<'_>),
    ) {
        unblock_with(
            u,
            &self.stack,
            l,
            &mut self.blocks,
            view,
            &mut self.counters,
            &mut self.queue,
        );
        observe(SearchEvent {
            kind: SearchEventKind::Unblock(u),
            start: s,
            stack: &self.stack,
            blocks: &self.blocks,
        });
    }

    fn finish_success(
        &mut self,
        view: &GraphView<'_>,
        s: VertexId,
        observe: &mut impl FnMut(SearchEvent<'_>),
    ) -> Cycle {
        let cycle = Cycle::from_path(self.stack.vertices().to_vec());
        let top = self.stack.top().expect("non-empty stack");
        self.run_unblock(view, top, 1, s, observe);
        self.stack.clear();
        self.frames.clear();
        cycle
    }

    /// Length of the shortest closed walk through `v` (at least 2 edges,
    /// self-loops never count), searching at most `limit` hops. This is a lower
    /// bound on the length of any simple cycle through `v`.
    pub fn bfs_closed_walk_bound(
        &mut self,
        view: &GraphView<'_>,
        v: VertexId,
        limit: Option<usize>,
    ) -> Option<usize> {
        if !view.is_traversable(v) {
            return None;
        }
        self.bfs_epoch = self.bfs_epoch.wrapping_add(1);
        if self.bfs_epoch == 0 {
            self.dist_stamp.fill(0);
            self.bfs_epoch = 1;
        }
        let epoch = self.bfs_epoch;
        self.bfs_queue.clear();
        self.dist_stamp[v as usize] = epoch;
        self.dist[v as usize] = 0;
        self.bfs_queue.push_back(v);
        while let Some(x) = self.bfs_queue.pop_front() {
            let d = self.dist[x as usize] as usize;
            if limit.is_some_and(|lim| d + 1 > lim) {
                break;
            }
            for w in view.out_neighbors(x) {
                self.counters.bfs_edge_visits += 1;
                if w == v {
                    // BFS pops in distance order, so the first return is shortest
                    return Some(d + 1);
                }
                if self.dist_stamp[w as usize] != epoch {
                    self.dist_stamp[w as usize] = epoch;
                    self.dist[w as usize] = (d + 1) as u32;
                    self.bfs_queue.push_back(w);
                }
            }
        }
        None
    }

    /// Prunes `v` when no closed walk through it has length at most `k`.
    pub fn bfs_filter(&mut self, view: &GraphView<'_>, v: VertexId, k: HopLimit) -> FilterVerdict {
        let max_len = k.max_len(view.n());
        let verdict = match self.bfs_closed_walk_bound(view, v, Some(max_len)) {
            Some(len) if len <= max_len && max_len >= 3 => FilterVerdict::NeedsVerify,
            _ => FilterVerdict::Pruned,
        };
        if verdict == FilterVerdict::Pruned {
            self.counters.bfs_prunes += 1;
        }
        verdict
    }
}

/// One-shot [`Searcher::find_cycle`].
pub fn find_cycle(view: &GraphView<'_>, k: HopLimit, start: VertexId) -> Option<Cycle> {
    Searcher::new(view.n()).find_cycle(view, k, start)
}

/// One-shot [`Searcher::node_necessary`].
pub fn node_necessary(view: &GraphView<'_>, s: VertexId, k: HopLimit) -> Option<Cycle> {
    Searcher::new(view.n()).node_necessary(view, s, k)
}

/// One-shot [`Searcher::bfs_closed_walk_bound`] with no hop limit.
pub fn bfs_closed_walk_bound(view: &GraphView<'_>, v: VertexId) -> Option<usize> {
    Searcher::new(view.n()).bfs_closed_walk_bound(view, v, None)
}

/// One-shot [`Searcher::bfs_filter`].
pub fn bfs_filter(view: &GraphView<'_>, v: VertexId, k: HopLimit) -> FilterVerdict {
    Searcher::new(view.n()).bfs_filter(view, v, k)
}
