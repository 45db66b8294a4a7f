//! Dijkstra and A* over any [`Domain`].
//!
//! Both planners run graph search with a closed set and lazy deletion of
//! stale open entries. The A* open list is ordered by `(f, h, insertion
//! sequence)` ascending; Dijkstra's by `(g, insertion sequence)`, which is the
//! same order A* uses when `h ≡ 0`. Dijkstra is written separately from A* so
//! it can serve as an independent oracle in tests and benchmarks.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::graphmap::{Connectivity, Domain, NodeRef};
use crate::heuristics::{BaseHeuristic, Evaluator, HeuristicSpec, WeightParams};
use crate::harness::csv_field;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub connectivity: Connectivity,
    /// Move closed nodes back to open when a strictly cheaper path is found.
    pub allow_reopen: bool,
    /// Give up (status `Aborted`) after this many expansions.
    pub max_expansions: Option<usize>,
    /// Record per-expansion and per-discovery trace entries.
    pub record_trace: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            connectivity: Connectivity::Eight,
            allow_reopen: true,
            max_expansions: None,
            record_trace: true,
        }
    }
}

impl SearchOptions {
    pub fn with_connectivity(connectivity: Connectivity) -> Self {
        SearchOptions { connectivity, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanStatus {
    Found,
    Unreachable,
    Aborted,
}

/// Search state of one node at the moment it was expanded or discovered.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub node: NodeRef,
    pub label: String,
    pub g: f64,
    /// Already weight-scaled.
    pub h: f64,
    /// Always `g + h`.
    pub f: f64,
    pub parent: Option<NodeRef>,
    pub parent_label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    /// Start to goal inclusive; empty unless `Found`.
    pub path: Vec<NodeRef>,
    /// Sum of traversed edge costs; infinite unless `Found`.
    pub cost: f64,
    pub expansions: usize,
    pub reopenings: usize,
    /// One entry per expansion, in order.
    pub trace: Vec<TraceEntry>,
    /// One entry per open-list insertion (first discovery or improvement).
    pub discovered: Vec<TraceEntry>,
    pub status: PlanStatus,
}

impl PlanResult {
    pub fn is_found(&self) -> bool {
        self.status == PlanStatus::Found
    }
}

struct OpenEntry {
    f: f64,
    h: f64,
    seq: u64,
    g: f64,
    node: usize,
}

impl OpenEntry {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.f
            .total_cmp(&other.f)
            .then(self.h.total_cmp(&other.h))
            .then(self.seq.cmp(&other.seq))
    }
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    // BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.key_cmp(self)
    }
}

fn endpoints<D: Domain + ?Sized>(
    domain: &D,
    start: &NodeRef,
    goal: &NodeRef,
    opts: &SearchOptions,
) -> Result<(usize, usize)> {
    domain.check_connectivity(opts.connectivity)?;
    if opts.max_expansions == Some(0) {
        return Err(Error::InvalidParameter("max_expansions must be at least 1".into()));
    }
    let s = domain.index_of(start)?;
    let g = domain.index_of(goal)?;
    for (idx, node) in [(s, start), (g, goal)] {
        if domain.is_blocked(idx) {
            return Err(Error::Occupied { node: node.to_string() });
        }
    }
    Ok((s, g))
}

/// Bookkeeping shared by both planners.
struct Recorder<'a, D: Domain + ?Sized> {
    domain: &'a D,
    enabled: bool,
    trace: Vec<TraceEntry>,
    discovered: Vec<TraceEntry>,
}

impl<'a, D: Domain + ?Sized> Recorder<'a, D> {
    fn new(domain: &'a D, enabled: bool) -> Self {
        Recorder { domain, enabled, trace: Vec::new(), discovered: Vec::new() }
    }

    fn entry(&self, node: usize, g: f64, h: f64, parent: usize) -> TraceEntry {
        let parent = (parent != usize::MAX).then_some(parent);
        TraceEntry {
            node: self.domain.node_ref(node),
            label: self.domain.label(node),
            g,
            h,
            f: g + h,
            parent: parent.map(|p| self.domain.node_ref(p)),
            parent_label: parent.map(|p| self.domain.label(p)),
        }
    }

    fn expanded(&mut self, node: usize, g: f64, h: f64, parent: usize) {
        if self.enabled {
            let e = self.entry(node, g, h, parent);
            self.trace.push(e);
        }
    }

    fn discovered(&mut self, node: usize, g: f64, h: f64, parent: usize) {
        if self.enabled {
            let e = self.entry(node, g, h, parent);
            self.discovered.push(e);
        }
    }

    fn finish(self, status: PlanStatus, path: Vec<NodeRef>, cost: f64, expansions: usize, reopenings: usize) -> PlanResult {
        PlanResult {
            path,
            cost,
            expansions,
            reopenings,
            trace: self.trace,
            discovered: self.discovered,
            status,
        }
    }
}

fn reconstruct<D: Domain + ?Sized>(domain: &D, parent: &[usize], goal: usize) -> Vec<NodeRef> {
    let mut path = vec![domain.node_ref(goal)];
    let mut cur = goal;
    while parent[cur] != usize::MAX {
        cur = parent[cur];
        path.push(domain.node_ref(cur));
    }
    path.reverse();
    path
}

/// Exact shortest path by Dijkstra's algorithm.
pub fn dijkstra<D: Domain + ?Sized>(
    domain: &D,
    start: &NodeRef,
    goal: &NodeRef,
    opts: &SearchOptions,
) -> Result<PlanResult> {
    #[derive(PartialEq)]
    struct Entry(f64, u64, usize);
    impl Eq for Entry {}
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> Ordering {
            other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
        }
    }

    let (start, goal) = endpoints(domain, start, goal, opts)?;
    let n = domain.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut rec = Recorder::new(domain, opts.record_trace);
    let mut seq = 0u64;
    let mut expansions = 0;
    let mut succ = Vec::new();

    dist[start] = 0.0;
    heap.push(Entry(0.0, seq, start));
    rec.discovered(start, 0.0, 0.0, usize::MAX);

    while let Some(Entry(d, _, node)) = heap.pop() {
        if done[node] || d > dist[node] {
            continue;
        }
        if opts.max_expansions.is_some_and(|max| expansions >= max) {
            return Ok(rec.finish(PlanStatus::Aborted, Vec::new(), f64::INFINITY, expansions, 0));
        }
        done[node] = true;
        expansions += 1;
        rec.expanded(node, d, 0.0, parent[node]);
        if node == goal {
            let path = reconstruct(domain, &parent, goal);
            return Ok(rec.finish(PlanStatus::Found, path, d, expansions, 0));
        }
        succ.clear();
        domain.successors(node, opts.connectivity, &mut succ);
        for &(next, cost) in &succ {
            let nd = d + cost;
            if !done[next] && nd < dist[next] {
                dist[next] = nd;
                parent[next] = node;
                seq += 1;
                heap.push(Entry(nd, seq, next));
                rec.discovered(next, nd, 0.0, node);
            }
        }
    }
    Ok(rec.finish(PlanStatus::Unreachable, Vec::new(), f64::INFINITY, expansions, 0))
}

/// A* with `f = g + h`, where `h` is the (possibly velocity-weighted)
/// heuristic described by `spec`.
pub fn astar<D: Domain + ?Sized>(
    domain: &D,
    start: &NodeRef,
    goal: &NodeRef,
    spec: &HeuristicSpec,
    opts: &SearchOptions,
) -> Result<PlanResult> {
    let (start, goal) = endpoints(domain, start, goal, opts)?;
    let heuristic = Evaluator::new(spec, domain, goal)?;

    let n = domain.node_count();
    let mut g = vec![f64::INFINITY; n];
    let mut h = vec![f64::NAN; n];
    let mut parent = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();
    let mut rec = Recorder::new(domain, opts.record_trace);
    let mut seq = 0u64;
    let mut expansions = 0;
    let mut reopenings = 0;
    let mut succ = Vec::new();

    g[start] = 0.0;
    h[start] = heuristic.eval(start);
    open.push(OpenEntry { f: h[start], h: h[start], seq, g: 0.0, node: start });
    rec.discovered(start, 0.0, h[start], usize::MAX);

    while let Some(entry) = open.pop() {
        let node = entry.node;
        if closed[node] || entry.g > g[node] {
            continue;
        }
        if opts.max_expansions.is_some_and(|max| expansions >= max) {
            return Ok(rec.finish(PlanStatus::Aborted, Vec::new(), f64::INFINITY, expansions, reopenings));
        }
        closed[node] = true;
        expansions += 1;
        rec.expanded(node, entry.g, entry.h, parent[node]);
        if node == goal {
            let path = reconstruct(domain, &parent, goal);
            return Ok(rec.finish(PlanStatus::Found, path, entry.g, expansions, reopenings));
        }

        succ.clear();
        domain.successors(node, opts.connectivity, &mut succ);
        for &(next, cost) in &succ {
            let ng = entry.g + cost;
            if ng >= g[next] {
                continue;
            }
            if closed[next] {
                if !opts.allow_reopen {
                    continue;
                }
                closed[next] = false;
                reopenings += 1;
            }
            g[next] = ng;
            parent[next] = node;
            if h[next].is_nan() {
                h[next] = heuristic.eval(next);
            }
            seq += 1;
            open.push(OpenEntry { f: ng + h[next], h: h[next], seq, g: ng, node: next });
            rec.discovered(next, ng, h[next], node);
        }
    }
    Ok(rec.finish(PlanStatus::Unreachable, Vec::new(), f64::INFINITY, expansions, reopenings))
}

/// A* with the base heuristic scaled per node by the velocity weight.
pub fn astar_velocity<D: Domain + ?Sized>(
    domain: &D,
    start: &NodeRef,
    goal: &NodeRef,
    base: BaseHeuristic,
    params: WeightParams,
    opts: &SearchOptions,
) -> Result<PlanResult> {
    astar(domain, start, goal, &HeuristicSpec::velocity_weighted(base, params), opts)
}

/// Recomputes the cost of `path` from the domain's edges. `None` when two
/// consecutive nodes are not joined by an edge or a node is blocked.
pub fn path_cost<D: Domain + ?Sized>(domain: &D, path: &[NodeRef], conn: Connectivity) -> Option<f64> {
    let idx: Vec<usize> = path.iter().map(|n| domain.index_of(n).ok()).collect::<Option<_>>()?;
    if idx.iter().any(|&i| domain.is_blocked(i)) {
        return None;
    }
    idx.windows(2).map(|w| domain.edge_cost(w[0], w[1], conn)).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub step: usize,
    pub node: String,
    pub g: f64,
    pub h: f64,
    pub f: f64,
    pub parent: String,
}

/// One row per expansion, numbered from 1.
pub fn expansion_trace(result: &PlanResult) -> Vec<TraceRow> {
    result
        .trace
        .iter()
        .enumerate()
        .map(|(i, e)| TraceRow {
            step: i + 1,
            node: e.label.clone(),
            g: e.g,
            h: e.h,
            f: e.f,
            parent: e.parent_label.clone().unwrap_or_default(),
        })
        .collect()
}

/// The expansion trace as CSV with header `step,node,g,h,f,parent`.
pub fn trace_csv(result: &PlanResult) -> String {
    let mut out = String::from("step,node,g,h,f,parent\n");
    for row in expansion_trace(result) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.step,
            csv_field(&row.node),
            row.g,
            row.h,
            row.f,
            csv_field(&row.parent)
        );
    }
    out
}
