use std::collections::VecDeque;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexCut};
use crate::set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Capacity {
    Finite(u32),
    Inf,
}

/// A graph with positive vertex capacities.
#[derive(Clone, Debug)]
pub struct CapacitatedGraph {
    pub graph: Graph,
    caps: Vec<Capacity>,
}

impl CapacitatedGraph {
    pub fn new(graph: Graph, caps: Vec<Capacity>) -> Result<Self> {
        if caps.len() != graph.n() {
            return invalid("capacity vector length differs from vertex count");
        }
        if caps.contains(&Capacity::Finite(0)) {
            return invalid("capacities must be positive");
        }
        Ok(CapacitatedGraph { graph, caps })
    }

    pub fn unit(graph: Graph) -> Self {
        let caps = vec![Capacity::Finite(1); graph.n()];
        CapacitatedGraph { graph, caps }
    }

    pub fn capacity(&self, v: usize) -> Capacity {
        self.caps[v]
    }

    pub fn caps(&self) -> &[Capacity] {
        &self.caps
    }

    pub fn set_capacity(&mut self, v: usize, c: Capacity) {
        assert_ne!(c, Capacity::Finite(0));
        self.caps[v] = c;
    }

    /// Total capacity of `s`, or `None` if it contains an infinite vertex.
    pub fn capacity_of(&self, s: &VertexSet) -> Option<u64> {
        let mut total = 0u64;
        for v in s {
            match self.caps[v] {
                Capacity::Finite(c) => total += c as u64,
                Capacity::Inf => return None,
            }
        }
        Some(total)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowValue {
    Exact(u64),
    ExceedsBound,
}

impl FlowValue {
    pub fn exact(self) -> Option<u64> {
        match self {
            FlowValue::Exact(v) => Some(v),
            FlowValue::ExceedsBound => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FlowResult {
    pub value: FlowValue,
    pub mincut: Option<VertexCut>,
    pub paths: Option<Vec<Vec<usize>>>,
}

/// Residual network for the split-vertex reduction. Node `2v` is `v_in`,
/// `2v+1` is `v_out`; the two super endpoints follow.
struct Network {
    nodes: usize,
    /// Arcs leaving node `u` are `list[start[u]..start[u + 1]]`, in
    /// insertion order.
    start: Vec<usize>,
    list: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<u64>,
    orig: Vec<u64>,
}

impl Network {
    fn with_nodes(nodes: usize, arcs: usize) -> Self {
        Network {
            nodes,
            start: Vec::new(),
            list: Vec::new(),
            to: Vec::with_capacity(2 * arcs),
            cap: Vec::with_capacity(2 * arcs),
            orig: Vec::with_capacity(2 * arcs),
        }
    }

    fn arc(&mut self, u: usize, v: usize, c: u64) {
        self.to.push(v);
        self.cap.push(c);
        self.orig.push(c);
        self.to.push(u);
        self.cap.push(0);
        self.orig.push(0);
    }

    fn finish(&mut self) {
        let mut start = vec![0usize; self.nodes + 1];
        for a in 0..self.to.len() {
            start[self.to[a ^ 1] + 1] += 1;
        }
        for u in 0..self.nodes {
            start[u + 1] += start[u];
        }
        let mut fill = start.clone();
        let mut list = vec![0; self.to.len()];
        for a in 0..self.to.len() {
            let u = self.to[a ^ 1];
            list[fill[u]] = a;
            fill[u] += 1;
        }
        self.start = start;
        self.list = list;
    }

    fn out(&self, u: usize) -> &[usize] {
        &self.list[self.start[u]..self.start[u + 1]]
    }

    /// Pushes flow from `s` to `t` until it reaches `limit` or no augmenting
    /// path remains. Returns the flow value.
    fn max_flow(&mut self, s: usize, t: usize, limit: u64) -> u64 {
        let nodes = self.nodes;
        let mut flow = 0;
        let mut pred = vec![usize::MAX; nodes];
        let mut queue = VecDeque::new();
        while flow < limit {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            queue.clear();
            queue.push_back(s);
            pred[s] = usize::MAX - 1;
            'bfs: while let Some(u) = queue.pop_front() {
                for &a in self.out(u) {
                    let v = self.to[a];
                    if self.cap[a] > 0 && pred[v] == usize::MAX {
                        pred[v] = a;
                        if v == t {
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if pred[t] == usize::MAX {
                break;
            }
            let mut push = limit - flow;
            let mut v = t;
            while v != s {
                let a = pred[v];
                push = push.min(self.cap[a]);
                v = self.to[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = pred[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                v = self.to[a ^ 1];
            }
            flow += push;
        }
        flow
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            for &a in self.out(u) {
                let v = self.to[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Splits the current flow into `s`-`t` node sequences, removing cycles.
    fn decompose(&self, s: usize, t: usize) -> Vec<Vec<usize>> {
        let mut flow: Vec<u64> = (0..self.to.len())
            .map(|a| self.orig[a].saturating_sub(self.cap[a]))
            .collect();
        let mut paths = Vec::new();
        loop {
            let mut path = vec![s];
            let mut arcs = Vec::new();
            let mut pos = vec![usize::MAX; self.nodes];
            pos[s] = 0;
            let mut u = s;
            while u != t {
                let Some(&a) = self.out(u).iter().find(|&&a| self.orig[a] > 0 && flow[a] > 0) else {
                    return paths;
                };
                let v = self.to[a];
                if pos[v] != usize::MAX {
                    // cancel the cycle and resume from v
                    let start = pos[v];
                    for &b in &arcs[start..] {
                        flow[b] -= 1;
                    }
                    flow[a] -= 1;
                    for &node in &path[start + 1..] {
                        pos[node] = usize::MAX;
                    }
                    path.truncate(start + 1);
                    arcs.truncate(start);
                    u = v;
                    continue;
                }
                pos[v] = path.len();
                path.push(v);
                arcs.push(a);
                u = v;
            }
            for &a in &arcs {
                flow[a] -= 1;
            }
            paths.push(path);
        }
    }
}

fn check_terminals(g: &Graph, sources: &VertexSet, sinks: &VertexSet) -> Result<()> {
    if sources.is_empty() || sinks.is_empty() {
        return invalid("flow endpoints must be nonempty");
    }
    if !sources.is_disjoint(sinks) {
        return invalid("sources and sinks overlap");
    }
    for v in sources {
        if g.neighbors(v).iter().any(|&u| sinks.contains(u)) {
            return Err(Error::PreconditionEdge);
        }
    }
    Ok(())
}

struct Solved {
    net: Network,
    value: u64,
    limit: u64,
    super_s: usize,
    super_t: usize,
}

/// With `through_ends`, flow must also pass through the capacity of its first
/// and last vertex.
fn solve(
    cg: &CapacitatedGraph,
    sources: &VertexSet,
    sinks: &VertexSet,
    limit: u64,
    through_ends: bool,
) -> Solved {
    let g = &cg.graph;
    let n = g.n();
    let (super_s, super_t) = (2 * n, 2 * n + 1);
    let mut net = Network::with_nodes(2 * n + 2, n + 2 * g.m() + sources.len() + sinks.len());
    for v in 0..n {
        let c = match cg.capacity(v) {
            Capacity::Finite(c) => (c as u64).min(limit),
            Capacity::Inf => limit,
        };
        net.arc(2 * v, 2 * v + 1, c);
        for &u in g.neighbors(v) {
            net.arc(2 * v + 1, 2 * u, limit);
        }
    }
    let (enter, leave) = if through_ends { (0, 1) } else { (1, 0) };
    for v in sources {
        net.arc(super_s, 2 * v + enter, limit);
    }
    for v in sinks {
        net.arc(2 * v + leave, super_t, limit);
    }
    net.finish();
    let value = net.max_flow(super_s, super_t, limit);
    Solved {
        net,
        value,
        limit,
        super_s,
        super_t,
    }
}

impl Solved {
    /// Source-minimal cut read off residual reachability.
    fn source_minimal_cut(&self, n: usize, sources: &VertexSet) -> VertexCut {
        let seen = self.net.reachable(self.super_s);
        let mut left_only = sources.clone();
        let mut sep = VertexSet::new(n);
        for v in 0..n {
            if seen[2 * v + 1] {
                left_only.insert(v);
            }
        }
        for v in 0..n {
            if seen[2 * v] && !left_only.contains(v) {
                sep.insert(v);
            }
        }
        VertexCut::new_unchecked(left_only.union(&sep), left_only.complement())
    }

    fn paths(&self) -> Vec<Vec<usize>> {
        self.net
            .decompose(self.super_s, self.super_t)
            .into_iter()
            .map(|p| {
                let mut out: Vec<usize> = Vec::new();
                for node in p {
                    if node == self.super_s || node == self.super_t {
                        continue;
                    }
                    let v = node / 2;
                    if out.last() != Some(&v) {
                        out.push(v);
                    }
                }
                out
            })
            .collect()
    }

    fn exceeded(&self) -> bool {
        self.value >= self.limit
    }
}

fn bounded(
    cg: &CapacitatedGraph,
    sources: &VertexSet,
    sinks: &VertexSet,
    bound: u64,
    want_paths: bool,
) -> Result<FlowResult> {
    check_terminals(&cg.graph, sources, sinks)?;
    let solved = solve(cg, sources, sinks, bound + 1, false);
    if solved.exceeded() {
        return Ok(FlowResult {
            value: FlowValue::ExceedsBound,
            mincut: None,
            paths: None,
        });
    }
    let cut = solved.source_minimal_cut(cg.graph.n(), sources);
    debug_assert!(cut.is_valid(&cg.graph));
    debug_assert_eq!(cut.capacity(cg), Some(solved.value));
    Ok(FlowResult {
        value: FlowValue::Exact(solved.value),
        mincut: Some(cut),
        paths: want_paths.then(|| solved.paths()),
    })
}

/// Maximum flow between two vertex sets, capped at `bound`. Returns an exact
/// value and a mincut when the flow is at most `bound`.
pub fn bounded_vertex_maxflow(
    cg: &CapacitatedGraph,
    sources: &VertexSet,
    sinks: &VertexSet,
    bound: u64,
) -> Result<FlowResult> {
    bounded(cg, sources, sinks, bound, false)
}

/// As [`bounded_vertex_maxflow`], also returning a path decomposition of the
/// flow (vertex-disjoint when finite capacities are 1).
pub fn bounded_vertex_maxflow_with_paths(
    cg: &CapacitatedGraph,
    sources: &VertexSet,
    sinks: &VertexSet,
    bound: u64,
) -> Result<FlowResult> {
    bounded(cg, sources, sinks, bound, true)
}

/// The unique mincut minimizing `L\R`.
pub fn minimal_side_mincut(
    cg: &CapacitatedGraph,
    sources: &VertexSet,
    sinks: &VertexSet,
    bound: u64,
) -> Result<FlowResult> {
    bounded(cg, sources, sinks, bound, false)
}

/// The unique mincut minimizing `R\L` (closest to the sinks).
pub fn sink_side_mincut(
    cg: &CapacitatedGraph,
    sources: &VertexSet,
    sinks: &VertexSet,
    bound: u64,
) -> Result<FlowResult> {
    let mut r = bounded(cg, sinks, sources, bound, false)?;
    r.mincut = r.mincut.map(|c| c.swapped());
    Ok(r)
}

/// `count` vertex-disjoint paths inside `g[within]`, each from a distinct
/// vertex of `start_set` to a vertex of `end_set`. A start vertex that lies in
/// `end_set` forms a one-vertex path.
pub fn disjoint_paths_certificate(
    g: &Graph,
    start_set: &VertexSet,
    end_set: &VertexSet,
    within: &VertexSet,
    count: usize,
) -> Option<Vec<Vec<usize>>> {
    if count == 0 {
        return Some(Vec::new());
    }
    let sub = g.induced(within);
    let unit = CapacitatedGraph::unit(sub.graph.clone());
    let starts = sub.restrict(start_set);
    let ends = sub.restrict(end_set);
    if starts.len() < count || ends.is_empty() {
        return None;
    }
    let solved = solve(&unit, &starts, &ends, count as u64, true);
    if solved.value < count as u64 {
        return None;
    }
    let paths = solved
        .paths()
        .into_iter()
        .map(|p| p.into_iter().map(|v| sub.id(v)).collect())
        .collect();
    Some(paths)
}
