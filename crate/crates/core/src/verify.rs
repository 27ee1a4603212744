use std::fmt;

use itertools::Itertools;
use num_rational::Ratio;
use serde::Serialize;

use crate::config::Limits;
use crate::decomp::RootedTreeDecomposition;
use crate::error::{Error, Result};
use crate::flow::{bounded_vertex_maxflow, CapacitatedGraph, Capacity, FlowValue};
use crate::graph::{adhesion, connected_components, is_balanced, pairwise_disjoint, Graph, VertexCut};
use crate::origin::{check_unbreakable, Unbreakability};
use crate::pwaycut::CutValue;
use crate::set::VertexSet;
use crate::ssmc::MincutCover;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// First offending item, when failed.
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn compact(&self) -> bool {
        self.check("compactness").is_some_and(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAIL" };
            write!(f, "{:<24} {}", c.name, mark)?;
            if let Some(ce) = &c.counterexample {
                write!(f, "  ({ce})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn check(name: &'static str, bad: Option<String>) -> Check {
    Check {
        name,
        passed: bad.is_none(),
        counterexample: bad,
    }
}

/// Structural checks on a rooted tree decomposition, recomputed from `g`.
pub fn validate_decomposition(
    g: &Graph,
    deco: &RootedTreeDecomposition,
    adhesion_bound: Option<usize>,
) -> ValidationReport {
    let n = g.n();
    let mut checks = Vec::new();
    if deco.n() != n {
        checks.push(check("universe", Some(format!("decomposition over {} vertices, graph has {n}", deco.n()))));
        return ValidationReport { checks };
    }
    let bags: Vec<&VertexSet> = (0..deco.len()).map(|t| deco.bag(t)).collect();

    let cover = (0..n).find(|&v| !bags.iter().any(|b| b.contains(v)));
    checks.push(check("vertex coverage", cover.map(|v| format!("vertex {v}"))));

    let edge = g.edges().find(|&(u, v)| !bags.iter().any(|b| b.contains(u) && b.contains(v)));
    checks.push(check("edge coverage", edge.map(|(u, v)| format!("edge {u}-{v}"))));

    // nodes holding v form a subtree iff exactly one of them has a parent
    // not holding v
    let conn = (0..n).find(|&v| {
        let tops = (0..deco.len())
            .filter(|&t| bags[t].contains(v))
            .filter(|&t| deco.node(t).parent.is_none_or(|p| !bags[p].contains(v)))
            .count();
        tops > 1
    });
    checks.push(check("subtree connectivity", conn.map(|v| format!("vertex {v}"))));

    if let Some(bound) = adhesion_bound {
        let bad = (0..deco.len()).find(|&t| deco.adhesion(t).len() > bound);
        checks.push(check(
            "adhesion bound",
            bad.map(|t| format!("node {t} has adhesion {} > {bound}", deco.adhesion(t).len())),
        ));
    }

    let mut bad = None;
    for t in 0..deco.len() {
        if deco.node(t).parent.is_none() {
            continue;
        }
        let alpha = deco.alpha(t);
        let sigma = deco.adhesion(t);
        if alpha.is_empty() || !g.is_connected_within(&alpha) {
            bad = Some(format!("node {t}: subtree part not connected"));
            break;
        }
        if g.neighborhood(&alpha) != sigma {
            bad = Some(format!("node {t}: neighbourhood differs from adhesion"));
            break;
        }
    }
    checks.push(check("compactness", bad));

    let strict = (0..deco.len()).find(|&t| deco.bag(t).len() <= deco.adhesion(t).len() && deco.node(t).parent.is_some());
    checks.push(check("strictness", strict.map(|t| format!("node {t}"))));

    ValidationReport { checks }
}

#[derive(Clone, Debug)]
pub enum NodeStatus {
    Unbreakable,
    Breakable(VertexCut),
    /// The exact check exceeded its budget.
    SizeGuard(String),
}

#[derive(Clone, Debug)]
pub struct UnbreakabilityReport {
    pub q: usize,
    pub k: usize,
    pub nodes: Vec<NodeStatus>,
}

impl UnbreakabilityReport {
    pub fn passed(&self) -> bool {
        self.nodes.iter().all(|s| matches!(s, NodeStatus::Unbreakable))
    }

    /// First node that is not certified unbreakable.
    pub fn first_failure(&self) -> Option<(usize, &NodeStatus)> {
        self.nodes
            .iter()
            .enumerate()
            .find(|(_, s)| !matches!(s, NodeStatus::Unbreakable))
    }
}

/// Checks every bag is `(q,k)`-unbreakable in its subtree graph `G_t`.
/// Witness cuts are in the ids of `g`.
pub fn verify_subtree_unbreakability(
    g: &Graph,
    deco: &RootedTreeDecomposition,
    q: usize,
    k: usize,
    limits: &Limits,
) -> UnbreakabilityReport {
    let nodes = (0..deco.len())
        .map(|t| {
            let bag = deco.bag(t);
            if bag.len() <= q {
                return NodeStatus::Unbreakable;
            }
            let sub = deco.subtree_graph(g, t);
            let w = sub.restrict(bag);
            match check_unbreakable(&sub.graph, &w, q, k, limits) {
                Ok(Unbreakability::Unbreakable) => NodeStatus::Unbreakable,
                Ok(Unbreakability::Breakable(cut)) => {
                    // lift to g: vertices outside γ(t) join both sides
                    let outside = sub.lift(&sub.graph.all()).complement();
                    let l = sub.lift(cut.left()).union(&outside);
                    let r = sub.lift(cut.right()).union(&outside);
                    NodeStatus::Breakable(VertexCut::new_unchecked(l, r))
                }
                Err(e) => NodeStatus::SizeGuard(e.to_string()),
            }
        })
        .collect();
    UnbreakabilityReport { q, k, nodes }
}

fn guard(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        return Err(Error::SizeGuard { what, size, limit });
    }
    Ok(())
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
        a != b
    }
}

/// Minimum p-way cut of size at most `k`, by trying every edge subset in
/// order of size.
pub fn brute_pway_cut(g: &Graph, p: usize, k: usize, limits: &Limits) -> Result<CutValue> {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let m = edges.len();
    let mut total: u64 = 0;
    for r in 0..=k.min(m) {
        total = total.saturating_add(binom(m, r));
    }
    if total > limits.pway_subsets {
        return Err(Error::SizeGuard {
            what: "edge subsets",
            size: total.min(usize::MAX as u64) as usize,
            limit: limits.pway_subsets as usize,
        });
    }
    for r in 0..=k.min(m) {
        for removed in (0..m).combinations(r) {
            let mut dsu = Dsu::new(g.n());
            let mut comps = g.n();
            let mut next = 0;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if next < removed.len() && removed[next] == i {
                    next += 1;
                    continue;
                }
                if dsu.union(u, v) {
                    comps -= 1;
                }
            }
            if comps >= p {
                return Ok(CutValue::Feasible(r));
            }
        }
    }
    Ok(CutValue::Infeasible)
}

fn binom(n: usize, r: usize) -> u64 {
    let mut acc: u64 = 1;
    for i in 0..r as u64 {
        acc = acc.saturating_mul(n as u64 - i) / (i + 1);
    }
    acc
}

/// `3^n` enumeration of every (L\R, L∩R, R\L) assignment. Returns a
/// witness cut if `w` is `(q,k)`-breakable.
pub fn brute_unbreakability(
    g: &Graph,
    w: &VertexSet,
    q: usize,
    k: usize,
    limits: &Limits,
) -> Result<Unbreakability> {
    let n = g.n();
    guard("vertices", n, limits.brute_vertices)?;
    let mut side = vec![0u8; n];
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for s in side.iter_mut() {
            *s = (c % 3) as u8;
            c /= 3;
        }
        // 0 = left only, 1 = separator, 2 = right only
        let sep = side.iter().filter(|&&s| s == 1).count();
        if sep > k || !side.contains(&0) || !side.contains(&2) {
            continue;
        }
        if g.edges().any(|(u, v)| side[u] ^ side[v] == 2) {
            continue;
        }
        let lw = w.iter().filter(|&v| side[v] != 2).count();
        let rw = w.iter().filter(|&v| side[v] != 0).count();
        if lw > q && rw > q {
            let left = VertexSet::from_iter(n, (0..n).filter(|&v| side[v] != 2));
            let right = VertexSet::from_iter(n, (0..n).filter(|&v| side[v] != 0));
            return Ok(Unbreakability::Breakable(VertexCut::new_unchecked(left, right)));
        }
    }
    Ok(Unbreakability::Unbreakable)
}

/// Net property: for every `S` with `|S| ≤ sigma`, each component of
/// `G \ S` with at least `alpha * n` vertices meets `w`. Returns the first
/// violating `S`.
pub fn brute_net_check(
    g: &Graph,
    w: &VertexSet,
    sigma: usize,
    alpha: Ratio<u64>,
    limits: &Limits,
) -> Result<Option<VertexSet>> {
    let n = g.n();
    guard("vertices", n, limits.brute_vertices)?;
    for r in 0..=sigma.min(n) {
        for s in (0..n).combinations(r) {
            let s = VertexSet::from_iter(n, s);
            for d in connected_components(g, &s) {
                let big = (d.len() as u64) * alpha.denom() >= alpha.numer() * n as u64;
                if big && d.is_disjoint(w) {
                    return Ok(Some(s));
                }
            }
        }
    }
    Ok(None)
}

/// `x` is an `alpha`-balanced `sigma`-origin: every superset of `x` with
/// adhesion at most `sigma` is `alpha`-balanced. Returns the first failing
/// superset.
pub fn brute_origin_check(
    g: &Graph,
    x: &VertexSet,
    sigma: usize,
    alpha: Ratio<u64>,
    limits: &Limits,
) -> Result<Option<VertexSet>> {
    let n = g.n();
    guard("vertices", n, limits.brute_vertices)?;
    let rest: Vec<usize> = x.complement().to_vec();
    for bits in 0u64..1 << rest.len() {
        let mut s = x.clone();
        for (i, &v) in rest.iter().enumerate() {
            if bits >> i & 1 == 1 {
                s.insert(v);
            }
        }
        if adhesion(g, &s) <= sigma && !is_balanced(g, &s, alpha) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Checks the three mincut-cover properties for `cover` with respect to
/// source `s` and sinks `t_star`, with flows recomputed for every sink.
pub fn check_mincut_cover(
    cg: &CapacitatedGraph,
    s: usize,
    t_star: &VertexSet,
    cover: &MincutCover,
) -> Result<Option<String>> {
    let g = &cg.graph;
    let n = g.n();
    let src = VertexSet::singleton(n, s);
    let mut lambda = vec![None; n];
    let bound: u64 = cg
        .caps()
        .iter()
        .map(|c| match c {
            Capacity::Finite(x) => *x as u64,
            Capacity::Inf => 0,
        })
        .sum();
    for t in t_star {
        let v = bounded_vertex_maxflow(cg, &VertexSet::singleton(n, t), &src, bound)?;
        lambda[t] = match v.value {
            FlowValue::Exact(x) => Some(x),
            FlowValue::ExceedsBound => None,
        };
    }
    for (ci, coll) in cover.collections.iter().enumerate() {
        for cut in coll {
            if !cut.is_valid(g) || !cut.right_only().contains(s) {
                return Ok(Some(format!("collection {ci}: cut does not leave s on its far side")));
            }
            let cap = cut.capacity(cg);
            let ok = cut
                .left_only()
                .intersection(t_star)
                .iter()
                .any(|t| lambda[t].is_some() && lambda[t] == cap);
            if !ok {
                return Ok(Some(format!("collection {ci}: cut is not a mincut for any sink")));
            }
        }
        if !pairwise_disjoint(coll) {
            return Ok(Some(format!("collection {ci}: cuts not disjoint")));
        }
    }
    for t in t_star {
        if !cover.cuts().any(|c| c.left_only().contains(t)) {
            return Ok(Some(format!("sink {t} not covered")));
        }
    }
    Ok(None)
}

/// Every separator of size at most `bound` between `a` and `b` (vertices of
/// both sets excluded), by enumeration. Returns the minimum total capacity,
/// or `None` if none fits.
pub fn brute_min_separator(
    cg: &CapacitatedGraph,
    a: &VertexSet,
    b: &VertexSet,
    limits: &Limits,
) -> Result<Option<(u64, Vec<VertexSet>)>> {
    let g = &cg.graph;
    let n = g.n();
    guard("vertices", n, limits.brute_vertices + 4)?;
    let free: Vec<usize> = a.union(b).complement().iter().filter(|&v| cg.capacity(v) != Capacity::Inf).collect();
    let mut best: Option<(u64, Vec<VertexSet>)> = None;
    for bits in 0u64..1 << free.len() {
        let sep = VertexSet::from_iter(n, free.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &v)| v));
        let mut blocked = sep.clone();
        blocked.union_with(b);
        let mut reach = VertexSet::new(n);
        for v in a {
            reach.union_with(&g.reach(v, &blocked));
        }
        let touches = g.neighborhood(&reach).iter().any(|v| b.contains(v)) || !reach.is_disjoint(b);
        if touches {
            continue;
        }
        let cap = cg.capacity_of(&sep).expect("finite");
        match &mut best {
            Some((c, list)) if *c == cap => list.push(sep),
            Some((c, _)) if *c < cap => {}
            _ => best = Some((cap, vec![sep])),
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bag_passes() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let d = RootedTreeDecomposition::from_parents(4, vec![g.all()], vec![None]).unwrap();
        assert!(validate_decomposition(&g, &d, Some(0)).passed());
    }

    #[test]
    fn missing_edge_named() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let bags = vec![g.set([0, 1]), g.set([1])];
        let d = RootedTreeDecomposition::from_parents(3, bags, vec![None, Some(0)]).unwrap();
        let r = validate_decomposition(&g, &d, None);
        let c = r.check("edge coverage").unwrap();
        assert!(!c.passed);
        assert_eq!(c.counterexample.as_deref(), Some("edge 1-2"));
    }

    #[test]
    fn brute_cuts() {
        let c6 = Graph::from_edges(6, &(0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>()).unwrap();
        let l = Limits::default();
        assert_eq!(brute_pway_cut(&c6, 2, 3, &l).unwrap(), CutValue::Feasible(2));
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(brute_pway_cut(&k4, 2, 2, &l).unwrap(), CutValue::Infeasible);
    }

    #[test]
    fn planted_breakable_bag() {
        // two triangles joined by a single vertex
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 6)]).unwrap();
        let d = RootedTreeDecomposition::from_parents(7, vec![g.all()], vec![None]).unwrap();
        let r = verify_subtree_unbreakability(&g, &d, 2, 1, &Limits::default());
        assert!(!r.passed());
        assert!(matches!(r.first_failure(), Some((0, NodeStatus::Breakable(_)))));
    }
}
