use std::collections::VecDeque;

use num_rational::Ratio;

use crate::flow::CapacitatedGraph;
use crate::error::{invalid, Result};
use crate::set::VertexSet;

/// Undirected simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Parallel edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut deg = vec![0usize; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u},{v}) out of range for n={n}"));
            }
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut adj: Vec<Vec<usize>> = deg.into_iter().map(Vec::with_capacity).collect();
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Graph {
        let mut twice = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Graph { adj, m: twice / 2 }
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn none(&self) -> VertexSet {
        VertexSet::new(self.n())
    }

    pub fn set<I: IntoIterator<Item = usize>>(&self, items: I) -> VertexSet {
        VertexSet::from_iter(self.n(), items)
    }

    /// Open neighborhood N(S).
    pub fn neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = self.none();
        for v in s {
            for &u in self.neighbors(v) {
                if !s.contains(u) {
                    out.insert(u);
                }
            }
        }
        out
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.neighbors(v).iter().all(|&u| !s.contains(u)))
    }

    /// Vertices reachable from `start` without entering `blocked`.
    pub fn reach(&self, start: usize, blocked: &VertexSet) -> VertexSet {
        let mut seen = self.none();
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &u in self.neighbors(v) {
                if !blocked.contains(u) && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.reach(0, &self.none()).len() == self.n()
    }

    /// Whether `G[s]` is connected (the empty set counts as connected).
    pub fn is_connected_within(&self, s: &VertexSet) -> bool {
        match s.first() {
            None => true,
            Some(v) => self.reach(v, &s.complement()).len() == s.len(),
        }
    }

    /// `G[keep]` with vertices relabeled in ascending order.
    pub fn induced(&self, keep: &VertexSet) -> Subgraph {
        self.induced_dropping(keep, &self.none())
    }

    /// `G[keep]` minus every edge with both endpoints in `inner`.
    pub fn induced_dropping(&self, keep: &VertexSet, inner: &VertexSet) -> Subgraph {
        let ids = keep.to_vec();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in ids.iter().enumerate() {
            local[v] = i;
        }
        let adj = ids
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .iter()
                    .filter(|&&u| keep.contains(u) && !(inner.contains(u) && inner.contains(v)))
                    .map(|&u| local[u])
                    .collect()
            })
            .collect();
        Subgraph {
            graph: Graph::from_adjacency(adj),
            ids,
            local,
        }
    }
}

/// A graph together with a map from its vertices to those of a parent graph.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: Graph,
    ids: Vec<usize>,
    local: Vec<usize>,
}

impl Subgraph {
    /// Parent id of local vertex `v`.
    pub fn id(&self, v: usize) -> usize {
        self.ids[v]
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn local(&self, parent: usize) -> Option<usize> {
        match self.local.get(parent) {
            Some(&i) if i != usize::MAX => Some(i),
            _ => None,
        }
    }

    pub fn parent_n(&self) -> usize {
        self.local.len()
    }

    /// Maps a local set to the parent universe.
    pub fn lift(&self, s: &VertexSet) -> VertexSet {
        VertexSet::from_iter(self.parent_n(), s.iter().map(|v| self.ids[v]))
    }

    /// Re-targets `self`, whose parent is `outer.graph`, to `outer`'s parent.
    pub fn compose(self, outer: &Subgraph) -> Subgraph {
        let ids: Vec<usize> = self.ids.iter().map(|&v| outer.ids[v]).collect();
        let mut local = vec![usize::MAX; outer.parent_n()];
        for (i, &v) in ids.iter().enumerate() {
            local[v] = i;
        }
        Subgraph {
            graph: self.graph,
            ids,
            local,
        }
    }

    /// The identity map of `g` onto itself.
    pub fn identity(g: &Graph) -> Subgraph {
        Subgraph {
            graph: g.clone(),
            ids: (0..g.n()).collect(),
            local: (0..g.n()).collect(),
        }
    }

    /// Restricts a parent set to local ids, dropping vertices not present.
    pub fn restrict(&self, s: &VertexSet) -> VertexSet {
        VertexSet::from_iter(self.graph.n(), s.iter().filter_map(|v| self.local(v)))
    }
}

/// Components of `G \ removed`, ordered by smallest member.
pub fn connected_components(g: &Graph, removed: &VertexSet) -> Vec<VertexSet> {
    let mut seen = removed.clone();
    let mut out = Vec::new();
    for v in 0..g.n() {
        if !seen.contains(v) {
            let comp = g.reach(v, removed);
            seen.union_with(&comp);
            out.push(comp);
        }
    }
    out
}

/// Largest `|N(C)|` over components `C` of `G \ x`.
pub fn adhesion(g: &Graph, x: &VertexSet) -> usize {
    connected_components(g, x)
        .iter()
        .map(|c| g.neighborhood(c).len())
        .max()
        .unwrap_or(0)
}

/// Every component of `G \ x` has at most `alpha * n` vertices.
pub fn is_balanced(g: &Graph, x: &VertexSet, alpha: Ratio<u64>) -> bool {
    let n = g.n() as u64;
    connected_components(g, x)
        .iter()
        .all(|c| (c.len() as u64) * alpha.denom() <= alpha.numer() * n)
}

/// The torso of `t`: `G[t]` plus a clique on `N(D)` for each component `D`
/// of `G \ t`. Local ids follow ascending order of `t`.
pub fn torso(g: &Graph, t: &VertexSet) -> Subgraph {
    let base = g.induced(t);
    let mut adj: Vec<Vec<usize>> = (0..base.graph.n())
        .map(|v| base.graph.neighbors(v).to_vec())
        .collect();
    for d in connected_components(g, t) {
        let nb: Vec<usize> = g
            .neighborhood(&d)
            .iter()
            .map(|v| base.local(v).expect("neighbor of outside component lies in t"))
            .collect();
        for &a in &nb {
            adj[a].extend(nb.iter().copied().filter(|&b| b != a));
        }
    }
    Subgraph {
        graph: Graph::from_adjacency(adj),
        ids: base.ids,
        local: base.local,
    }
}

/// An ordered pair `(L, R)` with `L ∪ R = V`, both `L\R` and `R\L`
/// nonempty, and no edge between `L\R` and `R\L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexCut {
    left: VertexSet,
    right: VertexSet,
}

impl VertexCut {
    pub fn new(g: &Graph, left: VertexSet, right: VertexSet) -> Result<VertexCut> {
        let cut = VertexCut { left, right };
        match cut.violation(g) {
            None => Ok(cut),
            Some(msg) => invalid(msg),
        }
    }

    /// Cut with the given `L\R` and separator; `R` is everything else plus
    /// the separator.
    pub fn from_parts(g: &Graph, left_only: &VertexSet, separator: &VertexSet) -> Result<VertexCut> {
        let left = left_only.union(separator);
        let right = left_only.complement();
        Self::new(g, left, right)
    }

    pub(crate) fn new_unchecked(left: VertexSet, right: VertexSet) -> VertexCut {
        VertexCut { left, right }
    }

    fn violation(&self, g: &Graph) -> Option<String> {
        if self.left.universe() != g.n() || self.right.universe() != g.n() {
            return Some("cut sides over wrong universe".into());
        }
        if self.left.union(&self.right).len() != g.n() {
            return Some("L ∪ R does not cover V".into());
        }
        let lo = self.left_only();
        let ro = self.right_only();
        if lo.is_empty() || ro.is_empty() {
            return Some("cut has an empty side".into());
        }
        for v in &lo {
            if let Some(&u) = g.neighbors(v).iter().find(|&&u| ro.contains(u)) {
                return Some(format!("edge ({v},{u}) crosses the cut"));
            }
        }
        None
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        self.violation(g).is_none()
    }

    pub fn left(&self) -> &VertexSet {
        &self.left
    }

    pub fn right(&self) -> &VertexSet {
        &self.right
    }

    pub fn separator(&self) -> VertexSet {
        self.left.intersection(&self.right)
    }

    pub fn left_only(&self) -> VertexSet {
        self.left.difference(&self.right)
    }

    pub fn right_only(&self) -> VertexSet {
        self.right.difference(&self.left)
    }

    pub fn size(&self) -> usize {
        self.left.intersection_len(&self.right)
    }

    /// Separator capacity; `None` if it contains an infinite-capacity vertex.
    pub fn capacity(&self, cg: &CapacitatedGraph) -> Option<u64> {
        cg.capacity_of(&self.separator())
    }

    pub fn swapped(&self) -> VertexCut {
        VertexCut {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// Ordered disjointness in both directions: `(L\R) ∩ L' = ∅` and
    /// `(L'\R') ∩ L = ∅`.
    pub fn disjoint_from(&self, other: &VertexCut) -> bool {
        self.left_only().is_disjoint(&other.left) && other.left_only().is_disjoint(&self.left)
    }
}

/// Whether every pair of cuts in the list is disjoint.
pub fn pairwise_disjoint(cuts: &[VertexCut]) -> bool {
    (0..cuts.len()).all(|i| (i + 1..cuts.len()).all(|j| cuts[i].disjoint_from(&cuts[j])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn components_of_path() {
        let g = path(3);
        let comps = connected_components(&g, &g.set([1]));
        assert_eq!(comps.iter().map(|c| c.to_vec()).collect::<Vec<_>>(), vec![vec![0], vec![2]]);
        assert!(connected_components(&g, &g.all()).is_empty());
    }

    #[test]
    fn grid_middle_column() {
        let mut e = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let v = r * 3 + c;
                if c < 2 {
                    e.push((v, v + 1));
                }
                if r < 2 {
                    e.push((v, v + 3));
                }
            }
        }
        let g = Graph::from_edges(9, &e).unwrap();
        let comps = connected_components(&g, &g.set([1, 4, 7]));
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn adhesion_examples() {
        let g = path(5);
        assert_eq!(adhesion(&g, &g.set([2])), 1);
        assert_eq!(adhesion(&g, &g.all()), 0);
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert_eq!(adhesion(&c6, &c6.set([0, 3])), 2);
    }

    #[test]
    fn balance_examples() {
        let g = path(7);
        let half = Ratio::new(1, 2);
        assert!(is_balanced(&g, &g.set([3]), half));
        assert!(!is_balanced(&g, &g.set([1]), half));
        let star = Graph::from_edges(10, &(1..10).map(|i| (0, i)).collect::<Vec<_>>()).unwrap();
        assert!(!is_balanced(&star, &star.none(), half));
    }

    #[test]
    fn torso_examples() {
        let g = path(3);
        let h = torso(&g, &g.set([0, 2]));
        assert_eq!(h.graph.m(), 1);
        assert!(h.graph.has_edge(0, 1));
        let star = Graph::from_edges(6, &(1..6).map(|i| (0, i)).collect::<Vec<_>>()).unwrap();
        let h = torso(&star, &star.set(1..6));
        assert_eq!(h.graph.m(), 10);
        let h = torso(&star, &star.all());
        assert_eq!(h.graph, star);
    }

    #[test]
    fn cut_validation() {
        let g = path(3);
        assert!(VertexCut::new(&g, g.set([0, 1]), g.set([1, 2])).is_ok());
        assert!(VertexCut::new(&g, g.set([0]), g.set([1, 2])).is_err());
        assert!(VertexCut::new(&g, g.set([0, 1, 2]), g.set([1, 2])).is_err());
    }

    #[test]
    fn rejects_self_loops() {
        assert!(Graph::from_edges(2, &[(1, 1)]).is_err());
        assert_eq!(Graph::from_edges(2, &[(0, 1), (1, 0)]).unwrap().m(), 1);
    }
}
