use serde::{Deserialize, Serialize};

use crate::adhesion::{reduce_adhesion, unbreakable_balanced_set};
use crate::config::PipelineConfig;
use crate::error::{invalid, Error, Result};
use crate::graph::{connected_components, Graph, Subgraph};
use crate::origin::{check_unbreakable, Unbreakability};
use crate::params::Epsilon;
use crate::rng::{seeded, Rng};
use crate::set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Standard,
    DepthReduced,
}

impl Variant {
    /// The adhesion target `σ` for this variant.
    pub fn sigma(self, k: usize, epsilon: Epsilon) -> usize {
        let l = epsilon.levels();
        match self {
            Variant::Standard => l * k + k,
            Variant::DepthReduced => 5 * l * k,
        }
    }

    /// Unbreakability threshold guaranteed for every bag.
    pub fn q_bound(self, k: usize, epsilon: Epsilon) -> usize {
        let l = epsilon.levels();
        match self {
            Variant::Standard => 2 * l * k + 3 * k,
            Variant::DepthReduced => k + 2 * self.sigma(k, epsilon),
        }
    }

    /// Adhesion bound guaranteed for every node.
    pub fn adhesion_bound(self, k: usize, epsilon: Epsilon) -> usize {
        2 * self.sigma(k, epsilon)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompNode {
    pub bag: VertexSet,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// A rooted tree of bags over the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTreeDecomposition {
    n: usize,
    nodes: Vec<DecompNode>,
    root: usize,
}

impl RootedTreeDecomposition {
    /// Builds a tree from bags and parent links; exactly one node must have no
    /// parent and the links must form a tree.
    pub fn from_parents(n: usize, bags: Vec<VertexSet>, parents: Vec<Option<usize>>) -> Result<Self> {
        if bags.len() != parents.len() || bags.is_empty() {
            return invalid("bags and parents must be nonempty and of equal length");
        }
        if bags.iter().any(|b| b.universe() != n) {
            return invalid("bag over the wrong universe");
        }
        let roots: Vec<usize> = (0..parents.len()).filter(|&i| parents[i].is_none()).collect();
        if roots.len() != 1 {
            return invalid(format!("expected one root, found {}", roots.len()));
        }
        let mut nodes: Vec<DecompNode> = bags
            .into_iter()
            .zip(&parents)
            .map(|(bag, &parent)| DecompNode {
                bag,
                parent,
                children: Vec::new(),
            })
            .collect();
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= nodes.len() || p == i {
                    return invalid(format!("node {i} has invalid parent {p}"));
                }
                nodes[p].children.push(i);
            }
        }
        let deco = RootedTreeDecomposition {
            n,
            nodes,
            root: roots[0],
        };
        if deco.post_order().len() != deco.nodes.len() {
            return invalid("parent links contain a cycle");
        }
        Ok(deco)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, t: usize) -> &DecompNode {
        &self.nodes[t]
    }

    pub fn nodes(&self) -> &[DecompNode] {
        &self.nodes
    }

    pub fn bag(&self, t: usize) -> &VertexSet {
        &self.nodes[t].bag
    }

    /// Nodes with every child before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        let mut seen = vec![false; self.nodes.len()];
        while let Some((t, done)) = stack.pop() {
            if done {
                out.push(t);
                continue;
            }
            if seen[t] {
                continue;
            }
            seen[t] = true;
            stack.push((t, true));
            for &c in self.nodes[t].children.iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    /// `σ(t) = β(t) ∩ β(parent)`, empty at the root.
    pub fn adhesion(&self, t: usize) -> VertexSet {
        match self.nodes[t].parent {
            None => VertexSet::new(self.n),
            Some(p) => self.nodes[t].bag.intersection(&self.nodes[p].bag),
        }
    }

    /// `γ(t)`: union of the bags in the subtree of `t`.
    pub fn cone(&self, t: usize) -> VertexSet {
        let mut out = VertexSet::new(self.n);
        let mut stack = vec![t];
        while let Some(u) = stack.pop() {
            out.union_with(&self.nodes[u].bag);
            stack.extend(&self.nodes[u].children);
        }
        out
    }

    /// `α(t) = γ(t) \ σ(t)`.
    pub fn alpha(&self, t: usize) -> VertexSet {
        self.cone(t).difference(&self.adhesion(t))
    }

    /// `G_t = G[γ(t)] − E(σ(t))`.
    pub fn subtree_graph(&self, g: &Graph, t: usize) -> Subgraph {
        g.induced_dropping(&self.cone(t), &self.adhesion(t))
    }

    /// Depth of every node (root has depth 0).
    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        let mut order = self.post_order();
        order.reverse();
        for t in order {
            if let Some(p) = self.nodes[t].parent {
                d[t] = d[p] + 1;
            }
        }
        d
    }

    pub fn depth(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }
}

/// Quantities measured on a finished decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub q_bound: usize,
    pub adhesion_bound: usize,
    pub max_adhesion: usize,
    pub depth: usize,
    pub node_count: usize,
    pub total_bag_size: usize,
    pub max_bag: usize,
    pub variant: Variant,
    pub seed: u64,
}

impl DecompositionReport {
    pub fn measure(deco: &RootedTreeDecomposition, k: usize, epsilon: Epsilon, variant: Variant, seed: u64) -> Self {
        let t = 0..deco.len();
        DecompositionReport {
            q_bound: variant.q_bound(k, epsilon),
            adhesion_bound: variant.adhesion_bound(k, epsilon),
            max_adhesion: t.clone().map(|t| deco.adhesion(t).len()).max().unwrap_or(0),
            depth: deco.depth(),
            node_count: deco.len(),
            total_bag_size: t.clone().map(|t| deco.bag(t).len()).sum(),
            max_bag: t.map(|t| deco.bag(t).len()).max().unwrap_or(0),
            variant,
            seed,
        }
    }
}

struct Task {
    h: Subgraph,
    b: VertexSet,
    parent: Option<usize>,
}

/// Builds a rooted tree decomposition whose bags are unbreakable in their
/// subtree graphs and whose adhesions are small. Disconnected graphs get one
/// subtree per component, hung below the root of the first.
pub fn decompose(
    g: &Graph,
    k: usize,
    epsilon: Epsilon,
    variant: Variant,
    config: &PipelineConfig,
    seed: u64,
) -> Result<(RootedTreeDecomposition, DecompositionReport)> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let mut rng = seeded(seed);
    let n = g.n();
    let mut bags: Vec<VertexSet> = Vec::new();
    let mut parents: Vec<Option<usize>> = Vec::new();
    if n == 0 {
        bags.push(VertexSet::new(0));
        parents.push(None);
    }
    let comps = connected_components(g, &g.none());
    let mut first_root = None;
    for comp in comps {
        let h = g.induced(&comp);
        let b = h.graph.none();
        let mut stack = vec![Task { h, b, parent: first_root }];
        let before = bags.len();
        while let Some(task) = stack.pop() {
            let children = step(task, k, epsilon, variant, config, &mut rng, &mut bags, &mut parents)?;
            stack.extend(children.into_iter().rev());
        }
        first_root.get_or_insert(before);
    }
    let deco = RootedTreeDecomposition::from_parents(n, bags, parents)?;
    let report = DecompositionReport::measure(&deco, k, epsilon, variant, seed);
    Ok((deco, report))
}

fn internal(msg: impl Into<String>) -> Error {
    Error::InvalidInput(format!("internal invariant violated: {}", msg.into()))
}

#[allow(clippy::too_many_arguments)]
fn step(
    task: Task,
    k: usize,
    epsilon: Epsilon,
    variant: Variant,
    config: &PipelineConfig,
    rng: &mut Rng,
    bags: &mut Vec<VertexSet>,
    parents: &mut Vec<Option<usize>>,
) -> Result<Vec<Task>> {
    let Task { h, b, parent } = task;
    let hg = &h.graph;
    let l = epsilon.levels();
    let sigma = variant.sigma(k, epsilon);
    let id = bags.len();
    let leaf = |bags: &mut Vec<VertexSet>, parents: &mut Vec<Option<usize>>| {
        bags.push(h.lift(&hg.all()));
        parents.push(parent);
        Ok(Vec::new())
    };
    if variant == Variant::DepthReduced && hg.n() <= 10 * l * k {
        return leaf(bags, parents);
    }
    if b.len() > 2 * sigma {
        return Err(internal(format!("boundary of size {} exceeds 2σ = {}", b.len(), 2 * sigma)));
    }
    let rest = b.complement();
    if !hg.is_connected_within(&rest) {
        return Err(internal("subproblem minus its boundary is disconnected"));
    }
    if hg.neighborhood(&rest) != b {
        return Err(internal("boundary differs from the neighborhood of the interior"));
    }
    let q_check = match variant {
        Variant::Standard => k,
        Variant::DepthReduced => l * k + k,
    };
    let x = if b.len() > sigma {
        match check_unbreakable(hg, &b, q_check, k, &config.limits)? {
            Unbreakability::Breakable(cut) => {
                let x = b.union(&cut.separator());
                debug_assert!(crate::graph::adhesion(hg, &x) < b.len());
                x
            }
            Unbreakability::Unbreakable => reduce_adhesion(hg, &b, k, q_check, epsilon, config, rng)?,
        }
    } else {
        b.union(&unbreakable_balanced_set(hg, k, epsilon, config, rng)?)
    };
    if x == b {
        if hg.n() > 2 * sigma {
            log::warn!("corner case with {} vertices exceeds 2σ = {}", hg.n(), 2 * sigma);
        }
        return leaf(bags, parents);
    }
    bags.push(h.lift(&x));
    parents.push(parent);
    let mut children = Vec::new();
    for d in connected_components(hg, &x) {
        let nd = hg.neighborhood(&d);
        let sub = hg.induced_dropping(&d.union(&nd), &nd);
        let b_child = sub.restrict(&nd);
        children.push(Task {
            h: sub.compose(&h),
            b: b_child,
            parent: Some(id),
        });
    }
    Ok(children)
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    id: usize,
    parent: Option<usize>,
    bag: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct JsonDecomposition {
    n: usize,
    variant: Variant,
    seed: u64,
    nodes: Vec<JsonNode>,
}

/// Serializes to the decomposition JSON format (bags sorted ascending).
pub fn to_json(deco: &RootedTreeDecomposition, variant: Variant, seed: u64) -> String {
    let doc = JsonDecomposition {
        n: deco.n(),
        variant,
        seed,
        nodes: (0..deco.len())
            .map(|t| JsonNode {
                id: t,
                parent: deco.node(t).parent,
                bag: deco.bag(t).to_vec(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("serializable")
}

/// Parses the decomposition JSON format; returns the tree, variant and seed.
pub fn from_json(text: &str) -> Result<(RootedTreeDecomposition, Variant, u64)> {
    let doc: JsonDecomposition =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("decomposition JSON: {e}")))?;
    let mut order: Vec<&JsonNode> = doc.nodes.iter().collect();
    order.sort_by_key(|n| n.id);
    if order.iter().enumerate().any(|(i, n)| n.id != i) {
        return invalid("node ids must be 0..len");
    }
    let mut bags = Vec::new();
    for node in &order {
        if let Some(&v) = node.bag.iter().find(|&&v| v >= doc.n) {
            return invalid(format!("bag of node {} names vertex {v} ≥ n", node.id));
        }
        bags.push(VertexSet::from_iter(doc.n, node.bag.iter().copied()));
    }
    let parents = order.iter().map(|n| n.parent).collect();
    let deco = RootedTreeDecomposition::from_parents(doc.n, bags, parents)?;
    Ok((deco, doc.variant, doc.seed))
}
