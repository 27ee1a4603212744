use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::carving::color_family_general;
use crate::config::PipelineConfig;
use crate::decomp::{decompose, RootedTreeDecomposition, Variant};
use crate::error::{invalid, Result};
use crate::graph::{connected_components, Graph};
use crate::params::Epsilon;
use crate::rng::{seeded, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutValue {
    Feasible(usize),
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PwayFamily {
    /// Every bag coloring respecting the adhesion coloring whose crossing
    /// edges and crossing child adhesions number at most `k`. Exact.
    Exhaustive,
    /// Random colorings with class sizes from the color-class bound, at most
    /// `cap` per heavy-color guess. May overestimate.
    Random { cap: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct PwayConfig {
    pub pipeline: PipelineConfig,
    pub family: PwayFamily,
    pub c_fam: f64,
}

impl Default for PwayConfig {
    fn default() -> Self {
        PwayConfig {
            pipeline: PipelineConfig::default(),
            family: PwayFamily::Exhaustive,
            c_fam: 1.0,
        }
    }
}

/// Minimum number of edges whose removal leaves at least `p` components, if
/// that number is at most `k`.
pub fn min_pway_cut(
    g: &Graph,
    p: usize,
    k: usize,
    epsilon: Epsilon,
    config: &PwayConfig,
    seed: u64,
) -> Result<CutValue> {
    if p < 2 {
        return invalid("p must be at least 2");
    }
    let comps = connected_components(g, &g.none());
    if comps.len() >= p {
        return Ok(CutValue::Feasible(0));
    }
    if p > k + comps.len() {
        return Ok(CutValue::Infeasible);
    }
    let mut rng = seeded(seed);
    // best[j] = cheapest way to reach j components overall
    let inf = k + 1;
    let mut best = vec![inf; p + 1];
    best[0] = 0;
    for comp in &comps {
        let h = g.induced(comp).graph;
        let colors = (k + 1).min(p).min(h.n());
        let split: Vec<usize> = if colors <= 1 {
            vec![0]
        } else {
            let (deco, _) = decompose(&h, k.max(1), epsilon, Variant::Standard, &config.pipeline, rng_seed(&mut rng))?;
            let mut solver = PwaySolver::new(&h, &deco, colors, k, config, rng_seed(&mut rng));
            let root = deco.root();
            let v = solver.entry(root, &[]);
            (1..=colors).map(|j| v[(1usize << j) - 1] as usize).collect()
        };
        let mut next = vec![inf; p + 1];
        for (have, &cost) in best.iter().enumerate() {
            if cost > k {
                continue;
            }
            for (j, &c) in split.iter().enumerate() {
                let to = (have + j + 1).min(p);
                next[to] = next[to].min((cost + c).min(inf));
            }
        }
        best = next;
    }
    Ok(if best[p] <= k {
        CutValue::Feasible(best[p])
    } else {
        CutValue::Infeasible
    })
}

fn rng_seed(rng: &mut Rng) -> u64 {
    use rand::RngCore;
    rng.next_u64()
}

struct Child {
    node: usize,
    /// Bag positions of the child's adhesion, in ascending vertex order.
    pos: Vec<usize>,
}

struct NodeInfo {
    bag: Vec<usize>,
    /// Bag positions of this node's adhesion, in ascending vertex order.
    sigma: Vec<usize>,
    in_sigma: Vec<bool>,
    /// Bag edges in `G_t` (excluding those inside the adhesion).
    edges: Vec<(usize, usize)>,
    /// Per position, neighbours in the bag graph where child adhesions are
    /// cliques.
    h_adj: Vec<Vec<usize>>,
    children: Vec<Child>,
}

/// The table `M[t, f, I]`, filled on demand.
pub struct PwaySolver<'a> {
    p: usize,
    k: usize,
    nodes: Vec<NodeInfo>,
    count_adhesions: bool,
    family: PwayFamily,
    c_fam: f64,
    q: usize,
    sigma: usize,
    rng: Rng,
    memo: HashMap<(usize, Vec<u8>), Vec<u8>>,
    _g: &'a Graph,
}

impl<'a> PwaySolver<'a> {
    /// `p` colors, cost cap `k`. Colors are `0..p`.
    pub fn new(
        g: &'a Graph,
        deco: &'a RootedTreeDecomposition,
        p: usize,
        k: usize,
        config: &PwayConfig,
        seed: u64,
    ) -> Self {
        assert!(p <= 16, "too many colors");
        let nodes = (0..deco.len()).map(|t| node_info(g, deco, t)).collect();
        let count_adhesions = crate::verify::validate_decomposition(g, deco, None).compact();
        let kd = k.max(1);
        PwaySolver {
            p,
            k,
            nodes,
            count_adhesions,
            family: config.family,
            c_fam: config.c_fam,
            q: Variant::Standard.q_bound(kd, Epsilon::ONE),
            sigma: Variant::Standard.sigma(kd, Epsilon::ONE),
            rng: seeded(seed),
            memo: HashMap::new(),
            _g: g,
        }
    }

    fn inf(&self) -> u8 {
        (self.k + 1) as u8
    }

    /// Sorted adhesion vertices of `t`; `entry` colorings follow this order.
    pub fn adhesion_vertices(&self, t: usize) -> Vec<usize> {
        let n = &self.nodes[t];
        n.sigma.iter().map(|&i| n.bag[i]).collect()
    }

    /// `M[t, f, I]` for every `I ⊆ [p]` (index = bitmask), saturated at
    /// `k + 1`.
    pub fn entry(&mut self, t: usize, f: &[u8]) -> Vec<u8> {
        if let Some(v) = self.memo.get(&(t, f.to_vec())) {
            return v.clone();
        }
        let v = self.compute(t, f);
        self.memo.insert((t, f.to_vec()), v.clone());
        v
    }

    fn compute(&mut self, t: usize, f: &[u8]) -> Vec<u8> {
        let p = self.p;
        let size = self.nodes[t].bag.len();
        let mut psi = vec![u8::MAX; size];
        for (i, &pos) in self.nodes[t].sigma.iter().enumerate() {
            psi[pos] = f[i];
        }
        let mut used_by_f = 0usize;
        for &c in f {
            used_by_f |= 1 << c;
        }
        let mut best = vec![self.inf(); 1 << p];
        match self.family {
            PwayFamily::Exhaustive => {
                let mut colorings = Vec::new();
                self.enumerate(t, 0, &mut psi, used_by_f, &mut colorings);
                for g2 in colorings {
                    let c = heavy(&g2, p);
                    self.flip_dp(t, &g2, c, &mut best);
                }
                // Fresh colors used canonically; close under relabelings.
                best = symmetrize(&best, p, used_by_f, self.inf());
            }
            PwayFamily::Random { cap } => {
                let bag_n = size;
                let mut guesses: Vec<u8> = f.to_vec();
                if let Some(fresh) = (0..p as u8).find(|c| used_by_f >> c & 1 == 0) {
                    guesses.push(fresh);
                }
                guesses.sort_unstable();
                guesses.dedup();
                let mut sizes = vec![3 * self.q; p - 1];
                sizes.push(self.q * self.k.max(1) * self.sigma);
                for c in guesses {
                    let others: Vec<u8> = (0..p as u8).filter(|&x| x != c).collect();
                    let fam = color_family_general(bag_n, &sizes, self.nodes.len().max(2), self.c_fam, cap, &mut self.rng);
                    for func in fam {
                        let mut g2: Vec<u8> = (0..bag_n)
                            .map(|i| {
                                let class = func.color(i) as usize - 1;
                                if class == p - 1 {
                                    c
                                } else {
                                    others[class]
                                }
                            })
                            .collect();
                        for (i, &pos) in self.nodes[t].sigma.iter().enumerate() {
                            g2[pos] = f[i];
                        }
                        if !g2.contains(&c) {
                            continue;
                        }
                        self.flip_dp(t, &g2, c, &mut best);
                    }
                }
            }
        }
        // A coloring realizing I realizes every subset of I.
        for mask in (0..1usize << p).rev() {
            for b in 0..p {
                if mask >> b & 1 == 1 {
                    let sub = mask & !(1 << b);
                    best[sub] = best[sub].min(best[mask]);
                }
            }
        }
        best
    }

    /// Bag colorings extending the fixed adhesion colors with at most `k`
    /// crossing bag edges (and crossing child adhesions, when compact).
    /// Fresh colors appear in increasing order.
    fn enumerate(&self, t: usize, pos: usize, psi: &mut Vec<u8>, used: usize, out: &mut Vec<Vec<u8>>) {
        if self.crossings(t, psi) > self.k {
            return;
        }
        let info = &self.nodes[t];
        if pos == info.bag.len() {
            out.push(psi.clone());
            return;
        }
        if info.in_sigma[pos] {
            self.enumerate(t, pos + 1, psi, used, out);
            return;
        }
        let fresh = (0..self.p).find(|&c| used >> c & 1 == 0);
        for c in 0..self.p {
            if used >> c & 1 == 0 && Some(c) != fresh {
                continue;
            }
            psi[pos] = c as u8;
            self.enumerate(t, pos + 1, psi, used | 1 << c, out);
        }
        psi[pos] = u8::MAX;
    }

    fn crossings(&self, t: usize, psi: &[u8]) -> usize {
        let info = &self.nodes[t];
        let mut count = info
            .edges
            .iter()
            .filter(|&&(a, b)| psi[a] != u8::MAX && psi[b] != u8::MAX && psi[a] != psi[b])
            .count();
        if self.count_adhesions {
            for ch in &info.children {
                let mut seen = u8::MAX;
                for &i in &ch.pos {
                    if psi[i] == u8::MAX {
                        continue;
                    }
                    if seen == u8::MAX {
                        seen = psi[i];
                    } else if seen != psi[i] {
                        count += 1;
                        break;
                    }
                }
            }
        }
        count
    }

    /// Flip-set DP for one bag coloring `g2` with heavy color `c`, folded
    /// into `best`.
    fn flip_dp(&mut self, t: usize, g2: &[u8], c: u8, best: &mut [u8]) {
        let p = self.p;
        let inf = self.inf();
        let info = &self.nodes[t];
        let size = info.bag.len();
        // components of H restricted to vertices not colored c
        let mut comp = vec![usize::MAX; size];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for s in 0..size {
            if g2[s] == c || comp[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &u in &info.h_adj[v] {
                    if g2[u] != c && comp[u] == usize::MAX {
                        comp[u] = id;
                        members.push(u);
                    }
                }
            }
            comps.push(members);
        }
        struct Part {
            flip_cost: usize,
            colors: usize,
            forced: bool,
            children: Vec<usize>,
        }
        let mut parts: Vec<Part> = comps
            .iter()
            .map(|m| {
                let mut colors = 0;
                for &v in m {
                    colors |= 1 << g2[v];
                }
                Part {
                    flip_cost: 0,
                    colors,
                    forced: m.iter().any(|&v| info.in_sigma[v]),
                    children: Vec::new(),
                }
            })
            .collect();
        for &(a, b) in &info.edges {
            match (comp[a], comp[b]) {
                (x, y) if x == y && x != usize::MAX => {
                    if g2[a] != g2[b] {
                        parts[x].flip_cost += 1;
                    }
                }
                (x, y) => {
                    if x != usize::MAX {
                        parts[x].flip_cost += 1;
                    }
                    if y != usize::MAX {
                        parts[y].flip_cost += 1;
                    }
                }
            }
        }
        let mut loose = Vec::new();
        for (ci, ch) in info.children.iter().enumerate() {
            let owners: Vec<usize> = ch.pos.iter().map(|&i| comp[i]).filter(|&x| x != usize::MAX).collect();
            match owners.first() {
                None => loose.push(ci),
                Some(&o) => {
                    debug_assert!(owners.iter().all(|&x| x == o), "child adhesion meets two components");
                    parts[o].children.push(ci);
                }
            }
        }
        let child_nodes: Vec<(usize, Vec<u8>, Vec<u8>)> = info
            .children
            .iter()
            .map(|ch| {
                let f0 = vec![c; ch.pos.len()];
                let f1: Vec<u8> = ch.pos.iter().map(|&i| g2[i]).collect();
                (ch.node, f0, f1)
            })
            .collect();
        let full = (1usize << p) - 1;
        let mask_c = full & !(1 << c);
        let mut cur = vec![inf; 1 << p];
        cur[0] = 0;
        for ci in loose {
            let (node, f0, _) = &child_nodes[ci];
            let m = self.entry(*node, f0);
            cur = convolve(&cur, &m, mask_c, inf);
        }
        for part in &parts {
            let mut flipped = vec![inf; 1 << p];
            let fc = part.flip_cost.min(inf as usize) as u8;
            for mask in 0..1usize << p {
                if mask & !mask_c == 0 && mask & !part.colors == 0 {
                    flipped[mask] = fc;
                }
            }
            let mut kept = vec![inf; 1 << p];
            if !part.forced {
                kept[0] = 0;
            }
            for &ci in &part.children {
                let (node, f0, f1) = &child_nodes[ci];
                let m1 = self.entry(*node, f1);
                flipped = convolve(&flipped, &m1, mask_c, inf);
                if !part.forced {
                    let m0 = self.entry(*node, f0);
                    kept = convolve(&kept, &m0, mask_c, inf);
                }
            }
            let a = convolve(&cur, &flipped, mask_c, inf);
            let b = convolve(&cur, &kept, mask_c, inf);
            cur = a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect();
        }
        for (mask, slot) in best.iter_mut().enumerate() {
            let v = cur[mask & mask_c];
            if v < *slot {
                *slot = v;
            }
        }
    }
}

/// Min-plus subset convolution restricted to masks inside `within`:
/// `out[I] = min over J ⊆ I of a[I\J] + b[J]`.
fn convolve(a: &[u8], b: &[u8], within: usize, inf: u8) -> Vec<u8> {
    let mut out = vec![inf; a.len()];
    for mask in 0..a.len() {
        if mask & !within != 0 {
            continue;
        }
        let mut sub = mask;
        loop {
            let v = a[mask ^ sub].saturating_add(b[sub]).min(inf);
            if v < out[mask] {
                out[mask] = v;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
    }
    out
}

/// Most frequent color, smallest on ties.
fn heavy(g2: &[u8], p: usize) -> u8 {
    let mut count = vec![0usize; p];
    for &c in g2 {
        count[c as usize] += 1;
    }
    (0..p).max_by(|&a, &b| count[a].cmp(&count[b]).then(b.cmp(&a))).unwrap() as u8
}

/// Closes a cost vector under permutations of the colors not in `fixed`.
fn symmetrize(v: &[u8], p: usize, fixed: usize, inf: u8) -> Vec<u8> {
    let free: Vec<usize> = (0..p).filter(|&c| fixed >> c & 1 == 0).collect();
    let mut out = vec![inf; v.len()];
    for (mask, &x) in v.iter().enumerate() {
        if x >= inf {
            continue;
        }
        // any free colors may be swapped for any others of the same count
        let base = mask & fixed;
        let cnt = free.iter().filter(|&&c| mask >> c & 1 == 1).count();
        for choice in itertools::Itertools::combinations(free.iter().copied(), cnt) {
            let m = choice.iter().fold(base, |acc, &c| acc | 1 << c);
            out[m] = out[m].min(x);
        }
    }
    out
}

fn node_info(g: &Graph, deco: &RootedTreeDecomposition, t: usize) -> NodeInfo {
    let bag = deco.bag(t).to_vec();
    let pos_of = |v: usize| bag.binary_search(&v).unwrap();
    let adh = deco.adhesion(t);
    let sigma: Vec<usize> = adh.iter().map(pos_of).collect();
    let mut in_sigma = vec![false; bag.len()];
    for &i in &sigma {
        in_sigma[i] = true;
    }
    let mut edges = Vec::new();
    for (i, &u) in bag.iter().enumerate() {
        for &v in g.neighbors(u) {
            if v > u {
                if let Ok(j) = bag.binary_search(&v) {
                    if !(in_sigma[i] && in_sigma[j]) {
                        edges.push((i, j));
                    }
                }
            }
        }
    }
    let mut h_adj: Vec<Vec<usize>> = vec![Vec::new(); bag.len()];
    for &(a, b) in &edges {
        h_adj[a].push(b);
        h_adj[b].push(a);
    }
    let children: Vec<Child> = deco
        .node(t)
        .children
        .iter()
        .map(|&c| Child {
            node: c,
            pos: deco.adhesion(c).iter().map(pos_of).collect(),
        })
        .collect();
    for ch in &children {
        for &a in &ch.pos {
            for &b in &ch.pos {
                if a != b {
                    h_adj[a].push(b);
                }
            }
        }
    }
    for l in h_adj.iter_mut() {
        l.sort_unstable();
        l.dedup();
    }
    NodeInfo {
        bag,
        sigma,
        in_sigma,
        edges,
        h_adj,
        children,
    }
}
