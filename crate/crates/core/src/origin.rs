use itertools::Itertools;
use num_rational::Ratio;

use crate::bitgraph::{count_and, from_set, to_set, BitGraph};
use crate::config::Limits;
use crate::error::{invalid, Error, Result};
use crate::flow::{bounded_vertex_maxflow, CapacitatedGraph};
use crate::graph::{connected_components, Graph, VertexCut};
use crate::rng::Rng;
use crate::set::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unbreakability {
    Unbreakable,
    /// A cut `(L,R)` with `|L∩R| ≤ k`, `|L∩W| > q` and `|R∩W| > q`.
    Breakable(VertexCut),
}

impl Unbreakability {
    pub fn is_unbreakable(&self) -> bool {
        matches!(self, Unbreakability::Unbreakable)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStrategy {
    /// Whichever exact method the cost model prefers.
    Auto,
    /// Split `W` into a forced-separator part and two sides, one flow per
    /// split.
    Partitions,
    /// Enumerate every separator of size at most `k`.
    Separators,
}

fn binom(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn separator_cost(g: &Graph, k: usize) -> f64 {
    let n = g.n();
    let per = (n * n.div_ceil(64).max(1) + n + g.m()) as f64;
    (0..=k.min(n)).map(|s| binom(n, s)).sum::<f64>() * per
}

fn partition_cost(g: &Graph, w: usize, k: usize) -> f64 {
    let per = ((g.n() + g.m()) * (k + 1)) as f64;
    (0..=k.min(w))
        .map(|s| binom(w, s) * 2f64.powi(w as i32 - s as i32 - 1))
        .sum::<f64>()
        * per
}

/// Decides whether `w` is `(q,k)`-unbreakable in `g`.
pub fn check_unbreakable(g: &Graph, w: &VertexSet, q: usize, k: usize, limits: &Limits) -> Result<Unbreakability> {
    check_unbreakable_with(g, w, q, k, CheckStrategy::Auto, limits)
}

pub fn check_unbreakable_with(
    g: &Graph,
    w: &VertexSet,
    q: usize,
    k: usize,
    strategy: CheckStrategy,
    limits: &Limits,
) -> Result<Unbreakability> {
    // |L∩W| + |R∩W| ≤ |W| + |S∩W|, so small sets cannot break.
    if w.len() + k.min(w.len()) < 2 * q + 2 {
        return Ok(Unbreakability::Unbreakable);
    }
    let partitions_ok = q >= k && w.len() <= limits.partition_terminals;
    let chosen = match strategy {
        CheckStrategy::Auto => {
            let sep = separator_cost(g, k);
            let part = if partitions_ok { partition_cost(g, w.len(), k) } else { f64::INFINITY };
            let best = sep.min(part);
            if best > limits.unbreakable_work as f64 {
                return Err(Error::SizeGuard {
                    what: "unbreakability check",
                    size: w.len(),
                    limit: limits.partition_terminals,
                });
            }
            if part < sep {
                CheckStrategy::Partitions
            } else {
                CheckStrategy::Separators
            }
        }
        s => s,
    };
    match chosen {
        CheckStrategy::Partitions => {
            if w.len() > limits.partition_terminals {
                return Err(Error::SizeGuard {
                    what: "unbreakability partitions",
                    size: w.len(),
                    limit: limits.partition_terminals,
                });
            }
            if q < k {
                return invalid("partition strategy needs q ≥ k");
            }
            by_partitions(g, w, q, k)
        }
        _ => Ok(by_separators(g, w, q, k)),
    }
}

fn by_partitions(g: &Graph, w: &VertexSet, q: usize, k: usize) -> Result<Unbreakability> {
    let terms = w.to_vec();
    for s in 0..=k.min(terms.len()) {
        for forced in (0..terms.len()).combinations(s) {
            let forced_set = g.set(forced.iter().map(|&i| terms[i]));
            let rest: Vec<usize> = terms.iter().copied().filter(|v| !forced_set.contains(*v)).collect();
            if rest.len() < 2 {
                continue;
            }
            let sub = g.induced(&forced_set.complement());
            let cg = CapacitatedGraph::unit(sub.graph.clone());
            let local: Vec<usize> = rest.iter().map(|&v| sub.local(v).unwrap()).collect();
            let free = rest.len() - 1;
            // rest[0] always sits on the left; Gray-code order over the others.
            for i in 0..(1u64 << free) {
                let mask = i ^ (i >> 1);
                let left_n = 1 + mask.count_ones() as usize;
                let right_n = rest.len() - left_n;
                if left_n + s <= q || right_n + s <= q || right_n == 0 {
                    continue;
                }
                let mut a = sub.graph.none();
                let mut b = sub.graph.none();
                a.insert(local[0]);
                for j in 0..free {
                    if mask >> j & 1 == 1 {
                        a.insert(local[j + 1]);
                    } else {
                        b.insert(local[j + 1]);
                    }
                }
                if a.iter().any(|v| sub.graph.neighbors(v).iter().any(|&u| b.contains(u))) {
                    continue;
                }
                let r = bounded_vertex_maxflow(&cg, &a, &b, (k - s) as u64)?;
                if let Some(cut) = r.mincut {
                    let left = sub.lift(cut.left()).union(&forced_set);
                    let right = sub.lift(cut.right()).union(&forced_set);
                    return Ok(Unbreakability::Breakable(VertexCut::new(g, left, right)?));
                }
            }
        }
    }
    Ok(Unbreakability::Unbreakable)
}

fn by_separators(g: &Graph, w: &VertexSet, q: usize, k: usize) -> Unbreakability {
    let n = g.n();
    let bg = BitGraph::new(g);
    let full = bg.full();
    let wbits = from_set(bg.words(), w);
    for s in 0..=k.min(n) {
        for sep in (0..n).combinations(s) {
            let sw = sep.iter().filter(|&&v| w.contains(v)).count();
            let outside = w.len() - sw;
            let lo = (q + 1).saturating_sub(sw);
            if outside < 2 * lo {
                continue;
            }
            let mut alive = full.clone();
            for &v in &sep {
                alive[v >> 6] &= !(1 << (v & 63));
            }
            let comps = bg.components(&alive);
            if comps.len() < 2 {
                continue;
            }
            let weights: Vec<usize> = comps.iter().map(|c| count_and(c, &wbits)).collect();
            if let Some(side) = split(&weights, lo) {
                let sep_set = g.set(sep.iter().copied());
                let mut left = sep_set.clone();
                let mut right = sep_set;
                for (i, c) in comps.iter().enumerate() {
                    let cs = to_set(n, c);
                    if side[i] {
                        left.union_with(&cs);
                    } else {
                        right.union_with(&cs);
                    }
                }
                return Unbreakability::Breakable(VertexCut::new_unchecked(left, right));
            }
        }
    }
    Unbreakability::Unbreakable
}

/// Splits items into two nonempty groups whose weights are both at least
/// `lo`; `true` marks the first group.
fn split(weights: &[usize], lo: usize) -> Option<Vec<bool>> {
    let total: usize = weights.iter().sum();
    if lo == 0 {
        let mut side = vec![false; weights.len()];
        side[0] = true;
        return Some(side);
    }
    if total < 2 * lo {
        return None;
    }
    // from[x] = (item, previous sum) of the first way to reach sum x
    let mut from: Vec<Option<(usize, usize)>> = vec![None; total + 1];
    let mut reached = vec![false; total + 1];
    reached[0] = true;
    for (i, &wt) in weights.iter().enumerate() {
        if wt == 0 {
            continue;
        }
        for x in (wt..=total).rev() {
            if !reached[x] && reached[x - wt] {
                reached[x] = true;
                from[x] = Some((i, x - wt));
            }
        }
    }
    let x = (lo..=total - lo).find(|&x| reached[x])?;
    let mut side = vec![false; weights.len()];
    let mut cur = x;
    while cur > 0 {
        let (i, prev) = from[cur].unwrap();
        side[i] = true;
        cur = prev;
    }
    Some(side)
}

/// Net size `⌈c · (σ/α) · log₂(1/α)⌉`, at least 1.
pub fn net_size(sigma: usize, alpha: Ratio<u64>, c_net: f64) -> usize {
    let a = *alpha.numer() as f64 / *alpha.denom() as f64;
    ((c_net * sigma as f64 / a * (1.0 / a).log2()).ceil() as usize).max(1)
}

/// A uniformly random vertex subset of the net size, or all of `V` when that
/// size reaches `n`.
pub fn sample_net(g: &Graph, sigma: usize, alpha: Ratio<u64>, c_net: f64, rng: &mut Rng) -> VertexSet {
    let size = net_size(sigma, alpha, c_net);
    if size >= g.n() {
        return g.all();
    }
    let mut picked = rand::seq::index::sample(rng, g.n(), size).into_vec();
    picked.sort_unstable();
    g.set(picked)
}

#[derive(Clone, Copy, Debug)]
pub struct OriginConfig {
    pub c_net: f64,
    pub limits: Limits,
}

impl Default for OriginConfig {
    fn default() -> Self {
        OriginConfig {
            c_net: 2.0,
            limits: Limits::default(),
        }
    }
}

/// A `(k,k)`-unbreakable set grown down from a random net; with constant
/// probability it is a ½-balanced `σ`-origin.
pub fn balanced_origin(g: &Graph, k: usize, sigma: usize, config: &OriginConfig, rng: &mut Rng) -> Result<VertexSet> {
    if k > sigma {
        return invalid("balanced_origin needs k ≤ sigma");
    }
    let net = sample_net(g, sigma, Ratio::new(1, 2), config.c_net, rng);
    let mut x = net.clone();
    loop {
        match check_unbreakable(g, &x, k, k, &config.limits)? {
            Unbreakability::Unbreakable => return Ok(x),
            Unbreakability::Breakable(cut) => {
                let cut = smaller_side_first(cut);
                let before = x.len();
                x.difference_with(cut.left());
                x.union_with(&cut.separator());
                debug_assert!(x.len() < before);
                debug_assert!(net_vertices_in_small_components(g, &net, &x));
            }
        }
    }
}

/// Orients a cut so `|L| ≤ |R|`, ties going to the lexicographically smaller
/// side.
fn smaller_side_first(cut: VertexCut) -> VertexCut {
    use std::cmp::Ordering;
    match cut.left().len().cmp(&cut.right().len()) {
        Ordering::Less => cut,
        Ordering::Greater => cut.swapped(),
        Ordering::Equal => {
            if cut.left().lex_cmp(cut.right()) == Ordering::Greater {
                cut.swapped()
            } else {
                cut
            }
        }
    }
}

fn net_vertices_in_small_components(g: &Graph, net: &VertexSet, x: &VertexSet) -> bool {
    connected_components(g, x)
        .iter()
        .all(|c| c.is_disjoint(net) || 2 * c.len() <= g.n())
}
