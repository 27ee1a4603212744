#![allow(dead_code)]

use proptest::prelude::*;
use unbreak_core::{Graph, VertexSet};

/// Random simple graph on `lo..=hi` vertices.
pub fn graph(lo: usize, hi: usize, density: f64) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(move |n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(proptest::bool::weighted(density), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

pub fn connected_graph(lo: usize, hi: usize, density: f64) -> impl Strategy<Value = Graph> {
    graph(lo, hi, density).prop_filter("connected", |g| g.is_connected())
}

/// Subset of `0..n` from a bitmask.
pub fn subset(n: usize, mask: u64) -> VertexSet {
    VertexSet::from_iter(n, (0..n).filter(|&v| mask >> (v % 64) & 1 == 1))
}

/// Brute force vertex connectivity between `a` and `b` in a unit-capacity
/// graph, by trying every separator in order of size. `None` if adjacent or
/// overlapping.
pub fn brute_connectivity(g: &Graph, a: &VertexSet, b: &VertexSet) -> Option<usize> {
    let n = g.n();
    if !a.is_disjoint(b) || g.neighborhood(a).intersection_len(b) > 0 {
        return None;
    }
    let free: Vec<usize> = (0..n).filter(|&v| !a.contains(v) && !b.contains(v)).collect();
    let mut best = usize::MAX;
    for mask in 0u64..1 << free.len() {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        let mut blocked = VertexSet::from_iter(n, free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v));
        blocked.union_with(b);
        let mut reach = VertexSet::new(n);
        for v in a {
            reach.union_with(&g.reach(v, &blocked));
        }
        if g.neighborhood(&reach).intersection_len(b) == 0 {
            best = size;
        }
    }
    Some(best)
}
