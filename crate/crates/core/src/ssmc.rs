use rand::Rng as _;

use crate::error::{invalid, Error, Result};
use crate::flow::{minimal_side_mincut, CapacitatedGraph, Capacity};
use crate::graph::{connected_components, pairwise_disjoint, VertexCut};
use crate::isolating::{isolating_vertex_cuts, IsolatingMode};
use crate::rng::{ceil_log2, floor_log2, Rng};
use crate::set::VertexSet;

/// A family of cut collections; cuts within a collection are pairwise
/// disjoint.
#[derive(Clone, Debug, Default)]
pub struct MincutCover {
    pub collections: Vec<Vec<VertexCut>>,
}

impl MincutCover {
    pub fn width(&self) -> usize {
        self.collections.len()
    }

    pub fn cuts(&self) -> impl Iterator<Item = &VertexCut> {
        self.collections.iter().flatten()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsmcStrategy {
    /// Random sink sampling with isolating cuts at geometric scales.
    Sampled,
    /// One minimal-side flow per sink, packed first-fit into collections.
    Direct,
}

#[derive(Clone, Copy, Debug)]
pub struct SsmcConfig {
    pub strategy: SsmcStrategy,
    /// Middle loop runs `c_mid * ⌈log₂ n⌉²` times.
    pub c_mid: usize,
    pub isolating: IsolatingMode,
}

impl Default for SsmcConfig {
    fn default() -> Self {
        SsmcConfig {
            strategy: SsmcStrategy::Sampled,
            c_mid: 4,
            isolating: IsolatingMode::Fast,
        }
    }
}

/// Width allowed for a cover of `n`-vertex graphs at parameter `k`:
/// `8·k·⌈log₂ n⌉³`.
pub fn width_budget(k: usize, n: usize) -> usize {
    8 * k.max(1) * ceil_log2(n).pow(3)
}

/// Mincut cover for all sinks `t` with `λ(t, s) ≤ k`, and that sink set.
pub fn single_source_mincut_cover(
    cg: &CapacitatedGraph,
    s: usize,
    sinks: &VertexSet,
    k: usize,
    config: &SsmcConfig,
    rng: &mut Rng,
) -> Result<(MincutCover, VertexSet)> {
    let g = &cg.graph;
    if sinks.contains(s) {
        return invalid("source listed among sinks");
    }
    let mut all = sinks.clone();
    all.insert(s);
    for v in &all {
        if let Some(&u) = g.neighbors(v).iter().find(|&&u| all.contains(u)) {
            return Err(Error::PreconditionIndependence(v.min(u), v.max(u)));
        }
        if cg.capacity(v) != Capacity::Inf {
            return invalid(format!("terminal {v} must have infinite capacity"));
        }
    }
    let mut cover = MincutCover::default();
    let mut found = g.none();
    if sinks.is_empty() {
        return Ok((cover, found));
    }
    // Sinks cut off from s by the empty separator.
    let mut zero = Vec::new();
    for comp in connected_components(g, &g.none()) {
        if !comp.contains(s) && !comp.is_disjoint(sinks) {
            found.union_with(&comp.intersection(sinks));
            zero.push(VertexCut::new(g, comp.clone(), comp.complement())?);
        }
    }
    if !zero.is_empty() {
        cover.collections.push(zero);
    }
    match config.strategy {
        SsmcStrategy::Direct => direct(cg, s, sinks, k, &mut cover, &mut found)?,
        SsmcStrategy::Sampled => sampled(cg, s, sinks, k, config, rng, &mut cover, &mut found)?,
    }
    debug_assert!(cover.collections.iter().all(|c| pairwise_disjoint(c)));
    Ok((cover, found))
}

fn direct(
    cg: &CapacitatedGraph,
    s: usize,
    sinks: &VertexSet,
    k: usize,
    cover: &mut MincutCover,
    found: &mut VertexSet,
) -> Result<()> {
    let g = &cg.graph;
    let src = VertexSet::singleton(g.n(), s);
    let first = cover.collections.len();
    for t in sinks {
        if found.contains(t) {
            continue;
        }
        let r = minimal_side_mincut(cg, &VertexSet::singleton(g.n(), t), &src, k as u64)?;
        let Some(cut) = r.mincut else { continue };
        found.insert(t);
        match cover.collections[first..]
            .iter_mut()
            .find(|c| c.iter().all(|d| d.disjoint_from(&cut)))
        {
            Some(c) => c.push(cut),
            None => cover.collections.push(vec![cut]),
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sampled(
    cg: &CapacitatedGraph,
    s: usize,
    sinks: &VertexSet,
    k: usize,
    config: &SsmcConfig,
    rng: &mut Rng,
    cover: &mut MincutCover,
    found: &mut VertexSet,
) -> Result<()> {
    let g = &cg.graph;
    let n = g.n();
    let rounds = config.c_mid * ceil_log2(n).pow(2);
    let scales = floor_log2(n);
    for kp in 1..=k {
        for _ in 0..rounds {
            let pending = sinks.difference(found);
            if pending.is_empty() {
                return Ok(());
            }
            let mut gained = g.none();
            for i in 0..=scales {
                let p = 1.0 / (1u64 << i) as f64;
                let sample = g.set(pending.iter().filter(|_| rng.random_bool(p)));
                if sample.is_empty() {
                    continue;
                }
                let mut w = sample.clone();
                w.insert(s);
                let iso = isolating_vertex_cuts(cg, &w, kp as u64, config.isolating)?;
                let mut kept = Vec::new();
                for c in iso.cuts {
                    if !sample.contains(c.terminal) {
                        continue;
                    }
                    let Some(cut) = c.cut else { continue };
                    if cut.capacity(cg) == Some(kp as u64) {
                        gained.union_with(&cut.left_only().intersection(&pending));
                        kept.push(cut);
                    }
                }
                if !kept.is_empty() {
                    cover.collections.push(kept);
                }
            }
            found.union_with(&gained);
        }
    }
    Ok(())
}
