use crate::error::{invalid, Error, Result};
use crate::flow::{minimal_side_mincut, CapacitatedGraph, Capacity, FlowValue};
use crate::graph::{Graph, VertexCut};
use crate::set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsolatingMode {
    /// Bit-class separators followed by one local flow per terminal.
    Fast,
    /// One global flow per terminal.
    Naive,
}

#[derive(Clone, Debug)]
pub struct IsolatingCut {
    pub terminal: usize,
    pub value: FlowValue,
    /// Present when `value` is within the bound.
    pub cut: Option<VertexCut>,
}

#[derive(Clone, Debug)]
pub struct IsolatingCuts {
    pub cuts: Vec<IsolatingCut>,
    /// Set when a fast-mode cut failed the disjointness check and was
    /// recomputed naively.
    pub fallback_used: bool,
}

/// For each terminal `w`, the minimal-side `w`-`(W\{w})` mincut of value at
/// most `bound`. Returned cuts are pairwise disjoint.
pub fn isolating_vertex_cuts(
    cg: &CapacitatedGraph,
    terminals: &VertexSet,
    bound: u64,
    mode: IsolatingMode,
) -> Result<IsolatingCuts> {
    let g = &cg.graph;
    if terminals.len() < 2 {
        return invalid("isolating cuts need at least two terminals");
    }
    for v in terminals {
        if let Some(&u) = g.neighbors(v).iter().find(|&&u| terminals.contains(u)) {
            return Err(Error::PreconditionIndependence(v.min(u), v.max(u)));
        }
    }
    let mut cuts = match mode {
        IsolatingMode::Naive => terminals
            .iter()
            .map(|w| naive_cut(cg, terminals, w, bound))
            .collect::<Result<Vec<_>>>()?,
        IsolatingMode::Fast => fast_cuts(cg, terminals, bound)?,
    };
    let mut fallback_used = false;
    let bad: Vec<usize> = (0..cuts.len())
        .filter(|&i| {
            (0..cuts.len()).any(|j| {
                i != j
                    && match (&cuts[i].cut, &cuts[j].cut) {
                        (Some(a), Some(b)) => !a.disjoint_from(b),
                        _ => false,
                    }
            })
        })
        .collect();
    for i in bad {
        fallback_used = true;
        log::warn!("isolating cut for {} failed disjointness, recomputing", cuts[i].terminal);
        cuts[i] = naive_cut(cg, terminals, cuts[i].terminal, bound)?;
    }
    Ok(IsolatingCuts {
        cuts,
        fallback_used,
    })
}

fn naive_cut(cg: &CapacitatedGraph, terminals: &VertexSet, w: usize, bound: u64) -> Result<IsolatingCut> {
    let n = cg.graph.n();
    let mut rest = terminals.clone();
    rest.remove(w);
    let r = minimal_side_mincut(cg, &VertexSet::singleton(n, w), &rest, bound)?;
    Ok(IsolatingCut {
        terminal: w,
        value: r.value,
        cut: r.mincut,
    })
}

fn fast_cuts(cg: &CapacitatedGraph, terminals: &VertexSet, bound: u64) -> Result<Vec<IsolatingCut>> {
    let g = &cg.graph;
    let terms = terminals.to_vec();
    let bits = usize::BITS - (terms.len() - 1).leading_zeros();
    let class_bound = bound.saturating_mul(terms.len() as u64);
    let mut removed = g.none();
    for b in 0..bits {
        let a = g.set((0..terms.len()).filter(|i| i >> b & 1 == 0).map(|i| terms[i]));
        let rest = terminals.difference(&a);
        if a.is_empty() || rest.is_empty() {
            continue;
        }
        let r = minimal_side_mincut(cg, &a, &rest, class_bound)?;
        if let Some(cut) = r.mincut {
            removed.union_with(&cut.separator());
        }
    }
    terms
        .iter()
        .map(|&w| local_cut(cg, terminals, w, &removed, bound))
        .collect()
}

fn local_cut(
    cg: &CapacitatedGraph,
    terminals: &VertexSet,
    w: usize,
    removed: &VertexSet,
    bound: u64,
) -> Result<IsolatingCut> {
    let g = &cg.graph;
    let n = g.n();
    let region = g.reach(w, removed);
    let boundary = g.neighborhood(&region);
    let mut others = terminals.intersection(&region);
    others.remove(w);
    if boundary.is_empty() && others.is_empty() {
        // w's component holds no other terminal
        let cut = VertexCut::new(g, region.clone(), region.complement())?;
        return Ok(IsolatingCut {
            terminal: w,
            value: FlowValue::Exact(0),
            cut: Some(cut),
        });
    }
    let sub = g.induced(&region.union(&boundary));
    let hub = sub.graph.n();
    let mut edges: Vec<(usize, usize)> = sub.graph.edges().collect();
    edges.extend(boundary.iter().map(|v| (sub.local(v).unwrap(), hub)));
    let local = Graph::from_edges(hub + 1, &edges)?;
    let mut caps: Vec<Capacity> = sub.ids().iter().map(|&v| cg.capacity(v)).collect();
    caps.push(Capacity::Inf);
    let lcg = CapacitatedGraph::new(local, caps)?;
    let mut sinks = VertexSet::from_iter(hub + 1, others.iter().map(|v| sub.local(v).unwrap()));
    if !boundary.is_empty() {
        sinks.insert(hub);
    }
    let src = VertexSet::singleton(hub + 1, sub.local(w).unwrap());
    let r = minimal_side_mincut(&lcg, &src, &sinks, bound)?;
    let cut = match r.mincut {
        None => None,
        Some(c) => {
            let lift = |s: VertexSet| VertexSet::from_iter(n, s.iter().filter(|&v| v < hub).map(|v| sub.id(v)));
            Some(VertexCut::from_parts(g, &lift(c.left_only()), &lift(c.separator()))?)
        }
    };
    Ok(IsolatingCut {
        terminal: w,
        value: r.value,
        cut,
    })
}
