use std::cell::OnceCell;
use std::collections::BTreeSet;

use rand::Rng as _;

use crate::config::Limits;
use crate::error::{invalid, Error, Result};
use crate::flow::{disjoint_paths_certificate, minimal_side_mincut, sink_side_mincut, CapacitatedGraph, Capacity};
use crate::graph::{adhesion, torso, Graph, Subgraph, VertexCut};
use crate::rng::Rng;
use crate::set::VertexSet;
use crate::ssmc::{single_source_mincut_cover, SsmcConfig, SsmcStrategy};

/// Terminals `T`, the protected set `X ⊆ T`, and the cut budget `k'`.
pub struct WitnessContext<'a> {
    pub g: &'a Graph,
    pub t_set: VertexSet,
    pub x_set: VertexSet,
    pub k_prime: usize,
    torso: OnceCell<Subgraph>,
}

impl<'a> WitnessContext<'a> {
    pub fn new(g: &'a Graph, t_set: VertexSet, x_set: VertexSet, k_prime: usize) -> Result<Self> {
        if !x_set.is_subset(&t_set) {
            return invalid("X must be a subset of T");
        }
        Ok(WitnessContext {
            g,
            t_set,
            x_set,
            k_prime,
            torso: OnceCell::new(),
        })
    }

    pub fn torso(&self) -> &Subgraph {
        self.torso.get_or_init(|| torso(self.g, &self.t_set))
    }
}

/// `|L∩R| ≤ k'`, `|L∩T| > |L∩R|` and `X ⊆ R`.
pub fn is_witness(ctx: &WitnessContext, cut: &VertexCut) -> bool {
    let s = cut.size();
    s <= ctx.k_prime && cut.left().intersection_len(&ctx.t_set) > s && ctx.x_set.is_subset(cut.right())
}

/// A witness whose `(L\R)∩T` is connected in the torso of `T`.
pub fn is_connected_witness(ctx: &WitnessContext, cut: &VertexCut) -> bool {
    if !is_witness(ctx, cut) {
        return false;
    }
    let h = ctx.torso();
    let part = h.restrict(&cut.left_only().intersection(&ctx.t_set));
    h.graph.is_connected_within(&part)
}

/// All carvable vertices, by enumerating every assignment of vertices to
/// `L\R`, `L∩R`, `R\L`.
pub fn carvable_oracle(ctx: &WitnessContext, limits: &Limits) -> Result<VertexSet> {
    let g = ctx.g;
    let n = g.n();
    if n > limits.carvable_vertices {
        return Err(Error::SizeGuard {
            what: "carvable oracle",
            size: n,
            limit: limits.carvable_vertices,
        });
    }
    let mut out = g.none();
    let total = 3usize.pow(n as u32);
    let mut digits = vec![0u8; n];
    for code in 0..total {
        let mut c = code;
        for d in digits.iter_mut() {
            *d = (c % 3) as u8;
            c /= 3;
        }
        // 0: L\R, 1: L∩R, 2: R\L
        if digits.iter().filter(|&&d| d == 1).count() > ctx.k_prime {
            continue;
        }
        if !digits.contains(&0) || !digits.contains(&2) {
            continue;
        }
        if ctx.x_set.iter().any(|v| digits[v] == 0) {
            continue;
        }
        if g.edges().any(|(u, v)| digits[u] ^ digits[v] == 2) {
            continue;
        }
        let left = g.set((0..n).filter(|&v| digits[v] < 2));
        let right = g.set((0..n).filter(|&v| digits[v] > 0));
        let cut = VertexCut::new_unchecked(left, right);
        let part = cut.left_only().intersection(&ctx.t_set);
        if part.is_subset(&out) {
            continue;
        }
        if is_connected_witness(ctx, &cut) {
            out.union_with(&part);
        }
    }
    Ok(out)
}

/// `(T\L) ∪ (L∩R)`.
pub fn carve_one(t_set: &VertexSet, cut: &VertexCut) -> VertexSet {
    t_set.difference(cut.left()).union(&cut.separator())
}

/// `T ∪ ⋃(L_i∩R_i) \ ⋃((L_i\R_i)∩T)`.
pub fn carve_many(t_set: &VertexSet, cuts: &[VertexCut]) -> VertexSet {
    let mut added = t_set.clone();
    let mut removed = VertexSet::new(t_set.universe());
    for c in cuts {
        added.union_with(&c.separator());
        removed.union_with(&c.left_only().intersection(t_set));
    }
    added.difference(&removed)
}

/// Replaces each witness by a lean one inside it, via a mincut between
/// `L∩T` and `L∩R` in `G[L]` without the edges inside `L∩R`. The cut closest
/// to `L∩R` is taken.
pub fn make_lean(ctx: &WitnessContext, cuts: &[VertexCut]) -> Result<Vec<VertexCut>> {
    cuts.iter().map(|c| lean_one(ctx, c)).collect()
}

fn lean_one(ctx: &WitnessContext, cut: &VertexCut) -> Result<VertexCut> {
    let g = ctx.g;
    let sep = cut.separator();
    let sub = g.induced_dropping(cut.left(), &sep);
    let ln = sub.graph.n();
    let (src, dst) = (ln, ln + 1);
    let mut edges: Vec<(usize, usize)> = sub.graph.edges().collect();
    for v in cut.left().intersection(&ctx.t_set).iter() {
        edges.push((src, sub.local(v).unwrap()));
    }
    for v in &sep {
        edges.push((sub.local(v).unwrap(), dst));
    }
    let local = Graph::from_edges(ln + 2, &edges)?;
    let mut caps = vec![Capacity::Finite(1); ln + 2];
    caps[src] = Capacity::Inf;
    caps[dst] = Capacity::Inf;
    let lcg = CapacitatedGraph::new(local, caps)?;
    let r = sink_side_mincut(
        &lcg,
        &VertexSet::singleton(ln + 2, src),
        &VertexSet::singleton(ln + 2, dst),
        sep.len() as u64,
    )?;
    let lc = r.mincut.expect("the separator bounds the local flow");
    let lift = |s: &VertexSet| VertexSet::from_iter(g.n(), s.iter().filter(|&v| v < ln).map(|v| sub.id(v)));
    let left = lift(lc.left());
    let right = lift(lc.right()).union(&cut.right_only());
    let lean = VertexCut::new(g, left, right)?;
    debug_assert!(is_witness(ctx, &lean));
    debug_assert!(is_lean(ctx, &lean));
    Ok(lean)
}

/// `|L∩R|` vertex-disjoint paths in `G[L]` from `L∩R` to `L∩T`.
pub fn is_lean(ctx: &WitnessContext, cut: &VertexCut) -> bool {
    let sep = cut.separator();
    disjoint_paths_certificate(ctx.g, &sep, &cut.left().intersection(&ctx.t_set), cut.left(), sep.len()).is_some()
}

/// A coloring of a universe `0..len` with colors `1..=ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorFunction {
    colors: Vec<u8>,
}

impl ColorFunction {
    pub fn new(colors: Vec<u8>) -> Self {
        ColorFunction { colors }
    }

    pub fn color(&self, i: usize) -> u8 {
        self.colors[i]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn class(&self, c: u8) -> Vec<usize> {
        (0..self.colors.len()).filter(|&i| self.colors[i] == c).collect()
    }
}

/// Size of a random family hitting every disjoint tuple `(A_1..A_ℓ)` with
/// `|A_i| ≤ a_i` with probability `1 - n^{-c}`: `⌈c·ln n / p⌉` where `p` is
/// the success probability of one function at `p_i ∝ a_i`.
pub fn family_size(universe: usize, sizes: &[usize], n_ambient: usize, c_fam: f64) -> f64 {
    let a: Vec<usize> = sizes.iter().map(|&s| s.min(universe)).collect();
    let total: usize = a.iter().sum();
    if total == 0 {
        return 1.0;
    }
    let log_p: f64 = a
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| s as f64 * (s as f64 / total as f64).ln())
        .sum();
    let log_n = (n_ambient.max(2) as f64).ln();
    (c_fam * log_n * (-log_p).exp()).ceil().max(1.0)
}

/// Random family over `ℓ = sizes.len()` colors, truncated to `cap`
/// functions. Colors returned are `1..=ℓ`.
pub fn color_family_general(
    universe: usize,
    sizes: &[usize],
    n_ambient: usize,
    c_fam: f64,
    cap: usize,
    rng: &mut Rng,
) -> Vec<ColorFunction> {
    let last = sizes.len() as u8;
    let a: Vec<usize> = sizes.iter().map(|&s| s.min(universe)).collect();
    let total: usize = a.iter().sum();
    if total == 0 {
        return vec![ColorFunction::new(vec![last; universe])];
    }
    let count = family_size(universe, sizes, n_ambient, c_fam).min(cap as f64) as usize;
    let mut cumulative = Vec::with_capacity(a.len());
    let mut acc = 0.0;
    for &s in &a {
        acc += s as f64 / total as f64;
        cumulative.push(acc);
    }
    (0..count.max(1))
        .map(|_| {
            let colors = (0..universe)
                .map(|_| {
                    let x: f64 = rng.random();
                    cumulative.iter().position(|&c| x < c).unwrap_or(a.len() - 1) as u8 + 1
                })
                .collect();
            ColorFunction::new(colors)
        })
        .collect()
}

/// Three-color family with bounds `(a1, a2, a3)`.
pub fn color_family(
    universe: usize,
    a1: usize,
    a2: usize,
    a3: usize,
    n_ambient: usize,
    c_fam: f64,
    cap: usize,
    rng: &mut Rng,
) -> Vec<ColorFunction> {
    if a1 == 0 && a2 == 0 {
        return vec![ColorFunction::new(vec![3; universe])];
    }
    color_family_general(universe, &[a1, a2, a3], n_ambient, c_fam, cap, rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyStrategy {
    /// Colors each small torso-connected set `Z ⊆ T\X` with 1 and each small
    /// subset of its torso neighborhood with 2, smallest sets first.
    Structural,
    /// Independent random colorings with `p_i ∝ a_i`.
    Random,
}

#[derive(Clone, Copy, Debug)]
pub struct CoverConfig {
    pub family: FamilyStrategy,
    pub max_colorings: usize,
    pub c_fam: f64,
    pub ssmc: SsmcConfig,
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig {
            family: FamilyStrategy::Structural,
            max_colorings: 4096,
            c_fam: 1.0,
            ssmc: SsmcConfig {
                strategy: SsmcStrategy::Direct,
                ..SsmcConfig::default()
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct WitnessCover {
    pub q_set: VertexSet,
    pub best: Vec<VertexCut>,
    /// Number of color functions tried.
    pub colorings: usize,
    /// Total number of cut collections produced across all colorings.
    pub collections: usize,
    /// The structural family was cut short by `max_colorings`.
    pub truncated: bool,
}

/// Structural family over torso-local ids; returns the functions and whether
/// the enumeration was cut short.
fn structural_family(h: &Graph, x_local: &VertexSet, k_prime: usize, cap: usize) -> (Vec<ColorFunction>, bool) {
    let nt = h.n();
    let mut out = Vec::new();
    let mut level: BTreeSet<Vec<usize>> = (0..nt).filter(|&v| !x_local.contains(v)).map(|v| vec![v]).collect();
    let mut size = 1;
    while !level.is_empty() && size <= k_prime + 1 {
        let mut next = BTreeSet::new();
        for z in &level {
            let zs = VertexSet::from_iter(nt, z.iter().copied());
            let nb = h.neighborhood(&zs).to_vec();
            let max_w = if size <= k_prime { k_prime.min(nb.len()) } else { 0 };
            for wsize in 0..=max_w {
                for w in itertools::Itertools::combinations(nb.iter().copied(), wsize) {
                    if out.len() >= cap {
                        return (out, true);
                    }
                    let mut colors = vec![3u8; nt];
                    for &v in z {
                        colors[v] = 1;
                    }
                    for &v in &w {
                        colors[v] = 2;
                    }
                    out.push(ColorFunction::new(colors));
                }
            }
            if size <= k_prime {
                for &u in &nb {
                    if !x_local.contains(u) {
                        let mut bigger = z.clone();
                        bigger.push(u);
                        bigger.sort_unstable();
                        next.insert(bigger);
                    }
                }
            }
        }
        level = next;
        size += 1;
    }
    (out, false)
}

/// Disjoint lean witnesses found through color coding, and the set `Q` of
/// vertices they can carve.
pub fn witness_cover(ctx: &WitnessContext, config: &CoverConfig, rng: &mut Rng) -> Result<WitnessCover> {
    let g = ctx.g;
    let n = g.n();
    let kp = ctx.k_prime;
    let mut result = WitnessCover {
        q_set: g.none(),
        best: Vec::new(),
        colorings: 0,
        collections: 0,
        truncated: false,
    };
    if ctx.x_set.is_empty() {
        return invalid("witness cover needs a nonempty X");
    }
    if ctx.t_set == ctx.x_set {
        return Ok(result);
    }
    let adh = adhesion(g, &ctx.t_set);
    if adh > kp {
        return invalid(format!("adhesion {adh} of T exceeds k' = {kp}"));
    }
    let h = ctx.torso();
    let nt = h.graph.n();
    let x_local = h.restrict(&ctx.x_set);
    let family = match config.family {
        FamilyStrategy::Structural => {
            let (f, truncated) = structural_family(&h.graph, &x_local, kp, config.max_colorings);
            result.truncated = truncated;
            f
        }
        FamilyStrategy::Random => {
            color_family(nt, kp + 1, kp, 2 * kp.pow(3), n, config.c_fam, config.max_colorings, rng)
        }
    };
    result.colorings = family.len();
    let base: Vec<(usize, usize)> = g.edges().collect();
    let mut witnesses: Vec<Vec<VertexCut>> = Vec::new();
    for f in &family {
        for coll in cuts_for_coloring(ctx, h, f, &base, config, rng)? {
            result.collections += 1;
            let kept: Vec<VertexCut> = coll.into_iter().filter(|c| is_witness(ctx, c)).collect();
            for c in &kept {
                result.q_set.union_with(&c.left_only().intersection(&ctx.t_set));
            }
            if !kept.is_empty() {
                witnesses.push(kept);
            }
        }
    }
    let best = best_collection(ctx, &witnesses);
    result.best = make_lean(ctx, &best)?;
    Ok(result)
}

fn coverage(ctx: &WitnessContext, c: &VertexCut) -> usize {
    c.left_only().intersection_len(&ctx.t_set)
}

/// The collection covering the most terminals (earliest on ties), extended
/// greedily by other witnesses disjoint from everything chosen.
fn best_collection(ctx: &WitnessContext, witnesses: &[Vec<VertexCut>]) -> Vec<VertexCut> {
    let score = |coll: &Vec<VertexCut>| coll.iter().map(|c| coverage(ctx, c)).sum::<usize>();
    let Some(start) = (0..witnesses.len()).max_by(|&a, &b| score(&witnesses[a]).cmp(&score(&witnesses[b])).then(b.cmp(&a)))
    else {
        return Vec::new();
    };
    let mut chosen = witnesses[start].clone();
    let mut rest: Vec<&VertexCut> = witnesses
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != start)
        .flat_map(|(_, c)| c.iter())
        .collect();
    rest.sort_by_key(|c| std::cmp::Reverse(coverage(ctx, c)));
    for c in rest {
        if chosen.iter().all(|d| d.disjoint_from(c)) {
            chosen.push(c.clone());
        }
    }
    chosen
}

/// Builds the auxiliary graph for one coloring, runs the mincut cover, and
/// returns each collection with super vertices stripped.
fn cuts_for_coloring(
    ctx: &WitnessContext,
    h: &Subgraph,
    f: &ColorFunction,
    base: &[(usize, usize)],
    config: &CoverConfig,
    rng: &mut Rng,
) -> Result<Vec<Vec<VertexCut>>> {
    let g = ctx.g;
    let n = g.n();
    let nt = h.graph.n();
    let ones = VertexSet::from_iter(nt, f.class(1));
    if ones.is_empty() {
        return Ok(Vec::new());
    }
    let comps: Vec<VertexSet> = crate::graph::connected_components(&h.graph, &ones.complement());
    let s = n + comps.len();
    let mut edges = base.to_vec();
    for (i, c) in comps.iter().enumerate() {
        let mut attach = c.clone();
        for v in h.graph.neighborhood(c).iter() {
            if f.color(v) == 2 {
                attach.insert(v);
            }
        }
        edges.extend(attach.iter().map(|v| (h.id(v), n + i)));
    }
    edges.extend(ctx.x_set.iter().map(|v| (v, s)));
    let aux = Graph::from_edges(s + 1, &edges)?;
    let mut caps = vec![Capacity::Finite(1); s + 1];
    for v in ones.iter() {
        caps[h.id(v)] = Capacity::Inf;
    }
    for c in caps.iter_mut().skip(n) {
        *c = Capacity::Inf;
    }
    let mut cg = CapacitatedGraph::new(aux, caps)?;
    let sinks = VertexSet::from_iter(s + 1, n..s);
    let (cover, t_star) = single_source_mincut_cover(&cg, s, &sinks, ctx.k_prime, &config.ssmc, rng)?;
    let strip = |v: &VertexSet| VertexSet::from_iter(n, v.iter().filter(|&u| u < n));
    let mut out: Vec<Vec<VertexCut>> = cover
        .collections
        .iter()
        .map(|coll| {
            coll.iter()
                .map(|c| VertexCut::new_unchecked(strip(c.left()), strip(c.right())))
                .filter(|c| c.is_valid(g))
                .collect()
        })
        .collect();
    // A mincut through all of X can leave nothing of G beyond it. For such
    // sinks, retry with one more vertex pinned to the far side: first each
    // X vertex, then any vertex that may lie outside L.
    if ctx.x_set.len() <= ctx.k_prime {
        let src = VertexSet::singleton(s + 1, s);
        for t in &t_star {
            let comp: Vec<usize> = comps[t - n].iter().map(|v| h.id(v)).collect();
            if out.iter().flatten().any(|c| c.left_only().contains(comp[0])) {
                continue;
            }
            let near_c = g.neighborhood(&VertexSet::from_iter(n, comp.iter().copied()));
            let attached = cg.graph.neighbors(t).to_vec();
            let pins = ctx.x_set.iter().chain(
                (0..n).filter(|&v| !ctx.x_set.contains(v) && !near_c.contains(v) && attached.binary_search(&v).is_err()),
            );
            for r in pins {
                let saved = cg.capacity(r);
                cg.set_capacity(r, Capacity::Inf);
                let mut far = src.clone();
                if !ctx.x_set.contains(r) {
                    far.insert(r);
                }
                let res = minimal_side_mincut(&cg, &VertexSet::singleton(s + 1, t), &far, ctx.k_prime as u64);
                cg.set_capacity(r, saved);
                let Some(c) = res?.mincut else { continue };
                let cut = VertexCut::new_unchecked(strip(c.left()), strip(c.right()));
                if cut.is_valid(g) && is_witness(ctx, &cut) {
                    out.push(vec![cut]);
                    break;
                }
            }
        }
    }
    Ok(out)
}
