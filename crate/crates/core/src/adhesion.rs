use num_rational::Ratio;

use crate::carving::{carve_many, carve_one, make_lean, witness_cover, WitnessContext};
use crate::config::PipelineConfig;
use crate::error::{invalid, Error, Result};
use crate::graph::{adhesion, is_balanced, Graph, VertexCut};
use crate::origin::{balanced_origin, check_unbreakable, Unbreakability};
use crate::params::Epsilon;
use crate::rng::{ceil_log2, Rng};
use crate::set::VertexSet;

/// Counters from one `reduce_adhesion` run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReduceStats {
    pub covers: usize,
    pub carves: usize,
    pub repairs: usize,
    pub anomalies: usize,
}

/// Grows `x0` into a set of adhesion at most `q + ⌈1/ε⌉k` that is
/// `(q + ⌈1/ε⌉k, k)`-unbreakable, by repeatedly carving terminals.
pub fn reduce_adhesion(
    g: &Graph,
    x0: &VertexSet,
    k: usize,
    q: usize,
    epsilon: Epsilon,
    config: &PipelineConfig,
    rng: &mut Rng,
) -> Result<VertexSet> {
    reduce_adhesion_stats(g, x0, k, q, epsilon, config, rng).map(|(x, _)| x)
}

pub fn reduce_adhesion_stats(
    g: &Graph,
    x0: &VertexSet,
    k: usize,
    q: usize,
    epsilon: Epsilon,
    config: &PipelineConfig,
    rng: &mut Rng,
) -> Result<(VertexSet, ReduceStats)> {
    if q < k {
        return invalid("reduce_adhesion needs q ≥ k");
    }
    if x0.is_empty() {
        return invalid("reduce_adhesion needs a nonempty seed set");
    }
    if !g.is_connected() {
        return invalid("reduce_adhesion needs a connected graph");
    }
    let n = g.n();
    let mut stats = ReduceStats::default();
    let mut t = g.all();
    let mut x = x0.clone();
    let eps = epsilon.as_f64();
    for level in 1..=epsilon.levels() {
        let kp = q + level * k;
        let threshold = (n as f64).powf(1.0 - level as f64 * eps).ceil().max(1.0) as usize;
        debug_assert!(x0.is_subset(&x) && x.is_subset(&t));
        debug_assert!(adhesion(g, &t) <= q + (level - 1) * k);
        debug_assert!(
            (t.len() - x.len()) as f64 <= (n as f64).powf(1.0 - (level - 1) as f64 * eps).ceil()
        );
        if cfg!(debug_assertions) && n <= 10 && level == 1 {
            if let Ok(Unbreakability::Breakable(_)) = check_unbreakable(g, &x, q, k, &config.limits) {
                log::debug!("seed set is not ({q},{k})-unbreakable");
            }
        }
        loop {
            let ctx = WitnessContext::new(g, t.clone(), x.clone(), kp)?;
            let cover = witness_cover(&ctx, &config.cover, rng)?;
            stats.covers += 1;
            if cover.q_set.len() >= threshold {
                if cover.best.is_empty() {
                    log::warn!("carving stalled with |Q| = {} at level {level}", cover.q_set.len());
                    stats.anomalies += 1;
                    x = t.difference(&cover.q_set);
                    break;
                }
                let next = carve_many(&t, &cover.best);
                if next.len() >= t.len() {
                    log::warn!("carving did not shrink T at level {level}");
                    stats.anomalies += 1;
                    x = t.difference(&cover.q_set);
                    break;
                }
                t = next;
                stats.carves += 1;
                continue;
            }
            let candidate = t.difference(&cover.q_set);
            if !config.certify {
                x = candidate;
                break;
            }
            match check_unbreakable(g, &candidate, kp, k, &config.limits) {
                Ok(Unbreakability::Unbreakable) | Err(Error::SizeGuard { .. }) => {
                    x = candidate;
                    break;
                }
                Ok(Unbreakability::Breakable(cut)) => match repair_witness(&ctx, cut, q + (level - 1) * k) {
                    Some(w) => {
                        let lean = make_lean(&ctx, &[w])?;
                        t = carve_one(&t, &lean[0]);
                        stats.repairs += 1;
                    }
                    None => {
                        log::warn!("unbreakability witness at level {level} could not be carved");
                        stats.anomalies += 1;
                        x = candidate;
                        break;
                    }
                },
                Err(e) => return Err(e),
            }
        }
    }
    Ok((x, stats))
}

/// Turns a cut breaking `T\Q` into an `(X,T,k')`-witness: orient it so the
/// left side holds at most `x_bound` vertices of `X`, then move those to the
/// right side too.
fn repair_witness(ctx: &WitnessContext, cut: VertexCut, x_bound: usize) -> Option<VertexCut> {
    let x = &ctx.x_set;
    let a = cut.left().intersection_len(x);
    let b = cut.right().intersection_len(x);
    let cut = if b < a { cut.swapped() } else { cut };
    if cut.left().intersection_len(x) > x_bound {
        return None;
    }
    let right = cut.right().union(&cut.left().intersection(x));
    let w = VertexCut::new(ctx.g, cut.left().clone(), right).ok()?;
    crate::carving::is_witness(ctx, &w).then_some(w)
}

/// A ½-balanced set of adhesion at most `⌈1/ε⌉k + k` that is
/// `(⌈1/ε⌉k + k, k)`-unbreakable, retrying with fresh randomness.
pub fn unbreakable_balanced_set(
    g: &Graph,
    k: usize,
    epsilon: Epsilon,
    config: &PipelineConfig,
    rng: &mut Rng,
) -> Result<VertexSet> {
    if !g.is_connected() {
        return invalid("unbreakable_balanced_set needs a connected graph");
    }
    if g.n() == 0 {
        return Ok(g.none());
    }
    let sigma = epsilon.levels() * k + k;
    let attempts = config.retry_factor * ceil_log2(g.n());
    for _ in 0..attempts {
        let x0 = balanced_origin(g, k, sigma, &config.origin(), rng)?;
        let x = reduce_adhesion(g, &x0, k, k, epsilon, config, rng)?;
        if is_balanced(g, &x, Ratio::new(1, 2)) {
            return Ok(x);
        }
    }
    Err(Error::RetriesExhausted { attempts })
}
