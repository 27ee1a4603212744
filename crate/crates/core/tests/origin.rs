mod common;

use num_rational::Ratio;
use proptest::prelude::*;
use unbreak_core::origin::*;
use unbreak_core::rng::seeded;
use unbreak_core::verify::{brute_net_check, brute_origin_check, brute_unbreakability};
use unbreak_core::{Graph, Limits};

fn agree(g: &Graph, mask: u64, q: usize, k: usize, strategy: CheckStrategy) -> Result<(), TestCaseError> {
    let w = common::subset(g.n(), mask);
    let limits = Limits::default();
    let fast = check_unbreakable_with(g, &w, q, k, strategy, &limits).unwrap();
    let slow = brute_unbreakability(g, &w, q, k, &limits).unwrap();
    prop_assert_eq!(fast.is_unbreakable(), slow.is_unbreakable());
    if let Unbreakability::Breakable(cut) = fast {
        prop_assert!(cut.is_valid(g));
        prop_assert!(cut.size() <= k);
        prop_assert!(cut.left().intersection_len(&w) > q);
        prop_assert!(cut.right().intersection_len(&w) > q);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn auto_matches_enumeration(g in common::graph(2, 9, 0.35), mask in any::<u64>(), q in 0usize..4, k in 0usize..4) {
        agree(&g, mask, q, k, CheckStrategy::Auto)?;
    }

    #[test]
    fn separators_match_enumeration(g in common::graph(2, 9, 0.35), mask in any::<u64>(), q in 0usize..4, k in 0usize..4) {
        agree(&g, mask, q, k, CheckStrategy::Separators)?;
    }

    #[test]
    fn partitions_match_enumeration(g in common::graph(2, 9, 0.35), mask in any::<u64>(), k in 0usize..3, extra in 0usize..3) {
        agree(&g, mask, k + extra, k, CheckStrategy::Partitions)?;
    }
}

fn tiny_corpus() -> Vec<Graph> {
    (0..8u64)
        .map(|s| unbreak_core::gen::gnp(12, 0.3, 100 + s))
        .chain([unbreak_core::gen::grid(3, 4), unbreak_core::gen::path(12), unbreak_core::gen::barbell(12)])
        .collect()
}

#[test]
fn sampled_nets_are_often_nets() {
    let limits = Limits::default();
    let half = Ratio::new(1, 2);
    let corpus = tiny_corpus();
    for sigma in 1..=2 {
        let mut good = 0;
        for seed in 0..400u64 {
            let g = &corpus[seed as usize % corpus.len()];
            let w = sample_net(g, sigma, half, 2.0, &mut seeded(seed));
            if brute_net_check(g, &w, sigma, half, &limits).unwrap().is_none() {
                good += 1;
            }
        }
        assert!(good >= 100, "sigma={sigma}: only {good}/400 nets");
    }
}

#[test]
fn origins_are_often_balanced() {
    let limits = Limits::default();
    let half = Ratio::new(1, 2);
    let corpus = tiny_corpus();
    let mut good = 0;
    for seed in 0..200u64 {
        let g = &corpus[seed as usize % corpus.len()];
        let (k, sigma) = (1, 2);
        let x = balanced_origin(g, k, sigma, &OriginConfig::default(), &mut seeded(seed)).unwrap();
        assert!(check_unbreakable(g, &x, k, k, &limits).unwrap().is_unbreakable());
        if brute_origin_check(g, &x, sigma, half, &limits).unwrap().is_none() {
            good += 1;
        }
    }
    assert!(good >= 50, "only {good}/200 balanced origins");
}
