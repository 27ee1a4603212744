mod common;

use proptest::prelude::*;
use unbreak_core::decomp::{from_json, to_json};
use unbreak_core::gen;
use unbreak_core::io::{parse_edge_list, write_edge_list};
use unbreak_core::rng::ceil_log2;
use unbreak_core::verify::{validate_decomposition, verify_subtree_unbreakability};
use unbreak_core::{decompose, Epsilon, Graph, Limits, PipelineConfig, Variant};

fn check(g: &Graph, k: usize, variant: Variant, seed: u64) -> Result<(), TestCaseError> {
    let eps = Epsilon::ONE;
    let (deco, report) = decompose(g, k, eps, variant, &PipelineConfig::default(), seed).unwrap();
    let bound = variant.adhesion_bound(k, eps);
    let v = validate_decomposition(g, &deco, Some(bound));
    prop_assert!(v.passed(), "{}", v);
    prop_assert!(deco.len() <= g.n().max(1));
    prop_assert!(report.max_adhesion <= bound);
    let u = verify_subtree_unbreakability(g, &deco, variant.q_bound(k, eps), k, &Limits::default());
    prop_assert!(u.passed(), "{:?}", u.first_failure());
    if variant == Variant::DepthReduced {
        prop_assert!(deco.depth() <= 8 * ceil_log2(g.n().max(2)));
    }
    Ok(())
}

#[test]
fn structured_graphs() {
    let graphs = [gen::path(30), gen::grid(5, 6), gen::barbell(16), gen::bridged_cliques(6), gen::petersen(), gen::cycle(20)];
    for g in &graphs {
        for k in 1..=2 {
            check(g, k, Variant::Standard, 5).unwrap();
            check(g, k, Variant::DepthReduced, 5).unwrap();
        }
    }
}

#[test]
fn same_seed_same_tree() {
    let g = gen::gnp(40, 0.1, 9);
    let a = decompose(&g, 2, Epsilon::ONE, Variant::Standard, &PipelineConfig::default(), 4).unwrap();
    let b = decompose(&g, 2, Epsilon::ONE, Variant::Standard, &PipelineConfig::default(), 4).unwrap();
    assert_eq!(to_json(&a.0, Variant::Standard, 4), to_json(&b.0, Variant::Standard, 4));
}

#[test]
fn rejects_bad_json() {
    assert!(from_json("{").is_err());
    assert!(from_json(r#"{"n":2,"variant":"standard","seed":0,"nodes":[{"id":0,"parent":null,"bag":[0,5]}]}"#).is_err());
    assert!(from_json(r#"{"n":2,"variant":"standard","seed":0,"nodes":[{"id":0,"parent":1,"bag":[0]},{"id":1,"parent":0,"bag":[1]}]}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sound_on_random_graphs(g in common::graph(1, 14, 0.25), k in 1usize..=2, seed in 0u64..1000) {
        check(&g, k, Variant::Standard, seed)?;
        check(&g, k, Variant::DepthReduced, seed)?;
    }

    #[test]
    fn json_roundtrip(g in common::graph(1, 14, 0.3), seed in 0u64..1000) {
        let (deco, _) = decompose(&g, 1, Epsilon::ONE, Variant::Standard, &PipelineConfig::default(), seed).unwrap();
        let text = to_json(&deco, Variant::Standard, seed);
        let (back, variant, s) = from_json(&text).unwrap();
        prop_assert_eq!(variant, Variant::Standard);
        prop_assert_eq!(s, seed);
        prop_assert_eq!(to_json(&back, variant, s), text);
    }

    #[test]
    fn edge_list_roundtrip(g in common::graph(0, 20, 0.3)) {
        let back = parse_edge_list(&write_edge_list(&g)).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }
}
