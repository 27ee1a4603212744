mod common;

use proptest::prelude::*;
use unbreak_core::flow::*;
use unbreak_core::rng::seeded;
use unbreak_core::ssmc::*;
use unbreak_core::verify::check_mincut_cover;
use unbreak_core::VertexSet;

fn instance() -> impl Strategy<Value = (CapacitatedGraph, usize, VertexSet, usize)> {
    common::graph(5, 24, 0.18).prop_flat_map(|g| {
        let n = g.n();
        (
            Just(g),
            proptest::collection::vec((1u32..=2).prop_map(Capacity::Finite), n),
            0..n,
            proptest::collection::vec(0..n, 1..8),
            1usize..=3,
        )
            .prop_filter_map("sinks", |(g, caps, s, picks, k)| {
                let mut taken = g.set([s]);
                let mut sinks = g.none();
                for v in picks {
                    if !taken.contains(v) && !g.neighbors(v).iter().any(|&u| taken.contains(u)) {
                        taken.insert(v);
                        sinks.insert(v);
                    }
                }
                let mut caps = caps;
                for v in &taken {
                    caps[v] = Capacity::Inf;
                }
                (!sinks.is_empty()).then(|| (CapacitatedGraph::new(g, caps).unwrap(), s, sinks, k))
            })
    })
}

fn direct_t_star(cg: &CapacitatedGraph, s: usize, sinks: &VertexSet, k: usize) -> VertexSet {
    let n = cg.graph.n();
    VertexSet::from_iter(
        n,
        sinks.iter().filter(|&t| {
            let r = bounded_vertex_maxflow(cg, &VertexSet::singleton(n, t), &VertexSet::singleton(n, s), k as u64).unwrap();
            r.value != FlowValue::ExceedsBound
        }),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn sampled_cover_is_valid((cg, s, sinks, k) in instance(), seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (cover, t_star) = single_source_mincut_cover(&cg, s, &sinks, k, &SsmcConfig::default(), &mut rng).unwrap();
        prop_assert_eq!(&t_star, &direct_t_star(&cg, s, &sinks, k));
        prop_assert_eq!(check_mincut_cover(&cg, s, &t_star, &cover).unwrap(), None);
        prop_assert!(cover.width() <= width_budget(k, cg.graph.n()));
    }

    #[test]
    fn direct_cover_is_valid((cg, s, sinks, k) in instance()) {
        let mut rng = seeded(0);
        let cfg = SsmcConfig { strategy: SsmcStrategy::Direct, ..SsmcConfig::default() };
        let (cover, t_star) = single_source_mincut_cover(&cg, s, &sinks, k, &cfg, &mut rng).unwrap();
        prop_assert_eq!(&t_star, &direct_t_star(&cg, s, &sinks, k));
        prop_assert_eq!(check_mincut_cover(&cg, s, &t_star, &cover).unwrap(), None);
    }
}
