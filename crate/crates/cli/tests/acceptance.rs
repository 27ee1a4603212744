//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails. Runs without the test harness so criteria are
//! timed one at a time.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng as _;
use unbreak_core::carving::{carvable_oracle, witness_cover, CoverConfig, WitnessContext};
use unbreak_core::flow::{bounded_vertex_maxflow, minimal_side_mincut};
use unbreak_core::graph::{adhesion, pairwise_disjoint};
use unbreak_core::isolating::{isolating_vertex_cuts, IsolatingMode};
use unbreak_core::origin::check_unbreakable;
use unbreak_core::pwaycut::PwayConfig;
use unbreak_core::rng::{ceil_log2, seeded, Rng};
use unbreak_core::ssmc::{single_source_mincut_cover, width_budget, SsmcConfig};
use unbreak_core::verify::{
    brute_min_separator, brute_pway_cut, check_mincut_cover, validate_decomposition, verify_subtree_unbreakability,
};
use unbreak_core::{
    decompose, gen, io, min_pway_cut, CapacitatedGraph, Capacity, CutValue, Epsilon, FlowValue, Graph, Limits,
    PipelineConfig, Variant, VertexSet,
};

const DECOMP_LIMIT: Duration = Duration::from_secs(120);
const DEPTH_LIMIT: Duration = Duration::from_secs(120);
const PWAY_LIMIT: Duration = Duration::from_secs(300);
const SSMC_LIMIT: Duration = Duration::from_secs(60);
const ISOLATING_LIMIT: Duration = Duration::from_secs(30);
const NOCARVABLE_LIMIT: Duration = Duration::from_secs(60);
const CARVABLE_LIMIT: Duration = Duration::from_secs(60);
const FLOW_LIMIT: Duration = Duration::from_secs(30);
const NOCARVABLE_RATE: f64 = 0.99;
const CARVABLE_RATE: f64 = 0.99;
const DEPTH_FACTOR: usize = 8;

struct Outcome {
    passed: usize,
    total: usize,
    note: Option<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: 0, total: 0, note: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.note.is_none() {
            self.note = Some(what());
        }
    }

    fn rate(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.passed as f64 / self.total as f64
        }
    }
}

fn report(name: &str, out: &Outcome, need: f64, elapsed: Duration, limit: Option<Duration>) -> bool {
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let ok = out.total > 0 && out.rate() >= need && in_time;
    let limit_text = limit.map(|l| format!(" (limit {} s)", l.as_secs())).unwrap_or_default();
    println!(
        "{} {name}: {}/{} ({:.1}%, need {:.0}%), {:.1} s{limit_text}{}",
        if ok { "PASS" } else { "FAIL" },
        out.passed,
        out.total,
        100.0 * out.rate(),
        100.0 * need,
        elapsed.as_secs_f64(),
        out.note.as_ref().map(|n| format!("; first failure: {n}")).unwrap_or_default()
    );
    ok
}

/// 100 seeded G(60, 0.08) graphs plus 20 structured ones.
fn decomposition_corpus() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = (0..100).map(|s| (format!("gnp60-{s}"), gen::gnp(60, 0.08, s))).collect();
    for n in [20, 40, 60, 80, 100] {
        out.push((format!("path{n}"), gen::path(n)));
    }
    for (r, c) in [(4, 5), (5, 6), (6, 6), (6, 8), (8, 8)] {
        out.push((format!("grid{r}x{c}"), gen::grid(r, c)));
    }
    for n in [10, 16, 20, 30, 40] {
        out.push((format!("barbell{n}"), gen::barbell(n)));
    }
    for s in [4, 6, 8, 10, 12] {
        out.push((format!("bridged{s}"), gen::bridged_cliques(s)));
    }
    out
}

fn decomposition(variant: Variant) -> bool {
    let corpus = decomposition_corpus();
    let eps = Epsilon::ONE;
    let limits = Limits::default();
    let start = Instant::now();
    let mut out = Outcome::new();
    let mut worst_depth = 0.0f64;
    for k in 1..=3 {
        for (name, g) in &corpus {
            let seed = 1000 + k as u64;
            let (deco, report) = match decompose(g, k, eps, variant, &PipelineConfig::default(), seed) {
                Ok(r) => r,
                Err(e) => {
                    out.record(false, || format!("{name} k={k}: {e}"));
                    continue;
                }
            };
            let bound = variant.adhesion_bound(k, eps);
            let v = validate_decomposition(g, &deco, Some(bound));
            let u = verify_subtree_unbreakability(g, &deco, variant.q_bound(k, eps), k, &limits);
            let recomputed = (0..deco.len()).map(|t| deco.adhesion(t).len()).max().unwrap_or(0);
            let mut ok = v.passed() && u.passed() && recomputed <= bound && report.max_adhesion == recomputed;
            ok &= deco.len() <= g.n().max(1);
            if variant == Variant::DepthReduced {
                let cap = DEPTH_FACTOR * ceil_log2(g.n().max(2));
                worst_depth = worst_depth.max(deco.depth() as f64 / cap as f64);
                ok &= deco.depth() <= cap;
            }
            out.record(ok, || {
                let mut why: Vec<String> = v.checks.iter().filter(|c| !c.passed).map(|c| c.name.to_string()).collect();
                if let Some((t, _)) = u.first_failure() {
                    why.push(format!("unbreakability at node {t}"));
                }
                if deco.len() > g.n().max(1) {
                    why.push("node count".into());
                }
                if recomputed > bound {
                    why.push(format!("adhesion {recomputed} > {bound}"));
                }
                why.push(format!("depth {}", deco.depth()));
                format!("{name} k={k}: {}", why.join(", "))
            });
        }
    }
    let name = match variant {
        Variant::Standard => "decomposition soundness (standard, k=1..3, q=5k, adhesion<=4k)",
        Variant::DepthReduced => "decomposition soundness (depth-reduced, depth<=8*ceil(log2 n), q=k+2s, adhesion<=2s)",
    };
    if variant == Variant::DepthReduced {
        println!("  deepest tree used {:.0}% of the depth ceiling", 100.0 * worst_depth);
    }
    let limit = if variant == Variant::Standard { DECOMP_LIMIT } else { DEPTH_LIMIT };
    report(name, &out, 1.0, start.elapsed(), Some(limit))
}

/// 200 seeded graphs with n ≤ 10 and m ≤ 20.
fn small_corpus() -> Vec<Graph> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < 200 {
        let n = 2 + out.len() % 9;
        let p = [0.2, 0.35, 0.5][out.len() % 3];
        let g = gen::gnp(n, p, 5000 + seed);
        seed += 1;
        if g.m() <= 20 {
            out.push(g);
        }
    }
    out
}

fn pwaycut() -> bool {
    let start = Instant::now();
    let limits = Limits::default();
    let cfg = PwayConfig::default();
    let mut out = Outcome::new();
    for (i, g) in small_corpus().iter().enumerate() {
        for p in 2..=4 {
            for k in 0..=4 {
                let got = min_pway_cut(g, p, k, Epsilon::ONE, &cfg, i as u64);
                let want = brute_pway_cut(g, p, k, &limits).unwrap();
                let ok = got.as_ref().ok() == Some(&want);
                out.record(ok, || format!("instance {i} p={p} k={k}: {got:?} vs {want:?}"));
            }
        }
    }
    let mut fixtures: Vec<(String, Graph, usize, usize, CutValue)> = vec![
        ("C6".into(), gen::cycle(6), 2, 4, CutValue::Feasible(2)),
        ("Petersen".into(), gen::petersen(), 2, 3, CutValue::Feasible(3)),
    ];
    for s in 0..5 {
        for p in 2..=4 {
            fixtures.push((format!("tree{s}"), gen::tree(10, s), p, 4, CutValue::Feasible(p - 1)));
        }
    }
    for (name, g, p, k, want) in fixtures {
        let got = min_pway_cut(&g, p, k, Epsilon::ONE, &cfg, 0);
        let oracle = brute_pway_cut(&g, p, k, &limits).unwrap();
        out.record(got.as_ref().ok() == Some(&want) && oracle == want, || format!("{name} p={p}: {got:?}"));
    }
    report("p-way cut exactness (200 graphs x p=2..4 x k=0..4, plus fixtures)", &out, 1.0, start.elapsed(), Some(PWAY_LIMIT))
}

fn random_caps(rng: &mut Rng, n: usize, max: u32) -> Vec<Capacity> {
    (0..n).map(|_| Capacity::Finite(rng.random_range(1..=max))).collect()
}

/// Greedily keeps picks that are not adjacent to or equal to anything kept.
fn independent_picks(g: &Graph, taken: &mut VertexSet, picks: impl IntoIterator<Item = usize>) -> VertexSet {
    let mut kept = g.none();
    for v in picks {
        if !taken.contains(v) && !g.neighbors(v).iter().any(|&u| taken.contains(u)) {
            taken.insert(v);
            kept.insert(v);
        }
    }
    kept
}

fn ssmc() -> bool {
    let start = Instant::now();
    let mut out = Outcome::new();
    let mut rng = seeded(77);
    let mut made = 0;
    while made < 100 {
        let n = rng.random_range(5..=40);
        let g = gen::gnp(n, 3.0 / n as f64, rng.random());
        let s = rng.random_range(0..n);
        let mut taken = g.set([s]);
        let picks: Vec<usize> = (0..8).map(|_| rng.random_range(0..n)).collect();
        let sinks = independent_picks(&g, &mut taken, picks);
        if sinks.is_empty() {
            continue;
        }
        made += 1;
        let k = rng.random_range(1..=3);
        let mut caps = random_caps(&mut rng, n, 2);
        for v in &taken {
            caps[v] = Capacity::Inf;
        }
        let cg = CapacitatedGraph::new(g, caps).unwrap();
        let (cover, t_star) = single_source_mincut_cover(&cg, s, &sinks, k, &SsmcConfig::default(), &mut seeded(made)).unwrap();
        let direct = VertexSet::from_iter(
            n,
            sinks.iter().filter(|&t| {
                let r = bounded_vertex_maxflow(&cg, &VertexSet::singleton(n, t), &VertexSet::singleton(n, s), k as u64).unwrap();
                r.value != FlowValue::ExceedsBound
            }),
        );
        let props = check_mincut_cover(&cg, s, &t_star, &cover).unwrap();
        let ok = t_star == direct && props.is_none() && cover.width() <= width_budget(k, n);
        out.record(ok, || format!("instance {made}: T* {:?} vs {:?}, {props:?}", t_star.to_vec(), direct.to_vec()));
    }
    report("SSMC correctness (T* = direct flows, properties 1-3, width budget)", &out, 1.0, start.elapsed(), Some(SSMC_LIMIT))
}

fn isolating() -> bool {
    let start = Instant::now();
    let mut out = Outcome::new();
    let mut rng = seeded(91);
    let mut made = 0;
    while made < 100 {
        let n = rng.random_range(4..=30);
        let g = gen::gnp(n, 3.0 / n as f64, rng.random());
        let picks: Vec<usize> = (0..8).map(|_| rng.random_range(0..n)).collect();
        let w = independent_picks(&g, &mut g.none(), picks);
        if w.len() < 2 {
            continue;
        }
        made += 1;
        let bound = rng.random_range(0..6);
        let mut caps = random_caps(&mut rng, n, 2);
        for v in &w {
            caps[v] = Capacity::Inf;
        }
        let cg = CapacitatedGraph::new(g, caps).unwrap();
        let fast = isolating_vertex_cuts(&cg, &w, bound, IsolatingMode::Fast).unwrap();
        let naive = isolating_vertex_cuts(&cg, &w, bound, IsolatingMode::Naive).unwrap();
        let mut ok = fast.cuts.len() == naive.cuts.len();
        for (f, s) in fast.cuts.iter().zip(&naive.cuts) {
            let mut rest = w.clone();
            rest.remove(f.terminal);
            let direct = bounded_vertex_maxflow(&cg, &VertexSet::singleton(n, f.terminal), &rest, bound).unwrap();
            ok &= f.terminal == s.terminal && f.value == s.value && f.value == direct.value;
            if let Some(c) = &f.cut {
                ok &= c.is_valid(&cg.graph)
                    && c.left_only().contains(f.terminal)
                    && rest.is_subset(&c.right_only())
                    && c.capacity(&cg) == f.value.exact();
            }
        }
        let cuts: Vec<_> = fast.cuts.iter().filter_map(|c| c.cut.clone()).collect();
        ok &= pairwise_disjoint(&cuts);
        out.record(ok, || format!("instance {made}"));
    }
    report("isolating cuts (flow values, disjointness, naive = fast)", &out, 1.0, start.elapsed(), Some(ISOLATING_LIMIT))
}

/// Small fixture graphs, all connected.
fn tiny_fixtures(max_n: usize) -> Vec<Graph> {
    let mut out = vec![gen::path(max_n), gen::cycle(max_n), gen::grid(3, 3), gen::complete(5), gen::barbell(8), gen::tree(max_n, 3)];
    if max_n >= 10 {
        out.push(gen::petersen());
    }
    let mut seed = 0;
    while out.len() < 20 {
        let g = gen::gnp(max_n - (seed as usize % 3), 0.35, 300 + seed);
        seed += 1;
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

fn random_subset(rng: &mut Rng, n: usize, p: f64) -> VertexSet {
    VertexSet::from_iter(n, (0..n).filter(|_| rng.random_bool(p)))
}

fn nocarvable() -> bool {
    let start = Instant::now();
    let limits = Limits::default();
    let fixtures = tiny_fixtures(10);
    let mut out = Outcome::new();
    for run in 0..100u64 {
        let mut rng = seeded(10_000 + run);
        for g in &fixtures {
            let k = rng.random_range(1..=2);
            let q1 = rng.random_range(k..=2);
            let x = random_subset(&mut rng, g.n(), 0.4);
            if x.is_empty() || !check_unbreakable(g, &x, q1, k, &limits).unwrap().is_unbreakable() {
                continue;
            }
            let ctx = WitnessContext::new(g, g.all(), x, q1 + k).unwrap();
            let cover = witness_cover(&ctx, &CoverConfig::default(), &mut rng).unwrap();
            let y = g.all().difference(&cover.q_set);
            let ok = check_unbreakable(g, &y, q1 + k, k, &limits).unwrap().is_unbreakable();
            out.record(ok, || format!("run {run} n={} q1={q1} k={k}", g.n()));
        }
    }
    report("leftover terminals unbreakable (n<=10)", &out, NOCARVABLE_RATE, start.elapsed(), Some(NOCARVABLE_LIMIT))
}

fn carvable() -> bool {
    let start = Instant::now();
    let limits = Limits::default();
    let fixtures = tiny_fixtures(9);
    let mut out = Outcome::new();
    for run in 0..100u64 {
        let mut rng = seeded(20_000 + run);
        for g in &fixtures {
            let kp = rng.random_range(0..=2);
            let drop = random_subset(&mut rng, g.n(), 0.15);
            let mut t = g.all().difference(&drop);
            if t.is_empty() || adhesion(g, &t) > kp {
                t = g.all();
            }
            let x = random_subset(&mut rng, g.n(), 0.3).intersection(&t);
            if x.is_empty() {
                continue;
            }
            let ctx = WitnessContext::new(g, t, x, kp).unwrap();
            let cover = witness_cover(&ctx, &CoverConfig::default(), &mut rng).unwrap();
            let oracle = carvable_oracle(&ctx, &limits).unwrap();
            out.record(oracle.is_subset(&cover.q_set), || format!("run {run} n={} k'={kp}", g.n()));
        }
    }
    report("carvable coverage (n<=9)", &out, CARVABLE_RATE, start.elapsed(), Some(CARVABLE_LIMIT))
}

fn flow_oracle() -> bool {
    let start = Instant::now();
    let limits = Limits::default();
    let mut out = Outcome::new();
    let mut rng = seeded(4242);
    while out.total < 500 {
        let n = rng.random_range(3..=9);
        let g = gen::gnp(n, 0.35, rng.random());
        let a = VertexSet::from_iter(n, (0..rng.random_range(1..=2)).map(|_| rng.random_range(0..n)));
        let b = VertexSet::from_iter(n, (0..rng.random_range(1..=2)).map(|_| rng.random_range(0..n))).difference(&a);
        if b.is_empty() || g.neighborhood(&a).intersection_len(&b) > 0 {
            continue;
        }
        let caps = (0..n)
            .map(|_| if rng.random_bool(0.2) { Capacity::Inf } else { Capacity::Finite(rng.random_range(1..=3)) })
            .collect();
        let cg = CapacitatedGraph::new(g.clone(), caps).unwrap();
        let bound = rng.random_range(0..8);
        let brute = brute_min_separator(&cg, &a, &b, &limits).unwrap();
        let flow = bounded_vertex_maxflow(&cg, &a, &b, bound).unwrap();
        let side = minimal_side_mincut(&cg, &a, &b, bound).unwrap();
        let ok = match brute {
            Some((best, seps)) if best <= bound => {
                flow.value == FlowValue::Exact(best)
                    && side.mincut.as_ref().is_some_and(|cut| {
                        cut.is_valid(&g)
                            && cut.capacity(&cg) == Some(best)
                            && a.is_subset(&cut.left_only())
                            && b.is_subset(&cut.right_only())
                            && seps.iter().all(|s| {
                                let mut blocked = s.clone();
                                blocked.union_with(&b);
                                let mut reach = s.clone();
                                for v in &a {
                                    reach.union_with(&g.reach(v, &blocked));
                                }
                                cut.left().is_subset(&reach)
                            })
                    })
            }
            _ => flow.value == FlowValue::ExceedsBound && side.value == FlowValue::ExceedsBound,
        };
        out.record(ok, || format!("n={n} a={:?} b={:?} bound={bound}", a.to_vec(), b.to_vec()));
    }
    report("flow oracle equivalence (n<=9)", &out, 1.0, start.elapsed(), Some(FLOW_LIMIT))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_unbreak")).args(args).output().expect("binary runs");
    (o.status.code().unwrap_or(-1), o.stdout)
}

fn strip_millis(csv: &[u8]) -> String {
    String::from_utf8_lossy(csv)
        .lines()
        .map(|l| l.rsplit_once(',').map(|(a, _)| a).unwrap_or(l).to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path: PathBuf = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn determinism() -> bool {
    let start = Instant::now();
    let dir = std::env::temp_dir().join(format!("unbreak-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut out = Outcome::new();
    let twice = |args: Vec<String>, out: &mut Outcome| {
        let a: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let first = run_cli(&a);
        let second = run_cli(&a);
        let ok = first == second && first.0 == 0;
        out.record(ok, || format!("`{}` exit {} / {}", args.join(" "), first.0, second.0));
        first.1
    };
    let s = |x: &str| x.to_string();
    for model in ["gnp", "grid", "barbell", "path", "tree", "cycle", "complete", "petersen", "bridged"] {
        twice(vec![s("gen"), s("--model"), s(model), s("--n"), s("16"), s("--seed"), s("1")], &mut out);
    }
    for (i, (name, g)) in decomposition_corpus().iter().enumerate() {
        let path = write(&dir, &format!("{name}.txt"), &io::write_edge_list(g));
        let variant = if i % 2 == 0 { "standard" } else { "depth-reduced" };
        let json = twice(vec![s("decompose"), s("--k"), s("1"), s("--variant"), s(variant), s("--seed"), s("7"), path.clone()], &mut out);
        let deco = write(&dir, &format!("{name}.json"), &String::from_utf8_lossy(&json));
        twice(vec![s("verify"), path.clone(), deco, s("--k"), s("1")], &mut out);
        if i % 6 == 0 {
            let sinks = (1..g.n()).step_by(7).filter(|&v| !g.has_edge(0, v)).map(|v| v.to_string()).collect::<Vec<_>>();
            let mut taken = VertexSet::singleton(g.n(), 0);
            let sinks: Vec<String> = independent_picks(g, &mut taken, sinks.iter().map(|v| v.parse().unwrap()))
                .iter()
                .map(|v| v.to_string())
                .collect();
            if !sinks.is_empty() {
                twice(vec![s("ssmc"), path, s("--source"), s("0"), s("--sinks"), sinks.join(","), s("--k"), s("2"), s("--seed"), s("3")], &mut out);
            }
        }
    }
    for (i, g) in small_corpus().iter().enumerate() {
        let path = write(&dir, &format!("small{i}.txt"), &io::write_edge_list(g));
        let p = 2 + i % 3;
        twice(vec![s("pwaycut"), s("--p"), p.to_string(), s("--k"), s("3"), s("--seed"), i.to_string(), path], &mut out);
    }
    let bench: Vec<&str> = vec!["bench", "--model", "gnp", "--sizes", "30,60", "--k", "1", "--stage", "all", "--seed", "2"];
    let (ca, a) = run_cli(&bench);
    let (cb, b) = run_cli(&bench);
    out.record(ca == 0 && cb == 0 && strip_millis(&a) == strip_millis(&b), || "bench".into());
    let _ = std::fs::remove_dir_all(&dir);
    report("CLI determinism (every verb, equal seeds, bench millis excluded)", &out, 1.0, start.elapsed(), None)
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let results = [
        flow_oracle(),
        isolating(),
        ssmc(),
        carvable(),
        nocarvable(),
        pwaycut(),
        decomposition(Variant::Standard),
        decomposition(Variant::DepthReduced),
        determinism(),
    ];
    let failed = results.iter().filter(|&&r| !r).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

