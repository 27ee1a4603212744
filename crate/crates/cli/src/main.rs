use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use unbreak_core::adhesion::reduce_adhesion;
use unbreak_core::decomp::{from_json, to_json};
use unbreak_core::graph::connected_components;
use unbreak_core::origin::balanced_origin;
use unbreak_core::pwaycut::{PwayConfig, PwaySolver};
use unbreak_core::rng::seeded;
use unbreak_core::ssmc::{single_source_mincut_cover, width_budget, SsmcConfig};
use unbreak_core::verify::{brute_pway_cut, validate_decomposition, verify_subtree_unbreakability, NodeStatus};
use unbreak_core::{
    decompose, gen, io as gio, min_pway_cut, CapacitatedGraph, Capacity, CutValue, Epsilon, Error, Graph, Limits,
    PipelineConfig, Variant, VertexSet,
};

#[derive(Parser)]
#[command(name = "unbreak", version, about = "Unbreakable tree decompositions and exact minimum p-way cut")]
struct Cli {
    /// Worker threads. The library is sequential, so only 1 is meaningful.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Standard,
    DepthReduced,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::DepthReduced => Variant::DepthReduced,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Gnp,
    Grid,
    Barbell,
    Path,
    Tree,
    Cycle,
    Complete,
    Petersen,
    Bridged,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Stage {
    Origin,
    Adhesion,
    Decomp,
    Dp,
    All,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a tree decomposition and print it as JSON.
    Decompose {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "1")]
        epsilon: Epsilon,
        #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
        variant: VariantArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Validate the result and check every bag's unbreakability.
        #[arg(long)]
        verify: bool,
    },
    /// Minimum p-way cut of size at most k.
    Pwaycut {
        graph: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1")]
        epsilon: Epsilon,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cross-check against exhaustive search.
        #[arg(long)]
        oracle: bool,
    },
    /// Single-source mincut cover with unit vertex capacities.
    Ssmc {
        graph: PathBuf,
        #[arg(long)]
        source: usize,
        /// Comma-separated sink vertices.
        #[arg(long, value_delimiter = ',')]
        sinks: Vec<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a JSON decomposition against a graph.
    Verify {
        graph: PathBuf,
        decomposition: PathBuf,
        /// Also check the adhesion and unbreakability bounds for this k.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "1")]
        epsilon: Epsilon,
    },
    /// Print a generated graph as an edge list.
    Gen {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge probability for gnp.
        #[arg(long, default_value_t = 0.1)]
        p: f64,
    },
    /// Time pipeline stages over graph sizes; CSV on stdout.
    Bench {
        #[arg(long, value_enum, default_value_t = Model::Gnp)]
        model: Model,
        #[arg(long, value_delimiter = ',', default_values_t = [100usize, 200, 400])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Stage::Decomp)]
        stage: Stage,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge probability for gnp; defaults to 4/n.
        #[arg(long)]
        p: Option<f64>,
    },
}

#[derive(Serialize)]
struct PwayResult {
    p: usize,
    k: usize,
    feasible: bool,
    cost: Option<usize>,
    seed: u64,
}

#[derive(Serialize)]
struct CutJson {
    left: Vec<usize>,
    right: Vec<usize>,
}

#[derive(Serialize)]
struct SsmcResult {
    source: usize,
    k: usize,
    sinks: Vec<usize>,
    width: usize,
    width_budget: usize,
    collections: Vec<Vec<CutJson>>,
}

enum Fail {
    Io(String),
    Verify(String),
    Retries(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::RetriesExhausted { .. } => Fail::Retries(e.to_string()),
            _ => Fail::Io(e.to_string()),
        }
    }
}

type Out = Result<String, Fail>;

fn read_text(path: &PathBuf) -> Result<String, Fail> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Fail::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))
}

fn read_graph(path: &PathBuf) -> Result<Graph, Fail> {
    gio::parse_edge_list(&read_text(path)?).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))
}

fn generate(model: Model, n: usize, seed: u64, p: f64) -> Graph {
    match model {
        Model::Gnp => gen::gnp(n, p, seed),
        Model::Grid => gen::grid_n(n),
        Model::Barbell => gen::barbell(n),
        Model::Path => gen::path(n),
        Model::Tree => gen::tree(n, seed),
        Model::Cycle => gen::cycle(n),
        Model::Complete => gen::complete(n),
        Model::Petersen => gen::petersen(),
        Model::Bridged => gen::bridged_cliques(n.div_ceil(2).max(1)),
    }
}

fn verify_report(g: &Graph, deco: &unbreak_core::RootedTreeDecomposition, bounds: Option<(usize, usize, usize)>) -> (bool, String) {
    let v = validate_decomposition(g, deco, bounds.map(|(_, _, a)| a));
    let mut text = v.to_string();
    let mut ok = v.passed();
    if let Some((q, k, _)) = bounds {
        if ok {
            let u = verify_subtree_unbreakability(g, deco, q, k, &Limits::default());
            match u.first_failure() {
                None => text.push_str(&format!("{:<24} ok  (q={q}, k={k})\n", "subtree unbreakability")),
                Some((t, NodeStatus::Breakable(cut))) => {
                    ok = false;
                    text.push_str(&format!(
                        "{:<24} FAIL  (node {t} split by separator {:?} at q={q}, k={k})\n",
                        "subtree unbreakability",
                        cut.separator().to_vec()
                    ));
                }
                Some((t, NodeStatus::SizeGuard(msg))) => {
                    ok = false;
                    text.push_str(&format!("{:<24} FAIL  (node {t} not checked: {msg})\n", "subtree unbreakability"));
                }
                Some((_, NodeStatus::Unbreakable)) => unreachable!(),
            }
        }
    }
    (ok, text)
}

fn run(cmd: Cmd) -> Out {
    match cmd {
        Cmd::Decompose { graph, k, epsilon, variant, seed, out, verify } => {
            let g = read_graph(&graph)?;
            let variant = Variant::from(variant);
            let (deco, _) = decompose(&g, k, epsilon, variant, &PipelineConfig::default(), seed)?;
            let text = to_json(&deco, variant, seed) + "\n";
            if verify {
                let bounds = (variant.q_bound(k, epsilon), k, variant.adhesion_bound(k, epsilon));
                let (ok, report) = verify_report(&g, &deco, Some(bounds));
                eprint!("{report}");
                if !ok {
                    return Err(Fail::Verify("decomposition failed verification".into()));
                }
            }
            match out {
                Some(path) => {
                    fs::write(&path, text).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Cmd::Pwaycut { graph, p, k, epsilon, seed, oracle } => {
            let g = read_graph(&graph)?;
            let value = min_pway_cut(&g, p, k, epsilon, &PwayConfig::default(), seed)?;
            if oracle {
                let want = brute_pway_cut(&g, p, k, &Limits::default())?;
                if want != value {
                    return Err(Fail::Verify(format!("oracle disagrees: {want:?} vs {value:?}")));
                }
                eprintln!("oracle agrees");
            }
            let (feasible, cost) = match value {
                CutValue::Feasible(c) => (true, Some(c)),
                CutValue::Infeasible => (false, None),
            };
            let result = PwayResult { p, k, feasible, cost, seed };
            Ok(serde_json::to_string(&result).expect("serializable") + "\n")
        }
        Cmd::Ssmc { graph, source, sinks, k, seed } => {
            let g = read_graph(&graph)?;
            let n = g.n();
            if source >= n || sinks.iter().any(|&t| t >= n) {
                return Err(Fail::Io("terminal out of range".into()));
            }
            let sinks = VertexSet::from_iter(n, sinks);
            let mut cg = CapacitatedGraph::unit(g);
            for v in sinks.iter().chain([source]) {
                cg.set_capacity(v, Capacity::Inf);
            }
            let (cover, found) = single_source_mincut_cover(&cg, source, &sinks, k, &SsmcConfig::default(), &mut seeded(seed))?;
            let collections: Vec<Vec<_>> = cover
                .collections
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|cut| CutJson { left: cut.left().to_vec(), right: cut.right().to_vec() })
                        .collect()
                })
                .collect();
            let result = SsmcResult {
                source,
                k,
                sinks: found.to_vec(),
                width: cover.width(),
                width_budget: width_budget(k, n),
                collections,
            };
            Ok(serde_json::to_string(&result).expect("serializable") + "\n")
        }
        Cmd::Verify { graph, decomposition, k, epsilon } => {
            let g = read_graph(&graph)?;
            let (deco, variant, _) =
                from_json(&read_text(&decomposition)?).map_err(|e| Fail::Io(format!("{}: {e}", decomposition.display())))?;
            let bounds = k.map(|k| (variant.q_bound(k, epsilon), k, variant.adhesion_bound(k, epsilon)));
            let (ok, report) = verify_report(&g, &deco, bounds);
            if !ok {
                eprint!("{report}");
                return Err(Fail::Verify("decomposition failed verification".into()));
            }
            Ok(report)
        }
        Cmd::Gen { model, n, seed, p } => Ok(gio::write_edge_list(&generate(model, n, seed, p))),
        Cmd::Bench { model, sizes, k, stage, seed, p } => {
            let stages: &[Stage] = match stage {
                Stage::All => &[Stage::Origin, Stage::Adhesion, Stage::Decomp, Stage::Dp],
                s => std::slice::from_ref(match s {
                    Stage::Origin => &Stage::Origin,
                    Stage::Adhesion => &Stage::Adhesion,
                    Stage::Decomp => &Stage::Decomp,
                    _ => &Stage::Dp,
                }),
            };
            let mut csv = String::from("size,stage,millis\n");
            for &n in &sizes {
                let g = generate(model, n, seed, p.unwrap_or(4.0 / n.max(1) as f64));
                for &s in stages {
                    let ms = bench_stage(&g, k, s, seed)?;
                    csv.push_str(&format!("{n},{},{ms:.3}\n", stage_name(s)));
                }
            }
            Ok(csv)
        }
    }
}

fn stage_name(s: Stage) -> &'static str {
    match s {
        Stage::Origin => "origin",
        Stage::Adhesion => "adhesion",
        Stage::Decomp => "decomp",
        Stage::Dp => "dp",
        Stage::All => "all",
    }
}

/// Wall time of one stage. Origin and adhesion run on the largest component;
/// dp solves the 2-way cut table on a precomputed decomposition of it.
fn bench_stage(g: &Graph, k: usize, stage: Stage, seed: u64) -> Result<f64, Fail> {
    let config = PipelineConfig::default();
    let eps = Epsilon::ONE;
    let comp = connected_components(g, &g.none())
        .into_iter()
        .max_by_key(|c| c.len())
        .unwrap_or_else(|| g.none());
    let h = g.induced(&comp).graph;
    let sigma = Variant::Standard.sigma(k, eps);
    let mut rng = seeded(seed);
    let start;
    match stage {
        Stage::Origin => {
            start = Instant::now();
            if h.n() > 0 {
                balanced_origin(&h, k, sigma, &config.origin(), &mut rng)?;
            }
        }
        Stage::Adhesion => {
            if h.n() == 0 {
                return Ok(0.0);
            }
            let x0 = balanced_origin(&h, k, sigma, &config.origin(), &mut rng)?;
            start = Instant::now();
            reduce_adhesion(&h, &x0, k, k, eps, &config, &mut rng)?;
        }
        Stage::Decomp => {
            start = Instant::now();
            decompose(g, k, eps, Variant::Standard, &config, seed)?;
        }
        Stage::Dp | Stage::All => {
            let (deco, _) = decompose(&h, k, eps, Variant::Standard, &config, seed)?;
            start = Instant::now();
            let p = 2.min(h.n().max(1));
            let mut solver = PwaySolver::new(&h, &deco, p, k, &PwayConfig::default(), seed);
            solver.entry(deco.root(), &[]);
        }
    }
    Ok(start.elapsed().as_secs_f64() * 1000.0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads != 1 {
        eprintln!("note: running sequentially; --threads {} has no effect", cli.threads);
    }
    match run(cli.cmd) {
        Ok(text) => {
            let mut out = io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Fail::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Fail::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
        Err(Fail::Retries(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
