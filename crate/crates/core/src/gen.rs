use rand::Rng as _;

use crate::graph::Graph;
use crate::rng::seeded;

fn build(n: usize, edges: Vec<(usize, usize)>) -> Graph {
    Graph::from_edges(n, &edges).expect("generator edges are valid")
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|v| (v - 1, v)).collect())
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    build(n, (0..n).map(|v| (v, (v + 1) % n)).collect())
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect())
}

/// `rows × cols` grid, vertex `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    build(rows * cols, edges)
}

/// Roughly square grid with about `n` vertices.
pub fn grid_n(n: usize) -> Graph {
    let rows = ((n as f64).sqrt().floor() as usize).max(1);
    grid(rows, (n / rows).max(1))
}

/// Two cliques on `⌈n/2⌉` and `⌊n/2⌋` vertices joined by one edge.
pub fn barbell(n: usize) -> Graph {
    let a = n.div_ceil(2);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if (u < a) == (v < a) {
                edges.push((u, v));
            }
        }
    }
    if a > 0 && a < n {
        edges.push((a - 1, a));
    }
    build(n, edges)
}

/// Two copies of `K_s` sharing one vertex.
pub fn bridged_cliques(s: usize) -> Graph {
    assert!(s >= 1);
    let n = 2 * s - 1;
    let mut edges = Vec::new();
    let second = |i: usize| if i == 0 { s - 1 } else { s - 1 + i };
    for i in 0..s {
        for j in i + 1..s {
            edges.push((i, j));
            edges.push((second(i), second(j)));
        }
    }
    build(n, edges)
}

/// Uniform random labelled tree via a Prüfer sequence.
pub fn tree(n: usize, seed: u64) -> Graph {
    if n <= 1 {
        return Graph::empty(n);
    }
    if n == 2 {
        return path(2);
    }
    let mut rng = seeded(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::new();
    for &c in &code {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    build(n, edges)
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    build(10, edges)
}
