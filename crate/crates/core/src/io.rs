use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// Parses the edge-list format: a header `n m`, then `m` lines `u v`.
/// Blank lines and text after `#` are ignored. Lines are 1-based in errors.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let nums: Vec<&str> = body.split_whitespace().collect();
        if nums.len() != 2 {
            return parse_err(line, format!("expected two integers, found {}", nums.len()));
        }
        let a: usize = match nums[0].parse() {
            Ok(x) => x,
            Err(_) => return parse_err(line, format!("not a non-negative integer: {}", nums[0])),
        };
        let b: usize = match nums[1].parse() {
            Ok(x) => x,
            Err(_) => return parse_err(line, format!("not a non-negative integer: {}", nums[1])),
        };
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a >= n || b >= n {
                    return parse_err(line, format!("vertex out of range 0..{n}"));
                }
                if a == b {
                    return parse_err(line, "self-loop");
                }
                edges.push((a, b));
            }
        }
    }
    let Some((n, m)) = header else {
        return parse_err(last.max(1), "missing header");
    };
    if edges.len() != m {
        return parse_err(last.max(1), format!("header announces {m} edges, found {}", edges.len()));
    }
    Graph::from_edges(n, &edges)
}

/// Writes `g` in the edge-list format, edges as `u v` with `u < v` in
/// ascending order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
