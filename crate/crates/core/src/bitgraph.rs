use crate::graph::Graph;
use crate::set::VertexSet;

/// Dense adjacency rows for fast component scans on small graphs.
pub(crate) struct BitGraph {
    rows: Vec<Vec<u64>>,
    words: usize,
    n: usize,
}

impl BitGraph {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let words = n.div_ceil(64).max(1);
        let rows = (0..n)
            .map(|v| {
                let mut r = vec![0u64; words];
                for &u in g.neighbors(v) {
                    r[u >> 6] |= 1 << (u & 63);
                }
                r
            })
            .collect();
        BitGraph { rows, words, n }
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn full(&self) -> Vec<u64> {
        let mut a = vec![!0u64; self.words];
        if !self.n.is_multiple_of(64) {
            a[self.words - 1] = (1u64 << (self.n % 64)) - 1;
        }
        if self.n == 0 {
            a[0] = 0;
        }
        a
    }

    /// Components of the vertices in `alive`, each as a bit vector.
    pub fn components(&self, alive: &[u64]) -> Vec<Vec<u64>> {
        let mut left = alive.to_vec();
        let mut out = Vec::new();
        let mut frontier = vec![0u64; self.words];
        let mut next = vec![0u64; self.words];
        while let Some(start) = first_bit(&left) {
            let mut comp = vec![0u64; self.words];
            frontier.iter_mut().for_each(|w| *w = 0);
            frontier[start >> 6] = 1 << (start & 63);
            comp[start >> 6] |= 1 << (start & 63);
            loop {
                next.iter_mut().for_each(|w| *w = 0);
                for (wi, &fw) in frontier.iter().enumerate() {
                    let mut bits = fw;
                    while bits != 0 {
                        let v = wi * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        for (a, b) in next.iter_mut().zip(&self.rows[v]) {
                            *a |= b;
                        }
                    }
                }
                let mut any = false;
                for i in 0..self.words {
                    let fresh = next[i] & left[i] & !comp[i];
                    frontier[i] = fresh;
                    comp[i] |= fresh;
                    any |= fresh != 0;
                }
                if !any {
                    break;
                }
            }
            for i in 0..self.words {
                left[i] &= !comp[i];
            }
            out.push(comp);
        }
        out
    }
}

pub(crate) fn first_bit(a: &[u64]) -> Option<usize> {
    a.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

pub(crate) fn count_and(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

pub(crate) fn to_set(n: usize, a: &[u64]) -> VertexSet {
    let mut s = VertexSet::new(n);
    for (i, &w) in a.iter().enumerate() {
        let mut bits = w;
        while bits != 0 {
            s.insert(i * 64 + bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
    }
    s
}

pub(crate) fn from_set(words: usize, s: &VertexSet) -> Vec<u64> {
    let mut a = vec![0u64; words];
    for v in s {
        a[v >> 6] |= 1 << (v & 63);
    }
    a
}
