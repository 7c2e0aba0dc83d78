//! Simple undirected graphs and seeded uniform sampling.
//!
//! Sampling is reproducible across platforms: the generator is
//! `ChaCha8Rng::seed_from_u64(seed)` and an edge set is drawn by a partial
//! Fisher-Yates shuffle of the `v(v-1)/2` vertex pairs listed in
//! lexicographic order. Step `t` swaps position `t` with a position drawn
//! uniformly from `t..m`; the first `e` pairs form the edge set.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{format, param, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    v: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Edgeless graph on `v` vertices.
    pub fn empty(v: usize) -> Self {
        Self {
            v,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(v: usize) -> Self {
        let mut g = Self::empty(v);
        for i in 0..v {
            for j in i + 1..v {
                g.edges.insert((i, j));
            }
        }
        g
    }

    pub fn from_edges(v: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(v);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Adds the undirected edge `{a, b}`. Rejects loops, out-of-range
    /// endpoints and duplicates.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(param(format!("self-loop on vertex {a}")));
        }
        if a >= self.v || b >= self.v {
            return Err(param(format!(
                "edge ({a}, {b}) out of range for {} vertices",
                self.v
            )));
        }
        if !self.edges.insert((a.min(b), a.max(b))) {
            return Err(param(format!("duplicate edge ({a}, {b})")));
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.v
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Edges as `(i, j)` with `i < j`, lexicographically sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == vertex || b == vertex)
            .count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.v];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Graph on the same vertices whose edges are exactly the non-edges of `self`.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.v);
        for i in 0..self.v {
            for j in i + 1..self.v {
                if !self.edges.contains(&(i, j)) {
                    g.edges.insert((i, j));
                }
            }
        }
        g
    }

    /// Relabels vertex `i` as `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.v {
            return Err(param("permutation length differs from vertex count"));
        }
        let mut seen = vec![false; self.v];
        for &p in perm {
            if p >= self.v || std::mem::replace(&mut seen[p], true) {
                return Err(param("not a permutation"));
            }
        }
        Graph::from_edges(self.v, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))
    }

    /// Uniformly random graph with exactly `v` vertices and `e` edges.
    pub fn sample(v: usize, e: usize, seed: u64) -> Result<Graph> {
        let m = max_edges(v);
        if e > m {
            return Err(param(format!(
                "{e} edges requested but {v} vertices allow at most {m}"
            )));
        }
        let mut pairs: Vec<(usize, usize)> = (0..v)
            .flat_map(|i| (i + 1..v).map(move |j| (i, j)))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for t in 0..e {
            let r = rng.gen_range(t..m);
            pairs.swap(t, r);
        }
        Ok(Graph {
            v,
            edges: pairs[..e].iter().copied().collect(),
        })
    }

    /// A uniformly random relabelling of `self` (an isomorphic copy).
    pub fn permuted(&self, seed: u64) -> Graph {
        let perm = random_permutation(self.v, seed);
        self.relabel(&perm).expect("valid permutation")
    }

    /// Edge-list text: `"v e"` then one `"i j"` line per edge, 0-based, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.v, self.edges.len());
        for &(a, b) in &self.edges {
            writeln!(out, "{a} {b}").unwrap();
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| format("empty edge list"))?;
        let (v, e) = parse_pair(header)?;
        let mut g = Graph::empty(v);
        for line in lines {
            let (a, b) = parse_pair(line)?;
            g.add_edge(a, b).map_err(|err| format(err.to_string()))?;
        }
        if g.num_edges() != e {
            return Err(format(format!(
                "header declares {e} edges but {} were listed",
                g.num_edges()
            )));
        }
        Ok(g)
    }

    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
        Self::from_edge_list(&std::fs::read_to_string(path)?)
    }

    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }
}

pub fn max_edges(v: usize) -> usize {
    v * v.saturating_sub(1) / 2
}

/// Uniform permutation of `0..n` via Fisher-Yates on a ChaCha8 stream.
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..n.saturating_sub(1) {
        let r = rng.gen_range(t..n);
        perm.swap(t, r);
    }
    perm
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(|tok| {
        tok.parse::<usize>()
            .map_err(|_| format(format!("expected an integer, found {tok:?}")))
    });
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a?, b?)),
        _ => Err(format(format!("expected two integers, found {line:?}"))),
    }
}
