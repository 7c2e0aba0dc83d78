//! QUBO encodings of five graph problems.
//!
//! Every penalty double sum runs over unordered pairs of distinct variables,
//! each pair counted once with weight `A`, no matter how many of the
//! penalty conditions it meets. Structured variables `x_{r,c}` are laid out
//! row-major: index `r * cols + c`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::graph::Graph;
use crate::qubo::QuboMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    MaxClique,
    HamiltonCycles,
    GraphColoring,
    VertexCover,
    GraphIsomorphism,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 5] = [
        ProblemKind::MaxClique,
        ProblemKind::HamiltonCycles,
        ProblemKind::GraphColoring,
        ProblemKind::VertexCover,
        ProblemKind::GraphIsomorphism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::MaxClique => "max-clique",
            ProblemKind::HamiltonCycles => "hamilton-cycles",
            ProblemKind::GraphColoring => "graph-coloring",
            ProblemKind::VertexCover => "vertex-cover",
            ProblemKind::GraphIsomorphism => "graph-isomorphism",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| param(format!("unknown problem {s:?}")))
    }
}

/// Positive penalty weight `A`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct PenaltyWeight(f64);

impl PenaltyWeight {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 0.0 {
            Ok(Self(a))
        } else {
            Err(param(format!("penalty weight must be positive, got {a}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for PenaltyWeight {
    fn default() -> Self {
        Self(3.0)
    }
}

/// Maps structured variables to flat qubit indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VariableLayout {
    pub kind: ProblemKind,
    pub rows: usize,
    pub cols: usize,
}

impl VariableLayout {
    pub fn for_problem(kind: ProblemKind, vertices: usize, colors: usize) -> Self {
        let cols = match kind {
            ProblemKind::MaxClique | ProblemKind::VertexCover => 1,
            ProblemKind::HamiltonCycles | ProblemKind::GraphIsomorphism => vertices,
            ProblemKind::GraphColoring => colors,
        };
        Self {
            kind,
            rows: vertices,
            cols,
        }
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.rows && col < self.cols);
        row * self.cols + col
    }

    #[inline]
    pub fn variable(&self, index: usize) -> (usize, usize) {
        (index / self.cols, index % self.cols)
    }
}

/// Reward `-1` on every variable, then `A` on each unordered distinct pair
/// for which `conflict` holds.
fn reward_plus_pair_penalty(
    layout: VariableLayout,
    a: PenaltyWeight,
    conflict: impl Fn((usize, usize), (usize, usize)) -> bool,
) -> QuboMatrix {
    let n = layout.len();
    let mut q = QuboMatrix::new(n);
    for u in 0..n {
        q.set(u, u, -1.0);
        let vu = layout.variable(u);
        for w in u + 1..n {
            if conflict(vu, layout.variable(w)) {
                q.set(u, w, a.get());
            }
        }
    }
    q
}

/// `H = sum_i -x_i + A * sum_{(i,j) not in E} x_i x_j`.
pub fn max_clique_qubo(g: &Graph, a: PenaltyWeight) -> QuboMatrix {
    let v = g.num_vertices();
    let mut q = QuboMatrix::new(v);
    for i in 0..v {
        q.set(i, i, -1.0);
    }
    for (i, j) in g.complement().edges() {
        q.set(i, j, a.get());
    }
    q
}

/// Variables `x_{vertex, position}`. Penalised pairs: same vertex, same
/// position, or cyclically adjacent positions (including the wrap from
/// `|V|-1` to `0`) holding two vertices that share no edge.
pub fn hamilton_cycle_qubo(g: &Graph, a: PenaltyWeight) -> Result<QuboMatrix> {
    let v = g.num_vertices();
    if v < 3 {
        return Err(param(format!(
            "Hamilton cycles need at least 3 vertices, got {v}"
        )));
    }
    let layout = VariableLayout::for_problem(ProblemKind::HamiltonCycles, v, 0);
    let adjacent = |p: usize, r: usize| (p + 1) % v == r || (r + 1) % v == p;
    Ok(reward_plus_pair_penalty(layout, a, |(i, j), (k, l)| {
        i == k || j == l || (adjacent(j, l) && !g.has_edge(i, k))
    }))
}

/// Variables `x_{vertex, color}`. Penalised pairs: one vertex with two
/// colors, or one color on two adjacent vertices.
pub fn graph_coloring_qubo(g: &Graph, k: usize, a: PenaltyWeight) -> Result<QuboMatrix> {
    if k == 0 {
        return Err(param("graph coloring needs at least one color"));
    }
    let layout = VariableLayout::for_problem(ProblemKind::GraphColoring, g.num_vertices(), k);
    Ok(reward_plus_pair_penalty(layout, a, |(i, k1), (j, k2)| {
        i == j || (k1 == k2 && g.has_edge(i, j))
    }))
}

/// Expansion of `A * sum_{(u,v) in E} (1 - x_u)(1 - x_v) + sum_v x_v`:
/// offset `A|E|`, diagonal `1 - A deg(v)`, coupling `A` per edge.
pub fn vertex_cover_qubo(g: &Graph, a: PenaltyWeight) -> QuboMatrix {
    let v = g.num_vertices();
    let mut q = QuboMatrix::new(v);
    for (vertex, deg) in g.degrees().into_iter().enumerate() {
        q.set(vertex, vertex, 1.0 - a.get() * deg as f64);
    }
    for (i, j) in g.edges() {
        q.set(i, j, a.get());
    }
    q.set_offset(a.get() * g.num_edges() as f64);
    q
}

/// Variables `x_{i,j}`: vertex `i` of `g1` maps to vertex `j` of `g2`.
/// Penalised pairs: one source vertex with two images, two source vertices
/// with one image, or an edge present in exactly one of the two graphs.
pub fn graph_isomorphism_qubo(g1: &Graph, g2: &Graph, a: PenaltyWeight) -> Result<QuboMatrix> {
    let v = g1.num_vertices();
    if g2.num_vertices() != v {
        return Err(param(format!(
            "graphs have {} and {} vertices",
            v,
            g2.num_vertices()
        )));
    }
    let layout = VariableLayout::for_problem(ProblemKind::GraphIsomorphism, v, 0);
    Ok(reward_plus_pair_penalty(layout, a, |(i1, j1), (i2, j2)| {
        i1 == i2 || j1 == j2 || g1.has_edge(i1, i2) != g2.has_edge(j1, j2)
    }))
}
