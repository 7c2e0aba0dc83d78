//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use qubo_semisym::encoders::{
    graph_coloring_qubo, graph_isomorphism_qubo, hamilton_cycle_qubo, max_clique_qubo,
    vertex_cover_qubo, PenaltyWeight,
};
use qubo_semisym::semisym::{enhance, get_conflict_list, get_most_sym_qubits, MIN_SYMS};
use qubo_semisym::{Graph, QuboMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer entries drawn uniformly from `lo..=hi`, each upper-triangular
/// slot filled with probability `density`.
pub fn uniform_qubo(n: usize, lo: i32, hi: i32, density: f64, r: &mut ChaCha8Rng) -> QuboMatrix {
    let mut q = QuboMatrix::new(n);
    for i in 0..n {
        for j in i..n {
            if r.gen_bool(density) {
                q.set(i, j, r.gen_range(lo..=hi) as f64);
            }
        }
    }
    q
}

/// Integer instances in `[-5, 5]` shaped so that conflicts with many shared
/// couplings exist: each column has one preferred coupling value, the
/// diagonal is `0` or `-1` and there are no negative couplings.
pub fn clustered_qubo(n: usize, r: &mut ChaCha8Rng) -> QuboMatrix {
    let column: Vec<i32> = (0..n).map(|_| r.gen_range(1..=5)).collect();
    let mut q = QuboMatrix::new(n);
    for i in 0..n {
        q.set(i, i, -(r.gen_range(0..=1) as f64));
        for (j, &preferred) in column.iter().enumerate().skip(i + 1) {
            if r.gen_bool(0.75) {
                let v = if r.gen_bool(0.8) {
                    preferred
                } else {
                    r.gen_range(1..=5)
                };
                q.set(i, j, v as f64);
            }
        }
    }
    q
}

/// Energy straight from the definition, with no shortcuts.
pub fn oracle_energy(q: &QuboMatrix, bits: &[bool]) -> f64 {
    let mut e = q.offset();
    for i in 0..q.n() {
        for j in i..q.n() {
            if bits[i] && bits[j] {
                e += q.get(i, j);
            }
        }
    }
    e
}

pub fn mask_bits(n: usize, mask: u64) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// Minimum of the modified energy over every ancilla assignment.
pub fn oracle_best_extension(q_mod: &QuboMatrix, base: &[bool]) -> f64 {
    let m = q_mod.n() - base.len();
    (0..1u64 << m)
        .map(|a| {
            let mut bits = base.to_vec();
            bits.extend(mask_bits(m, a));
            oracle_energy(q_mod, &bits)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Direct transcription of the factoring loop on the sparse matrix, used as
/// a second route next to the incremental engine.
pub fn reference_factor_out(
    q: &QuboMatrix,
    budget: usize,
    z: f64,
) -> (QuboMatrix, Vec<(usize, usize, Vec<usize>)>) {
    let mut cur = q.clone();
    let mut steps = Vec::new();
    for _ in 0..budget {
        let conflicts = get_conflict_list(&cur);
        if conflicts.is_empty() {
            break;
        }
        let best = get_most_sym_qubits(&cur, &conflicts);
        if best.syms.len() < MIN_SYMS {
            break;
        }
        cur = enhance(&cur, best.pair, &best.syms, z).unwrap();
        steps.push((best.pair.i, best.pair.j, best.syms));
    }
    (cur, steps)
}

/// Every encoder on small graphs, at most 12 qubits each.
pub fn small_encoder_instances() -> Vec<(String, QuboMatrix)> {
    let a = PenaltyWeight::default();
    let mut out = Vec::new();
    for seed in 0..4u64 {
        let g = Graph::sample(10, 20 + seed as usize, seed).unwrap();
        out.push((format!("clique v10 s{seed}"), max_clique_qubo(&g, a)));
        let g = Graph::sample(12, 18 + seed as usize, seed).unwrap();
        out.push((format!("cover v12 s{seed}"), vertex_cover_qubo(&g, a)));
        let g = Graph::sample(4, 3 + seed as usize % 3, seed).unwrap();
        out.push((
            format!("coloring v4 s{seed}"),
            graph_coloring_qubo(&g, 3, a).unwrap(),
        ));
        let g = Graph::sample(3, 2 + seed as usize % 2, seed).unwrap();
        out.push((
            format!("hamilton v3 s{seed}"),
            hamilton_cycle_qubo(&g, a).unwrap(),
        ));
        let g1 = Graph::sample(3, 1 + seed as usize % 3, seed).unwrap();
        let g2 = g1.permuted(seed + 100);
        out.push((
            format!("isomorphism v3 s{seed}"),
            graph_isomorphism_qubo(&g1, &g2, a).unwrap(),
        ));
    }
    out.push((
        "clique complete v8".into(),
        max_clique_qubo(&Graph::complete(8), a),
    ));
    out.push((
        "clique empty v8".into(),
        max_clique_qubo(&Graph::empty(8), a),
    ));
    out
}

/// Dense instance for timing: diagonal `-1`, every coupling in `3..=5`.
pub fn dense_positive_qubo(n: usize, seed: u64) -> QuboMatrix {
    let mut r = rng(seed);
    let mut q = QuboMatrix::new(n);
    for i in 0..n {
        q.set(i, i, -1.0);
        for j in i + 1..n {
            q.set(i, j, r.gen_range(3..=5) as f64);
        }
    }
    q
}
