mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qubo_semisym::qaoa::{
    basis_phase, build_circuit, build_circuit_with, cost_layer, CouplingOrder, Gate, GateList,
    QaoaParams,
};
use qubo_semisym::{QuboMatrix, Solution};
use rand::Rng;

fn max_degree(q: &QuboMatrix) -> usize {
    q.neighbours().iter().map(Vec::len).max().unwrap_or(0)
}

fn phase_error(q: &QuboMatrix, gamma: f64, order: CouplingOrder, masks: &[u64]) -> f64 {
    let n = q.n();
    let c = cost_layer(q, gamma, order);
    let amp = |m: u64| basis_phase(&c, &Solution::from_mask(n, m), true).unwrap();
    let e = |m: u64| oracle_energy(q, &mask_bits(n, m));
    let (a0, e0) = (amp(masks[0]), e(masks[0]));
    masks
        .iter()
        .map(|&m| {
            let want = Complex64::from_polar(1.0, -gamma * (e(m) - e0));
            (amp(m) / a0 - want).norm()
        })
        .fold(0.0, f64::max)
}

#[test]
fn cost_layer_phases_follow_energy_differences() {
    let mut r = rng(21);
    for t in 0..20 {
        let n = 1 + t % 8;
        let q = uniform_qubo(n, -5, 5, 0.7, &mut r);
        let gamma = r.gen_range(-3.0..3.0);
        let masks: Vec<u64> = (0..1u64 << n).collect();
        for order in [CouplingOrder::Ascending, CouplingOrder::Packed] {
            let err = phase_error(&q, gamma, order, &masks);
            assert!(err <= 1e-9, "instance #{t}: {err:e}");
        }
    }
}

#[test]
fn mixer_breaks_cost_only_contract() {
    let q = uniform_qubo(3, -2, 2, 1.0, &mut rng(22));
    let c = build_circuit(&q, &QaoaParams::uniform(1, 0.3, 0.2).unwrap());
    assert!(basis_phase(&c, &Solution::zeros(3), true).is_err());
    let amp = basis_phase(&c, &Solution::zeros(3), false).unwrap();
    assert!(amp.norm() <= 1.0 + 1e-12);
}

#[test]
fn text_round_trip_keeps_every_angle() {
    let mut r = rng(23);
    let q = uniform_qubo(7, -5, 5, 0.8, &mut r);
    let c = build_circuit(
        &q,
        &QaoaParams::new(vec![0.1234567, -2.5], vec![1.0 / 3.0, 0.7]).unwrap(),
    );
    let back: GateList = c.to_string().parse().unwrap();
    assert_eq!(back, c);
}

#[test]
fn packed_order_keeps_gate_multiset() {
    let q = uniform_qubo(9, -3, 3, 0.9, &mut rng(24));
    let params = QaoaParams::uniform(2, 0.5, 0.5).unwrap();
    let a = build_circuit_with(&q, &params, CouplingOrder::Ascending);
    let b = build_circuit_with(&q, &params, CouplingOrder::Packed);
    assert_eq!(a.len(), b.len());
    assert_eq!(a.cnot_count(), b.cnot_count());
    let key = |g: &Gate| format!("{g:?}");
    let mut ka: Vec<_> = a.gates().iter().map(key).collect();
    let mut kb: Vec<_> = b.gates().iter().map(key).collect();
    ka.sort();
    kb.sort();
    assert_eq!(ka, kb);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cnot_count_is_two_per_coupling_per_layer(seed in any::<u64>(), n in 1usize..16, p in 1usize..5) {
        let q = uniform_qubo(n, -4, 4, 0.6, &mut rng(seed));
        let c = build_circuit(&q, &QaoaParams::uniform(p, 0.5, 0.5).unwrap());
        prop_assert_eq!(c.cnot_count(), 2 * q.coupling_count() * p);
    }

    #[test]
    fn removing_a_gate_never_deepens(seed in any::<u64>(), n in 2usize..10, pick in any::<prop::sample::Index>()) {
        let q = uniform_qubo(n, -4, 4, 0.7, &mut rng(seed));
        let mut c = build_circuit(&q, &QaoaParams::uniform(1, 0.5, 0.5).unwrap());
        let before = c.depth();
        c.remove(pick.index(c.len()));
        prop_assert!(c.depth() <= before);
    }

    #[test]
    fn layered_depth_is_bounded_by_single_layer(seed in any::<u64>(), n in 1usize..12, p in 1usize..5, packed: bool) {
        let q = uniform_qubo(n, -4, 4, 0.6, &mut rng(seed));
        let order = if packed { CouplingOrder::Packed } else { CouplingOrder::Ascending };
        let one = build_circuit_with(&q, &QaoaParams::uniform(1, 0.5, 0.5).unwrap(), order).depth();
        let many = build_circuit_with(&q, &QaoaParams::uniform(p, 0.5, 0.5).unwrap(), order).depth();
        prop_assert!(many <= p * one + 1);
        prop_assert!(many >= 2 * max_degree(&q) * p);
    }

    #[test]
    fn depth_never_exceeds_gate_count(seed in any::<u64>(), n in 1usize..10) {
        let q = uniform_qubo(n, -4, 4, 0.6, &mut rng(seed));
        let c = build_circuit(&q, &QaoaParams::uniform(2, 0.5, 0.5).unwrap());
        prop_assert!(c.depth() <= c.len());
        prop_assert!(c.depth() >= 1 || n == 0);
    }
}
