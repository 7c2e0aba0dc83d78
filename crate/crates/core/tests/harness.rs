use proptest::prelude::*;
use qubo_semisym::encoders::ProblemKind;
use qubo_semisym::harness::{
    builtin_settings, pareto_by_run, pareto_front, read_csv, reduction_table, run_sweep,
    run_sweeps, write_csv, ParetoPoint, SweepOptions, ZMode, CSV_HEADER,
};

fn small_opts() -> SweepOptions {
    SweepOptions {
        max_ancillas: 8,
        ..SweepOptions::default()
    }
}

fn small_settings() -> Vec<qubo_semisym::harness::ProblemSetting> {
    builtin_settings()
        .into_iter()
        .filter(|s| s.v <= 10)
        .collect()
}

#[test]
fn csv_round_trip_is_lossless() {
    let rows = run_sweeps(&small_settings(), &[0, 1], &small_opts()).unwrap();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
}

#[test]
fn csv_with_wrong_header_is_rejected() {
    let text = "problem,setting,seed,p,num_ancillas,qubits,couplings,cnots,depth\n";
    assert!(read_csv(text.as_bytes()).is_err());
}

#[test]
fn sweeps_are_deterministic() {
    let a = run_sweeps(&small_settings(), &[2], &small_opts()).unwrap();
    let b = run_sweeps(&small_settings(), &[2], &small_opts()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweep_rows_obey_cnot_law_and_coupling_monotonicity() {
    let rows = run_sweeps(&small_settings(), &[0, 1, 2, 3], &small_opts()).unwrap();
    for r in &rows {
        assert_eq!(r.cnots, 2 * r.couplings * r.p, "{r:?}");
    }
    for w in rows.windows(2) {
        let same_run =
            (w[0].problem, w[0].setting, w[0].seed) == (w[1].problem, w[1].setting, w[1].seed);
        if same_run && w[0].p == w[1].p {
            assert!(w[1].couplings <= w[0].couplings);
            assert!(w[1].qubits >= w[0].qubits);
        }
    }
}

#[test]
fn saturated_budgets_repeat_the_last_row() {
    let s = builtin_settings()
        .into_iter()
        .find(|s| s.problem == ProblemKind::HamiltonCycles && s.setting == 1)
        .unwrap();
    let rows = run_sweep(&s, 60, &[1], ZMode::Proposition).unwrap();
    assert_eq!(rows.len(), 61);
    let last = rows.last().unwrap();
    let used = last.qubits - rows[0].qubits;
    assert!(used < 60);
    for r in &rows[used..] {
        assert_eq!(
            (r.qubits, r.couplings, r.depth),
            (last.qubits, last.couplings, last.depth)
        );
    }
}

#[test]
fn vertex_cover_settings_have_no_conflicts_to_factor() {
    let s = builtin_settings()
        .into_iter()
        .find(|s| s.problem == ProblemKind::VertexCover)
        .unwrap();
    let rows = run_sweep(&s, 3, &[1], ZMode::Proposition).unwrap();
    assert!(rows.iter().all(|r| r.couplings == rows[0].couplings));
}

#[test]
fn reduction_table_covers_every_group() {
    let rows = run_sweeps(&small_settings(), &[0, 1], &small_opts()).unwrap();
    let table = reduction_table(&rows);
    assert_eq!(table.len(), small_settings().len() * 3);
    for t in &table {
        assert!(t.coupling_reduction_pct >= 0.0);
        assert_eq!(t.budget, 8);
    }
}

#[test]
fn pareto_fronts_from_sweeps_are_strictly_improving() {
    let rows = run_sweeps(&small_settings(), &[0], &small_opts()).unwrap();
    for (_, front) in pareto_by_run(&rows) {
        assert_eq!(front[0].ancillas, 0);
        for w in front.windows(2) {
            assert!(w[0].ancillas < w[1].ancillas && w[0].couplings > w[1].couplings);
        }
    }
}

proptest! {
    #[test]
    fn pareto_front_is_idempotent_and_undominated(
        pts in prop::collection::vec((0usize..20, 0usize..50), 0..40)
    ) {
        let pts: Vec<ParetoPoint> = pts.into_iter().map(|(ancillas, couplings)| ParetoPoint { ancillas, couplings }).collect();
        let front = pareto_front(&pts);
        prop_assert_eq!(pareto_front(&front), front.clone());
        for f in &front {
            prop_assert!(pts.contains(f));
            prop_assert!(!pts.iter().any(|p| p.ancillas <= f.ancillas && p.couplings <= f.couplings && p != f));
        }
        for p in &pts {
            prop_assert!(front.iter().any(|f| f.ancillas <= p.ancillas && f.couplings <= p.couplings));
        }
    }
}
