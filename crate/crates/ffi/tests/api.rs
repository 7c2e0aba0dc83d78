use std::ffi::{CStr, CString};
use std::ptr;

use qubo_semisym_ffi::*;

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    qs_string_free(p);
    s
}

fn example_graph() -> *mut QsGraph {
    let edges: [usize; 12] = [0, 2, 0, 3, 0, 5, 1, 3, 2, 5, 3, 4];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(
            qs_graph_from_edges(6, edges.as_ptr(), 6, &mut g),
            QsStatus::Ok
        );
    }
    g
}

#[test]
fn encode_factor_verify_round_trip() {
    unsafe {
        let g = example_graph();
        assert_eq!(qs_graph_num_edges(g), 6);
        let mut q = ptr::null_mut();
        assert_eq!(
            qs_encode(QsProblem::MaxClique, g, ptr::null(), 0, 3.0, &mut q),
            QsStatus::Ok
        );
        assert_eq!((qs_qubo_n(q), qs_qubo_coupling_count(q)), (6, 9));

        let (mut m, mut r) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(qs_factor_out(q, 1, 3.0, &mut m, &mut r), QsStatus::Ok);
        assert_eq!((qs_qubo_n(m), qs_qubo_coupling_count(m)), (7, 8));
        assert_eq!(qs_report_num_ancillas(r), 1);
        let mut v = 0.0;
        assert_eq!(qs_qubo_get(m, 1, 4, &mut v), QsStatus::Ok);
        assert_eq!(v, 9.0);
        assert_eq!(qs_qubo_get(m, 4, 1, &mut v), QsStatus::Ok);
        assert_eq!(v, 9.0);
        assert_eq!(qs_qubo_get(m, 7, 1, &mut v), QsStatus::Parameter);

        let mut verdict = QsVerdict::default();
        assert_eq!(qs_verify(q, m, r, &mut verdict), QsStatus::Ok);
        assert!(verdict.global_min_preserved);
        assert!(!verdict.invalid_not_lower);
        assert_eq!(verdict.modified_min, -3.0);
        qs_qubo_free(m);
        qs_report_free(r);

        let z = qs_default_z(q);
        assert_eq!(z, 33.0);
        assert_eq!(qs_factor_out(q, 1, z, &mut m, &mut r), QsStatus::Ok);
        assert_eq!(qs_verify(q, m, r, &mut verdict), QsStatus::Ok);
        assert!(
            verdict.valid_preserved && verdict.invalid_not_lower && verdict.global_min_preserved
        );

        let mut json = ptr::null_mut();
        assert_eq!(qs_report_to_json(r, &mut json), QsStatus::Ok);
        assert!(take_string(json).contains("\"steps\""));

        qs_qubo_free(m);
        qs_report_free(r);
        qs_qubo_free(q);
        qs_graph_free(g);
    }
}

#[test]
fn json_and_energy() {
    unsafe {
        let mut q = ptr::null_mut();
        assert_eq!(qs_qubo_new(3, &mut q), QsStatus::Ok);
        assert_eq!(qs_qubo_set(q, 0, 0, -1.0), QsStatus::Ok);
        assert_eq!(qs_qubo_set(q, 0, 2, 4.0), QsStatus::Ok);
        assert_eq!(qs_qubo_set_offset(q, 0.5), QsStatus::Ok);
        let mut e = 0.0;
        assert_eq!(
            qs_qubo_energy(q, [1u8, 0, 1].as_ptr(), 3, &mut e),
            QsStatus::Ok
        );
        assert_eq!(e, 3.5);
        assert_eq!(
            qs_qubo_energy(q, [1u8, 0].as_ptr(), 2, &mut e),
            QsStatus::Dimension
        );

        let mut json = ptr::null_mut();
        assert_eq!(qs_qubo_to_json(q, &mut json), QsStatus::Ok);
        let text = CString::new(take_string(json)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(qs_qubo_from_json(text.as_ptr(), &mut back), QsStatus::Ok);
        assert_eq!(
            qs_qubo_energy(back, [1u8, 0, 1].as_ptr(), 3, &mut e),
            QsStatus::Ok
        );
        assert_eq!(e, 3.5);

        let bad = CString::new("{\"n\": 1}").unwrap();
        let mut none = ptr::null_mut();
        assert_eq!(qs_qubo_from_json(bad.as_ptr(), &mut none), QsStatus::Format);
        assert!(none.is_null());
        assert!(!qs_last_error().is_null());

        qs_qubo_free(back);
        qs_qubo_free(q);
    }
}

#[test]
fn circuits_follow_the_cnot_law() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(qs_graph_sample(4, 4, 7, &mut g), QsStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(
            qs_encode(QsProblem::GraphColoring, g, ptr::null(), 3, 3.0, &mut q),
            QsStatus::Ok
        );
        for packed in [false, true] {
            let mut c = ptr::null_mut();
            assert_eq!(
                qs_circuit_build(q, 3, 0.5, 0.5, packed, &mut c),
                QsStatus::Ok
            );
            assert_eq!(qs_circuit_cnot_count(c), 2 * qs_qubo_coupling_count(q) * 3);
            assert!(qs_circuit_depth(c) <= qs_circuit_num_gates(c));
            let mut text = ptr::null_mut();
            assert_eq!(qs_circuit_to_text(c, &mut text), QsStatus::Ok);
            assert!(take_string(text).starts_with("qubits 12\n"));
            qs_circuit_free(c);
        }
        let mut c = ptr::null_mut();
        assert_eq!(
            qs_circuit_build(q, 0, 0.5, 0.5, false, &mut c),
            QsStatus::Parameter
        );
        qs_qubo_free(q);
        qs_graph_free(g);
    }
}

#[test]
fn parameter_and_null_errors() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(qs_graph_sample(4, 99, 0, &mut g), QsStatus::Parameter);
        assert!(g.is_null());
        assert_eq!(
            qs_graph_sample(4, 3, 0, ptr::null_mut()),
            QsStatus::NullPointer
        );

        let g = example_graph();
        let mut q = ptr::null_mut();
        assert_eq!(
            qs_encode(QsProblem::GraphIsomorphism, g, ptr::null(), 0, 3.0, &mut q),
            QsStatus::NullPointer
        );
        assert_eq!(
            qs_encode(QsProblem::MaxClique, g, ptr::null(), 0, -1.0, &mut q),
            QsStatus::Parameter
        );
        assert_eq!(
            qs_encode(QsProblem::GraphColoring, g, ptr::null(), 0, 3.0, &mut q),
            QsStatus::Parameter
        );

        let mut h = ptr::null_mut();
        assert_eq!(qs_graph_permuted(g, 1, &mut h), QsStatus::Ok);
        assert_eq!(
            qs_encode(QsProblem::GraphIsomorphism, g, h, 0, 3.0, &mut q),
            QsStatus::Ok
        );
        assert_eq!(qs_qubo_n(q), 36);

        let mut verdict = QsVerdict::default();
        let (mut m, mut r) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(qs_factor_out(q, 2, 100.0, &mut m, &mut r), QsStatus::Ok);
        assert_eq!(qs_verify(q, m, r, &mut verdict), QsStatus::Capacity);

        qs_qubo_free(m);
        qs_report_free(r);
        qs_qubo_free(q);
        qs_graph_free(h);
        qs_graph_free(g);
    }
}
