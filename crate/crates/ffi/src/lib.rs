//! C ABI over `qubo-semisym`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every fallible call returns a [`QsStatus`]; on failure a description is
//! available from [`qs_last_error`] on the same thread until the next
//! failing call. Strings returned through out-parameters are owned by the
//! caller and released with [`qs_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qubo_semisym::encoders::{
    graph_coloring_qubo, graph_isomorphism_qubo, hamilton_cycle_qubo, max_clique_qubo,
    vertex_cover_qubo, PenaltyWeight,
};
use qubo_semisym::qaoa::{build_circuit_with, CouplingOrder, GateList, QaoaParams};
use qubo_semisym::semisym::{default_z, factor_out, verify_equivalence};
use qubo_semisym::{Error, FactoringReport, Graph, QuboMatrix, Solution};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QsStatus {
    Ok = 0,
    NullPointer = 1,
    Dimension = 2,
    Capacity = 3,
    Parameter = 4,
    Format = 5,
    Contract = 6,
    Io = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QsProblem {
    MaxClique = 0,
    HamiltonCycles = 1,
    GraphColoring = 2,
    VertexCover = 3,
    GraphIsomorphism = 4,
}

/// Mirror of the library's equivalence verdict.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QsVerdict {
    pub valid_preserved: bool,
    pub invalid_not_lower: bool,
    pub global_min_preserved: bool,
    pub valid_count: usize,
    pub invalid_count: usize,
    pub invalid_lowered: usize,
    pub original_min: f64,
    pub modified_min: f64,
}

pub struct QsQubo(QuboMatrix);
pub struct QsGraph(Graph);
pub struct QsReport(FactoringReport);
pub struct QsCircuit(GateList);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(QsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Dimension { .. } => QsStatus::Dimension,
            Error::Capacity { .. } => QsStatus::Capacity,
            Error::Parameter(_) => QsStatus::Parameter,
            Error::Format(_) | Error::Json(_) | Error::Csv(_) => QsStatus::Format,
            Error::Contract(_) => QsStatus::Contract,
            Error::Io(_) => QsStatus::Io,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(QsStatus::NullPointer, format!("{what} is null"))
}

fn run(f: impl FnOnce() -> Result<(), Fail>) -> QsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            QsStatus::Internal
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_value<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = value;
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s)
        .map_err(|_| Fail(QsStatus::Internal, "string contains a nul byte".into()))?
        .into_raw();
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn qs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn qs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// graphs

/// Uniformly random simple graph with `v` vertices and `e` edges.
#[no_mangle]
pub unsafe extern "C" fn qs_graph_sample(
    v: usize,
    e: usize,
    seed: u64,
    out: *mut *mut QsGraph,
) -> QsStatus {
    run(|| put(out, QsGraph(Graph::sample(v, e, seed)?)))
}

/// Graph from `count` edges stored as consecutive `(a, b)` pairs.
#[no_mangle]
pub unsafe extern "C" fn qs_graph_from_edges(
    v: usize,
    edges: *const usize,
    count: usize,
    out: *mut *mut QsGraph,
) -> QsStatus {
    run(|| {
        if edges.is_null() && count > 0 {
            return Err(null("edges"));
        }
        let flat = if count == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(edges, 2 * count)
        };
        let g = Graph::from_edges(v, flat.chunks_exact(2).map(|p| (p[0], p[1])))?;
        put(out, QsGraph(g))
    })
}

/// Relabelled copy of `g` under a uniformly random permutation.
#[no_mangle]
pub unsafe extern "C" fn qs_graph_permuted(
    g: *const QsGraph,
    seed: u64,
    out: *mut *mut QsGraph,
) -> QsStatus {
    run(|| put(out, QsGraph(get(g, "graph")?.0.permuted(seed))))
}

#[no_mangle]
pub unsafe extern "C" fn qs_graph_num_vertices(g: *const QsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_vertices())
}

#[no_mangle]
pub unsafe extern "C" fn qs_graph_num_edges(g: *const QsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_edges())
}

#[no_mangle]
pub unsafe extern "C" fn qs_graph_free(g: *mut QsGraph) {
    free(g)
}

// QUBO matrices

#[no_mangle]
pub unsafe extern "C" fn qs_qubo_new(n: usize, out: *mut *mut QsQubo) -> QsStatus {
    run(|| put(out, QsQubo(QuboMatrix::new(n))))
}

#[no_mangle]
pub unsafe extern "C" fn qs_qubo_free(q: *mut QsQubo) {
    free(q)
}

/// Number of qubits; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn qs_qubo_n(q: *const QsQubo) -> usize {
    q.as_ref().map_or(0, |q| q.0.n())
}

#[no_mangle]
pub unsafe extern "C" fn qs_qubo_coupling_count(q: *const QsQubo) -> usize {
    q.as_ref().map_or(0, |q| q.0.coupling_count())
}

/// Sets entry `(i, j)`; `(j, i)` is the same entry. Zero removes it.
#[no_mangle]
pub unsafe extern "C" fn qs_qubo_set(q: *mut QsQubo, i: usize, j: usize, value: f64) -> QsStatus {
    run(|| {
        let q = q.as_mut().ok_or_else(|| null("qubo"))?;
        Ok(q.0.try_set(i, j, value)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn qs_qubo_get(
    q: *const QsQubo,
    i: usize,
    j: usize,
    out: *mut f64,
) -> QsStatus {
    run(|| {
        let q = get(q, "qubo")?;
        if i.max(j) >= q.0.n() {
            return Err(Fail(
                QsStatus::Parameter,
                format!("entry ({i}, {j}) out of range"),
            ));
        }
        put_value(out, q.0.get(i, j))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qs_qubo_set_offset(q: *mut QsQubo, offset: f64) -> QsStatus {
    run(|| {
        q.as_mut().ok_or_else(|| null("qubo"))?.0.set_offset(offset);
        Ok(())
    })
}

/// Energy of the bitvector `bits[0..len]` (each byte 0 or 1).
#[no_mangle]
pub unsafe extern "C" fn qs_qubo_energy(
    q: *const QsQubo,
    bits: *const u8,
    len: usize,
    out: *mut f64,
) -> QsStatus {
    run(|| {
        let q = get(q, "qubo")?;
        if bits.is_null() && len > 0 {
            return Err(null("bits"));
        }
        let raw = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(bits, len)
        };
        let x: Vec<bool> = raw.iter().map(|&b| b != 0).collect();
        put_value(out, q.0.energy(&Solution::from_bits(&x))?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn qs_qubo_from_json(text: *const c_char, out: *mut *mut QsQubo) -> QsStatus {
    run(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Fail(QsStatus::Format, "text is not UTF-8".into()))?;
        put(out, QsQubo(QuboMatrix::from_json(s)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qs_qubo_to_json(q: *const QsQubo, out: *mut *mut c_char) -> QsStatus {
    run(|| put_string(out, get(q, "qubo")?.0.to_json()))
}

/// Encodes a graph problem. `g2` is only read for isomorphism and `colors`
/// only for coloring.
#[no_mangle]
pub unsafe extern "C" fn qs_encode(
    problem: QsProblem,
    g1: *const QsGraph,
    g2: *const QsGraph,
    colors: usize,
    penalty: f64,
    out: *mut *mut QsQubo,
) -> QsStatus {
    run(|| {
        let g = &get(g1, "graph")?.0;
        let a = PenaltyWeight::new(penalty)?;
        let q = match problem {
            QsProblem::MaxClique => max_clique_qubo(g, a),
            QsProblem::HamiltonCycles => hamilton_cycle_qubo(g, a)?,
            QsProblem::GraphColoring => graph_coloring_qubo(g, colors, a)?,
            QsProblem::VertexCover => vertex_cover_qubo(g, a),
            QsProblem::GraphIsomorphism => {
                graph_isomorphism_qubo(g, &get(g2, "second graph")?.0, a)?
            }
        };
        put(out, QsQubo(q))
    })
}

// factoring

/// Sum of absolute coefficients; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn qs_default_z(q: *const QsQubo) -> f64 {
    q.as_ref().map_or(0.0, |q| default_z(&q.0))
}

/// Factors out up to `budget` semi-symmetries with penalty `z`. Both output
/// handles are written on success.
#[no_mangle]
pub unsafe extern "C" fn qs_factor_out(
    q: *const QsQubo,
    budget: usize,
    z: f64,
    out_qubo: *mut *mut QsQubo,
    out_report: *mut *mut QsReport,
) -> QsStatus {
    run(|| {
        if out_qubo.is_null() || out_report.is_null() {
            return Err(null("output pointer"));
        }
        let (m, report) = factor_out(&get(q, "qubo")?.0, budget, z)?;
        put(out_qubo, QsQubo(m))?;
        put(out_report, QsReport(report))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qs_report_num_ancillas(r: *const QsReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.num_ancillas())
}

#[no_mangle]
pub unsafe extern "C" fn qs_report_to_json(r: *const QsReport, out: *mut *mut c_char) -> QsStatus {
    run(|| put_string(out, get(r, "report")?.0.to_json()))
}

#[no_mangle]
pub unsafe extern "C" fn qs_report_free(r: *mut QsReport) {
    free(r)
}

/// Brute-force equivalence check of a factoring result.
#[no_mangle]
pub unsafe extern "C" fn qs_verify(
    q: *const QsQubo,
    q_mod: *const QsQubo,
    report: *const QsReport,
    out: *mut QsVerdict,
) -> QsStatus {
    run(|| {
        let v = verify_equivalence(
            &get(q, "qubo")?.0,
            &get(q_mod, "modified qubo")?.0,
            &get(report, "report")?.0,
        )?;
        put_value(
            out,
            QsVerdict {
                valid_preserved: v.valid_preserved,
                invalid_not_lower: v.invalid_not_lower,
                global_min_preserved: v.global_min_preserved,
                valid_count: v.valid_count,
                invalid_count: v.invalid_count,
                invalid_lowered: v.invalid_lowered,
                original_min: v.original_min,
                modified_min: v.modified_min,
            },
        )
    })
}

// circuits

/// QAOA circuit with `p` layers at uniform angles. `packed` selects the
/// matching-based coupling order.
#[no_mangle]
pub unsafe extern "C" fn qs_circuit_build(
    q: *const QsQubo,
    p: usize,
    gamma: f64,
    beta: f64,
    packed: bool,
    out: *mut *mut QsCircuit,
) -> QsStatus {
    run(|| {
        let params = QaoaParams::uniform(p, gamma, beta)?;
        let order = if packed {
            CouplingOrder::Packed
        } else {
            CouplingOrder::Ascending
        };
        put(
            out,
            QsCircuit(build_circuit_with(&get(q, "qubo")?.0, &params, order)),
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn qs_circuit_cnot_count(c: *const QsCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.0.cnot_count())
}

#[no_mangle]
pub unsafe extern "C" fn qs_circuit_depth(c: *const QsCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.0.depth())
}

#[no_mangle]
pub unsafe extern "C" fn qs_circuit_num_gates(c: *const QsCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn qs_circuit_to_text(
    c: *const QsCircuit,
    out: *mut *mut c_char,
) -> QsStatus {
    run(|| put_string(out, get(c, "circuit")?.0.to_string()))
}

#[no_mangle]
pub unsafe extern "C" fn qs_circuit_free(c: *mut QsCircuit) {
    free(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_and_message_on_bad_entry() {
        unsafe {
            let mut q = ptr::null_mut();
            assert_eq!(qs_qubo_new(3, &mut q), QsStatus::Ok);
            assert_eq!(qs_qubo_set(q, 3, 1, 1.0), QsStatus::Parameter);
            let msg = CStr::from_ptr(qs_last_error()).to_str().unwrap();
            assert!(!msg.is_empty());
            qs_qubo_free(q);
        }
    }

    #[test]
    fn null_handles_are_reported() {
        unsafe {
            let mut out = 0.0;
            assert_eq!(
                qs_qubo_get(ptr::null(), 0, 0, &mut out),
                QsStatus::NullPointer
            );
            assert_eq!(qs_qubo_n(ptr::null()), 0);
            qs_qubo_free(ptr::null_mut());
            qs_string_free(ptr::null_mut());
        }
    }
}
