//! QAOA circuits over the gate set {H, RX, RZ, CNOT}.
//!
//! The cost layer for a QUBO is compiled from its Ising form: one `RZ` per
//! non-zero field and a `CNOT, RZ, CNOT` triple per non-zero coupling, so a
//! circuit with `p` layers carries exactly `2 * couplings * p` CNOTs.
//! Connectivity is all-to-all and every gate takes one time step.

mod statevector;

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{format, param, Error, Result};
use crate::qubo::QuboMatrix;

pub use statevector::{basis_phase, STATEVECTOR_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    Rx(usize, f64),
    /// `RZ(theta) = diag(e^{-i theta/2}, e^{i theta/2})`.
    Rz(usize, f64),
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn qubits(&self) -> ([usize; 2], usize) {
        match *self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => ([q, q], 1),
            Gate::Cnot { control, target } => ([control, target], 2),
        }
    }

    pub fn is_diagonal_stage(&self) -> bool {
        matches!(self, Gate::Rz(..) | Gate::Cnot { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GateList {
    n: usize,
    gates: Vec<Gate>,
}

impl GateList {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let (qs, arity) = gate.qubits();
        if qs[..arity].iter().any(|&q| q >= self.n) {
            return Err(param(format!(
                "{gate:?} addresses a qubit outside 0..{}",
                self.n
            )));
        }
        if arity == 2 && qs[0] == qs[1] {
            return Err(param("CNOT needs two distinct qubits"));
        }
        if let Gate::Rx(_, t) | Gate::Rz(_, t) = gate {
            if !t.is_finite() {
                return Err(param("rotation angle is not finite"));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Removes the gate at `index`.
    pub fn remove(&mut self, index: usize) -> Gate {
        self.gates.remove(index)
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count()
    }

    /// As-soon-as-possible schedule length: each gate starts one step after
    /// the latest gate on any of its qubits.
    pub fn depth(&self) -> usize {
        let mut ready = vec![0usize; self.n];
        let mut depth = 0;
        for g in &self.gates {
            let (qs, arity) = g.qubits();
            let qs = &qs[..arity];
            let t = qs.iter().map(|&q| ready[q]).max().unwrap_or(0) + 1;
            for &q in qs {
                ready[q] = t;
            }
            depth = depth.max(t);
        }
        depth
    }
}

/// Line format: `qubits n`, then one gate per line (`H q`, `RX q angle`,
/// `RZ q angle`, `CNOT control target`). Angles carry 17 significant digits.
impl fmt::Display for GateList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n)?;
        for g in &self.gates {
            match *g {
                Gate::H(q) => writeln!(f, "H {q}")?,
                Gate::Rx(q, t) => writeln!(f, "RX {q} {t:.16e}")?,
                Gate::Rz(q, t) => writeln!(f, "RZ {q} {t:.16e}")?,
                Gate::Cnot { control, target } => writeln!(f, "CNOT {control} {target}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for GateList {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| format("empty circuit"))?;
        let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["qubits", n] => n.parse().map_err(|_| format("bad qubit count"))?,
            _ => return Err(format(format!("expected `qubits n`, found {header:?}"))),
        };
        let mut c = GateList::new(n);
        let qubit = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| format(format!("bad qubit {s:?}")))
        };
        let angle = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| format(format!("bad angle {s:?}")))
        };
        for line in lines {
            let gate = match line.split_whitespace().collect::<Vec<_>>()[..] {
                ["H", q] => Gate::H(qubit(q)?),
                ["RX", q, t] => Gate::Rx(qubit(q)?, angle(t)?),
                ["RZ", q, t] => Gate::Rz(qubit(q)?, angle(t)?),
                ["CNOT", a, b] => Gate::Cnot {
                    control: qubit(a)?,
                    target: qubit(b)?,
                },
                _ => return Err(format(format!("unrecognised gate line {line:?}"))),
            };
            c.push(gate).map_err(|e| format(e.to_string()))?;
        }
        Ok(c)
    }
}

/// Layer count and angles.
#[derive(Clone, Debug, PartialEq)]
pub struct QaoaParams {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() || gammas.len() != betas.len() {
            return Err(param(format!(
                "need p >= 1 matching angles, got {} gammas and {} betas",
                gammas.len(),
                betas.len()
            )));
        }
        if gammas.iter().chain(&betas).any(|t| !t.is_finite()) {
            return Err(param("angles must be finite"));
        }
        Ok(Self { gammas, betas })
    }

    /// `p` layers with constant angles; structure does not depend on them.
    pub fn uniform(p: usize, gamma: f64, beta: f64) -> Result<Self> {
        Self::new(vec![gamma; p], vec![beta; p])
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }
}

/// `H(x) = sum_{i<k} J_ik z_i z_k + sum_i h_i z_i + c` under `x = (1 - z)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ising {
    pub h: Vec<f64>,
    pub j: BTreeMap<(usize, usize), f64>,
    pub c: f64,
}

pub fn qubo_to_ising(q: &QuboMatrix) -> Ising {
    let mut h = vec![0.0; q.n()];
    let mut j = BTreeMap::new();
    let mut c = q.offset();
    for ((a, b), v) in q.entries() {
        if a == b {
            h[a] -= v / 2.0;
            c += v / 2.0;
        } else {
            let w = v / 4.0;
            j.insert((a, b), w);
            h[a] -= w;
            h[b] -= w;
            c += w;
        }
    }
    Ising { h, j, c }
}

/// Order in which coupling terms are emitted within a cost layer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CouplingOrder {
    /// Ascending `(i, k)`.
    #[default]
    Ascending,
    /// Rounds of greedy matchings: each round takes, in ascending order,
    /// every remaining coupling whose qubits are still free in that round.
    Packed,
}

fn ordered_couplings(ising: &Ising, order: CouplingOrder) -> Vec<((usize, usize), f64)> {
    let all: Vec<_> = ising.j.iter().map(|(&k, &v)| (k, v)).collect();
    match order {
        CouplingOrder::Ascending => all,
        CouplingOrder::Packed => {
            let mut left = all;
            let mut out = Vec::with_capacity(left.len());
            let mut busy = vec![usize::MAX; ising.h.len()];
            let mut round = 0;
            while !left.is_empty() {
                let mut rest = Vec::new();
                for (pair @ (a, b), w) in left {
                    if busy[a] != round && busy[b] != round {
                        busy[a] = round;
                        busy[b] = round;
                        out.push((pair, w));
                    } else {
                        rest.push((pair, w));
                    }
                }
                left = rest;
                round += 1;
            }
            out
        }
    }
}

fn push_cost_layer(
    c: &mut GateList,
    ising: &Ising,
    couplings: &[((usize, usize), f64)],
    gamma: f64,
) {
    for (q, &h) in ising.h.iter().enumerate() {
        if h != 0.0 {
            c.gates.push(Gate::Rz(q, 2.0 * gamma * h));
        }
    }
    for &((a, b), w) in couplings {
        c.gates.push(Gate::Cnot {
            control: a,
            target: b,
        });
        c.gates.push(Gate::Rz(b, 2.0 * gamma * w));
        c.gates.push(Gate::Cnot {
            control: a,
            target: b,
        });
    }
}

/// The cost layer `exp(-i gamma H)` alone (up to global phase).
pub fn cost_layer(q: &QuboMatrix, gamma: f64, order: CouplingOrder) -> GateList {
    let ising = qubo_to_ising(q);
    let mut c = GateList::new(q.n());
    push_cost_layer(&mut c, &ising, &ordered_couplings(&ising, order), gamma);
    c
}

/// Hadamards on every qubit, then `p` rounds of cost layer and `RX(2 beta)` mixer.
pub fn build_circuit(q: &QuboMatrix, params: &QaoaParams) -> GateList {
    build_circuit_with(q, params, CouplingOrder::default())
}

pub fn build_circuit_with(q: &QuboMatrix, params: &QaoaParams, order: CouplingOrder) -> GateList {
    let n = q.n();
    let ising = qubo_to_ising(q);
    let couplings = ordered_couplings(&ising, order);
    let mut c = GateList::new(n);
    c.gates.extend((0..n).map(Gate::H));
    for (&gamma, &beta) in params.gammas.iter().zip(&params.betas) {
        push_cost_layer(&mut c, &ising, &couplings, gamma);
        c.gates.extend((0..n).map(|q| Gate::Rx(q, 2.0 * beta)));
    }
    c
}

pub fn cnot_count(c: &GateList) -> usize {
    c.cnot_count()
}

pub fn depth(c: &GateList) -> usize {
    c.depth()
}

/// Gate-list text for a circuit (see the `Display` impl of [`GateList`]).
pub fn to_text(c: &GateList) -> String {
    let mut s = String::new();
    write!(s, "{c}").unwrap();
    s
}
