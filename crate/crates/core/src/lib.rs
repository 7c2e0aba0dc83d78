//! QUBO encodings of graph problems, semi-symmetry factoring into ancilla
//! qubits, and QAOA circuit cost analysis (CNOT count and depth).
//!
//! Qubit indices are 0-based throughout. Worked examples that are usually
//! quoted with 1-based qubit labels (for instance "qubits 2 and 5") appear
//! here as indices 1 and 4.

pub mod encoders;
pub mod error;
pub mod graph;
pub mod harness;
pub mod qaoa;
pub mod qubo;
pub mod semisym;

pub use error::{Error, Result};
pub use graph::Graph;
pub use qubo::{QuboMatrix, Solution, SpectrumEntry};
pub use semisym::{factor_out, FactoringReport};
