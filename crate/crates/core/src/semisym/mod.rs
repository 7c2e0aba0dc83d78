//! Semi-symmetry factoring.
//!
//! Two qubits `i < j` conflict when turning both on is always worse than
//! any other setting of the pair. If they also share identical non-zero
//! couplings to at least three other qubits (`syms`), those couplings can be
//! moved onto a fresh ancilla qubit `a` constrained by a penalty `z` to equal
//! `x_i OR x_j`. Each such step removes `|syms| - 2` couplings.
//!
//! The free functions in this module ([`get_conflict_list`],
//! [`get_most_sym_qubits`], [`enhance`]) operate directly on a
//! [`QuboMatrix`] and follow the algorithm step by step. [`factor_out`]
//! drives the same procedure through [`Factorizer`], which keeps the
//! shared-coupling counts of every qubit pair up to date so that a step
//! costs `O(n^2)` instead of `O(n^3)`.

mod engine;
mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::qubo::{coeff_eq, QuboMatrix};

pub use engine::Factorizer;
pub use verify::{canonical_ancillas, is_conflicting, verify_equivalence, VerificationVerdict};

/// Minimum number of shared couplings for a conflicting pair to be factored.
pub const MIN_SYMS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConflictPair {
    pub i: usize,
    pub j: usize,
}

impl ConflictPair {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i < j {
            Ok(Self { i, j })
        } else {
            Err(param(format!("conflict pair needs i < j, got ({i}, {j})")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiSymmetry {
    pub pair: ConflictPair,
    /// Qubits `k` outside the pair with `Q_ik = Q_jk != 0`, ascending.
    pub syms: Vec<usize>,
}

impl SemiSymmetry {
    pub fn is_eligible(&self) -> bool {
        self.syms.len() >= MIN_SYMS
    }
}

/// How the per-row negative sum `Z[i]` of the conflict test is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RowSum {
    /// Negative coefficients of the symmetrized row, diagonal included.
    #[default]
    WithDiagonal,
    /// Negative off-diagonal coefficients only.
    CouplingsOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactoringStep {
    pub ancilla: usize,
    pub i: usize,
    pub j: usize,
    pub syms: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactoringReport {
    pub base_n: usize,
    pub final_n: usize,
    pub z: f64,
    pub steps: Vec<FactoringStep>,
}

impl FactoringReport {
    pub fn empty(base_n: usize, z: f64) -> Self {
        Self {
            base_n,
            final_n: base_n,
            z,
            steps: Vec::new(),
        }
    }

    pub fn num_ancillas(&self) -> usize {
        self.steps.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: FactoringReport = serde_json::from_str(text)?;
        report.check()?;
        Ok(report)
    }

    fn check(&self) -> Result<()> {
        if self.final_n != self.base_n + self.steps.len() {
            return Err(Error::Format(format!(
                "report lists {} steps but grows {} -> {}",
                self.steps.len(),
                self.base_n,
                self.final_n
            )));
        }
        for (t, step) in self.steps.iter().enumerate() {
            if step.ancilla != self.base_n + t || step.i >= step.j || step.j >= step.ancilla {
                return Err(Error::Format(format!("step {t} is inconsistent")));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_z(z: f64) -> Result<()> {
    if z.is_finite() && z > 0.0 {
        Ok(())
    } else {
        Err(param(format!("penalty z must be positive, got {z}")))
    }
}

#[inline]
pub(crate) fn shares(a: f64, b: f64) -> bool {
    a != 0.0 && b != 0.0 && coeff_eq(a, b)
}

/// `Z[i]`: sum of the negative coefficients in row `i` of the symmetrized
/// matrix, accumulated in column order.
pub fn negative_row_sums(q: &QuboMatrix, row_sum: RowSum) -> Vec<f64> {
    let mut z = vec![0.0; q.n()];
    for ((i, j), v) in q.entries() {
        if v >= 0.0 {
            continue;
        }
        if i == j {
            if row_sum == RowSum::WithDiagonal {
                z[i] += v;
            }
        } else {
            z[i] += v;
            z[j] += v;
        }
    }
    z
}

/// All coupled pairs `i < j` with `Q_ij > -Z[i] - Z[j]`, sorted.
pub fn get_conflict_list(q: &QuboMatrix) -> Vec<ConflictPair> {
    get_conflict_list_with(q, RowSum::WithDiagonal)
}

pub fn get_conflict_list_with(q: &QuboMatrix, row_sum: RowSum) -> Vec<ConflictPair> {
    let z = negative_row_sums(q, row_sum);
    q.couplings()
        .filter(|&((i, j), v)| v > -z[i] - z[j])
        .map(|((i, j), _)| ConflictPair { i, j })
        .collect()
}

/// Shared non-zero couplings of `i` and `j` to qubits outside the pair.
pub fn shared_couplings(q: &QuboMatrix, i: usize, j: usize) -> Vec<usize> {
    (0..q.n())
        .filter(|&k| k != i && k != j && shares(q.get(i, k), q.get(j, k)))
        .collect()
}

/// The pair from `conflicts` with the most shared couplings. Among equally
/// large candidates the one listed last wins. An empty list yields the
/// placeholder pair `(0, 1)` with no shared couplings.
pub fn get_most_sym_qubits(q: &QuboMatrix, conflicts: &[ConflictPair]) -> SemiSymmetry {
    let mut best = SemiSymmetry {
        pair: ConflictPair { i: 0, j: 1 },
        syms: Vec::new(),
    };
    for &pair in conflicts {
        let syms = shared_couplings(q, pair.i, pair.j);
        if syms.len() >= best.syms.len() {
            best = SemiSymmetry { pair, syms };
        }
    }
    best
}

/// Appends ancilla `a = n` and moves the couplings of `pair` to `syms` onto it.
///
/// `Q_ii += z`, `Q_jj += z`, `Q_aa = z`, `Q_ia = Q_ja = -2z`, `Q_ij += 2z`;
/// for each `k` in `syms`, `Q_ka` takes the old `Q_ik` and `Q_ik`, `Q_jk`
/// are removed.
pub fn enhance(q: &QuboMatrix, pair: ConflictPair, syms: &[usize], z: f64) -> Result<QuboMatrix> {
    check_z(z)?;
    let n = q.n();
    let ConflictPair { i, j } = pair;
    if i >= j || j >= n {
        return Err(param(format!("pair ({i}, {j}) invalid for {n} qubits")));
    }
    for (t, &k) in syms.iter().enumerate() {
        if k >= n || k == i || k == j || syms[..t].contains(&k) {
            return Err(param(format!(
                "qubit {k} cannot be a shared coupling of ({i}, {j})"
            )));
        }
        if !shares(q.get(i, k), q.get(j, k)) {
            return Err(param(format!(
                "qubits {i} and {j} do not share a coupling to {k}"
            )));
        }
    }
    let a = n;
    let mut out = q.clone();
    out.resize(n + 1);
    out.add(i, i, z);
    out.add(j, j, z);
    out.set(a, a, z);
    out.set(i, a, -2.0 * z);
    out.set(j, a, -2.0 * z);
    out.add(i, j, 2.0 * z);
    for &k in syms {
        out.set(k, a, q.get(i, k));
        out.set(i, k, 0.0);
        out.set(j, k, 0.0);
    }
    Ok(out)
}

/// Sum of `|Q_ij|` over every stored entry, diagonal included.
pub fn default_z(q: &QuboMatrix) -> f64 {
    q.entries().map(|(_, v)| v.abs()).sum()
}

/// Factors out up to `num_ancillas` semi-symmetries with penalty `z`.
pub fn factor_out(
    q: &QuboMatrix,
    num_ancillas: usize,
    z: f64,
) -> Result<(QuboMatrix, FactoringReport)> {
    factor_out_with(q, num_ancillas, z, RowSum::default())
}

pub fn factor_out_with(
    q: &QuboMatrix,
    num_ancillas: usize,
    z: f64,
    row_sum: RowSum,
) -> Result<(QuboMatrix, FactoringReport)> {
    let mut f = Factorizer::with_row_sum(q, z, row_sum)?;
    while f.num_ancillas() < num_ancillas && f.step().is_some() {}
    Ok((f.matrix(), f.report()))
}
