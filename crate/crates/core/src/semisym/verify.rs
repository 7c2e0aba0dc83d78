//! Brute-force checks that factoring preserves the energy landscape.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qubo::{QuboMatrix, Solution, ENUMERATION_LIMIT};

use super::FactoringReport;

/// Outcome of [`verify_equivalence`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationVerdict {
    /// Every valid `x` keeps its energy under the best ancilla values.
    pub valid_preserved: bool,
    /// No invalid `x` gets a lower energy, even with the best ancilla values.
    pub invalid_not_lower: bool,
    /// Both matrices have the same global minimum energy.
    pub global_min_preserved: bool,
    pub valid_count: usize,
    pub invalid_count: usize,
    /// Number of invalid `x` whose best modified energy is below the original.
    pub invalid_lowered: usize,
    pub original_min: f64,
    pub modified_min: f64,
}

impl VerificationVerdict {
    pub fn all_hold(&self) -> bool {
        self.valid_preserved && self.invalid_not_lower && self.global_min_preserved
    }
}

fn same_energy(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Ancilla values `a_t = x_i OR x_j`, assigned in step order, together with
/// whether `x` is valid: no factored pair has both bits set in the extended
/// vector (ancillas included).
pub fn canonical_ancillas(report: &FactoringReport, x: &Solution) -> (Solution, bool) {
    let mut ext = x.concat(&Solution::zeros(report.steps.len()));
    let mut valid = true;
    for step in &report.steps {
        let (bi, bj) = (ext.get(step.i), ext.get(step.j));
        valid &= !(bi && bj);
        ext.set(step.ancilla, bi || bj);
    }
    (ext, valid)
}

/// Enumerates every base bitvector of `q` and compares its energy with the
/// best-ancilla energy under `q_mod`.
pub fn verify_equivalence(
    q: &QuboMatrix,
    q_mod: &QuboMatrix,
    report: &FactoringReport,
) -> Result<VerificationVerdict> {
    let n = q.n();
    if report.base_n != n || report.final_n != q_mod.n() || q_mod.n() < n {
        return Err(Error::Contract(format!(
            "report ({} -> {}) does not match matrices ({} -> {})",
            report.base_n,
            report.final_n,
            n,
            q_mod.n()
        )));
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            what: "equivalence check",
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let m = q_mod.n() - n;
    if m > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            what: "ancilla enumeration",
            n: m,
            limit: ENUMERATION_LIMIT,
        });
    }

    struct Acc {
        valid_ok: bool,
        invalid_ok: bool,
        valid: usize,
        invalid: usize,
        lowered: usize,
        min_orig: f64,
        min_mod: f64,
    }
    let identity = || Acc {
        valid_ok: true,
        invalid_ok: true,
        valid: 0,
        invalid: 0,
        lowered: 0,
        min_orig: f64::INFINITY,
        min_mod: f64::INFINITY,
    };

    let acc = (0..1u64 << n)
        .into_par_iter()
        .map(|mask| {
            let x = Solution::from_mask(n, mask);
            let e = q.energy_by(|i| mask >> i & 1 == 1);
            let best = q_mod
                .min_energy_over_ancillas(n, &x)
                .expect("dimensions checked above");
            let (_, valid) = canonical_ancillas(report, &x);
            let mut a = identity();
            a.min_orig = e;
            a.min_mod = best;
            if valid {
                a.valid = 1;
                a.valid_ok = same_energy(best, e);
            } else {
                a.invalid = 1;
                let lowered = best < e && !same_energy(best, e);
                a.invalid_ok = !lowered;
                a.lowered = lowered as usize;
            }
            a
        })
        .reduce(identity, |a, b| Acc {
            valid_ok: a.valid_ok && b.valid_ok,
            invalid_ok: a.invalid_ok && b.invalid_ok,
            valid: a.valid + b.valid,
            invalid: a.invalid + b.invalid,
            lowered: a.lowered + b.lowered,
            min_orig: a.min_orig.min(b.min_orig),
            min_mod: a.min_mod.min(b.min_mod),
        });

    Ok(VerificationVerdict {
        valid_preserved: acc.valid_ok,
        invalid_not_lower: acc.invalid_ok,
        global_min_preserved: same_energy(acc.min_orig, acc.min_mod),
        valid_count: acc.valid,
        invalid_count: acc.invalid,
        invalid_lowered: acc.lowered,
        original_min: acc.min_orig,
        modified_min: acc.min_mod,
    })
}

/// Exact conflict test: for every assignment of the other qubits, setting
/// both `i` and `j` gives a strictly higher energy than each of the other
/// three settings of the pair.
pub fn is_conflicting(q: &QuboMatrix, i: usize, j: usize) -> Result<bool> {
    let n = q.n();
    if i == j || i >= n || j >= n {
        return Err(crate::error::param(format!("invalid pair ({i}, {j})")));
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            what: "conflict check",
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let pair_bits = (1u64 << i) | (1u64 << j);
    Ok((0..1u64 << n)
        .into_par_iter()
        .filter(|mask| mask & pair_bits == 0)
        .all(|rest| {
            let h = |m: u64| q.energy_by(|k| m >> k & 1 == 1);
            let both = h(rest | pair_bits);
            both > h(rest) && both > h(rest | 1 << i) && both > h(rest | 1 << j)
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semisym::{factor_out, get_conflict_list};

    fn table_left() -> QuboMatrix {
        crate::semisym::tests::table_left()
    }

    #[test]
    fn proposition_z_holds_on_table_one() {
        let q = table_left();
        let (q_mod, report) = factor_out(&q, 1, 9.0).unwrap();
        let v = verify_equivalence(&q, &q_mod, &report).unwrap();
        assert!(v.all_hold(), "{v:?}");
        assert_eq!(v.valid_count + v.invalid_count, 64);
    }

    #[test]
    fn small_z_lowers_invalid_but_keeps_minimum() {
        let q = table_left();
        let (q_mod, report) = factor_out(&q, 1, 3.0).unwrap();
        let v = verify_equivalence(&q, &q_mod, &report).unwrap();
        assert!(!v.invalid_not_lower);
        assert!(v.invalid_lowered > 0);
        assert!(v.global_min_preserved);
        assert_eq!(v.modified_min, -3.0);
    }

    #[test]
    fn empty_report_is_trivially_equivalent() {
        let q = table_left();
        let v = verify_equivalence(&q, &q, &FactoringReport::empty(6, 1.0)).unwrap();
        assert!(v.all_hold());
        assert_eq!(v.invalid_count, 0);
    }

    #[test]
    fn mismatched_report_is_a_contract_error() {
        let q = table_left();
        let (q_mod, report) = factor_out(&q, 1, 9.0).unwrap();
        assert!(matches!(
            verify_equivalence(&q_mod, &q_mod, &report),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn syntactic_conflicts_are_semantic_conflicts() {
        let q = table_left();
        for pair in get_conflict_list(&q) {
            assert!(is_conflicting(&q, pair.i, pair.j).unwrap());
        }
        let mut weak = QuboMatrix::new(2);
        weak.set(0, 0, -1.0);
        weak.set(1, 1, -1.0);
        weak.set(0, 1, 1.0);
        assert!(!is_conflicting(&weak, 0, 1).unwrap());
    }

    #[test]
    fn canonical_extension_marks_both_set_invalid() {
        let (_, report) = factor_out(&table_left(), 1, 3.0).unwrap();
        let (ext, valid) = canonical_ancillas(&report, &Solution::from_ones(6, &[1]));
        assert!(valid);
        assert!(ext.get(6));
        let (_, valid) = canonical_ancillas(&report, &Solution::from_ones(6, &[1, 4]));
        assert!(!valid);
    }
}
