//! Dense statevector evaluation for small circuits.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qubo::Solution;

use super::{Gate, GateList};

/// Largest circuit width accepted by [`basis_phase`].
pub const STATEVECTOR_LIMIT: usize = 20;

/// Runs `c` on the basis state `|x>` and returns the amplitude of `|x>` in
/// the result. Qubit `q` is bit `q` of the basis index.
///
/// With `cost_only`, the circuit may only hold `RZ` and `CNOT` gates and
/// must map `|x>` to a phase times `|x>`; anything else is a contract error.
pub fn basis_phase(c: &GateList, x: &Solution, cost_only: bool) -> Result<Complex64> {
    let n = c.n();
    if n > STATEVECTOR_LIMIT {
        return Err(Error::Capacity {
            what: "statevector",
            n,
            limit: STATEVECTOR_LIMIT,
        });
    }
    if x.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x.len(),
        });
    }
    if cost_only {
        if let Some(g) = c.gates().iter().find(|g| !g.is_diagonal_stage()) {
            return Err(Error::Contract(format!(
                "{g:?} is not part of a diagonal cost layer"
            )));
        }
    }
    let start = x.to_mask().expect("width checked above") as usize;
    let mut psi = vec![Complex64::new(0.0, 0.0); 1 << n];
    psi[start] = Complex64::new(1.0, 0.0);
    for g in c.gates() {
        apply(&mut psi, g);
    }
    let amp = psi[start];
    if cost_only && (amp.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Contract(
            "cost layer does not return the basis state to itself".into(),
        ));
    }
    Ok(amp)
}

fn apply(psi: &mut [Complex64], g: &Gate) {
    match *g {
        Gate::H(q) => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            pairs(psi, q, |a, b| ((a + b) * s, (a - b) * s));
        }
        Gate::Rx(q, t) => {
            let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
            let mi = Complex64::new(0.0, -s);
            pairs(psi, q, |a, b| (a * c + b * mi, a * mi + b * c));
        }
        Gate::Rz(q, t) => {
            let lo = Complex64::from_polar(1.0, -t / 2.0);
            let hi = Complex64::from_polar(1.0, t / 2.0);
            pairs(psi, q, |a, b| (a * lo, b * hi));
        }
        Gate::Cnot { control, target } => {
            let (cb, tb) = (1usize << control, 1usize << target);
            for i in 0..psi.len() {
                if i & cb != 0 && i & tb == 0 {
                    psi.swap(i, i | tb);
                }
            }
        }
    }
}

/// Applies a 2x2 update to every amplitude pair differing in bit `q`.
fn pairs(
    psi: &mut [Complex64],
    q: usize,
    f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64),
) {
    let bit = 1usize << q;
    for i in 0..psi.len() {
        if i & bit == 0 {
            let (a, b) = f(psi[i], psi[i | bit]);
            psi[i] = a;
            psi[i | bit] = b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qaoa::{cost_layer, CouplingOrder};
    use crate::QuboMatrix;

    #[test]
    fn empty_circuit_has_unit_amplitude() {
        let c = GateList::new(3);
        let a = basis_phase(&c, &Solution::from_ones(3, &[1]), true).unwrap();
        assert_eq!(a, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rz_phase_ratio() {
        let theta = 0.37;
        let mut c = GateList::new(1);
        c.push(Gate::Rz(0, theta)).unwrap();
        let one = basis_phase(&c, &Solution::from_ones(1, &[0]), true).unwrap();
        let zero = basis_phase(&c, &Solution::zeros(1), true).unwrap();
        let ratio = one / zero;
        assert!((ratio - Complex64::from_polar(1.0, theta)).norm() < 1e-12);
    }

    #[test]
    fn cost_layer_phase_of_table_one() {
        let mut q = QuboMatrix::new(6);
        for i in 0..6 {
            q.set(i, i, -1.0);
        }
        for (i, j) in [
            (0, 1),
            (0, 4),
            (1, 2),
            (1, 4),
            (1, 5),
            (2, 3),
            (2, 4),
            (3, 5),
            (4, 5),
        ] {
            q.set(i, j, 3.0);
        }
        let gamma = 0.41;
        let c = cost_layer(&q, gamma, CouplingOrder::Ascending);
        let px = basis_phase(&c, &Solution::from_ones(6, &[1, 4]), true).unwrap();
        let py = basis_phase(&c, &Solution::from_ones(6, &[1]), true).unwrap();
        assert!((px / py - Complex64::from_polar(1.0, -gamma * 2.0)).norm() < 1e-12);
    }

    #[test]
    fn cost_only_rejects_mixers() {
        let mut c = GateList::new(1);
        c.push(Gate::H(0)).unwrap();
        assert!(matches!(
            basis_phase(&c, &Solution::zeros(1), true),
            Err(Error::Contract(_))
        ));
        let a = basis_phase(&c, &Solution::zeros(1), false).unwrap();
        assert!((a.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn unpaired_cnot_is_rejected_in_cost_mode() {
        let mut c = GateList::new(2);
        c.push(Gate::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        assert!(basis_phase(&c, &Solution::from_ones(2, &[0]), true).is_err());
        assert!(basis_phase(&c, &Solution::zeros(2), true).is_ok());
    }

    #[test]
    fn width_and_length_guards() {
        let c = GateList::new(21);
        assert!(matches!(
            basis_phase(&c, &Solution::zeros(21), false),
            Err(Error::Capacity { .. })
        ));
        assert!(basis_phase(&GateList::new(2), &Solution::zeros(3), false).is_err());
    }
}
