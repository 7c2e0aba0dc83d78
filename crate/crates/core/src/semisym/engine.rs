use crate::error::Result;
use crate::qubo::QuboMatrix;

use super::{check_z, shares, FactoringReport, FactoringStep, RowSum, MIN_SYMS};

/// Stepwise semi-symmetry factoring on a dense working copy.
///
/// `shared[u][v]` holds the number of qubits `k` outside `{u, v}` with
/// `Q_uk = Q_vk != 0`. Changing one coupling `(u, w)` only touches the
/// counts of pairs `(u, *)` and `(w, *)`, so it is patched in `O(n)`.
/// A step then costs one `O(n^2)` scan to find the best conflicting pair.
#[derive(Clone, Debug)]
pub struct Factorizer {
    base_n: usize,
    z: f64,
    row_sum: RowSum,
    offset: f64,
    diag: Vec<f64>,
    off: Vec<Vec<f64>>,
    shared: Vec<Vec<u32>>,
    couplings: usize,
    steps: Vec<FactoringStep>,
    stuck: bool,
}

impl Factorizer {
    pub fn new(q: &QuboMatrix, z: f64) -> Result<Self> {
        Self::with_row_sum(q, z, RowSum::default())
    }

    pub fn with_row_sum(q: &QuboMatrix, z: f64, row_sum: RowSum) -> Result<Self> {
        check_z(z)?;
        let n = q.n();
        let mut diag = vec![0.0; n];
        let mut off = vec![vec![0.0; n]; n];
        for ((i, j), v) in q.entries() {
            if i == j {
                diag[i] = v;
            } else {
                off[i][j] = v;
                off[j][i] = v;
            }
        }
        let mut shared = vec![vec![0u32; n]; n];
        for row in q.neighbours() {
            for (a, &(u, qu)) in row.iter().enumerate() {
                for &(v, qv) in &row[a + 1..] {
                    if shares(qu, qv) {
                        shared[u][v] += 1;
                        shared[v][u] += 1;
                    }
                }
            }
        }
        Ok(Self {
            base_n: n,
            z,
            row_sum,
            offset: q.offset(),
            diag,
            off,
            shared,
            couplings: q.coupling_count(),
            steps: Vec::new(),
            stuck: false,
        })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn base_n(&self) -> usize {
        self.base_n
    }

    pub fn num_ancillas(&self) -> usize {
        self.steps.len()
    }

    pub fn coupling_count(&self) -> usize {
        self.couplings
    }

    pub fn steps(&self) -> &[FactoringStep] {
        &self.steps
    }

    /// Factors out the best remaining semi-symmetry. Returns `None`, and
    /// keeps returning it, once no conflicting pair shares at least three
    /// couplings.
    pub fn step(&mut self) -> Option<&FactoringStep> {
        if self.stuck {
            return None;
        }
        let Some((i, j)) = self.best_pair() else {
            self.stuck = true;
            return None;
        };
        let syms: Vec<usize> = (0..self.n())
            .filter(|&k| k != i && k != j && shares(self.off[i][k], self.off[j][k]))
            .collect();
        debug_assert_eq!(syms.len(), self.shared[i][j] as usize);
        let a = self.push_qubit();
        let z = self.z;
        self.diag[i] += z;
        self.diag[j] += z;
        self.diag[a] = z;
        self.set_coupling(i, a, -2.0 * z);
        self.set_coupling(j, a, -2.0 * z);
        self.set_coupling(i, j, self.off[i][j] + 2.0 * z);
        for &k in &syms {
            self.set_coupling(k, a, self.off[i][k]);
            self.set_coupling(i, k, 0.0);
            self.set_coupling(j, k, 0.0);
        }
        self.steps.push(FactoringStep {
            ancilla: a,
            i,
            j,
            syms,
        });
        self.steps.last()
    }

    /// The conflicting pair with the most shared couplings (last one in
    /// row-major order on ties), if it is eligible.
    fn best_pair(&self) -> Option<(usize, usize)> {
        let n = self.n();
        let neg = self.negative_row_sums();
        let mut best: Option<(usize, usize)> = None;
        let mut best_count = 0u32;
        for u in 0..n {
            let row = &self.off[u];
            for v in u + 1..n {
                let q = row[v];
                if q != 0.0 && q > -neg[u] - neg[v] && self.shared[u][v] >= best_count {
                    best = Some((u, v));
                    best_count = self.shared[u][v];
                }
            }
        }
        best.filter(|_| best_count as usize >= MIN_SYMS)
    }

    fn negative_row_sums(&self) -> Vec<f64> {
        let with_diag = self.row_sum == RowSum::WithDiagonal;
        (0..self.n())
            .map(|u| {
                let mut s = 0.0;
                for (k, &v) in self.off[u].iter().enumerate() {
                    let v = if k == u && with_diag { self.diag[u] } else { v };
                    if v < 0.0 {
                        s += v;
                    }
                }
                s
            })
            .collect()
    }

    fn push_qubit(&mut self) -> usize {
        let a = self.n();
        for row in &mut self.off {
            row.push(0.0);
        }
        self.off.push(vec![0.0; a + 1]);
        for row in &mut self.shared {
            row.push(0);
        }
        self.shared.push(vec![0; a + 1]);
        self.diag.push(0.0);
        a
    }

    fn set_coupling(&mut self, u: usize, w: usize, value: f64) {
        let old = self.off[u][w];
        if old == value {
            return;
        }
        for v in 0..self.n() {
            if v == u || v == w {
                continue;
            }
            let b = self.off[v][w];
            if b != 0.0 {
                let d = shares(value, b) as i64 - shares(old, b) as i64;
                bump(&mut self.shared, u, v, d);
            }
            let c = self.off[v][u];
            if c != 0.0 {
                let d = shares(value, c) as i64 - shares(old, c) as i64;
                bump(&mut self.shared, w, v, d);
            }
        }
        self.off[u][w] = value;
        self.off[w][u] = value;
        match (old != 0.0, value != 0.0) {
            (false, true) => self.couplings += 1,
            (true, false) => self.couplings -= 1,
            _ => {}
        }
    }

    /// The current matrix.
    pub fn matrix(&self) -> QuboMatrix {
        let n = self.n();
        let mut q = QuboMatrix::new(n);
        q.set_offset(self.offset);
        for u in 0..n {
            q.set(u, u, self.diag[u]);
            for v in u + 1..n {
                q.set(u, v, self.off[u][v]);
            }
        }
        q
    }

    pub fn report(&self) -> FactoringReport {
        FactoringReport {
            base_n: self.base_n,
            final_n: self.n(),
            z: self.z,
            steps: self.steps.clone(),
        }
    }
}

#[inline]
fn bump(shared: &mut [Vec<u32>], u: usize, v: usize, d: i64) {
    if d != 0 {
        let c = (shared[u][v] as i64 + d) as u32;
        shared[u][v] = c;
        shared[v][u] = c;
    }
}
