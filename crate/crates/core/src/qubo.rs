//! Sparse upper-triangular QUBO matrices and exhaustive energy evaluation.
//!
//! The energy of a bitvector `x` is `offset + sum_{i <= j} x_i x_j Q_ij`.
//! Entries are kept in a `BTreeMap` keyed by `(i, j)` with `i <= j`, so
//! iteration order is row-major and deterministic. Integer-valued matrices
//! stay exact: every coefficient is an `f64`, and integer sums below 2^53
//! never round.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{format, param, Error, Result};

/// Default upper bound on the number of qubits that may be enumerated
/// exhaustively (2^24 assignments).
pub const ENUMERATION_LIMIT: usize = 24;

/// Absolute tolerance used when comparing non-integer coefficients.
pub const COEFF_TOLERANCE: f64 = 1e-9;

/// Coefficient equality. Exact for integers, `COEFF_TOLERANCE` otherwise.
#[inline]
pub fn coeff_eq(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= COEFF_TOLERANCE
}

/// A binary assignment `x` in {0,1}^n, packed into 64-bit words.
///
/// Ordering compares the bitvector as an unsigned integer where qubit 0 is
/// the least significant bit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    len: usize,
    words: SmallVec<[u64; 1]>,
}

impl Solution {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: SmallVec::from_elem(0, len.div_ceil(64)),
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    /// Builds a solution of length `len <= 64` from the low bits of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64, "mask solutions hold at most 64 bits");
        let mask = if len == 64 {
            mask
        } else {
            mask & ((1u64 << len) - 1)
        };
        let mut s = Self::zeros(len);
        if len > 0 {
            s.words[0] = mask;
        }
        s
    }

    /// Solution of length `len` with exactly the listed qubits set.
    pub fn from_ones(len: usize, ones: &[usize]) -> Self {
        let mut s = Self::zeros(len);
        for &i in ones {
            s.set(i, true);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The low 64 bits as an integer, if the solution fits.
    pub fn to_mask(&self) -> Option<u64> {
        match self.len {
            0 => Some(0),
            1..=64 => Some(self.words[0]),
            _ => None,
        }
    }

    /// `self ++ tail`.
    pub fn concat(&self, tail: &Solution) -> Solution {
        let mut out = Solution::zeros(self.len + tail.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in tail.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl Ord for Solution {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Solution {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Bit string with qubit 0 first, e.g. `010010`.
impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Solution({self})")
    }
}

impl std::str::FromStr for Solution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format(format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Solution::from_bits(&bits))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub solution: Solution,
    pub energy: f64,
}

/// Symmetric QUBO matrix stored as its upper triangle.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct QuboMatrix {
    n: usize,
    entries: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

#[inline]
fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

impl QuboMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            entries: BTreeMap::new(),
            offset: 0.0,
        }
    }

    /// Builds a matrix from the upper triangle of a dense row-major array.
    /// Entries below the diagonal are ignored.
    pub fn from_dense_upper(rows: &[Vec<f64>]) -> Self {
        let mut q = Self::new(rows.len());
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate().skip(i) {
                q.set(i, j, v);
            }
        }
        q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn set_offset(&mut self, offset: f64) {
        assert!(offset.is_finite(), "offset must be finite");
        self.offset = offset;
    }

    /// Coefficient at `(i, j)`; `(j, i)` addresses the same entry.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries.get(&ordered(i, j)).copied().unwrap_or(0.0)
    }

    /// Writes a coefficient. An exact zero removes the entry.
    ///
    /// # Panics
    /// If an index is `>= n` or the value is not finite. Use
    /// [`QuboMatrix::try_set`] for untrusted input.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        if let Err(e) = self.try_set(i, j, value) {
            panic!("{e}");
        }
    }

    pub fn try_set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(param(format!(
                "index ({i}, {j}) out of range for {} qubits",
                self.n
            )));
        }
        if !value.is_finite() {
            return Err(param(format!("coefficient at ({i}, {j}) is not finite")));
        }
        let key = ordered(i, j);
        if value == 0.0 {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    /// `Q_ij += delta`, removing the entry if the result is exactly zero.
    pub fn add(&mut self, i: usize, j: usize, delta: f64) {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range");
        assert!(delta.is_finite(), "delta must be finite");
        match self.entries.entry(ordered(i, j)) {
            Entry::Occupied(mut e) => {
                let v = *e.get() + delta;
                if v == 0.0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                if delta != 0.0 {
                    e.insert(delta);
                }
            }
        }
    }

    /// Grows the matrix to `n` qubits. Never shrinks.
    pub fn resize(&mut self, n: usize) {
        assert!(n >= self.n, "cannot shrink a QUBO from {} to {n}", self.n);
        self.n = n;
    }

    /// All stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Off-diagonal entries (couplings) in row-major order.
    pub fn couplings(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.entries().filter(|((i, j), _)| i != j)
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    /// Number of non-zero off-diagonal entries.
    pub fn coupling_count(&self) -> usize {
        self.entries.keys().filter(|(i, j)| i != j).count()
    }

    /// Symmetrized adjacency: for each qubit, its `(neighbour, Q)` couplings.
    pub fn neighbours(&self) -> Vec<Vec<(usize, f64)>> {
        let mut rows = vec![Vec::new(); self.n];
        for ((i, j), v) in self.couplings() {
            rows[i].push((j, v));
            rows[j].push((i, v));
        }
        for row in &mut rows {
            row.sort_by_key(|&(k, _)| k);
        }
        rows
    }

    /// Energy of `x`, i.e. `offset + sum_{i <= j} x_i x_j Q_ij`.
    pub fn energy(&self, x: &Solution) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.energy_by(|i| x.get(i)))
    }

    #[inline]
    pub(crate) fn energy_by(&self, bit: impl Fn(usize) -> bool) -> f64 {
        let mut acc = self.offset;
        for (&(i, j), &v) in &self.entries {
            if bit(i) && bit(j) {
                acc += v;
            }
        }
        acc
    }

    /// Every assignment with its energy, ascending by energy and then by
    /// bitvector value.
    pub fn spectrum(&self) -> Result<Vec<SpectrumEntry>> {
        self.spectrum_limited(ENUMERATION_LIMIT)
    }

    pub fn spectrum_limited(&self, limit: usize) -> Result<Vec<SpectrumEntry>> {
        if self.n > limit.min(63) {
            return Err(Error::Capacity {
                what: "spectrum",
                n: self.n,
                limit,
            });
        }
        let mut rows: Vec<(f64, u64)> = (0..1u64 << self.n)
            .into_par_iter()
            .map(|mask| (self.energy_by(|i| mask >> i & 1 == 1), mask))
            .collect();
        rows.par_sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        Ok(rows
            .into_iter()
            .map(|(energy, mask)| SpectrumEntry {
                solution: Solution::from_mask(self.n, mask),
                energy,
            })
            .collect())
    }

    /// Lowest energy of `x ++ a` over every assignment `a` of the trailing
    /// `n - base_n` (ancilla) qubits.
    pub fn min_energy_over_ancillas(&self, base_n: usize, x: &Solution) -> Result<f64> {
        self.min_energy_over_ancillas_limited(base_n, x, ENUMERATION_LIMIT)
    }

    pub fn min_energy_over_ancillas_limited(
        &self,
        base_n: usize,
        x: &Solution,
        limit: usize,
    ) -> Result<f64> {
        if x.len() != base_n || base_n > self.n {
            return Err(Error::Dimension {
                expected: base_n.min(self.n),
                got: x.len(),
            });
        }
        let m = self.n - base_n;
        if m > limit.min(63) {
            return Err(Error::Capacity {
                what: "ancilla enumeration",
                n: m,
                limit,
            });
        }
        let best = (0..1u64 << m)
            .map(|a| {
                self.energy_by(|i| {
                    if i < base_n {
                        x.get(i)
                    } else {
                        a >> (i - base_n) & 1 == 1
                    }
                })
            })
            .fold(f64::INFINITY, f64::min);
        Ok(best)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&QuboFile::from(self)).expect("QUBO serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: QuboFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// On-disk layout: `{"n": .., "offset": .., "entries": [[i, j, value], ..]}`
/// with 0-based `i <= j`, sorted by `(i, j)`.
#[derive(Serialize, Deserialize)]
struct QuboFile {
    n: usize,
    #[serde(default)]
    offset: f64,
    entries: Vec<(usize, usize, f64)>,
}

impl From<&QuboMatrix> for QuboFile {
    fn from(q: &QuboMatrix) -> Self {
        QuboFile {
            n: q.n,
            offset: q.offset,
            entries: q.entries().map(|((i, j), v)| (i, j, v)).collect(),
        }
    }
}

impl TryFrom<QuboFile> for QuboMatrix {
    type Error = Error;

    fn try_from(file: QuboFile) -> Result<Self> {
        if !file.offset.is_finite() {
            return Err(format("offset is not finite"));
        }
        let mut q = QuboMatrix::new(file.n);
        q.offset = file.offset;
        for (i, j, v) in file.entries {
            if i > j {
                return Err(format(format!("entry ({i}, {j}) is below the diagonal")));
            }
            if i >= file.n || j >= file.n {
                return Err(format(format!(
                    "entry ({i}, {j}) out of range for n = {}",
                    file.n
                )));
            }
            if !v.is_finite() {
                return Err(format(format!("entry ({i}, {j}) is not finite")));
            }
            if q.entries.contains_key(&(i, j)) {
                return Err(format(format!("duplicate entry ({i}, {j})")));
            }
            if v != 0.0 {
                q.entries.insert((i, j), v);
            } else {
                // keep duplicate detection for explicit zeros
                q.entries.insert((i, j), 0.0);
            }
        }
        q.entries.retain(|_, v| *v != 0.0);
        Ok(q)
    }
}
