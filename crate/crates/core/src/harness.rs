//! Experiment sweeps: sample graphs, encode, factor with a growing ancilla
//! budget and record coupling, CNOT and depth figures per QAOA layer count.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoders::{
    graph_coloring_qubo, graph_isomorphism_qubo, hamilton_cycle_qubo, max_clique_qubo,
    vertex_cover_qubo, PenaltyWeight, ProblemKind,
};
use crate::error::{param, Error, Result};
use crate::graph::{max_edges, Graph};
use crate::qaoa::{build_circuit_with, CouplingOrder, QaoaParams};
use crate::qubo::QuboMatrix;
use crate::semisym::{default_z, Factorizer};

/// Graph seeds used per setting by default.
pub const DEFAULT_SEEDS: [u64; 4] = [0, 1, 2, 3];
pub const DEFAULT_MAX_ANCILLAS: usize = 29;
pub const DEFAULT_P_VALUES: [usize; 3] = [1, 2, 3];

/// How the second graph of an isomorphism instance is produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsomorphismPairing {
    /// A uniformly relabelled copy of the first graph.
    #[default]
    Permuted,
    /// An independently sampled graph with the same `v` and `e`.
    Independent,
}

impl FromStr for IsomorphismPairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "permuted" => Ok(Self::Permuted),
            "independent" => Ok(Self::Independent),
            _ => Err(param(format!("unknown pairing {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSetting {
    pub problem: ProblemKind,
    /// Position of the setting within its problem (0, 1, 2 for built-ins).
    pub setting: usize,
    pub v: usize,
    pub e: usize,
    pub k: Option<usize>,
    pub penalty: f64,
    pub seed: u64,
    #[serde(default)]
    pub pairing: IsomorphismPairing,
}

/// `(v, e)` per problem, three settings each, in problem order.
const SETTING_TABLE: [(ProblemKind, [(usize, usize); 3]); 5] = [
    (ProblemKind::MaxClique, [(30, 87), (30, 174), (60, 354)]),
    (ProblemKind::HamiltonCycles, [(6, 10), (6, 8), (8, 16)]),
    (ProblemKind::GraphColoring, [(10, 31), (10, 20), (20, 114)]),
    (ProblemKind::VertexCover, [(30, 131), (30, 218), (50, 800)]),
    (ProblemKind::GraphIsomorphism, [(6, 10), (6, 8), (8, 16)]),
];

const BUILTIN_COLORS: usize = 3;

/// The fifteen experiment settings with penalty 3 and seed 0.
pub fn builtin_settings() -> Vec<ProblemSetting> {
    SETTING_TABLE
        .iter()
        .flat_map(|&(problem, rows)| {
            rows.into_iter()
                .enumerate()
                .map(move |(setting, (v, e))| ProblemSetting {
                    problem,
                    setting,
                    v,
                    e,
                    k: (problem == ProblemKind::GraphColoring).then_some(BUILTIN_COLORS),
                    penalty: 3.0,
                    seed: 0,
                    pairing: IsomorphismPairing::default(),
                })
        })
        .collect()
}

impl ProblemSetting {
    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn with_penalty(&self, penalty: f64) -> Self {
        Self {
            penalty,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.e > max_edges(self.v) {
            return Err(param(format!(
                "{} edges do not fit on {} vertices",
                self.e, self.v
            )));
        }
        match (self.problem, self.k) {
            (ProblemKind::GraphColoring, None) | (ProblemKind::GraphColoring, Some(0)) => {
                return Err(param("graph coloring needs a positive color count"))
            }
            (ProblemKind::GraphColoring, Some(_)) => {}
            (_, Some(_)) => return Err(param("only graph coloring takes a color count")),
            (_, None) => {}
        }
        if self.problem == ProblemKind::HamiltonCycles && self.v < 3 {
            return Err(param("Hamilton cycles need at least 3 vertices"));
        }
        PenaltyWeight::new(self.penalty)?;
        Ok(())
    }

    /// The graph(s) for this setting.
    pub fn graphs(&self) -> Result<(Graph, Option<Graph>)> {
        self.validate()?;
        let g = Graph::sample(self.v, self.e, self.seed)?;
        let second = (self.problem == ProblemKind::GraphIsomorphism).then(|| {
            let seed = self.seed.wrapping_add(1 << 32);
            match self.pairing {
                IsomorphismPairing::Permuted => Ok(g.permuted(seed)),
                IsomorphismPairing::Independent => Graph::sample(self.v, self.e, seed),
            }
        });
        Ok((g, second.transpose()?))
    }

    /// Samples the graph(s) and encodes the problem.
    pub fn encode(&self) -> Result<QuboMatrix> {
        let (g, second) = self.graphs()?;
        let a = PenaltyWeight::new(self.penalty)?;
        match self.problem {
            ProblemKind::MaxClique => Ok(max_clique_qubo(&g, a)),
            ProblemKind::HamiltonCycles => hamilton_cycle_qubo(&g, a),
            ProblemKind::GraphColoring => graph_coloring_qubo(&g, self.k.unwrap_or(0), a),
            ProblemKind::VertexCover => Ok(vertex_cover_qubo(&g, a)),
            ProblemKind::GraphIsomorphism => {
                graph_isomorphism_qubo(&g, second.as_ref().expect("second graph"), a)
            }
        }
    }
}

/// Penalty used for the ancilla constraints.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum ZMode {
    /// Sum of absolute coefficients of the unfactored matrix.
    #[default]
    Proposition,
    Fixed(f64),
}

impl ZMode {
    pub fn resolve(self, q: &QuboMatrix) -> f64 {
        match self {
            ZMode::Proposition => default_z(q),
            ZMode::Fixed(z) => z,
        }
    }
}

impl FromStr for ZMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "proposition" {
            return Ok(ZMode::Proposition);
        }
        match s.parse::<f64>() {
            Ok(z) if z.is_finite() && z > 0.0 => Ok(ZMode::Fixed(z)),
            _ => Err(param(format!(
                "z must be `proposition` or a positive number, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for ZMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZMode::Proposition => f.write_str("proposition"),
            ZMode::Fixed(z) => write!(f, "{z}"),
        }
    }
}

/// One CSV row. `num_ancillas` is the budget; `qubits - base qubits` is
/// the number of ancillas actually introduced.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SweepRecord {
    pub problem: ProblemKind,
    pub setting: usize,
    pub seed: u64,
    pub num_ancillas: usize,
    pub p: usize,
    pub qubits: usize,
    pub couplings: usize,
    pub cnots: usize,
    pub depth: usize,
}

pub const CSV_HEADER: &str = "problem,setting,seed,num_ancillas,p,qubits,couplings,cnots,depth";

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub max_ancillas: usize,
    pub p_values: Vec<usize>,
    pub z: ZMode,
    pub order: CouplingOrder,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            max_ancillas: DEFAULT_MAX_ANCILLAS,
            p_values: DEFAULT_P_VALUES.to_vec(),
            z: ZMode::Proposition,
            order: CouplingOrder::Ascending,
        }
    }
}

/// Records for every budget `0..=max_ancillas` and every `p`. Budgets past
/// the last available semi-symmetry repeat the saturated matrix.
pub fn run_sweep(
    setting: &ProblemSetting,
    max_ancillas: usize,
    p_values: &[usize],
    z: ZMode,
) -> Result<Vec<SweepRecord>> {
    run_sweep_with(
        setting,
        &SweepOptions {
            max_ancillas,
            p_values: p_values.to_vec(),
            z,
            order: CouplingOrder::Ascending,
        },
    )
}

pub fn run_sweep_with(setting: &ProblemSetting, opts: &SweepOptions) -> Result<Vec<SweepRecord>> {
    let q = setting.encode()?;
    sweep_matrix(&q, setting, opts)
}

/// Sweep over an already encoded matrix; `setting` only labels the rows.
pub fn sweep_matrix(
    q: &QuboMatrix,
    setting: &ProblemSetting,
    opts: &SweepOptions,
) -> Result<Vec<SweepRecord>> {
    if opts.p_values.contains(&0) {
        return Err(param("p must be at least 1"));
    }
    let z = opts.z.resolve(q);
    let mut f = Factorizer::new(q, z)?;
    let mut out = Vec::with_capacity((opts.max_ancillas + 1) * opts.p_values.len());
    let mut current = q.clone();
    for budget in 0..=opts.max_ancillas {
        if budget > 0 && f.num_ancillas() < budget && f.step().is_some() {
            current = f.matrix();
        }
        for &p in &opts.p_values {
            let params = QaoaParams::uniform(p, 0.5, 0.5)?;
            let circuit = build_circuit_with(&current, &params, opts.order);
            out.push(SweepRecord {
                problem: setting.problem,
                setting: setting.setting,
                seed: setting.seed,
                num_ancillas: budget,
                p,
                qubits: current.n(),
                couplings: current.coupling_count(),
                cnots: circuit.cnot_count(),
                depth: circuit.depth(),
            });
        }
    }
    Ok(out)
}

/// Runs every `(setting, seed)` pair in parallel; rows come back sorted.
pub fn run_sweeps(
    settings: &[ProblemSetting],
    seeds: &[u64],
    opts: &SweepOptions,
) -> Result<Vec<SweepRecord>> {
    let jobs: Vec<ProblemSetting> = settings
        .iter()
        .flat_map(|s| seeds.iter().map(move |&seed| s.with_seed(seed)))
        .collect();
    let chunks = jobs
        .par_iter()
        .map(|s| run_sweep_with(s, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<SweepRecord> = chunks.into_iter().flatten().collect();
    rows.sort();
    Ok(rows)
}

pub fn write_csv<W: io::Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Format(format!(
            "unexpected CSV header {:?}",
            header.join(",")
        )));
    }
    Ok(r.deserialize().collect::<Result<Vec<SweepRecord>, _>>()?)
}

/// Mean and population standard deviation per
/// `(problem, setting, num_ancillas, p)` group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupStats {
    pub problem: ProblemKind,
    pub setting: usize,
    pub num_ancillas: usize,
    pub p: usize,
    pub count: usize,
    pub couplings_mean: f64,
    pub couplings_std: f64,
    pub depth_mean: f64,
    pub depth_std: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn aggregate(records: &[SweepRecord]) -> Vec<GroupStats> {
    let mut groups: BTreeMap<(ProblemKind, usize, usize, usize), Vec<&SweepRecord>> =
        BTreeMap::new();
    for r in records {
        groups
            .entry((r.problem, r.setting, r.num_ancillas, r.p))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((problem, setting, num_ancillas, p), rows)| {
            let c: Vec<f64> = rows.iter().map(|r| r.couplings as f64).collect();
            let d: Vec<f64> = rows.iter().map(|r| r.depth as f64).collect();
            let (couplings_mean, couplings_std) = mean_std(&c);
            let (depth_mean, depth_std) = mean_std(&d);
            GroupStats {
                problem,
                setting,
                num_ancillas,
                p,
                count: rows.len(),
                couplings_mean,
                couplings_std,
                depth_mean,
                depth_std,
            }
        })
        .collect()
}

/// Mean reduction from budget 0 to the largest budget in the records.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionRow {
    pub problem: ProblemKind,
    pub setting: usize,
    pub p: usize,
    pub budget: usize,
    pub couplings_before: f64,
    pub couplings_after: f64,
    pub coupling_reduction_pct: f64,
    pub depth_before: f64,
    pub depth_after: f64,
    pub depth_reduction_pct: f64,
}

pub fn reduction_table(records: &[SweepRecord]) -> Vec<ReductionRow> {
    let stats = aggregate(records);
    let mut by_key: BTreeMap<(ProblemKind, usize, usize), Vec<&GroupStats>> = BTreeMap::new();
    for s in &stats {
        by_key
            .entry((s.problem, s.setting, s.p))
            .or_default()
            .push(s);
    }
    by_key
        .into_iter()
        .filter_map(|((problem, setting, p), rows)| {
            let first = rows.iter().find(|s| s.num_ancillas == 0)?;
            let last = rows.iter().max_by_key(|s| s.num_ancillas)?;
            let pct = |before: f64, after: f64| {
                if before == 0.0 {
                    0.0
                } else {
                    100.0 * (before - after) / before
                }
            };
            Some(ReductionRow {
                problem,
                setting,
                p,
                budget: last.num_ancillas,
                couplings_before: first.couplings_mean,
                couplings_after: last.couplings_mean,
                coupling_reduction_pct: pct(first.couplings_mean, last.couplings_mean),
                depth_before: first.depth_mean,
                depth_after: last.depth_mean,
                depth_reduction_pct: pct(first.depth_mean, last.depth_mean),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ParetoPoint {
    pub ancillas: usize,
    pub couplings: usize,
}

/// Points not dominated in `(ancillas, couplings)`, both minimised, sorted
/// by ancillas. Duplicates collapse to one point.
pub fn pareto_front(points: &[ParetoPoint]) -> Vec<ParetoPoint> {
    let mut sorted = points.to_vec();
    sorted.sort();
    let mut front: Vec<ParetoPoint> = Vec::new();
    for p in sorted {
        if front.last().is_none_or(|best| p.couplings < best.couplings) {
            front.push(p);
        }
    }
    front
}

/// Pareto front of `(ancillas used, couplings)` for each
/// `(problem, setting, seed)` run in `records`.
pub fn pareto_by_run(
    records: &[SweepRecord],
) -> Vec<((ProblemKind, usize, u64), Vec<ParetoPoint>)> {
    let mut runs: BTreeMap<(ProblemKind, usize, u64), Vec<&SweepRecord>> = BTreeMap::new();
    for r in records {
        runs.entry((r.problem, r.setting, r.seed))
            .or_default()
            .push(r);
    }
    runs.into_iter()
        .map(|(key, rows)| {
            let base = rows.iter().map(|r| r.qubits).min().unwrap_or(0);
            let points: Vec<ParetoPoint> = rows
                .iter()
                .map(|r| ParetoPoint {
                    ancillas: r.qubits - base,
                    couplings: r.couplings,
                })
                .collect();
            (key, pareto_front(&points))
        })
        .collect()
}
