use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qubo_semisym::encoders::{
    graph_coloring_qubo, graph_isomorphism_qubo, hamilton_cycle_qubo, max_clique_qubo,
    vertex_cover_qubo, PenaltyWeight, ProblemKind,
};
use qubo_semisym::harness::{
    builtin_settings, pareto_by_run, read_csv, reduction_table, run_sweeps, write_csv,
    IsomorphismPairing, SweepOptions, ZMode, DEFAULT_MAX_ANCILLAS,
};
use qubo_semisym::qaoa::{build_circuit_with, CouplingOrder, QaoaParams};
use qubo_semisym::semisym::{factor_out_with, verify_equivalence, FactoringReport, RowSum};
use qubo_semisym::{Error, Graph, QuboMatrix, Result};

#[derive(Parser)]
#[command(
    name = "qubo-semisym",
    version,
    about = "Semi-symmetry factoring for QAOA QUBOs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a graph problem as a QUBO (JSON).
    Encode(EncodeArgs),
    /// Factor semi-symmetries into ancilla qubits.
    Factor(FactorArgs),
    /// Check a factored QUBO against the original by enumeration.
    Verify(VerifyArgs),
    /// Print the sorted energy spectrum of a QUBO.
    Spectrum(SpectrumArgs),
    /// Build the QAOA gate list for a QUBO.
    Circuit(CircuitArgs),
    /// Run the ancilla-budget sweep and write CSV.
    Sweep(SweepArgs),
    /// Pareto fronts of (ancillas, couplings) from a sweep CSV.
    Pareto(ParetoArgs),
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    problem: ProblemKind,
    /// Edge-list file. Omit to sample with --vertices/--edges/--seed.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Second graph for graph-isomorphism.
    #[arg(long)]
    graph2: Option<PathBuf>,
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long)]
    edges: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Second isomorphism graph when sampling: permuted or independent.
    #[arg(long, default_value = "permuted")]
    pairing: IsomorphismPairing,
    #[arg(long)]
    colors: Option<usize>,
    #[arg(long, default_value_t = 3.0)]
    penalty: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FactorArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_ANCILLAS)]
    ancillas: usize,
    /// `proposition` or a positive number.
    #[arg(long, default_value = "proposition")]
    z: ZMode,
    /// Leave diagonal terms out of the conflict row sums.
    #[arg(long)]
    couplings_only: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    original: PathBuf,
    #[arg(long)]
    modified: PathBuf,
    #[arg(long)]
    report: PathBuf,
    /// Exit with status 1 unless all three checks hold.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    input: PathBuf,
    /// Print only the first N entries.
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Args)]
struct CircuitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Emit couplings in greedy matching rounds instead of ascending order.
    #[arg(long)]
    packed: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// A problem name or `all`.
    #[arg(long, default_value = "all")]
    problem: String,
    /// 0, 1, 2 or `all`.
    #[arg(long, default_value = "all")]
    setting_index: String,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_ANCILLAS)]
    max_ancillas: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    p: Vec<usize>,
    #[arg(long, default_value = "proposition")]
    z: ZMode,
    #[arg(long, default_value_t = 3.0)]
    penalty: f64,
    #[arg(long)]
    packed: bool,
    /// Print the mean reduction table to stderr.
    #[arg(long)]
    summary: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParetoArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn order(packed: bool) -> CouplingOrder {
    if packed {
        CouplingOrder::Packed
    } else {
        CouplingOrder::Ascending
    }
}

fn load_graph(path: Option<&PathBuf>, args: &EncodeArgs, seed: u64) -> Result<Graph> {
    match path {
        Some(p) => Graph::read_edge_list(p),
        None => match (args.vertices, args.edges) {
            (Some(v), Some(e)) => Graph::sample(v, e, seed),
            _ => Err(Error::Parameter(
                "give --graph or both --vertices and --edges".into(),
            )),
        },
    }
}

fn encode(args: EncodeArgs) -> Result<()> {
    let a = PenaltyWeight::new(args.penalty)?;
    let g = load_graph(args.graph.as_ref(), &args, args.seed)?;
    let q = match args.problem {
        ProblemKind::MaxClique => max_clique_qubo(&g, a),
        ProblemKind::HamiltonCycles => hamilton_cycle_qubo(&g, a)?,
        ProblemKind::GraphColoring => {
            let k = args
                .colors
                .ok_or_else(|| Error::Parameter("graph-coloring needs --colors".into()))?;
            graph_coloring_qubo(&g, k, a)?
        }
        ProblemKind::VertexCover => vertex_cover_qubo(&g, a),
        ProblemKind::GraphIsomorphism => {
            let h = match (&args.graph2, args.pairing) {
                (Some(p), _) => Graph::read_edge_list(p)?,
                (None, IsomorphismPairing::Permuted) => g.permuted(args.seed.wrapping_add(1 << 32)),
                (None, IsomorphismPairing::Independent) => {
                    load_graph(None, &args, args.seed.wrapping_add(1 << 32))?
                }
            };
            graph_isomorphism_qubo(&g, &h, a)?
        }
    };
    writeln!(output(args.out.as_deref())?, "{}", q.to_json())?;
    Ok(())
}

fn factor(args: FactorArgs) -> Result<()> {
    let q = QuboMatrix::read_json(&args.input)?;
    let z = args.z.resolve(&q);
    let row_sum = if args.couplings_only {
        RowSum::CouplingsOnly
    } else {
        RowSum::WithDiagonal
    };
    let (q_mod, report) = factor_out_with(&q, args.ancillas, z, row_sum)?;
    eprintln!(
        "ancillas {} qubits {} -> {} couplings {} -> {} z {}",
        report.num_ancillas(),
        q.n(),
        q_mod.n(),
        q.coupling_count(),
        q_mod.coupling_count(),
        z
    );
    writeln!(output(args.out.as_deref())?, "{}", q_mod.to_json())?;
    if let Some(path) = args.report {
        std::fs::write(path, report.to_json() + "\n")?;
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let q = QuboMatrix::read_json(&args.original)?;
    let q_mod = QuboMatrix::read_json(&args.modified)?;
    let report = FactoringReport::from_json(&std::fs::read_to_string(&args.report)?)?;
    let verdict = verify_equivalence(&q, &q_mod, &report)?;
    println!("{}", serde_json::to_string_pretty(&verdict)?);
    Ok(!args.strict || verdict.all_hold())
}

fn spectrum(args: SpectrumArgs) -> Result<()> {
    let q = QuboMatrix::read_json(&args.input)?;
    let mut out = output(None)?;
    for e in q.spectrum()?.iter().take(args.limit.unwrap_or(usize::MAX)) {
        writeln!(out, "{} {}", e.solution, e.energy)?;
    }
    Ok(())
}

fn circuit(args: CircuitArgs) -> Result<()> {
    let q = QuboMatrix::read_json(&args.input)?;
    let params = QaoaParams::uniform(args.p, args.gamma, args.beta)?;
    let c = build_circuit_with(&q, &params, order(args.packed));
    eprintln!(
        "qubits {} cnots {} depth {}",
        c.n(),
        c.cnot_count(),
        c.depth()
    );
    write!(output(args.out.as_deref())?, "{c}")?;
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let problem = match args.problem.as_str() {
        "all" => None,
        name => Some(name.parse::<ProblemKind>()?),
    };
    let index = match args.setting_index.as_str() {
        "all" => None,
        s => Some(
            s.parse::<usize>()
                .map_err(|_| Error::Parameter(format!("bad setting index {s:?}")))?,
        ),
    };
    if index.is_some_and(|i| i > 2) {
        return Err(Error::Parameter("setting index must be 0, 1 or 2".into()));
    }
    let settings: Vec<_> = builtin_settings()
        .into_iter()
        .filter(|s| problem.is_none_or(|p| p == s.problem))
        .filter(|s| index.is_none_or(|i| i == s.setting))
        .map(|s| s.with_penalty(args.penalty))
        .collect();
    let opts = SweepOptions {
        max_ancillas: args.max_ancillas,
        p_values: args.p,
        z: args.z,
        order: order(args.packed),
    };
    let rows = run_sweeps(&settings, &args.seeds, &opts)?;
    write_csv(&rows, output(args.out.as_deref())?)?;
    if args.summary {
        eprintln!("problem,setting,p,budget,couplings_before,couplings_after,coupling_reduction_pct,depth_before,depth_after,depth_reduction_pct");
        for r in reduction_table(&rows) {
            eprintln!(
                "{},{},{},{},{:.2},{:.2},{:.1},{:.2},{:.2},{:.1}",
                r.problem,
                r.setting,
                r.p,
                r.budget,
                r.couplings_before,
                r.couplings_after,
                r.coupling_reduction_pct,
                r.depth_before,
                r.depth_after,
                r.depth_reduction_pct
            );
        }
    }
    Ok(())
}

fn pareto(args: ParetoArgs) -> Result<()> {
    let rows = read_csv(File::open(&args.input)?)?;
    let mut out = output(args.out.as_deref())?;
    writeln!(out, "problem,setting,seed,ancillas,couplings")?;
    for ((problem, setting, seed), front) in pareto_by_run(&rows) {
        for p in front {
            writeln!(
                out,
                "{problem},{setting},{seed},{},{}",
                p.ancillas, p.couplings
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encode(a) => encode(a).map(|_| true),
        Command::Factor(a) => factor(a).map(|_| true),
        Command::Verify(a) => verify(a),
        Command::Spectrum(a) => spectrum(a).map(|_| true),
        Command::Circuit(a) => circuit(a).map(|_| true),
        Command::Sweep(a) => sweep(a).map(|_| true),
        Command::Pareto(a) => pareto(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
