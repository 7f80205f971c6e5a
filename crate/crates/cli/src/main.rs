use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use graphsense::lab::{
    er_partition_experiment, er_pipeline_experiment, experiment1, experiment2, gen_ba, gen_er,
    pipeline_record, random_recursive_tree, random_tree, BarabasiAlbertSpec, ErParams,
    ErdosRenyiSpec, Exp1Params, Exp2Params, TreeModel,
};
use graphsense::{
    algorithm1, algorithm1_with_agents, augmented_l1_recover, check_feasibility,
    columns_2k_independent, exhaustive_identifiability, g4_bounded_length_matrix, g4_matrix,
    g4h_matrix, grid_matrix, l0_oracle, l1_minimize, line_matrix, markov_rows, nodes_from_text,
    ring_matrix, ring_network_line_graph_matrix, sequential_decode, short_matrix, tree_matrix,
    vector_from_text, vector_to_text, whole_vector_plan, CompleteKernelSpec, DecodePlan, Graph,
    KernelKind, MeasurementMatrix, RecoveryStatus, ShortFamily, ShortSpec,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const FORMAT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "graphsense",
    version,
    about = "Graph-constrained compressed sensing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a measurement matrix for a topology.
    Construct(ConstructArgs),
    /// Multiply a matrix by a signal to get measurements.
    Apply(ApplyArgs),
    /// Recover a sparse signal from measurements.
    Recover(RecoverArgs),
    /// Check a matrix against a graph or a recovery guarantee.
    Verify(VerifyArgs),
    /// Run a randomized experiment and write JSON lines.
    Experiment(ExperimentArgs),
    /// Generate a graph file.
    GraphGen(GraphGenArgs),
}

#[derive(Args)]
struct SeedArg {
    /// Seed for every random choice.
    #[arg(long, env = "GRAPHSENSE_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    Line,
    Ring,
    G4,
    G4h,
    RingNetwork,
    Grid,
    Tree,
    ShortBk,
    ShortDk,
    G4Bounded,
    Markov,
    General,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Binary,
    Bernoulli,
    BernoulliOnesRow,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    topology: TopologyArg,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: usize,
    /// Maximum hop length for g4-bounded.
    #[arg(long)]
    d: Option<usize>,
    /// Side length for grid.
    #[arg(long)]
    side: Option<usize>,
    /// Graph file for tree and general.
    #[arg(long)]
    graph: Option<String>,
    /// Root node for tree.
    #[arg(long, default_value_t = 0)]
    root: usize,
    /// Deleted chords for g4h, as `u-v` pairs.
    #[arg(long, value_delimiter = ',')]
    chords: Vec<String>,
    /// Node-list file of agents for general.
    #[arg(long)]
    agents: Option<String>,
    /// Complete-graph kernel; defaults to binary for k = 1, bernoulli otherwise.
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    /// Fixed row count for Bernoulli kernels, or for markov.
    #[arg(long)]
    rows: Option<usize>,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, default_value = "-")]
    out: String,
    /// Also write the decode plan as JSON.
    #[arg(long)]
    plan_out: Option<String>,
}

#[derive(Args)]
struct ApplyArgs {
    #[arg(long)]
    matrix: String,
    /// Signal vector file.
    #[arg(long)]
    signal: String,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    L1,
    L0,
    Sequential,
    HubRobust,
}

#[derive(Args)]
struct RecoverArgs {
    #[arg(long)]
    matrix: String,
    #[arg(long)]
    measurements: String,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Decode plan JSON for sequential and hub-robust.
    #[arg(long)]
    plan: Option<String>,
    /// Hub rows with unknown errors; defaults to every hub row of the plan.
    #[arg(long, value_delimiter = ',')]
    hub_rows: Vec<usize>,
    /// Largest support searched by l0.
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Feasibility,
    Rank,
    Nsp,
    Identifiability,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    matrix: String,
    /// Graph file; required for feasibility.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum)]
    check: CheckArg,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    Exp1,
    Exp2,
    ErPartition,
    ErPipeline,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeArg {
    Recursive,
    Prufer,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    name: ExperimentName,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Sparsity for er-pipeline.
    #[arg(long)]
    k: Option<usize>,
    /// Largest sparsity in the exp2 sweep.
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    edges_per_step: Option<usize>,
    #[arg(long, value_enum)]
    tree: Option<TreeArg>,
    /// Attachment count of the exp2 graph.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    m0: Option<usize>,
    #[arg(long)]
    noise: Option<f64>,
    /// Drop the Gaussian hub errors in exp2.
    #[arg(long)]
    no_hub_errors: bool,
    #[arg(long)]
    direct_below: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Er,
    Ba,
    Tree,
    RecursiveTree,
    Path,
    Ring,
    Star,
    Complete,
    G4,
    Grid,
    RingNetwork,
}

#[derive(Args)]
struct GraphGenArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability for er.
    #[arg(long, conflicts_with = "beta")]
    p: Option<f64>,
    /// Edge probability `beta ln n / n` for er.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    m0: usize,
    #[arg(long)]
    side: Option<usize>,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, default_value = "-")]
    out: String,
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<Verdict> {
    match cmd {
        Command::Construct(a) => construct(a),
        Command::Apply(a) => apply(a),
        Command::Recover(a) => recover(a),
        Command::Verify(a) => verify(a),
        Command::Experiment(a) => experiment(a),
        Command::GraphGen(a) => graph_gen(a),
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn write_output(path: &str, content: &str) -> Result<()> {
    if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(content.as_bytes())?;
        out.flush()?;
        Ok(())
    } else {
        fs::write(path, content).with_context(|| format!("writing {path}"))
    }
}

fn read_graph(path: &str) -> Result<Graph> {
    Graph::from_text(&read_input(path)?).with_context(|| format!("parsing graph {path}"))
}

fn read_matrix(path: &str) -> Result<MeasurementMatrix> {
    MeasurementMatrix::from_text(&read_input(path)?)
        .with_context(|| format!("parsing matrix {path}"))
}

fn read_vector(path: &str) -> Result<Vec<f64>> {
    vector_from_text(&read_input(path)?).with_context(|| format!("parsing vector {path}"))
}

/// JSON object with the version fields first.
fn stamped(body: Value) -> Value {
    let mut map = Map::new();
    map.insert("version".into(), json!(VERSION));
    map.insert("formatVersion".into(), json!(FORMAT_VERSION));
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}

fn write_json(path: &str, body: Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&stamped(body))?;
    text.push('\n');
    write_output(path, &text)
}

fn need<T>(value: Option<T>, flag: &str, topology: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("--{flag} is required for {topology}"))
}

fn kernel_spec(a: &ConstructArgs) -> CompleteKernelSpec {
    let kind = match a.kernel {
        Some(KernelArg::Binary) => KernelKind::BinaryExpansion,
        Some(KernelArg::Bernoulli) => KernelKind::BernoulliHalf,
        Some(KernelArg::BernoulliOnesRow) => KernelKind::BernoulliOnesRow,
        None if a.k == 1 => KernelKind::BinaryExpansion,
        None => KernelKind::BernoulliHalf,
    };
    CompleteKernelSpec {
        kind,
        row_count_override: a.rows,
        rng_seed: a.seed.seed,
        ..CompleteKernelSpec::default()
    }
}

fn parse_chord(s: &str) -> Result<(usize, usize)> {
    let (u, v) = s
        .split_once('-')
        .ok_or_else(|| anyhow!("chord `{s}` is not of the form u-v"))?;
    Ok((
        u.trim().parse().with_context(|| format!("chord `{s}`"))?,
        v.trim().parse().with_context(|| format!("chord `{s}`"))?,
    ))
}

fn construct(a: ConstructArgs) -> Result<Verdict> {
    let spec = kernel_spec(&a);
    let k = a.k;
    let n = || need(a.n, "n", "this topology");
    let matrix = match a.topology {
        TopologyArg::Line => line_matrix(n()?, k)?,
        TopologyArg::Ring => ring_matrix(n()?, k)?,
        TopologyArg::G4 => g4_matrix(n()?, k, &spec)?,
        TopologyArg::G4h => {
            let chords = a
                .chords
                .iter()
                .map(|c| parse_chord(c))
                .collect::<Result<Vec<_>>>()?;
            g4h_matrix(n()?, k, &chords, &spec)?
        }
        TopologyArg::RingNetwork => ring_network_line_graph_matrix(n()?, k, &spec)?,
        TopologyArg::Grid => grid_matrix(need(a.side, "side", "grid")?, k, &spec)?,
        TopologyArg::Tree => {
            let g = read_graph(&need(a.graph.clone(), "graph", "tree")?)?;
            tree_matrix(&g, a.root, k, &spec)?
        }
        TopologyArg::ShortBk => short_matrix(&ShortSpec {
            n: n()?,
            k,
            family: ShortFamily::Bk,
        })?,
        TopologyArg::ShortDk => short_matrix(&ShortSpec {
            n: n()?,
            k,
            family: ShortFamily::Dk,
        })?,
        TopologyArg::G4Bounded => {
            g4_bounded_length_matrix(n()?, k, need(a.d, "d", "g4-bounded")?, &spec)?
        }
        TopologyArg::Markov => markov_rows(n()?, k, a.rows, a.seed.seed)?,
        TopologyArg::General => {
            let g = read_graph(&need(a.graph.clone(), "graph", "general")?)?;
            match &a.agents {
                Some(path) => {
                    let agents = nodes_from_text(&read_input(path)?)
                        .with_context(|| format!("parsing agents {path}"))?;
                    algorithm1_with_agents(&g, k, &agents, &spec)?
                }
                None => algorithm1(&g, k, &spec)?,
            }
        }
    };
    write_output(&a.out, &matrix.to_text())?;
    if let Some(path) = &a.plan_out {
        let plan = matrix
            .plan()
            .cloned()
            .unwrap_or_else(|| whole_vector_plan(&matrix));
        let mut text = plan.to_json(matrix.n());
        text.push('\n');
        write_output(path, &text)?;
    }
    Ok(Verdict::Ok)
}

fn apply(a: ApplyArgs) -> Result<Verdict> {
    let matrix = read_matrix(&a.matrix)?;
    let x = read_vector(&a.signal)?;
    let y = matrix.apply(&x)?;
    write_output(&a.out, &vector_to_text(&y))?;
    Ok(Verdict::Ok)
}

fn attach_plan(matrix: MeasurementMatrix, path: Option<&str>) -> Result<MeasurementMatrix> {
    match path {
        Some(path) => {
            let (plan, n) = DecodePlan::from_json(&read_input(path)?)
                .with_context(|| format!("parsing plan {path}"))?;
            if n != matrix.n() {
                bail!("plan is for n = {n} but the matrix has n = {}", matrix.n());
            }
            Ok(matrix.with_plan(plan)?)
        }
        None => {
            let plan = whole_vector_plan(&matrix);
            Ok(matrix.with_plan(plan)?)
        }
    }
}

fn recover(a: RecoverArgs) -> Result<Verdict> {
    let matrix = read_matrix(&a.matrix)?;
    let y = read_vector(&a.measurements)?;
    if y.len() != matrix.m() {
        bail!(
            "measurement vector has {} entries but the matrix has {} rows",
            y.len(),
            matrix.m()
        );
    }
    let method = a
        .method
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    if a.method == MethodArg::L0 {
        let k_max = a.k_max.unwrap_or(matrix.m() / 2);
        let sol = l0_oracle(&matrix.to_dense_f64(), &y, k_max)?;
        let found = sol.min_support.is_some();
        write_json(
            &a.out,
            json!({
                "method": method,
                "kMax": k_max,
                "minSupport": sol.min_support,
                "unique": sol.unique,
                "solutions": sol.solutions,
            }),
        )?;
        return Ok(if found { Verdict::Ok } else { Verdict::Failed });
    }
    let (result, hub_rows) = match a.method {
        MethodArg::L1 => (l1_minimize(&matrix.to_dense_f64(), &y)?, Vec::new()),
        MethodArg::Sequential => {
            let matrix = attach_plan(matrix, a.plan.as_deref())?;
            (sequential_decode(&matrix, &y)?, Vec::new())
        }
        MethodArg::HubRobust => {
            let matrix = attach_plan(matrix, a.plan.as_deref())?;
            let hub_rows = if a.hub_rows.is_empty() {
                let plan = matrix.plan().expect("plan attached");
                plan.groups.iter().filter_map(|g| g.hub_row).collect()
            } else {
                a.hub_rows.clone()
            };
            (augmented_l1_recover(&matrix, &y, &hub_rows)?, hub_rows)
        }
        MethodArg::L0 => unreachable!("handled above"),
    };
    let exact = result.status == RecoveryStatus::ExactFeasible;
    let mut body = json!({
        "method": method,
        "status": result.status,
        "residual": result.residual,
        "l1Value": result.l1_value,
        "xHat": result.x_hat,
    });
    if a.method == MethodArg::HubRobust {
        body["hubRows"] = json!(hub_rows);
    }
    write_json(&a.out, body)?;
    Ok(if exact { Verdict::Ok } else { Verdict::Failed })
}

fn verify(a: VerifyArgs) -> Result<Verdict> {
    let matrix = read_matrix(&a.matrix)?;
    let (holds, detail) = match a.check {
        CheckArg::Feasibility => {
            let path = a
                .graph
                .as_deref()
                .ok_or_else(|| anyhow!("--graph is required for the feasibility check"))?;
            let g = read_graph(path)?;
            let f = check_feasibility(&g, &matrix)?;
            (
                f.feasible,
                json!({ "firstOffendingRow": f.first_offending_row }),
            )
        }
        CheckArg::Rank => {
            let dense: Vec<Vec<i64>> = matrix
                .to_dense()
                .into_iter()
                .map(|r| r.into_iter().map(i64::from).collect())
                .collect();
            let v = columns_2k_independent(&dense, matrix.n(), a.k)?;
            (
                v.independent,
                json!({ "dependentColumns": v.dependent_columns }),
            )
        }
        CheckArg::Identifiability => {
            let dense: Vec<Vec<i64>> = matrix
                .to_dense()
                .into_iter()
                .map(|r| r.into_iter().map(i64::from).collect())
                .collect();
            (
                exhaustive_identifiability(&dense, matrix.n(), a.k)?,
                json!({}),
            )
        }
        CheckArg::Nsp => {
            let v = graphsense::nsp_verify(&matrix.to_dense_f64(), matrix.n(), a.k)?;
            (
                v.holds,
                json!({ "worstRatio": v.worst_ratio, "worstSupport": v.worst_support }),
            )
        }
    };
    let mut body = json!({
        "check": a.check.to_possible_value().expect("named").get_name(),
        "k": a.k,
        "m": matrix.m(),
        "n": matrix.n(),
        "holds": holds,
    });
    if let (Value::Object(b), Value::Object(d)) = (&mut body, detail) {
        b.extend(d);
    }
    write_json(&a.out, body)?;
    Ok(if holds { Verdict::Ok } else { Verdict::Failed })
}

fn jsonl_line(record: &graphsense::lab::ExperimentRecord) -> Result<String> {
    let mut line = serde_json::to_string(&stamped(serde_json::to_value(record)?))?;
    line.push('\n');
    Ok(line)
}

fn experiment(a: ExperimentArgs) -> Result<Verdict> {
    let seed = a.seed.seed;
    let mut out = String::new();
    match a.name {
        ExperimentName::Exp1 => {
            let d = Exp1Params::default();
            let p = Exp1Params {
                n: a.n.unwrap_or(d.n),
                steps: a.steps.unwrap_or(d.steps),
                edges_per_step: a.edges_per_step.unwrap_or(d.edges_per_step),
                trials: a.trials.unwrap_or(d.trials),
                seed,
                tree: match a.tree {
                    Some(TreeArg::Prufer) => TreeModel::Prufer,
                    Some(TreeArg::Recursive) => TreeModel::Recursive,
                    None => d.tree,
                },
            };
            for row in experiment1(&p)? {
                out.push_str(&jsonl_line(&row.record(&p))?);
            }
        }
        ExperimentName::Exp2 => {
            let d = Exp2Params::default();
            let p = Exp2Params {
                n: a.n.unwrap_or(d.n),
                m: a.m.unwrap_or(d.m),
                m0: a.m0.unwrap_or(d.m0),
                k_sweep: match a.k_max {
                    Some(k) => (1..=k).collect(),
                    None => d.k_sweep,
                },
                trials: a.trials.unwrap_or(d.trials),
                noise_sigma: a.noise.unwrap_or(d.noise_sigma),
                hub_errors: !a.no_hub_errors,
                direct_below: a.direct_below.unwrap_or(d.direct_below),
                seed,
            };
            for row in experiment2(&p)? {
                out.push_str(&jsonl_line(&row.record(&p))?);
            }
        }
        ExperimentName::ErPartition | ExperimentName::ErPipeline => {
            let d = ErParams::default();
            let p = ErParams {
                n: a.n.unwrap_or(d.n),
                beta: a.beta.unwrap_or(d.beta),
                epsilon: a.epsilon.unwrap_or(d.epsilon),
                k: a.k.unwrap_or(d.k),
                trials: a.trials.unwrap_or(d.trials),
                seed,
            };
            if matches!(a.name, ExperimentName::ErPartition) {
                for row in er_partition_experiment(&p)? {
                    out.push_str(&jsonl_line(&row.record(&p))?);
                }
            } else {
                for (trial, s, stats) in er_pipeline_experiment(&p)? {
                    out.push_str(&jsonl_line(&pipeline_record(trial, s, &stats, &p))?);
                }
            }
        }
    }
    write_output(&a.out, &out)?;
    Ok(Verdict::Ok)
}

fn graph_gen(a: GraphGenArgs) -> Result<Verdict> {
    let seed = a.seed.seed;
    let n = || need(a.n, "n", "this model");
    let rng = || <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let g = match a.model {
        ModelArg::Er => {
            let n = n()?;
            let spec = match (a.p, a.beta) {
                (Some(p), _) => ErdosRenyiSpec { n, p, seed },
                (None, Some(beta)) => ErdosRenyiSpec::from_beta(n, beta, seed),
                (None, None) => bail!("er needs --p or --beta"),
            };
            gen_er(&spec)?
        }
        ModelArg::Ba => gen_ba(&BarabasiAlbertSpec {
            n: n()?,
            m: a.m,
            m0: a.m0,
            seed,
        })?,
        ModelArg::Tree => random_tree(n()?, &mut rng()),
        ModelArg::RecursiveTree => random_recursive_tree(n()?, &mut rng()),
        ModelArg::Path => Graph::path(n()?),
        ModelArg::Ring => Graph::ring(n()?),
        ModelArg::Star => Graph::star(n()?),
        ModelArg::Complete => Graph::complete(n()?),
        ModelArg::G4 => Graph::g4(n()?)?,
        ModelArg::Grid => Graph::grid(need(a.side, "side", "grid")?),
        ModelArg::RingNetwork => Graph::ring_network_line_graph(n()?)?,
    };
    write_output(&a.out, &g.to_text())?;
    Ok(Verdict::Ok)
}
