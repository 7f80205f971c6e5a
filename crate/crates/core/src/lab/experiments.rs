//! Seeded experiment drivers. Every trial draws its randomness from
//! `mix_seed(seed, trial)`, so trials can run in any order.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Result;
use crate::general::{algorithm1_bound, algorithm1_plan, design_with, GroupKernel};
use crate::graph::Graph;
use crate::kernel::{binary_rows, mix_seed, CompleteKernelSpec};
use crate::lab::random::{
    add_random_edges, gen_ba, gen_er, BarabasiAlbertSpec, ErdosRenyiSpec, TreeModel,
};
use crate::lab::regimes::{
    er_partition_split, er_pipeline, PipelineSpec, PipelineStats, SplitOutcome,
};
use crate::matrix::{MatrixBuilder, MeasurementMatrix};
use crate::recovery::{augmented_l1_recover, relative_error, sequential_decode};

/// One JSON line of experiment output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub trial: usize,
    pub seed: u64,
    pub params: Value,
    pub metrics: Value,
}

impl ExperimentRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Exp1Params {
    pub n: usize,
    pub steps: usize,
    pub edges_per_step: usize,
    pub trials: usize,
    pub seed: u64,
    /// Distribution of the starting tree.
    pub tree: TreeModel,
}

impl Default for Exp1Params {
    fn default() -> Self {
        Exp1Params {
            n: 1000,
            steps: 40,
            edges_per_step: 25,
            trials: 100,
            seed: 0,
            tree: TreeModel::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exp1Row {
    pub trial: usize,
    pub seed: u64,
    pub step: usize,
    pub edges: usize,
    pub measurements: usize,
    pub radius: usize,
    pub bound: usize,
    /// `Σ ⌈log₂(n_i+1)⌉ + q` from the iteration group sizes.
    pub formula: usize,
    pub group_sizes: Vec<usize>,
}

/// Measurement count of `algorithm1` with the 1-sparse binary kernel as a
/// random tree gains edges.
pub fn experiment1(p: &Exp1Params) -> Result<Vec<Exp1Row>> {
    let spec = CompleteKernelSpec::binary();
    let mut rows = Vec::with_capacity(p.trials * (p.steps + 1));
    for trial in 0..p.trials {
        let seed = mix_seed(p.seed, trial as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = p.tree.sample(p.n, &mut rng);
        for step in 0..=p.steps {
            if step > 0 {
                add_random_edges(&mut g, p.edges_per_step, &mut rng)?;
            }
            let (a, plan) = algorithm1_plan(&g, 1, &spec)?;
            let sizes = plan.group_sizes();
            let q = sizes.len();
            let formula = sizes[..q - 1]
                .iter()
                .map(|&s| binary_rows(s))
                .sum::<usize>()
                + q;
            rows.push(Exp1Row {
                trial,
                seed,
                step,
                edges: g.edge_count(),
                measurements: a.m(),
                radius: plan.radius,
                bound: algorithm1_bound(plan.radius, 1, p.n, &spec)?,
                formula,
                group_sizes: sizes,
            });
        }
    }
    Ok(rows)
}

impl Exp1Row {
    pub fn record(&self, params: &Exp1Params) -> ExperimentRecord {
        ExperimentRecord {
            experiment: "exp1".into(),
            trial: self.trial,
            seed: self.seed,
            params: json!(params),
            metrics: json!({
                "step": self.step,
                "edges": self.edges,
                "measurements": self.measurements,
                "radius": self.radius,
                "bound": self.bound,
                "formula": self.formula,
                "groupSizes": self.group_sizes,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Exp2Params {
    pub n: usize,
    /// Attachment count of the scale-free graph.
    pub m: usize,
    pub m0: usize,
    pub k_sweep: Vec<usize>,
    pub trials: usize,
    /// Standard deviation of the noise on non-hub rows; zero disables it.
    pub noise_sigma: f64,
    /// Whether hub rows carry standard Gaussian errors.
    pub hub_errors: bool,
    /// Leaf groups smaller than this are measured node by node.
    pub direct_below: usize,
    pub seed: u64,
}

impl Default for Exp2Params {
    fn default() -> Self {
        Exp2Params {
            n: 500,
            m: 2,
            m0: 10,
            k_sweep: (1..=50).collect(),
            trials: 100,
            noise_sigma: 0.0,
            hub_errors: true,
            direct_below: 32,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exp2Row {
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    /// Rows of the measurement matrix.
    pub rows: usize,
    /// `None` when the decoder failed.
    pub robust_error: Option<f64>,
    pub plain_error: Option<f64>,
}

impl Exp2Row {
    pub fn record(&self, params: &Exp2Params) -> ExperimentRecord {
        ExperimentRecord {
            experiment: "exp2".into(),
            trial: self.trial,
            seed: self.seed,
            params: json!(params),
            metrics: json!({
                "k": self.k,
                "rows": self.rows,
                "robustError": self.robust_error,
                "plainError": self.plain_error,
            }),
        }
    }
}

/// `algorithm1` grouping on `g`; leaf groups with at least `direct_below`
/// nodes get a hub row and `⌈n_i/2⌉` fair-coin rows, smaller groups are
/// measured node by node. Returns the matrix and its hub rows.
pub fn experiment2_matrix(
    g: &Graph,
    direct_below: usize,
    seed: u64,
) -> Result<(MeasurementMatrix, Vec<usize>)> {
    let base = CompleteKernelSpec::bernoulli(seed);
    let (frags, _) = design_with(g, 1, None, &|i, size| {
        if size >= direct_below.max(2) {
            GroupKernel::Hub(CompleteKernelSpec {
                row_count_override: Some(size.div_ceil(2)),
                ..base.for_group(i as u64)
            })
        } else {
            GroupKernel::Direct
        }
    })?;
    let mut b = MatrixBuilder::new(g.node_count());
    for f in frags {
        b.push(f);
    }
    let a = b.finish()?;
    let hubs = a
        .plan()
        .map(|p| p.groups.iter().filter_map(|g| g.hub_row).collect())
        .unwrap_or_default();
    Ok((a, hubs))
}

/// Robust versus plain sequential decoding under hub-row errors on a
/// scale-free graph.
pub fn experiment2(p: &Exp2Params) -> Result<Vec<Exp2Row>> {
    let g = gen_ba(&BarabasiAlbertSpec {
        n: p.n,
        m: p.m,
        m0: p.m0,
        seed: p.seed,
    })?;
    let (a, hubs) = experiment2_matrix(&g, p.direct_below, mix_seed(p.seed, 1))?;
    let mut is_hub = vec![false; a.m()];
    hubs.iter().for_each(|&h| is_hub[h] = true);
    let mut out = Vec::new();
    for &k in &p.k_sweep {
        let k_seed = mix_seed(p.seed, 2 + k as u64);
        for trial in 0..p.trials {
            let seed = mix_seed(k_seed, trial as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = gaussian_sparse(p.n, k, &mut rng);
            let mut y = a.apply(&x)?;
            for (r, v) in y.iter_mut().enumerate() {
                if is_hub[r] {
                    if p.hub_errors {
                        *v += rng.sample::<f64, _>(StandardNormal);
                    }
                } else if p.noise_sigma > 0.0 {
                    *v += p.noise_sigma * rng.sample::<f64, _>(StandardNormal);
                }
            }
            out.push(Exp2Row {
                k,
                trial,
                seed,
                rows: a.m(),
                robust_error: augmented_l1_recover(&a, &y, &hubs)
                    .ok()
                    .map(|r| relative_error(&r.x_hat, &x)),
                plain_error: sequential_decode(&a, &y)
                    .ok()
                    .map(|r| relative_error(&r.x_hat, &x)),
            });
        }
    }
    Ok(out)
}

/// `k`-sparse vector with uniform support and Gaussian values, scaled to
/// unit norm.
pub fn gaussian_sparse<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for i in sample(rng, n, k.min(n)) {
        x[i] = rng.sample(StandardNormal);
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ErParams {
    pub n: usize,
    pub beta: f64,
    pub epsilon: f64,
    /// Sparsity used by the pipeline.
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for ErParams {
    fn default() -> Self {
        ErParams {
            n: 2000,
            beta: 3.0,
            epsilon: 0.0,
            k: 1,
            trials: 100,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRow {
    pub trial: usize,
    pub seed: u64,
    pub groups: usize,
    pub valid: bool,
    pub violation: Option<String>,
}

/// Samples `G(n, β ln n / n)` per trial and validates a seeded split.
pub fn er_partition_experiment(p: &ErParams) -> Result<Vec<SplitRow>> {
    (0..p.trials)
        .map(|trial| {
            let seed = mix_seed(p.seed, trial as u64);
            let g = gen_er(&ErdosRenyiSpec::from_beta(p.n, p.beta, seed))?;
            let out = er_partition_split(&g, p.beta, p.epsilon, mix_seed(seed, 1))?;
            let (groups, violation) = match out {
                SplitOutcome::Valid(part) => (part.groups.len(), None),
                SplitOutcome::Invalid {
                    partition,
                    violation,
                } => (partition.groups.len(), Some(violation.to_string())),
            };
            Ok(SplitRow {
                trial,
                seed,
                groups,
                valid: violation.is_none(),
                violation,
            })
        })
        .collect()
}

impl SplitRow {
    pub fn record(&self, params: &ErParams) -> ExperimentRecord {
        ExperimentRecord {
            experiment: "er-partition".into(),
            trial: self.trial,
            seed: self.seed,
            params: json!(params),
            metrics: json!({ "groups": self.groups, "valid": self.valid, "violation": self.violation }),
        }
    }
}

/// Runs the Erdős–Rényi design pipeline on one sample per trial.
pub fn er_pipeline_experiment(p: &ErParams) -> Result<Vec<(usize, u64, PipelineStats)>> {
    (0..p.trials)
        .map(|trial| {
            let seed = mix_seed(p.seed, trial as u64);
            let g = gen_er(&ErdosRenyiSpec::from_beta(p.n, p.beta, seed))?;
            let spec = PipelineSpec {
                epsilon: p.epsilon,
                kernel: if p.k == 1 {
                    CompleteKernelSpec::binary()
                } else {
                    CompleteKernelSpec::bernoulli(mix_seed(seed, 2))
                },
                seed: mix_seed(seed, 1),
            };
            Ok((trial, seed, er_pipeline(&g, p.k, &spec)?.stats))
        })
        .collect()
}

pub fn pipeline_record(
    trial: usize,
    seed: u64,
    stats: &PipelineStats,
    params: &ErParams,
) -> ExperimentRecord {
    ExperimentRecord {
        experiment: "er-pipeline".into(),
        trial,
        seed,
        params: json!(params),
        metrics: json!(stats),
    }
}
