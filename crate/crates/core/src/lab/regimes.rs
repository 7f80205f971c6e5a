//! Measurement design for Erdős–Rényi graphs, dispatched on the observed
//! connectivity of the sample.

use serde::{Deserialize, Serialize};

use crate::construct::hub_group;
use crate::error::{Error, Result};
use crate::general::{design_with, GroupKernel};
use crate::graph::{components, validate_partition, Graph, Partition, PartitionViolation};
use crate::kernel::CompleteKernelSpec;
use crate::lab::random::shuffled;
use crate::matrix::{GroupFragment, MatrixBuilder, MeasurementMatrix};

/// Number of groups `⌈(β−ε)/(β−ε−1)⌉` of the split.
pub fn partition_groups(beta: f64, epsilon: f64) -> Result<usize> {
    let b = beta - epsilon;
    if !(b > 1.0) || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("need β − ε > 1, got {b}")));
    }
    Ok((b / (b - 1.0) - 1e-12).ceil() as usize)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitOutcome {
    Valid(Partition),
    Invalid {
        partition: Partition,
        violation: PartitionViolation,
    },
}

impl SplitOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, SplitOutcome::Valid(_))
    }
}

/// Deals a seeded shuffle of the nodes round-robin into
/// `⌈(β−ε)/(β−ε−1)⌉` groups and checks the r-partition conditions.
pub fn er_partition_split(g: &Graph, beta: f64, epsilon: f64, seed: u64) -> Result<SplitOutcome> {
    let r = partition_groups(beta, epsilon)?;
    let mut groups = vec![Vec::new(); r];
    for (i, v) in shuffled(g.node_count(), seed).into_iter().enumerate() {
        groups[i % r].push(v);
    }
    for group in &mut groups {
        group.sort_unstable();
    }
    let partition = Partition { groups };
    Ok(match validate_partition(g, &partition) {
        Ok(()) => SplitOutcome::Valid(partition),
        Err(violation) => SplitOutcome::Invalid {
            partition,
            violation,
        },
    })
}

/// Giant-component fraction `α` solving `e^{−cα} = 1 − α`; zero for `c ≤ 1`.
pub fn giant_fraction(c: f64) -> f64 {
    if c <= 1.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if 1.0 - mid - (-c * mid).exp() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineSpec {
    pub epsilon: f64,
    pub kernel: CompleteKernelSpec,
    /// Seed of the partition shuffle.
    pub seed: u64,
}

impl Default for PipelineSpec {
    fn default() -> Self {
        PipelineSpec {
            epsilon: 0.1,
            kernel: CompleteKernelSpec::binary(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "regime")]
pub enum Regime {
    /// At most one node.
    Trivial,
    Partition {
        groups: usize,
    },
    Algorithm1,
    GiantComponent {
        components: usize,
        giant: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineStats {
    pub regime: Regime,
    pub rows: usize,
    /// Mean degree, the estimate of `np`.
    pub c: f64,
    /// `c / ln n`.
    pub beta_hat: f64,
    pub alpha: f64,
    /// `n(1 − p)^{n−1}` with `p = c/(n−1)`.
    pub expected_isolated: f64,
    pub observed_giant_fraction: f64,
}

pub struct PipelineOutput {
    pub matrix: MeasurementMatrix,
    pub stats: PipelineStats,
}

fn remap(frag: GroupFragment, map: &[usize]) -> GroupFragment {
    let ids = |v: Vec<usize>| v.into_iter().map(|i| map[i]).collect::<Vec<_>>();
    GroupFragment {
        target: ids(frag.target),
        hub: frag.hub.map(|(row, sub)| (ids(row), ids(sub))),
        rows: frag
            .rows
            .into_iter()
            .map(|(row, sub)| (ids(row), ids(sub)))
            .collect(),
        kernel: frag.kernel,
    }
}

fn algorithm1_fragments(
    g: &Graph,
    k: usize,
    spec: &CompleteKernelSpec,
) -> Result<Vec<GroupFragment>> {
    design_with(g, k, None, &|i, _| {
        GroupKernel::Hub(spec.for_group(i as u64))
    })
    .map(|(f, _)| f)
}

pub fn er_pipeline(g: &Graph, k: usize, spec: &PipelineSpec) -> Result<PipelineOutput> {
    let n = g.node_count();
    let c = if n == 0 {
        0.0
    } else {
        2.0 * g.edge_count() as f64 / n as f64
    };
    let ln_n = (n.max(2) as f64).ln();
    let beta_hat = c / ln_n;
    let p = if n < 2 {
        0.0
    } else {
        (c / (n - 1) as f64).min(1.0)
    };
    let comps = components(g);
    let giant = comps
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
        .map(|(_, c)| c.clone());
    let mut b = MatrixBuilder::new(n);
    let regime = if n <= 1 {
        b.push_singletons(&(0..n).collect::<Vec<_>>());
        Regime::Trivial
    } else if comps.len() == 1 {
        let split = if beta_hat - spec.epsilon > 1.0 {
            Some(er_partition_split(g, beta_hat, spec.epsilon, spec.seed)?)
        } else {
            None
        };
        match split {
            Some(SplitOutcome::Valid(partition)) => {
                let r = partition.groups.len();
                let mut owner = vec![0; n];
                for (i, group) in partition.groups.iter().enumerate() {
                    group.iter().for_each(|&v| owner[v] = i);
                }
                for (i, group) in partition.groups.iter().enumerate() {
                    let hub: Vec<usize> = (0..n).filter(|&v| owner[v] != i).collect();
                    b.push(hub_group(
                        g,
                        &hub,
                        group,
                        k,
                        &spec.kernel.for_group(i as u64),
                    )?);
                }
                Regime::Partition { groups: r }
            }
            _ => {
                for frag in algorithm1_fragments(g, k, &spec.kernel)? {
                    b.push(frag);
                }
                Regime::Algorithm1
            }
        }
    } else {
        let giant = giant.expect("n ≥ 2 has a component");
        let (sub, map) = g.induced_subgraph(&giant)?;
        for frag in algorithm1_fragments(&sub, k, &spec.kernel)? {
            b.push(remap(frag, &map));
        }
        let mut in_giant = vec![false; n];
        giant.iter().for_each(|&v| in_giant[v] = true);
        let rest: Vec<usize> = (0..n).filter(|&v| !in_giant[v]).collect();
        b.push_singletons(&rest);
        Regime::GiantComponent {
            components: comps.len(),
            giant: giant.len(),
        }
    };
    let matrix = b.finish()?;
    let largest = comps.iter().map(Vec::len).max().unwrap_or(0);
    Ok(PipelineOutput {
        stats: PipelineStats {
            regime,
            rows: matrix.m(),
            c,
            beta_hat,
            alpha: giant_fraction(c),
            expected_isolated: n as f64 * (1.0 - p).powf(n.saturating_sub(1) as f64),
            observed_giant_fraction: if n == 0 {
                0.0
            } else {
                largest as f64 / n as f64
            },
        },
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::kernel_rows;
    use crate::matrix::check_feasibility;

    #[test]
    fn group_counts() {
        assert_eq!(partition_groups(3.0, 0.0).unwrap(), 2);
        assert_eq!(partition_groups(3.0, 0.01).unwrap(), 2);
        assert_eq!(partition_groups(1.5, 0.0).unwrap(), 3);
        assert!(partition_groups(2.0, 1.0).is_err());
    }

    #[test]
    fn complete_graph_always_splits() {
        let g = Graph::complete(9);
        for seed in 0..5 {
            let out = er_partition_split(&g, 3.0, 0.0, seed).unwrap();
            let SplitOutcome::Valid(p) = out else {
                panic!("complete graph split rejected")
            };
            assert_eq!(
                p.groups.iter().map(Vec::len).collect::<Vec<_>>(),
                vec![5, 4]
            );
        }
    }

    #[test]
    fn alpha_solves_fixed_point() {
        assert_eq!(giant_fraction(0.5), 0.0);
        let a = giant_fraction(2.0);
        assert!(((-2.0 * a).exp() - (1.0 - a)).abs() < 1e-11);
        assert!((a - 0.796_812_130_4).abs() < 1e-9);
    }

    #[test]
    fn complete_graph_uses_partition() {
        let g = Graph::complete(16);
        let out = er_pipeline(&g, 1, &PipelineSpec::default()).unwrap();
        assert_eq!(out.stats.regime, Regime::Partition { groups: 2 });
        let spec = CompleteKernelSpec::binary();
        assert_eq!(out.matrix.m(), 2 * (kernel_rows(1, 8, &spec).unwrap() + 1));
        assert!(check_feasibility(&g, &out.matrix).unwrap().feasible);
    }

    #[test]
    fn disconnected_measures_small_components() {
        // path 0..5 plus isolated 6, 7 and the edge 8-9
        let g = Graph::from_edges(10, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (8, 9)]).unwrap();
        let out = er_pipeline(&g, 1, &PipelineSpec::default()).unwrap();
        assert_eq!(
            out.stats.regime,
            Regime::GiantComponent {
                components: 4,
                giant: 6
            }
        );
        assert!(check_feasibility(&g, &out.matrix).unwrap().feasible);
        for v in [6, 7, 8, 9] {
            let rows: Vec<_> = out
                .matrix
                .rows()
                .iter()
                .filter(|r| r.contains(&v))
                .collect();
            assert_eq!(rows, vec![&vec![v]]);
        }
        assert!(out.matrix.m() >= 4);
    }
}
