//! Measurement design for arbitrary connected graphs.
//!
//! Each iteration takes the leaves of a BFS tree rooted at a center of the
//! current reduced graph, recovers them through the remaining nodes as a
//! hub, and then eliminates them. Rows designed on the reduced graph are
//! expanded with the eliminated nodes behind the edges they use, so they
//! stay feasible on the original graph; those nodes were recovered by
//! earlier groups and are subtracted during decoding.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_within, is_connected, Graph};
use crate::kernel::{complete_kernel, kernel_rows, CompleteKernelSpec};
use crate::matrix::{BinaryBlock, GroupFragment, MatrixBuilder, MeasurementMatrix};
use crate::reduce::{EdgeAnnotations, ReducedGraph};
use crate::traverse::{bfs_tree, radius_and_center, shortest_path, Topology};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralIteration {
    /// Nodes recovered in this iteration.
    pub leaves: Vec<usize>,
    /// Live nodes serving as the hub.
    pub hub: Vec<usize>,
    /// Edge annotations of the reduced graph the iteration worked on.
    pub annotations: EdgeAnnotations,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralPlan {
    pub iterations: Vec<GeneralIteration>,
    pub final_node: usize,
    /// Radius of the original graph.
    pub radius: usize,
}

impl GeneralPlan {
    /// Group sizes in iteration order, ending with the final node's group.
    pub fn group_sizes(&self) -> Vec<usize> {
        self.iterations
            .iter()
            .map(|it| it.leaves.len())
            .chain([1])
            .collect()
    }
}

/// `R·f(k,n) + R + 1`.
pub fn algorithm1_bound(
    radius: usize,
    k: usize,
    n: usize,
    spec: &CompleteKernelSpec,
) -> Result<usize> {
    Ok(radius * kernel_rows(k, n, spec)? + radius + 1)
}

/// `R·f(k,n) + 3R + 2`.
pub fn agents_bound(radius: usize, k: usize, n: usize, spec: &CompleteKernelSpec) -> Result<usize> {
    Ok(radius * kernel_rows(k, n, spec)? + 3 * radius + 2)
}

pub fn algorithm1(g: &Graph, k: usize, spec: &CompleteKernelSpec) -> Result<MeasurementMatrix> {
    algorithm1_plan(g, k, spec).map(|(a, _)| a)
}

pub fn algorithm1_plan(
    g: &Graph,
    k: usize,
    spec: &CompleteKernelSpec,
) -> Result<(MeasurementMatrix, GeneralPlan)> {
    let (frags, plan) = design(g, k, spec, None)?;
    Ok((assemble(g.node_count(), frags)?, plan))
}

/// Variant in which every row contains at least one node of `agents`.
pub fn algorithm1_with_agents(
    g: &Graph,
    k: usize,
    agents: &[usize],
    spec: &CompleteKernelSpec,
) -> Result<MeasurementMatrix> {
    algorithm1_with_agents_plan(g, k, agents, spec).map(|(a, _)| a)
}

pub fn algorithm1_with_agents_plan(
    g: &Graph,
    k: usize,
    agents: &[usize],
    spec: &CompleteKernelSpec,
) -> Result<(MeasurementMatrix, GeneralPlan)> {
    if agents.is_empty() {
        return Err(Error::InvalidParameter("agent set is empty".into()));
    }
    g.check_nodes(agents)?;
    let (frags, plan) = design(g, k, spec, Some(agents))?;
    Ok((assemble(g.node_count(), frags)?, plan))
}

fn assemble(n: usize, frags: Vec<GroupFragment>) -> Result<MeasurementMatrix> {
    let mut b = MatrixBuilder::new(n);
    for f in frags {
        b.push(f);
    }
    b.finish()
}

/// How the leaves of one iteration are measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupKernel {
    /// Hub-composed rows from this kernel spec.
    Hub(CompleteKernelSpec),
    /// One row per leaf.
    Direct,
}

fn design(
    g: &Graph,
    k: usize,
    spec: &CompleteKernelSpec,
    agents: Option<&[usize]>,
) -> Result<(Vec<GroupFragment>, GeneralPlan)> {
    design_with(g, k, agents, &|index, _| {
        GroupKernel::Hub(spec.for_group(index as u64))
    })
}

/// Row groups in decode order plus the iteration record. `choose` picks the
/// kernel for iteration `index` with the given number of leaves.
pub fn design_with(
    g: &Graph,
    k: usize,
    agents: Option<&[usize]>,
    choose: &dyn Fn(usize, usize) -> GroupKernel,
) -> Result<(Vec<GroupFragment>, GeneralPlan)> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::InvalidParameter("graph has no nodes".into()));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let mut is_agent = vec![false; n];
    for &y in agents.unwrap_or(&[]) {
        is_agent[y] = true;
    }
    let mut r = ReducedGraph::new(g);
    let (radius, _) = radius_and_center(&r)?;
    let mut frags = Vec::new();
    let mut iterations = Vec::new();
    while r.live_count() > 1 {
        let (_, u) = radius_and_center(&r)?;
        let tree = bfs_tree(&r, u)?;
        let leaves = tree.leaves.clone();
        let mut in_leaves = vec![false; n];
        for &v in &leaves {
            in_leaves[v] = true;
        }
        let hub: Vec<usize> = r
            .live_nodes()
            .into_iter()
            .filter(|&v| !in_leaves[v])
            .collect();
        if !connected_within(&r, &hub)
            || leaves
                .iter()
                .any(|&v| !r.neighbors(v).iter().any(|&w| !in_leaves[w]))
        {
            return Err(Error::NotAHub(format!(
                "iteration {} leaves are not served by the remaining nodes",
                iterations.len()
            )));
        }
        match (choose(iterations.len(), leaves.len()), agents) {
            (GroupKernel::Direct, _) => frags.push(GroupFragment {
                target: leaves.clone(),
                hub: None,
                rows: leaves.iter().map(|&v| (vec![v], Vec::new())).collect(),
                kernel: BinaryBlock::identity(leaves.len()),
            }),
            (GroupKernel::Hub(group_spec), None) => {
                frags.push(group_rows(&r, &hub, &leaves, &[], k, &group_spec)?)
            }
            (GroupKernel::Hub(group_spec), Some(_)) => frags.extend(agent_groups(
                g,
                &r,
                &tree.parent,
                &hub,
                &leaves,
                &is_agent,
                k,
                &group_spec,
            )?),
        }
        iterations.push(GeneralIteration {
            leaves: leaves.clone(),
            hub,
            annotations: r.annotations().clone(),
        });
        for &v in &leaves {
            r.reduce_in_place(v)?;
        }
    }
    let last = r.live_nodes()[0];
    match agents {
        None => frags.push(singleton(last)),
        Some(_) => {
            let path = shortest_path(g, &[last], &agent_list(&is_agent), |_| false)
                .ok_or(Error::Disconnected)?;
            frags.push(path_pair(last, path));
        }
    }
    Ok((
        frags,
        GeneralPlan {
            iterations,
            final_node: last,
            radius,
        },
    ))
}

fn agent_list(is_agent: &[bool]) -> Vec<usize> {
    (0..is_agent.len()).filter(|&v| is_agent[v]).collect()
}

fn singleton(v: usize) -> GroupFragment {
    GroupFragment {
        target: vec![v],
        hub: None,
        rows: vec![(vec![v], Vec::new())],
        kernel: BinaryBlock::identity(1),
    }
}

/// Recovers `v` from a path starting at `v` whose other nodes are known:
/// the path without `v` acts as the hub row.
fn path_pair(v: usize, path: Vec<usize>) -> GroupFragment {
    if path.len() <= 1 {
        return singleton(v);
    }
    let mut rest: Vec<usize> = path.iter().copied().filter(|&w| w != v).collect();
    rest.sort_unstable();
    let mut full = path;
    full.sort_unstable();
    GroupFragment {
        target: vec![v],
        hub: Some((rest, Vec::new())),
        rows: vec![(full, Vec::new())],
        kernel: BinaryBlock::identity(1),
    }
}

/// Splits an original-graph node set into the row and its eliminated nodes.
fn with_dead(r: &ReducedGraph, nodes: BTreeSet<usize>) -> (Vec<usize>, Vec<usize>) {
    let dead = nodes.iter().copied().filter(|&v| !r.is_live(v)).collect();
    (nodes.into_iter().collect(), dead)
}

/// Hub row plus kernel rows for `targets`, designed on the reduced graph and
/// expanded into the original graph. `extra` (original nodes, connected to
/// the hub's expansion) is added to every row.
fn group_rows(
    r: &ReducedGraph,
    hub: &[usize],
    targets: &[usize],
    extra: &[usize],
    k: usize,
    spec: &CompleteKernelSpec,
) -> Result<GroupFragment> {
    let expand = |nodes: &[usize], base: &BTreeSet<usize>| -> Result<BTreeSet<usize>> {
        let mut set: BTreeSet<usize> = nodes.iter().copied().collect();
        set.extend(r.expansion(nodes)?);
        set.extend(base.iter().copied());
        Ok(set)
    };
    let base: BTreeSet<usize> = extra.iter().copied().collect();
    let hub_set = expand(hub, &base)?;
    let kernel = complete_kernel(k, targets.len(), spec)?;
    let mut rows = Vec::with_capacity(kernel.row_count());
    for row in 0..kernel.row_count() {
        let mut nodes = hub.to_vec();
        nodes.extend(kernel.support(row).into_iter().map(|c| targets[c]));
        nodes.sort_unstable();
        let set = expand(&nodes, &base)?;
        rows.push(with_dead(r, set));
    }
    Ok(GroupFragment {
        target: targets.to_vec(),
        hub: Some(with_dead(r, hub_set)),
        rows,
        kernel,
    })
}

/// Groups for one iteration when every row must contain an agent.
#[allow(clippy::too_many_arguments)]
fn agent_groups(
    g: &Graph,
    r: &ReducedGraph,
    parent: &[Option<usize>],
    hub: &[usize],
    leaves: &[usize],
    is_agent: &[bool],
    k: usize,
    spec: &CompleteKernelSpec,
) -> Result<Vec<GroupFragment>> {
    if hub.iter().any(|&v| is_agent[v]) {
        return Ok(vec![group_rows(r, hub, leaves, &[], k, spec)?]);
    }
    let n = g.node_count();
    let mut in_leaves = vec![false; n];
    for &v in leaves {
        in_leaves[v] = true;
    }
    let mut hub_orig: BTreeSet<usize> = hub.iter().copied().collect();
    hub_orig.extend(r.expansion(hub)?);
    let sources: Vec<usize> = hub_orig.iter().copied().collect();
    let reachable: Vec<usize> = (0..n).filter(|&v| is_agent[v] && !in_leaves[v]).collect();
    if let Some(path) = shortest_path(g, &sources, &reachable, |v| in_leaves[v]) {
        let mut extra = sources;
        extra.extend(path);
        return Ok(vec![group_rows(r, hub, leaves, &extra, k, spec)?]);
    }
    // move one leaf into the hub: either an agent leaf, or the leaf closest
    // to the agents through eliminated nodes
    let (i, path) = match leaves.iter().copied().find(|&v| is_agent[v]) {
        Some(i) => (i, vec![i]),
        None => {
            let agents = agent_list(is_agent);
            let mut p =
                shortest_path(g, &agents, leaves, |v| r.is_live(v)).ok_or(Error::Disconnected)?;
            p.reverse();
            (p[0], p)
        }
    };
    let p = parent[i].expect("leaf has a parent");
    let mut extra: Vec<usize> = hub_orig.into_iter().collect();
    extra.extend(path.iter().copied());
    if let Some(kset) = r.annotations().get(i, p) {
        extra.extend(kset.iter().copied());
    }
    let rest: Vec<usize> = leaves.iter().copied().filter(|&v| v != i).collect();
    let mut frags = vec![path_pair(i, path)];
    if rest.is_empty() {
        return Ok(frags);
    }
    let mut live_hub = hub.to_vec();
    live_hub.push(i);
    live_hub.sort_unstable();
    frags.push(group_rows(r, &live_hub, &rest, &extra, k, spec)?);
    Ok(frags)
}
