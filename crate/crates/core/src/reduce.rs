//! Node elimination with edge annotations.
//!
//! Deleting a node fully connects its neighbors. Every edge introduced this
//! way remembers the original nodes it stands for, so a node set that is
//! connected in the reduced graph can be expanded back into a set that is
//! connected in the original graph.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::traverse::{bfs_tree, Topology};

/// Map from an unordered node pair to the original nodes behind that edge.
/// Absent pairs carry the empty set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeAnnotations {
    map: BTreeMap<(usize, usize), BTreeSet<usize>>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl EdgeAnnotations {
    pub fn get(&self, a: usize, b: usize) -> Option<&BTreeSet<usize>> {
        self.map.get(&key(a, b))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &BTreeSet<usize>)> {
        self.map.iter()
    }

    fn insert(&mut self, a: usize, b: usize, nodes: BTreeSet<usize>) {
        if !nodes.is_empty() {
            self.map.insert(key(a, b), nodes);
        }
    }

    fn remove_node(&mut self, u: usize, neighbors: &[usize]) {
        for &v in neighbors {
            self.map.remove(&key(u, v));
        }
    }
}

/// A graph under successive node deletions. Node ids never change; deleted
/// ids are simply no longer live.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGraph {
    adj: Vec<Vec<usize>>,
    live: Vec<bool>,
    live_count: usize,
    annotations: EdgeAnnotations,
}

impl ReducedGraph {
    pub fn new(g: &Graph) -> Self {
        let n = g.node_count();
        ReducedGraph {
            adj: (0..n).map(|v| g.neighbors(v).to_vec()).collect(),
            live: vec![true; n],
            live_count: n,
            annotations: EdgeAnnotations::default(),
        }
    }

    pub fn annotations(&self) -> &EdgeAnnotations {
        &self.annotations
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.is_live(a) && self.adj[a].binary_search(&b).is_ok()
    }

    /// Returns a copy with `u` deleted.
    pub fn reduce(&self, u: usize) -> Result<Self> {
        let mut next = self.clone();
        next.reduce_in_place(u)?;
        Ok(next)
    }

    /// Deletes `u` and connects every pair of its neighbors. New edges get
    /// `K(v,w) = K(v,u) ∪ K(u,w) ∪ {u}`; existing edges keep their annotation.
    pub fn reduce_in_place(&mut self, u: usize) -> Result<()> {
        if u >= self.adj.len() || !self.live[u] {
            return Err(Error::NodeAbsent(u));
        }
        let nbrs = std::mem::take(&mut self.adj[u]);
        for &v in &nbrs {
            let pos = self.adj[v].binary_search(&u).expect("symmetric adjacency");
            self.adj[v].remove(pos);
        }
        for (i, &v) in nbrs.iter().enumerate() {
            for &w in &nbrs[i + 1..] {
                if let Err(pos) = self.adj[v].binary_search(&w) {
                    self.adj[v].insert(pos, w);
                    let pos = self.adj[w].binary_search(&v).unwrap_err();
                    self.adj[w].insert(pos, v);
                    let mut k: BTreeSet<usize> = BTreeSet::from([u]);
                    if let Some(a) = self.annotations.get(v, u) {
                        k.extend(a);
                    }
                    if let Some(b) = self.annotations.get(u, w) {
                        k.extend(b);
                    }
                    self.annotations.insert(v, w, k);
                }
            }
        }
        self.annotations.remove_node(u, &nbrs);
        self.live[u] = false;
        self.live_count -= 1;
        Ok(())
    }

    /// Original-graph nodes needed to make `nodes` (connected here) connected
    /// in the original graph: the union of annotations over the edges of a BFS
    /// spanning tree of the induced subgraph, rooted at the smallest member.
    pub fn expansion(&self, nodes: &[usize]) -> Result<BTreeSet<usize>> {
        let mut extra = BTreeSet::new();
        if nodes.len() <= 1 {
            return Ok(extra);
        }
        let sub = InducedView::new(self, nodes)?;
        let root = *nodes.iter().min().unwrap();
        let tree = bfs_tree(&sub, root)?;
        for &v in &tree.order {
            if let Some(p) = tree.parent[v] {
                if let Some(k) = self.annotations.get(p, v) {
                    extra.extend(k);
                }
            }
        }
        Ok(extra)
    }
}

impl Topology for ReducedGraph {
    fn id_bound(&self) -> usize {
        self.adj.len()
    }

    fn is_live(&self, v: usize) -> bool {
        self.live[v]
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    fn live_count(&self) -> usize {
        self.live_count
    }
}

/// Induced subgraph of a reduced graph, keeping original ids.
struct InducedView {
    adj: Vec<Vec<usize>>,
    member: Vec<bool>,
    count: usize,
}

impl InducedView {
    fn new(g: &ReducedGraph, nodes: &[usize]) -> Result<Self> {
        let n = g.id_bound();
        let mut member = vec![false; n];
        for &v in nodes {
            if v >= n || !g.is_live(v) {
                return Err(Error::NodeAbsent(v));
            }
            member[v] = true;
        }
        let mut adj = vec![Vec::new(); n];
        let mut count = 0;
        for v in 0..n {
            if member[v] {
                count += 1;
                adj[v] = g
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&w| member[w])
                    .collect();
            }
        }
        Ok(InducedView { adj, member, count })
    }
}

impl Topology for InducedView {
    fn id_bound(&self) -> usize {
        self.adj.len()
    }

    fn is_live(&self, v: usize) -> bool {
        self.member[v]
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    fn live_count(&self) -> usize {
        self.count
    }
}

/// Pure form of a single elimination step on a plain graph.
pub fn reduce(g: &ReducedGraph, u: usize) -> Result<ReducedGraph> {
    g.reduce(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_connected_induced;
    use crate::traverse::radius_and_center;
    use proptest::prelude::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn path_middle_removed() {
        let r = ReducedGraph::new(&Graph::path(3)).reduce(1).unwrap();
        assert!(r.has_edge(0, 2));
        assert_eq!(r.annotations().get(0, 2), Some(&set(&[1])));
        assert_eq!(r.live_count(), 2);
        assert_eq!(r.reduce(1).unwrap_err(), Error::NodeAbsent(1));
    }

    #[test]
    fn existing_edge_keeps_annotation() {
        let r = ReducedGraph::new(&Graph::complete(3)).reduce(2).unwrap();
        assert!(r.has_edge(0, 1));
        assert_eq!(r.annotations().get(0, 1), None);
    }

    #[test]
    fn two_steps_compose() {
        let r = ReducedGraph::new(&Graph::path(4))
            .reduce(1)
            .unwrap()
            .reduce(2)
            .unwrap();
        assert!(r.has_edge(0, 3));
        assert_eq!(r.annotations().get(0, 3), Some(&set(&[1, 2])));
        assert_eq!(r.annotations().len(), 1);
        assert_eq!(r.expansion(&[0, 3]).unwrap(), set(&[1, 2]));
    }

    fn connected_graph(n: usize, parents: &[usize], extra: &[(usize, usize)]) -> Graph {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (parents[i - 1] % i, i)).collect();
        edges.extend(
            extra
                .iter()
                .filter(|(a, b)| a % n != b % n)
                .map(|&(a, b)| (a % n, b % n)),
        );
        Graph::from_edges(n, edges).unwrap()
    }

    proptest! {
        #[test]
        fn reduce_keeps_connectivity_and_expansions_are_feasible(
            n in 2usize..16,
            parents in proptest::collection::vec(0usize..1000, 15),
            extra in proptest::collection::vec((0usize..16, 0usize..16), 0..10),
            order in proptest::collection::vec(0usize..1000, 1..8),
        ) {
            let g = connected_graph(n, &parents, &extra);
            let mut r = ReducedGraph::new(&g);
            for pick in order {
                if r.live_count() <= 1 {
                    break;
                }
                let live = r.live_nodes();
                let u = live[pick % live.len()];
                r.reduce_in_place(u).unwrap();
                let live = r.live_nodes();
                prop_assert!(bfs_tree(&r, live[0]).is_ok());
                for ((a, b), k) in r.annotations().iter() {
                    prop_assert!(r.has_edge(*a, *b));
                    prop_assert!(!k.contains(a) && !k.contains(b));
                    prop_assert!(k.iter().all(|&x| !r.is_live(x)));
                }
                let mut expanded: BTreeSet<usize> = live.iter().copied().collect();
                expanded.extend(r.expansion(&live).unwrap());
                let nodes: Vec<usize> = expanded.into_iter().collect();
                prop_assert!(is_connected_induced(&g, &nodes).unwrap());
            }
        }

        #[test]
        fn removing_bfs_leaves_from_center_shrinks_radius(
            n in 3usize..24,
            parents in proptest::collection::vec(0usize..1000, 23),
            extra in proptest::collection::vec((0usize..24, 0usize..24), 0..12),
        ) {
            let g = connected_graph(n, &parents, &extra);
            let (radius, center) = radius_and_center(&g).unwrap();
            prop_assume!(radius >= 1);
            let tree = bfs_tree(&g, center).unwrap();
            let mut r = ReducedGraph::new(&g);
            for &leaf in &tree.leaves {
                r.reduce_in_place(leaf).unwrap();
            }
            let (after, _) = radius_and_center(&r).unwrap();
            prop_assert!(after < radius);
        }
    }
}
