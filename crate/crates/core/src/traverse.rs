//! Breadth-first traversal over graphs with stable node ids.
//!
//! Every traversal explores neighbors in ascending id order and breaks ties
//! toward the smallest id, so results are reproducible.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Read access to a graph whose id space may contain deleted nodes.
pub trait Topology {
    /// Exclusive upper bound on node ids.
    fn id_bound(&self) -> usize;
    fn is_live(&self, v: usize) -> bool;
    /// Sorted neighbors of a live node.
    fn neighbors(&self, v: usize) -> &[usize];
    fn live_count(&self) -> usize;

    fn live_nodes(&self) -> Vec<usize> {
        (0..self.id_bound()).filter(|&v| self.is_live(v)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    /// `parent[v]` is `None` for the root and for nodes outside the graph.
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    /// Nodes in visit order.
    pub order: Vec<usize>,
    /// Childless nodes, ascending.
    pub leaves: Vec<usize>,
}

/// BFS spanning tree rooted at `root`. The graph must be connected.
pub fn bfs_tree<T: Topology + ?Sized>(g: &T, root: usize) -> Result<SpanningTree> {
    if root >= g.id_bound() || !g.is_live(root) {
        return Err(Error::NodeAbsent(root));
    }
    let n = g.id_bound();
    let mut parent = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut has_child = vec![false; n];
    let mut order = Vec::with_capacity(g.live_count());
    depth[root] = 0;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in g.neighbors(v) {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some(v);
                has_child[v] = true;
                order.push(w);
            }
        }
    }
    if order.len() != g.live_count() {
        return Err(Error::Disconnected);
    }
    let mut leaves: Vec<usize> = order.iter().copied().filter(|&v| !has_child[v]).collect();
    leaves.sort_unstable();
    Ok(SpanningTree {
        root,
        parent,
        depth,
        order,
        leaves,
    })
}

/// Eccentricity of `root`, or `None` if the BFS reaches a node at distance
/// `cutoff` or more (the search is abandoned at that point).
fn eccentricity_below<T: Topology + ?Sized>(
    g: &T,
    root: usize,
    cutoff: usize,
    dist: &mut [usize],
    queue: &mut VecDeque<usize>,
    touched: &mut Vec<usize>,
) -> (Option<usize>, usize) {
    queue.clear();
    dist[root] = 0;
    touched.push(root);
    queue.push_back(root);
    let mut ecc = 0;
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        let dv = dist[v];
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                let dw = dv + 1;
                if dw >= cutoff {
                    return (None, reached);
                }
                dist[w] = dw;
                touched.push(w);
                reached += 1;
                ecc = ecc.max(dw);
                queue.push_back(w);
            }
        }
    }
    (Some(ecc), reached)
}

/// Exact radius and the smallest-id center of a connected graph.
pub fn radius_and_center<T: Topology + ?Sized>(g: &T) -> Result<(usize, usize)> {
    let live = g.live_nodes();
    if live.is_empty() {
        return Err(Error::InvalidParameter("graph has no nodes".into()));
    }
    let mut dist = vec![usize::MAX; g.id_bound()];
    let mut queue = VecDeque::new();
    let mut touched = Vec::new();
    let mut best: Option<(usize, usize)> = None;
    for &u in &live {
        let cutoff = best.map_or(usize::MAX, |(r, _)| r);
        let (ecc, reached) = eccentricity_below(g, u, cutoff, &mut dist, &mut queue, &mut touched);
        for &v in &touched {
            dist[v] = usize::MAX;
        }
        touched.clear();
        if let Some(ecc) = ecc {
            if reached != live.len() {
                return Err(Error::Disconnected);
            }
            best = Some((ecc, u));
        }
        if best.is_some_and(|(r, _)| r == 0) {
            break;
        }
    }
    best.ok_or(Error::Disconnected)
}

/// Shortest path (as a node list from a source to a target) found by a
/// multi-source BFS from `sources` that never enters `blocked` nodes. Sources
/// and targets themselves are exempt from blocking.
pub fn shortest_path<T, F>(
    g: &T,
    sources: &[usize],
    targets: &[usize],
    blocked: F,
) -> Option<Vec<usize>>
where
    T: Topology + ?Sized,
    F: Fn(usize) -> bool,
{
    let n = g.id_bound();
    let mut is_target = vec![false; n];
    for &t in targets {
        is_target[t] = true;
    }
    let mut srcs: Vec<usize> = sources.to_vec();
    srcs.sort_unstable();
    srcs.dedup();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in &srcs {
        if is_target[s] {
            return Some(vec![s]);
        }
        seen[s] = true;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if seen[w] || (!is_target[w] && blocked(w)) {
                continue;
            }
            seen[w] = true;
            parent[w] = v;
            if is_target[w] {
                let mut path = vec![w];
                let mut cur = w;
                while parent[cur] != usize::MAX {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    /// All-pairs BFS without pruning.
    fn brute_radius(g: &Graph) -> (usize, usize) {
        let n = g.node_count();
        let mut best = (usize::MAX, 0);
        for u in 0..n {
            let mut dist = vec![usize::MAX; n];
            dist[u] = 0;
            let mut q = VecDeque::from([u]);
            while let Some(v) = q.pop_front() {
                for &w in g.neighbors(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        q.push_back(w);
                    }
                }
            }
            let ecc = *dist.iter().max().unwrap();
            if ecc < best.0 {
                best = (ecc, u);
            }
        }
        best
    }

    #[test]
    fn bfs_leaves() {
        assert_eq!(bfs_tree(&Graph::path(4), 0).unwrap().leaves, vec![3]);
        assert_eq!(
            bfs_tree(&Graph::star(5), 0).unwrap().leaves,
            vec![1, 2, 3, 4]
        );
        let t = bfs_tree(&Graph::ring(6), 0).unwrap();
        assert_eq!(t.leaves, vec![3, 4]);
        assert_eq!(t.parent[3], Some(2));
        assert_eq!(
            bfs_tree(&Graph::empty(2), 0).unwrap_err(),
            Error::Disconnected
        );
    }

    #[test]
    fn radius_examples() {
        assert_eq!(radius_and_center(&Graph::path(5)).unwrap(), (2, 2));
        assert_eq!(radius_and_center(&Graph::complete(4)).unwrap().0, 1);
        assert_eq!(radius_and_center(&Graph::g4(16).unwrap()).unwrap().0, 4);
        assert_eq!(radius_and_center(&Graph::empty(1)).unwrap(), (0, 0));
        assert_eq!(
            radius_and_center(&Graph::empty(3)),
            Err(Error::Disconnected)
        );
        for n in [5, 6, 7, 9, 13, 20] {
            let g = Graph::g4(n).unwrap();
            assert_eq!(radius_and_center(&g).unwrap(), brute_radius(&g));
            assert_eq!(radius_and_center(&g).unwrap().0, (n / 2).div_ceil(2));
        }
    }

    #[test]
    fn pruned_radius_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.random_range(2..40);
            let mut edges: Vec<(usize, usize)> =
                (1..n).map(|i| (rng.random_range(0..i), i)).collect();
            for _ in 0..rng.random_range(0..n) {
                let a = rng.random_range(0..n);
                let b = rng.random_range(0..n);
                if a != b {
                    edges.push((a, b));
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            assert_eq!(radius_and_center(&g).unwrap(), brute_radius(&g));
        }
    }

    #[test]
    fn shortest_path_avoids_blocked() {
        let g = Graph::ring(6);
        let p = shortest_path(&g, &[0], &[3], |_| false).unwrap();
        assert_eq!(p, vec![0, 1, 2, 3]);
        let p = shortest_path(&g, &[0], &[3], |v| v == 1).unwrap();
        assert_eq!(p, vec![0, 5, 4, 3]);
        assert!(shortest_path(&g, &[0], &[3], |v| v == 1 || v == 5).is_none());
        assert_eq!(shortest_path(&g, &[2, 4], &[4], |_| true), Some(vec![4]));
    }
}
