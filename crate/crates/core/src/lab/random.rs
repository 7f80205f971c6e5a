//! Seeded random graph generators.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErdosRenyiSpec {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl ErdosRenyiSpec {
    /// `p = β·ln n / n`, clamped to `[0, 1]`.
    pub fn from_beta(n: usize, beta: f64, seed: u64) -> Self {
        let p = if n < 2 {
            0.0
        } else {
            (beta * (n as f64).ln() / n as f64).clamp(0.0, 1.0)
        };
        ErdosRenyiSpec { n, p, seed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarabasiAlbertSpec {
    pub n: usize,
    /// Edges added with every new node.
    pub m: usize,
    /// Size of the initial random tree.
    pub m0: usize,
    pub seed: u64,
}

/// `G(n, p)` with independent edge coin flips in `(u, v)` order, `u < v`.
pub fn gen_er(spec: &ErdosRenyiSpec) -> Result<Graph> {
    if !(0.0..=1.0).contains(&spec.p) {
        return Err(Error::InvalidParameter(format!(
            "p = {} outside [0, 1]",
            spec.p
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            if rng.random::<f64>() < spec.p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(spec.n, edges)
}

/// Uniform random labeled tree on `n` nodes from a random Prüfer sequence.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    if n < 2 {
        return Graph::empty(n);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    prufer_decode(n, &seq)
}

/// Random recursive tree: node `v` attaches to a uniform node among `0..v`.
pub fn random_recursive_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    Graph::from_edges(n, edges).expect("attachment edges are valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeModel {
    /// Uniform attachment to an earlier node; depth grows like `ln n`.
    #[default]
    Recursive,
    /// Uniform over labeled trees; depth grows like `√n`.
    Prufer,
}

impl TreeModel {
    pub fn sample<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> Graph {
        match self {
            TreeModel::Recursive => random_recursive_tree(n, rng),
            TreeModel::Prufer => random_tree(n, rng),
        }
    }
}

pub(crate) fn prufer_decode(n: usize, seq: &[usize]) -> Graph {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let Reverse(leaf) = leaves
            .pop()
            .expect("a Prüfer sequence always leaves a leaf");
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.push(Reverse(s));
        }
    }
    let Reverse(a) = leaves.pop().expect("two nodes remain");
    let Reverse(b) = leaves.pop().expect("two nodes remain");
    edges.push((a, b));
    Graph::from_edges(n, edges).expect("decoded edges are valid")
}

/// Adds `count` edges chosen uniformly among absent pairs, by rejection.
pub fn add_random_edges<R: Rng + ?Sized>(g: &mut Graph, count: usize, rng: &mut R) -> Result<()> {
    let n = g.node_count();
    let absent = n * n.saturating_sub(1) / 2 - g.edge_count();
    if count > absent {
        return Err(Error::InvalidParameter(format!(
            "cannot add {count} edges, only {absent} pairs are absent"
        )));
    }
    let mut added = 0;
    while added < count {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v && g.add_edge(u, v)? {
            added += 1;
        }
    }
    Ok(())
}

/// Preferential attachment grown from a random tree of `m0` nodes. Each new
/// node picks `m` distinct existing nodes, sequentially with probability
/// proportional to degree.
pub fn gen_ba(spec: &BarabasiAlbertSpec) -> Result<Graph> {
    let BarabasiAlbertSpec { n, m, m0, seed } = *spec;
    if m0 == 0 || m0 > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 ≤ m0 ≤ n, got m0 = {m0}, n = {n}"
        )));
    }
    if m > m0 {
        return Err(Error::InvalidParameter(format!(
            "m = {m} exceeds the initial size {m0}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = random_tree(m0, &mut rng);
    let mut edges = tree.edges();
    // every node appears once per incident edge
    let mut ends: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    for v in m0..n {
        let mut chosen: Vec<usize> = Vec::with_capacity(m);
        while chosen.len() < m {
            let w = if ends.is_empty() {
                rng.random_range(0..v)
            } else {
                ends[rng.random_range(0..ends.len())]
            };
            if !chosen.contains(&w) {
                chosen.push(w);
            }
        }
        for w in chosen {
            edges.push((w, v));
            ends.push(w);
            ends.push(v);
        }
    }
    Graph::from_edges(n, edges)
}

/// Seeded permutation of `0..n`.
pub(crate) fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    ids
}
