//! Undirected simple graphs and the structural predicates used by the
//! measurement constructions: connectivity of induced subgraphs, hubs,
//! r-partitions, components and line graphs.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textio::{expect_count, parse_usize, Lines};
use crate::traverse::Topology;

/// Undirected simple graph on nodes `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::NodeOutOfRange { node: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at node {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Inserts an edge, keeping adjacency sorted. Returns false if it existed.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.adj.len();
        for w in [u, v] {
            if w >= n {
                return Err(Error::NodeOutOfRange { node: w, n });
            }
        }
        if u == v {
            return Err(Error::InvalidParameter(format!("self-loop at node {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(true)
            }
        }
    }

    pub(crate) fn check_node(&self, v: usize) -> Result<()> {
        if v < self.adj.len() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: v,
                n: self.adj.len(),
            })
        }
    }

    pub(crate) fn check_nodes(&self, nodes: &[usize]) -> Result<()> {
        nodes.iter().try_for_each(|&v| self.check_node(v))
    }

    /// Subgraph induced by `nodes`. Returns the compacted graph and the map
    /// from new ids back to original ids (ascending).
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<(Graph, Vec<usize>)> {
        self.check_nodes(nodes)?;
        let mut keep: Vec<usize> = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.adj.len()];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let adj = keep
            .iter()
            .map(|&old| {
                self.adj[old]
                    .iter()
                    .filter(|&&w| index[w] != usize::MAX)
                    .map(|&w| index[w])
                    .collect()
            })
            .collect();
        Ok((Graph { adj }, keep))
    }

    // ---- named topologies -------------------------------------------------

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn ring(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.add_edge(0, n - 1).expect("valid ring");
        }
        g
    }

    /// Star with center 0 and leaves `1..n`.
    pub fn star(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (0, i))).expect("valid star")
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).collect())
            .collect();
        Graph { adj }
    }

    /// Ring where each node also links to its two distance-2 neighbors.
    pub fn g4(n: usize) -> Result<Self> {
        if n < 5 {
            return Err(Error::InvalidParameter(format!(
                "G4 needs at least 5 nodes, got {n}"
            )));
        }
        Self::from_edges(n, (0..n).flat_map(|i| [(i, (i + 1) % n), (i, (i + 2) % n)]))
    }

    /// G4 with the chords `(d-1, d+1)` removed for every midpoint `d`.
    pub fn g4_without_chords(n: usize, midpoints: &[usize]) -> Result<Self> {
        let mut removed = vec![false; n.max(5)];
        for &d in midpoints {
            if d >= n {
                return Err(Error::NodeOutOfRange { node: d, n });
            }
            removed[d] = true;
        }
        Self::g4(n)?;
        Self::from_edges(
            n,
            (0..n).flat_map(|i| {
                let mid = (i + 1) % n;
                let mut e = vec![(i, (i + 1) % n)];
                if !removed[mid] {
                    e.push((i, (i + 2) % n));
                }
                e
            }),
        )
    }

    /// Line graph of a ring network in which every router links to four
    /// routers. With 1-based link labels `p = id + 1`, odd `p` is adjacent to
    /// `p±1, p±2, p±3` and even `p` to `p±1, p±3, p±4` (all mod n).
    pub fn ring_network_line_graph(n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidParameter(format!(
                "ring-network line graph needs at least 8 links, got {n}"
            )));
        }
        let mut edges = Vec::new();
        for id in 0..n {
            let label = id + 1;
            let offsets: &[usize] = if label % 2 == 1 {
                &[1, 2, 3]
            } else {
                &[1, 3, 4]
            };
            for &o in offsets {
                edges.push((id, (id + o) % n));
            }
        }
        Self::from_edges(n, edges)
    }

    /// `side × side` grid; node `(r, c)` has id `r * side + c`.
    pub fn grid(side: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..side {
            for c in 0..side {
                let id = r * side + c;
                if c + 1 < side {
                    edges.push((id, id + 1));
                }
                if r + 1 < side {
                    edges.push((id, id + side));
                }
            }
        }
        Self::from_edges(side * side, edges).expect("valid grid")
    }

    // ---- text format ------------------------------------------------------

    /// `n m` header, then one `u v` line per edge with `u < v`.
    pub fn to_text(&self) -> String {
        let edges = self.edges();
        let mut out = String::with_capacity(16 + edges.len() * 12);
        writeln!(out, "{} {}", self.node_count(), edges.len()).unwrap();
        for (u, v) in edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn from_text(input: &str) -> Result<Self> {
        let mut lines = Lines::new(input);
        let header = lines.next_tokens("header `n m`")?;
        let line = header.first().map_or(1, |t| t.line);
        expect_count(&header, 2, line, "header `n m`")?;
        let n = parse_usize(&header[0])?;
        let m = parse_usize(&header[1])?;
        let mut g = Graph::empty(n);
        for _ in 0..m {
            let toks = lines.next_tokens("edge line `u v`")?;
            let line = toks.first().map_or(0, |t| t.line);
            expect_count(&toks, 2, line, "edge `u v`")?;
            let u = parse_usize(&toks[0])?;
            let v = parse_usize(&toks[1])?;
            if v >= n {
                return Err(Error::parse(
                    line,
                    toks[1].column,
                    format!("node {v} out of range for n = {n}"),
                ));
            }
            if u == v {
                return Err(Error::parse(line, toks[0].column, "self-loop"));
            }
            if u > v {
                return Err(Error::parse(
                    line,
                    toks[0].column,
                    "edge must satisfy u < v",
                ));
            }
            if !g.add_edge(u, v)? {
                return Err(Error::parse(
                    line,
                    toks[0].column,
                    format!("duplicate edge {u} {v}"),
                ));
            }
        }
        lines.finish()?;
        Ok(g)
    }
}

impl Topology for Graph {
    fn id_bound(&self) -> usize {
        self.adj.len()
    }

    fn is_live(&self, v: usize) -> bool {
        v < self.adj.len()
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    fn live_count(&self) -> usize {
        self.adj.len()
    }
}

/// Whether the subgraph induced by `nodes` is connected. The empty set and
/// singletons count as connected.
pub fn is_connected_induced(g: &Graph, nodes: &[usize]) -> Result<bool> {
    g.check_nodes(nodes)?;
    Ok(connected_within(g, nodes))
}

pub(crate) fn connected_within<T: Topology + ?Sized>(g: &T, nodes: &[usize]) -> bool {
    if nodes.len() <= 1 {
        return true;
    }
    let mut member = vec![false; g.id_bound()];
    let mut distinct = 0;
    for &v in nodes {
        if !member[v] {
            member[v] = true;
            distinct += 1;
        }
    }
    let mut seen = vec![false; g.id_bound()];
    let mut queue = VecDeque::from([nodes[0]]);
    seen[nodes[0]] = true;
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if member[w] && !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    reached == distinct
}

/// A hub `S` for targets `T`: `S` induces a connected subgraph and every
/// target has a neighbor in `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HubCertificate {
    pub hub: Vec<usize>,
    pub targets: Vec<usize>,
}

impl HubCertificate {
    /// Checks the hub predicate and returns a certificate with sorted sets.
    pub fn new(g: &Graph, hub: &[usize], targets: &[usize]) -> Result<Self> {
        hub_violation(g, hub, targets)?.map_or(Ok(()), |msg| Err(Error::NotAHub(msg)))?;
        let mut hub = hub.to_vec();
        hub.sort_unstable();
        hub.dedup();
        let mut targets = targets.to_vec();
        targets.sort_unstable();
        targets.dedup();
        Ok(HubCertificate { hub, targets })
    }
}

/// Hub predicate of the measurement model. Overlapping sets are an error.
pub fn is_hub(g: &Graph, hub: &[usize], targets: &[usize]) -> Result<bool> {
    Ok(hub_violation(g, hub, targets)?.is_none())
}

fn hub_violation(g: &Graph, hub: &[usize], targets: &[usize]) -> Result<Option<String>> {
    g.check_nodes(hub)?;
    g.check_nodes(targets)?;
    let mut in_hub = vec![false; g.node_count()];
    for &s in hub {
        in_hub[s] = true;
    }
    if let Some(&t) = targets.iter().find(|&&t| in_hub[t]) {
        return Err(Error::HubOverlap(t));
    }
    Ok(hub_violation_marked(g, hub, &in_hub, targets))
}

fn hub_violation_marked(
    g: &Graph,
    hub: &[usize],
    in_hub: &[bool],
    targets: &[usize],
) -> Option<String> {
    if !connected_within(g, hub) {
        return Some("hub does not induce a connected subgraph".into());
    }
    targets
        .iter()
        .find(|&&t| !g.neighbors(t).iter().any(|&w| in_hub[w]))
        .map(|t| format!("target {t} has no neighbor in the hub"))
}

/// Disjoint node groups each of which is served by its complement as a hub.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub groups: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionViolation {
    pub group: Option<usize>,
    pub reason: String,
}

impl std::fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.group {
            Some(g) => write!(f, "group {g}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

/// Checks the r-partition conditions. `Ok(())` means valid.
pub fn validate_partition(g: &Graph, p: &Partition) -> std::result::Result<(), PartitionViolation> {
    let n = g.node_count();
    let mut owner = vec![usize::MAX; n];
    for (gi, group) in p.groups.iter().enumerate() {
        for &v in group {
            if v >= n {
                return Err(PartitionViolation {
                    group: Some(gi),
                    reason: format!("node {v} out of range"),
                });
            }
            if owner[v] != usize::MAX {
                return Err(PartitionViolation {
                    group: Some(gi),
                    reason: format!("node {v} already in group {}", owner[v]),
                });
            }
            owner[v] = gi;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(PartitionViolation {
            group: None,
            reason: format!("node {v} is not covered"),
        });
    }
    for (gi, group) in p.groups.iter().enumerate() {
        let hub: Vec<usize> = (0..n).filter(|&v| owner[v] != gi).collect();
        if hub.is_empty() {
            return Err(PartitionViolation {
                group: Some(gi),
                reason: "complement is empty and cannot be a hub".into(),
            });
        }
        let in_hub: Vec<bool> = owner.iter().map(|&o| o != gi).collect();
        if let Some(reason) = hub_violation_marked(g, &hub, &in_hub, group) {
            return Err(PartitionViolation {
                group: Some(gi),
                reason,
            });
        }
    }
    Ok(())
}

/// Connected components, each sorted, ordered by smallest member.
pub fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    g.node_count() == 0 || components(g).len() == 1
}

/// Line graph: one node per network edge (ranked in sorted edge order), two
/// nodes adjacent iff the edges share an endpoint.
pub fn line_graph(network: &Graph) -> Result<Graph> {
    let edges = network.edges();
    if edges.is_empty() {
        return Err(Error::NoEdges);
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); network.node_count()];
    for (id, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(id);
        incident[b].push(id);
    }
    let mut line_edges = Vec::new();
    for list in &incident {
        for (i, &e) in list.iter().enumerate() {
            for &f in &list[i + 1..] {
                line_edges.push((e, f));
            }
        }
    }
    Graph::from_edges(edges.len(), line_edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Eight-node graph consistent with the two-measurement example of the
    /// measurement model: rows {0,1,2,4,5} and {2,3,6,7} are both feasible.
    pub(crate) fn example_graph() -> Graph {
        Graph::from_edges(
            8,
            [
                (0, 1),
                (1, 2),
                (0, 4),
                (4, 5),
                (1, 5),
                (2, 3),
                (3, 6),
                (6, 7),
                (5, 6),
            ],
        )
        .unwrap()
    }

    #[test]
    fn induced_connectivity_basics() {
        let p = Graph::path(3);
        assert!(!is_connected_induced(&p, &[0, 2]).unwrap());
        assert!(is_connected_induced(&p, &[0, 1]).unwrap());
        assert!(is_connected_induced(&p, &[]).unwrap());
        assert!(is_connected_induced(&p, &[2]).unwrap());
        assert!(matches!(
            is_connected_induced(&p, &[3]),
            Err(Error::NodeOutOfRange { node: 3, n: 3 })
        ));
        assert!(is_connected_induced(&example_graph(), &[0, 1, 2, 4, 5]).unwrap());
    }

    #[test]
    fn hub_predicate() {
        let g4 = Graph::g4(8).unwrap();
        assert!(is_hub(&g4, &[1, 3, 5, 7], &[0, 2, 4, 6]).unwrap());
        let ring = Graph::ring(6);
        assert!(!is_hub(&ring, &[0], &[2, 3]).unwrap());
        let star = Graph::star(6);
        assert!(is_hub(&star, &[0], &[1, 2, 3, 4, 5]).unwrap());
        assert_eq!(is_hub(&star, &[0, 1], &[1]), Err(Error::HubOverlap(1)));
    }

    #[test]
    fn partitions() {
        let g4 = Graph::g4(8).unwrap();
        let p = Partition {
            groups: vec![vec![1, 3, 5, 7], vec![0, 2, 4, 6]],
        };
        assert!(validate_partition(&g4, &p).is_ok());

        let ring = Graph::ring(6);
        let p = Partition {
            groups: vec![vec![0, 2, 4], vec![1, 3, 5]],
        };
        let err = validate_partition(&ring, &p).unwrap_err();
        assert_eq!(err.group, Some(0));

        let whole = Partition {
            groups: vec![(0..6).collect()],
        };
        assert!(validate_partition(&ring, &whole).is_err());

        let missing = Partition {
            groups: vec![vec![0, 1, 2]],
        };
        assert!(validate_partition(&ring, &missing).is_err());
    }

    #[test]
    fn components_ordering() {
        assert_eq!(components(&Graph::empty(2)), vec![vec![0], vec![1]]);
        assert_eq!(components(&Graph::ring(5)).len(), 1);
        let g = Graph::from_edges(6, [(4, 5), (0, 3)]).unwrap();
        assert_eq!(
            components(&g),
            vec![vec![0, 3], vec![1], vec![2], vec![4, 5]]
        );
    }

    #[test]
    fn line_graph_small_cases() {
        let lg = line_graph(&Graph::path(3)).unwrap();
        assert_eq!((lg.node_count(), lg.edge_count()), (2, 1));
        let tri = Graph::complete(3);
        let lg = line_graph(&tri).unwrap();
        assert_eq!(lg, Graph::complete(3));
        assert_eq!(line_graph(&Graph::empty(3)), Err(Error::NoEdges));
    }

    #[test]
    fn five_link_network() {
        // Routers a..e = 0..4, links 1..5 of the five-link example: links 1-4
        // form a connected chain through routers, link 5 hangs off router 3.
        let net = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 3), (3, 4)]).unwrap();
        let lg = line_graph(&net).unwrap();
        assert_eq!(lg.node_count(), 5);
        let first_four: Vec<usize> = (0..4).collect();
        assert!(is_connected_induced(&lg, &first_four).unwrap());
        for (id, (a, b)) in net.edges().into_iter().enumerate() {
            assert_eq!(lg.degree(id), net.degree(a) + net.degree(b) - 2);
        }
    }

    #[test]
    fn text_format_rules() {
        let g = example_graph();
        assert_eq!(Graph::from_text(&g.to_text()).unwrap(), g);
        assert!(matches!(Graph::from_text(""), Err(Error::Parse { .. })));
        assert!(matches!(
            Graph::from_text("3 1\n1 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Graph::from_text("3 2\n0 1\n0 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Graph::from_text("3 1\n1 0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Graph::from_text("3 1\n0 1\n5\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Graph::from_text("3 1\n0 1 2\n"),
            Err(Error::Parse {
                line: 2,
                column: 5,
                ..
            })
        ));
        assert!(matches!(
            Graph::from_text("3 1\n0 -1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(Graph::from_text("3 1\n0 1\n\n").is_ok());
    }

    #[test]
    fn builders_have_expected_shape() {
        let g4 = Graph::g4(16).unwrap();
        assert_eq!(g4.edge_count(), 32);
        assert!((0..16).all(|v| g4.degree(v) == 4));
        let h = Graph::g4_without_chords(12, &[4, 9]).unwrap();
        assert_eq!(h.edge_count(), 22);
        assert!(!h.has_edge(3, 5) && !h.has_edge(8, 10));
        let net = Graph::ring_network_line_graph(12).unwrap();
        assert!((0..12).all(|v| net.degree(v) == 6));
        assert_eq!(Graph::grid(4).edge_count(), 24);
        assert!(Graph::g4(4).is_err());
    }
}
