use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{is_connected, Graph};
use crate::kernel::{complete_kernel, CompleteKernelSpec};
use crate::matrix::{GroupFragment, MatrixBuilder, MeasurementMatrix};
use crate::traverse::bfs_tree;

/// Layer-by-layer construction on a rooted tree. A kernel row selecting
/// `W` from layer `i` becomes `W` plus every ancestor of `W`; the ancestors
/// are recovered in earlier layers and subtracted during decoding.
pub fn tree_matrix(
    g: &Graph,
    root: usize,
    k: usize,
    spec: &CompleteKernelSpec,
) -> Result<MeasurementMatrix> {
    let n = g.node_count();
    if n == 0 || g.edge_count() != n - 1 || !is_connected(g) {
        return Err(Error::NotATree);
    }
    g.check_node(root)?;
    let tree = bfs_tree(g, root)?;
    let height = tree.order.iter().map(|&v| tree.depth[v]).max().unwrap_or(0);
    let mut layers = vec![Vec::new(); height + 1];
    for &v in &tree.order {
        layers[tree.depth[v]].push(v);
    }
    let mut b = MatrixBuilder::new(n);
    b.push_singletons(&[root]);
    for (depth, layer) in layers.iter_mut().enumerate().skip(1) {
        layer.sort_unstable();
        let kernel = complete_kernel(k, layer.len(), &spec.for_group(depth as u64))?;
        let rows = (0..kernel.row_count())
            .map(|r| {
                let mut ancestors = BTreeSet::new();
                for c in kernel.support(r) {
                    let mut cur = tree.parent[layer[c]];
                    while let Some(p) = cur {
                        if !ancestors.insert(p) {
                            break;
                        }
                        cur = tree.parent[p];
                    }
                }
                let subtract: Vec<usize> = ancestors.iter().copied().collect();
                let mut row = subtract.clone();
                row.extend(kernel.support(r).into_iter().map(|c| layer[c]));
                row.sort_unstable();
                (row, subtract)
            })
            .collect();
        b.push(GroupFragment {
            target: layer.clone(),
            hub: None,
            rows,
            kernel,
        });
    }
    b.finish()
}
