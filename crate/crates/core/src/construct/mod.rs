//! Closed-form measurement constructions for specific topologies.

mod g4;
mod grid;
mod line;
mod network;
mod short;
mod tree;

pub use g4::{
    g4_bounded_length_matrix, g4_matrix, g4h_matrix, markov_default_rows, markov_g, markov_rows,
};
pub use grid::grid_matrix;
pub use line::{line_matrix, line_min_measurements, line_window, ring_matrix};
pub use network::ring_network_line_graph_matrix;
pub use short::{short_blocks, short_matrix, ShortFamily, ShortSpec};
pub use tree::tree_matrix;

use crate::error::Result;
use crate::graph::{Graph, HubCertificate};
use crate::kernel::{complete_kernel, hub_compose, CompleteKernelSpec};
use crate::matrix::{BinaryBlock, GroupFragment};

/// Hub-composed rows for `targets` through `hub` with a fresh kernel.
pub(crate) fn hub_group(
    g: &Graph,
    hub: &[usize],
    targets: &[usize],
    k: usize,
    spec: &CompleteKernelSpec,
) -> Result<GroupFragment> {
    let cert = HubCertificate::new(g, hub, targets)?;
    let kernel = if cert.targets.is_empty() {
        BinaryBlock::default()
    } else {
        complete_kernel(k, cert.targets.len(), spec)?
    };
    hub_compose(g, &cert, kernel)
}
