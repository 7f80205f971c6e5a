use super::hub_group;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kernel::{complete_kernel, CompleteKernelSpec};
use crate::matrix::{GroupFragment, MatrixBuilder, MeasurementMatrix};

/// Square grid in three stages. The top row plus the odd columns is a hub
/// for the rest; the top row plus the even columns is a hub for the rest;
/// finally the second row, already recovered, carries the top row's kernel
/// rows without a separate hub measurement.
pub fn grid_matrix(side: usize, k: usize, spec: &CompleteKernelSpec) -> Result<MeasurementMatrix> {
    if side < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid side must be at least 2, got {side}"
        )));
    }
    let g = Graph::grid(side);
    let n = side * side;
    let top: Vec<usize> = (0..side).collect();
    let second: Vec<usize> = (side..2 * side).collect();
    let mut b = MatrixBuilder::new(n);
    for (stage, hub_parity) in [(0u64, 1usize), (1, 0)] {
        let hub: Vec<usize> = (0..n)
            .filter(|&v| v < side || (v % side) % 2 == hub_parity)
            .collect();
        let targets: Vec<usize> = (side..n)
            .filter(|&v| (v % side) % 2 != hub_parity)
            .collect();
        b.push(hub_group(&g, &hub, &targets, k, &spec.for_group(stage))?);
    }
    let kernel = complete_kernel(k, side, &spec.for_group(2))?;
    let rows = (0..kernel.row_count())
        .map(|r| {
            let mut row = second.clone();
            row.extend(kernel.support(r));
            row.sort_unstable();
            (row, second.clone())
        })
        .collect();
    b.push(GroupFragment {
        target: top,
        hub: None,
        rows,
        kernel,
    });
    b.finish()
}
