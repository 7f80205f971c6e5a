use super::hub_group;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kernel::CompleteKernelSpec;
use crate::matrix::{MatrixBuilder, MeasurementMatrix};

/// Link monitoring on a ring network of degree-4 routers. Even ids serve as
/// the hub for odd ids; then ids `4j+1` serve as the hub for even ids.
pub fn ring_network_line_graph_matrix(
    n: usize,
    k: usize,
    spec: &CompleteKernelSpec,
) -> Result<MeasurementMatrix> {
    if !n.is_multiple_of(4) {
        return Err(Error::InvalidParameter(format!(
            "ring-network construction needs a multiple of 4 links, got {n}"
        )));
    }
    let g = Graph::ring_network_line_graph(n)?;
    let evens: Vec<usize> = (0..n).step_by(2).collect();
    let odds: Vec<usize> = (1..n).step_by(2).collect();
    let sparse: Vec<usize> = (1..n).step_by(4).collect();
    let mut b = MatrixBuilder::new(n);
    b.push(hub_group(&g, &evens, &odds, k, &spec.for_group(0))?);
    b.push(hub_group(&g, &sparse, &evens, k, &spec.for_group(1))?);
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_hub;
    use crate::matrix::check_feasibility;

    #[test]
    fn twelve_links() {
        let spec = CompleteKernelSpec::binary();
        let a = ring_network_line_graph_matrix(12, 1, &spec).unwrap();
        let g = Graph::ring_network_line_graph(12).unwrap();
        let plan = a.plan().unwrap();
        assert_eq!(a.row(plan.groups[1].hub_row.unwrap()), &[1, 5, 9]);
        assert!(is_hub(&g, &[1, 5, 9], &[0, 2, 4, 6, 8, 10]).unwrap());
        assert!(is_hub(&g, &[0, 2, 4, 6, 8, 10], &[1, 3, 5, 7, 9, 11]).unwrap());
        assert_eq!(a.m(), 2 * 3 + 2);
        assert!(check_feasibility(&g, &a).unwrap().feasible);
        assert!(ring_network_line_graph_matrix(10, 1, &spec).is_err());
        assert!(ring_network_line_graph_matrix(4, 1, &spec).is_err());
    }
}
