//! Compressed sensing of sparse vectors whose measurements must follow the
//! connectivity of a graph.
//!
//! A measurement is a set of nodes that induces a connected subgraph; the
//! observation is the sum of the node values. This crate builds measurement
//! matrices with few rows for common topologies and for arbitrary connected
//! graphs, recovers sparse vectors from the observations, and verifies
//! recovery guarantees on small instances.

pub mod construct;
pub mod error;
pub mod general;
pub mod graph;
pub mod kernel;
pub mod lab;
pub mod linalg;
pub mod lp;
pub mod matrix;
pub mod oracle;
pub mod recovery;
pub mod reduce;
pub mod textio;
pub mod traverse;

pub use construct::{
    g4_bounded_length_matrix, g4_matrix, g4h_matrix, grid_matrix, line_matrix,
    line_min_measurements, markov_rows, ring_matrix, ring_network_line_graph_matrix, short_blocks,
    short_matrix, tree_matrix, ShortFamily, ShortSpec,
};
pub use error::{Error, Result};
pub use general::{
    agents_bound, algorithm1, algorithm1_bound, algorithm1_plan, algorithm1_with_agents,
    algorithm1_with_agents_plan, design_with, GeneralIteration, GeneralPlan, GroupKernel,
};
pub use graph::{
    components, is_connected, is_connected_induced, is_hub, line_graph, validate_partition, Graph,
    HubCertificate, Partition, PartitionViolation,
};
pub use kernel::{
    complete_kernel, hub_compose, kernel_rows, mix_seed, CompleteKernelSpec, KernelKind,
};
pub use lp::{LinearProgram, LpSolution};
pub use matrix::{
    check_feasibility, whole_vector_plan, BinaryBlock, DecodeGroup, DecodePlan, Feasibility,
    GroupFragment, MatrixBuilder, MeasurementMatrix,
};
pub use oracle::{
    columns_2k_independent, exhaustive_identifiability, nsp_verify, IndependenceVerdict, NspVerdict,
};
pub use recovery::{
    augmented_l1_recover, hub_error_matrix, hub_error_recover, l0_oracle, l1_minimize,
    relative_error, sequential_decode, HubErrorRecovery, L0Solutions, RecoveryResult,
    RecoveryStatus, SparseVector,
};
pub use reduce::{EdgeAnnotations, ReducedGraph};
pub use textio::{nodes_from_text, nodes_to_text, vector_from_text, vector_to_text};
pub use traverse::{bfs_tree, radius_and_center, shortest_path, SpanningTree, Topology};
