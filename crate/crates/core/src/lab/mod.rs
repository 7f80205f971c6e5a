//! Random graph models, the Erdős–Rényi design pipeline and the experiment
//! drivers.

pub mod experiments;
pub mod random;
pub mod regimes;

pub use experiments::{
    er_partition_experiment, er_pipeline_experiment, experiment1, experiment2, experiment2_matrix,
    gaussian_sparse, pipeline_record, ErParams, Exp1Params, Exp1Row, Exp2Params, Exp2Row,
    ExperimentRecord, SplitRow,
};
pub use random::{
    add_random_edges, gen_ba, gen_er, random_recursive_tree, random_tree, BarabasiAlbertSpec,
    ErdosRenyiSpec, TreeModel,
};
pub use regimes::{
    er_partition_split, er_pipeline, giant_fraction, partition_groups, PipelineOutput,
    PipelineSpec, PipelineStats, Regime, SplitOutcome,
};
