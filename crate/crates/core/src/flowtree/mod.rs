//! Rooted binary trees, the discrete attractor flow, and the limit map
//! grouping perturbed flow trees by their attractor tree.

mod attractor;
mod flow;
mod rng;
mod tree;

pub use attractor::{
    enumerate_attractor_trees, limit_tree, AttractorChild, AttractorGroup, AttractorMap,
    AttractorTree, AttractorVertex, FiberMember, LimitOutcome,
};
pub use flow::{
    default_scale, perturb, run_flow, topology_weight, total_class, validate_inputs, FlowChild,
    FlowEmbedding, FlowMode, FlowOutcome, FlowVertex, GammaConstraint, PerturbationSpec,
    DEFAULT_MAX_RETRIES, DEFAULT_SCALE_LOG2,
};
pub use rng::SplitMix64;
pub use tree::{binary_tree_count, enumerate_binary_trees, LabeledTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("no parts given")]
    NoParts,
    #[error("at least two parts are needed for a flow tree")]
    SingleLeaf,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("part {0} is the zero vector")]
    ZeroPart(usize),
    #[error("stability parameter does not vanish on the total class")]
    ThetaNotOrthogonal,
    #[error("{}", match .0 { Some(i) => format!("contraction of part {} vanishes", i + 1), None => "contraction of the total class vanishes".to_string() })]
    ZeroContraction(Option<usize>),
    #[error("perturbation scale must be positive")]
    NonPositiveScale,
    #[error("stability parameter lies on a wall of the total class")]
    NonGenericTheta,
    #[error("no accepted perturbation after {attempts} attempts")]
    RetriesExhausted { attempts: usize },
}
