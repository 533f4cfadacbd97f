//! Combinatorial types of tropical faces and their lattice invariants:
//! tropical multiplicities, tropical coefficients, the map `Ψ_σ`, and the
//! log Gromov–Witten counts obtained through the correspondence.

mod face;
mod gluing;
mod random;

pub use face::{FaceChild, FaceFile, FaceType, FaceVertex};
pub use gluing::{
    child_lattices, divisibility_ratio, gluing_cokernel, gluing_matrix, k_coefficient,
    k_contracted, k_from_children, log_gw, n_trop_from_children, product_formula, psi_cokernel,
    psi_rhs, tangent_lattice, tropical_multiplicity, vertex_tangents, GluingCokernel, TropMult,
};
pub use random::{random_binary_tree, random_flow_instance, random_skew_form, random_valid_face};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TropicalError {
    #[error("the lattice N must have rank at least 2")]
    DimensionTooSmall,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("leaf labels must be 1..r matching the parts")]
    LeafLabels,
    #[error("the tree has no internal vertex")]
    NoVertex,
    #[error("class of leg {} is zero", .0 + 1)]
    ZeroClass(usize),
    #[error("leg {} has zero direction", .0 + 1)]
    ZeroDirection(usize),
    #[error("the total class is zero")]
    ZeroTotal,
    #[error("the face is not trivalent")]
    NotTrivalent,
    #[error("gluing cokernel is infinite: the face is not of dimension d-2")]
    InfiniteCokernel,
    #[error("lattice rank condition violated")]
    RankViolation,
    #[error("invalid face JSON: {0}")]
    Json(String),
}
