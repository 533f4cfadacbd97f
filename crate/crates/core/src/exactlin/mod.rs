//! Exact integer linear algebra: Smith and Hermite normal forms, integer
//! kernels, saturations and lattice indices.

mod hnf;
pub(crate) mod matrix;
mod lattice;
mod snf;

pub use hnf::hermite_basis;
pub use lattice::{
    cokernel_order, divisibility, divisibility_i64, index_in_saturation, kernel_basis,
    lattice_sum_index, quotient_cokernel_order, relative_index, saturate, Order, Sublattice,
};
pub use matrix::IntMatrix;
pub use snf::{invariant_factors, rank, smith_normal_form, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactLinError {
    #[error("the lattice is zero")]
    ZeroLattice,
    #[error("the vector is zero")]
    ZeroVector,
    #[error("lattice is not contained in the reference lattice")]
    NotContained,
}
