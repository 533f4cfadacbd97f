//! Exact computation of quiver Donaldson–Thomas invariants from attractor
//! invariants, through discrete attractor flow trees and the lattice indices
//! of tropical curve counting.
//!
//! Everything is exact: integers are arbitrary precision and positions in
//! `M_Q` are reduced rationals.

pub mod exactlin;
pub mod json;
pub mod quiver;
pub mod flowtree;
pub mod tropical;
pub mod dt;
pub mod oracle;
