//! Homogeneous subspaces, degree decomposition and structure constants.

mod basis;
mod structure;

pub use basis::{degree_decompose, homogeneous_basis, Adjustment, BumpPolicy, Decomposition, GradedBasis, Index};
pub(crate) use basis::normalized_family;
pub use structure::{check_fine_structure, fitted_structure_constants, commutator_approximation, structure_constants, StructureConstants};
pub(crate) use structure::idx_json;
