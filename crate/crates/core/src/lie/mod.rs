//! Lie algebras, their modules, and isotropy data.

pub mod algebra;
pub mod isotropy;
pub mod layout;
pub mod module;

pub use algebra::{
    check_jacobi, derived_series, ideals_within, killing_form, unit_vectors, JacobiCheck, JacobiViolation, LieAlgebra,
    StructureConstants,
};
pub use isotropy::{extract_isotropy, Extraction, IsotropyData, Representation};
pub use module::{invariants_subspace, HModule, Provenance};
