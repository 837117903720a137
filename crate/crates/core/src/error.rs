use thiserror::Error;

use crate::exact::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("linear system is inconsistent (left-kernel witness {witness:?})")]
    Inconsistent { witness: Vec<Scalar> },

    #[error("cochain is not closed (d c = {witness:?})")]
    NotClosed { witness: Vec<Scalar> },

    #[error("cochain has no preimage under d (class coordinates {class:?})")]
    NoPreimage { class: Vec<Scalar> },

    #[error("vector {index} of the subspace basis is not contained in the ambient span")]
    NotSubspace { index: usize },

    #[error("polynomial degree {degree} exceeds the cap of 2 (term {term})")]
    DegreeExceeded { term: String, degree: usize },

    #[error("structure constants are not antisymmetric at ({i}, {j}, {k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },

    #[error("Jacobi identity fails on triple ({i}, {j}, {k})")]
    JacobiViolation { i: usize, j: usize, k: usize },

    #[error("action is not a representation: rho([h{i}, h{j}]) != [rho(h{i}), rho(h{j})]")]
    NotRepresentation { i: usize, j: usize },

    #[error("indices do not span a subalgebra: [e{i}, e{j}] has component {coeff} along e{k}")]
    NotSubalgebra {
        i: usize,
        j: usize,
        k: usize,
        coeff: Scalar,
    },

    #[error("cochain degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("element is not h-invariant (basis element h{index} acts nontrivially)")]
    NotInvariant { index: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown catalog entry {name:?}; available: {}", available.join(", "))]
    UnknownCatalogEntry { name: String, available: Vec<String> },

    #[error("invalid module expression at position {position}: {message} (grammar: V ::= m | m* | h | h* | 1 | V⊗V | Λ²V | (V))")]
    ModuleExpr { message: String, position: usize },

    #[error("invalid index set: {0}")]
    IndexSet(String),
}

pub type Result<T> = std::result::Result<T, Error>;
