//! Exact rational scalars, polynomials and linear algebra.

pub mod mat;
pub mod poly;
pub mod scalar;

pub use mat::{
    image_basis, quotient_representatives, rank_kernel, solve_affine, span_basis, unit_completion, AffineSolutionSet,
    Mat,
};
pub use poly::{poly_split, Coeff, LinearSystem, Monomial, Poly, DEGREE_CAP};
pub use scalar::Scalar;
