//! The cohomological constraints on `(φ, θ_m, θ_h)` and the residual `Jac_m` system.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{solve_affine, span_basis, AffineSolutionSet, Coeff, Mat, Poly, Scalar};

use super::candidate::BracketCandidate;
use super::ops::{contract, delta_op, jac_m, q_op, q_raw};
use super::Context;

/// Origin of an equation in a [`ConstraintSystem`](super::ConstraintSystem).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Tag {
    #[serde(rename = "constraint-1")]
    Constraint1,
    #[serde(rename = "constraint-2")]
    Constraint2,
    #[serde(rename = "jac-m-h-part")]
    JacMH,
    #[serde(rename = "jac-m-m-part")]
    JacMM,
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tag::Constraint1 => "constraint-1",
            Tag::Constraint2 => "constraint-2",
            Tag::JacMH => "jac-m-h-part",
            Tag::JacMM => "jac-m-m-part",
        })
    }
}

/// `[δφ] = 0` over a family `φ = Σ tᵢ Rᵢ` of cocycles.
#[derive(Debug, Clone)]
pub struct Constraint1 {
    /// Column `i` is the class of `δRᵢ` in `H¹(h, Λ²m*⊗m)`; the equations are `C t = 0`.
    pub class_matrix: Mat,
    /// Basis of the admissible `t`.
    pub kernel: Vec<Vec<Scalar>>,
    /// `Σ tᵢ Rᵢ` for each kernel vector.
    pub phi_basis: Vec<Vec<Scalar>>,
    /// A primitive `θ_m` of `δφ` for each element of `phi_basis`.
    pub theta_m_particular: Vec<Vec<Scalar>>,
    /// Basis of `(Λ²m*⊗m)^h`, the ambiguity of `θ_m`.
    pub theta_m_invariants: Vec<Vec<Scalar>>,
}

impl Constraint1 {
    pub fn equations(&self) -> usize {
        self.class_matrix.rows()
    }
}

fn combine(coeffs: &[Scalar], vectors: &[Vec<Scalar>], len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// Applies constraint 1 to `φ = Σ tᵢ reps[i]` (each a cocycle in `h*⊗m*⊗h`).
pub fn constraint1_theta_m(ctx: &Context, reps: &[Vec<Scalar>]) -> Result<Constraint1> {
    let s = ctx.shape();
    let space = ctx.theta_m_space()?;
    let mut cols = Vec::with_capacity(reps.len());
    for r in reps {
        cols.push(space.class_of(&delta_op(ctx.data(), r)?)?);
    }
    let class_matrix = Mat::from_columns(space.dim, &cols);
    let (_, kernel) = crate::exact::rank_kernel(&class_matrix);
    let phi_basis: Vec<Vec<Scalar>> = kernel.iter().map(|k| combine(k, reps, s.phi_len())).collect();
    let mut theta_m_particular = Vec::with_capacity(phi_basis.len());
    for phi in &phi_basis {
        theta_m_particular.push(space.exact_preimage(&delta_op(ctx.data(), phi)?)?.particular);
    }
    Ok(Constraint1 {
        class_matrix,
        kernel,
        phi_basis,
        theta_m_particular,
        theta_m_invariants: space.preimage_kernel().to_vec(),
    })
}

/// All `θ_m` with `dθ_m = δφ` for a concrete cocycle `φ`.
pub fn theta_m_family(ctx: &Context, phi: &[Scalar]) -> Result<AffineSolutionSet> {
    ctx.theta_m_space()?.exact_preimage(&delta_op(ctx.data(), phi)?)
}

/// `[Qφ] ≡ 0 mod Π_φ` for a concrete `φ` and `θ_m = θ₀ + Σ νₗ nₗ`.
#[derive(Debug, Clone)]
pub struct Constraint2 {
    /// Column `l` is the class of `p_{nₗ}` in `H¹(h, Λ²m*⊗h)`.
    pub class_matrix: Mat,
    /// Class of `Q(φ, θ₀)`; the equations are `class_matrix · ν = rhs`.
    pub rhs: Vec<Scalar>,
    /// Basis of `Π_φ` in class coordinates.
    pub pi_phi: Vec<Vec<Scalar>>,
    /// Admissible `ν`, or the obstructing class.
    pub nu: std::result::Result<AffineSolutionSet, Vec<Scalar>>,
    /// `θ_m` at the particular `ν`.
    pub theta_m: Option<Vec<Scalar>>,
    /// All `θ_h` with `dθ_h = Qφ` at the particular `ν`.
    pub theta_h_family: Option<AffineSolutionSet>,
}

impl Constraint2 {
    pub fn feasible(&self) -> bool {
        self.nu.is_ok()
    }
}

/// Applies constraint 2. Changing `θ_m` by an invariant `ν` changes `Qφ` by
/// `−p_ν`, so the condition is linear in `ν`.
pub fn constraint2_theta_h(
    ctx: &Context,
    phi: &[Scalar],
    theta_m0: &[Scalar],
    invariants: &[Vec<Scalar>],
) -> Result<Constraint2> {
    let s = ctx.shape();
    let space = ctx.theta_h_space()?;
    let q0 = q_op(ctx, phi, theta_m0)?;
    let rhs = space.class_of(&q0)?;
    let mut cols = Vec::with_capacity(invariants.len());
    for n in invariants {
        cols.push(space.class_of(&contract(ctx.data(), phi, n))?);
    }
    let class_matrix = Mat::from_columns(space.dim, &cols);
    let pi_phi = span_basis(space.dim, &cols);
    let nu = match solve_affine(&class_matrix, &rhs) {
        Ok(set) => Ok(set),
        Err(Error::Inconsistent { .. }) => Err(rhs.clone()),
        Err(e) => return Err(e),
    };
    let (theta_m, theta_h_family) = match &nu {
        Ok(set) => {
            let mut tm = theta_m0.to_vec();
            for (c, n) in set.particular.iter().zip(invariants) {
                for (o, x) in tm.iter_mut().zip(n) {
                    *o += c * x;
                }
            }
            debug_assert_eq!(tm.len(), s.theta_m_len());
            let q = q_op(ctx, phi, &tm)?;
            (Some(tm), Some(space.exact_preimage(&q)?))
        }
        Err(_) => (None, None),
    };
    Ok(Constraint2 {
        class_matrix,
        rhs,
        pi_phi,
        nu,
        theta_m,
        theta_h_family,
    })
}

/// `Jac_m` of a candidate: for each triple `p < q < r` of `m`, the `h`-part
/// then the `m`-part of the cyclic sum.
pub fn jac_m_constraints<R: Coeff>(c: &BracketCandidate<R>) -> Vec<R> {
    jac_m(&c.data, &c.phi, &c.theta_h, &c.theta_m)
}

/// `Jac_m` with the tag of each equation.
pub fn jac_m_tagged(c: &BracketCandidate<Poly>) -> Vec<(Tag, Poly)> {
    let s = c.shape();
    let per_triple = s.a + s.b;
    jac_m_constraints(c)
        .into_iter()
        .enumerate()
        .map(|(i, p)| (if i % per_triple < s.a { Tag::JacMH } else { Tag::JacMM }, p))
        .collect()
}

/// What remains of each group of mixed Jacobi identities at a concrete candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintResiduals {
    /// `dφ`; its vanishing is the part with two arguments in `h`.
    pub cocycle: Vec<Scalar>,
    /// `δφ − dθ_m`.
    pub constraint1: Vec<Scalar>,
    /// `Qφ − dθ_h`.
    pub constraint2: Vec<Scalar>,
    pub jac_m: Vec<Scalar>,
}

impl ConstraintResiduals {
    pub fn all_zero(&self) -> bool {
        [&self.cocycle, &self.constraint1, &self.constraint2, &self.jac_m]
            .iter()
            .all(|v| v.iter().all(Scalar::is_zero))
    }
}

pub fn constraint_residuals(ctx: &Context, c: &BracketCandidate<Scalar>) -> Result<ConstraintResiduals> {
    let d = ctx.data();
    let cocycle = ctx.phi_space()?.d_out().apply(&c.phi);
    let mut constraint1 = delta_op(d, &c.phi)?;
    let dtm = ctx.theta_m_space()?.d_in().apply(&c.theta_m);
    for (x, y) in constraint1.iter_mut().zip(&dtm) {
        *x -= y;
    }
    let mut constraint2 = q_raw(d, &c.phi, &c.theta_m);
    let dth = ctx.theta_h_space()?.d_in().apply(&c.theta_h);
    for (x, y) in constraint2.iter_mut().zip(&dth) {
        *x -= y;
    }
    Ok(ConstraintResiduals {
        cocycle,
        constraint1,
        constraint2,
        jac_m: jac_m_constraints(c),
    })
}
