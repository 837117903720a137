//! Finite-dimensional h-modules and the constructions used for the cochain
//! coefficients: duals, tensor products and exterior squares.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{rank_kernel, Mat, Scalar};
use crate::lie::algebra::LieAlgebra;
use crate::lie::layout::{pairs, wedge_slot};

/// How a module was built; also the cache key for its cohomology.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// The isotropy module `m`.
    M,
    /// `h` under the adjoint action.
    H,
    /// Trivial module of the given dimension.
    Trivial(usize),
    Dual(Box<Provenance>),
    Tensor(Box<Provenance>, Box<Provenance>),
    Wedge2(Box<Provenance>),
    Named(String),
}

impl Provenance {
    fn is_atomic(&self) -> bool {
        matches!(
            self,
            Provenance::M | Provenance::H | Provenance::Trivial(_) | Provenance::Named(_)
        ) || matches!(self, Provenance::Dual(inner) if inner.is_atomic())
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::M => write!(f, "m"),
            Provenance::H => write!(f, "h"),
            Provenance::Trivial(1) => write!(f, "ℝ"),
            Provenance::Trivial(n) => write!(f, "ℝ^{n}"),
            Provenance::Dual(inner) if inner.is_atomic() => write!(f, "{inner}*"),
            Provenance::Dual(inner) => write!(f, "({inner})*"),
            Provenance::Tensor(a, b) => {
                let wrap = |p: &Provenance| match p {
                    Provenance::Tensor(..) | Provenance::Wedge2(_) => p.to_string(),
                    _ if p.is_atomic() => p.to_string(),
                    _ => format!("({p})"),
                };
                write!(f, "{}⊗{}", wrap(a), wrap(b))
            }
            Provenance::Wedge2(inner) => write!(f, "Λ²({inner})"),
            Provenance::Named(s) => write!(f, "{s}"),
        }
    }
}

/// A module over a fixed Lie algebra `h`: one action matrix per basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct HModule {
    dim: usize,
    action: Vec<Mat>,
    provenance: Provenance,
}

impl HModule {
    /// Validates bracket compatibility `A([h_i, h_j]) = [A(h_i), A(h_j)]`.
    pub fn new(h: &LieAlgebra, dim: usize, action: Vec<Mat>, provenance: Provenance) -> Result<Self> {
        let module = HModule {
            dim,
            action,
            provenance,
        };
        module.check_shape(h)?;
        module.check_compatibility(h)?;
        Ok(module)
    }

    fn check_shape(&self, h: &LieAlgebra) -> Result<()> {
        if self.action.len() != h.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for a {}-dimensional algebra",
                self.action.len(),
                h.dim()
            )));
        }
        if let Some(m) = self
            .action
            .iter()
            .find(|m| m.rows() != self.dim || m.cols() != self.dim)
        {
            return Err(Error::DimensionMismatch(format!(
                "action matrix is {}x{}, module has dimension {}",
                m.rows(),
                m.cols(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Errors with the first basis pair where the action fails to be a homomorphism.
    pub fn check_compatibility(&self, h: &LieAlgebra) -> Result<()> {
        for i in 0..h.dim() {
            for j in i + 1..h.dim() {
                let lhs = self.action_of(&bracket_coords(h, i, j));
                let rhs = self.action[i].commutator(&self.action[j]);
                if lhs != rhs {
                    return Err(Error::NotRepresentation { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Mat] {
        &self.action
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Action of an arbitrary element `Σ x_i h_i`.
    pub fn action_of(&self, x: &[Scalar]) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (c, a) in x.iter().zip(&self.action) {
            if !c.is_zero() {
                m = m.add(&a.scale(c));
            }
        }
        m
    }

    /// The adjoint module of `h`.
    pub fn adjoint(h: &LieAlgebra) -> HModule {
        HModule {
            dim: h.dim(),
            action: (0..h.dim()).map(|i| h.ad(i)).collect(),
            provenance: Provenance::H,
        }
    }

    pub fn trivial(h: &LieAlgebra, dim: usize) -> HModule {
        HModule {
            dim,
            action: vec![Mat::zeros(dim, dim); h.dim()],
            provenance: Provenance::Trivial(dim),
        }
    }

    /// Dual module, action `-Aᵀ`.
    pub fn dual(&self) -> HModule {
        let provenance = match &self.provenance {
            Provenance::Dual(inner) => (**inner).clone(),
            p => Provenance::Dual(Box::new(p.clone())),
        };
        HModule {
            dim: self.dim,
            action: self
                .action
                .iter()
                .map(|a| a.transpose().scale(&-Scalar::one()))
                .collect(),
            provenance,
        }
    }

    /// `V ⊗ W` with action `A ⊗ I + I ⊗ B`, index `v * dim W + w`.
    pub fn tensor(&self, other: &HModule) -> HModule {
        let iv = Mat::identity(self.dim);
        let iw = Mat::identity(other.dim);
        HModule {
            dim: self.dim * other.dim,
            action: self
                .action
                .iter()
                .zip(&other.action)
                .map(|(a, b)| a.kron(&iw).add(&iv.kron(b)))
                .collect(),
            provenance: Provenance::Tensor(Box::new(self.provenance.clone()), Box::new(other.provenance.clone())),
        }
    }

    /// `Λ²V` on the pair basis `e_i ∧ e_j`, `i < j`.
    pub fn exterior_square(&self) -> HModule {
        let n = self.dim;
        let ps = pairs(n);
        let action = self
            .action
            .iter()
            .map(|a| {
                let mut m = Mat::zeros(ps.len(), ps.len());
                for (col, &(i, j)) in ps.iter().enumerate() {
                    // A(e_i ∧ e_j) = A e_i ∧ e_j + e_i ∧ A e_j
                    for k in 0..n {
                        let aki = &a[(k, i)];
                        if !aki.is_zero() {
                            if let Some((row, s)) = wedge_slot(k, j, n) {
                                m[(row, col)] += aki * &Scalar::from_int(s);
                            }
                        }
                        let akj = &a[(k, j)];
                        if !akj.is_zero() {
                            if let Some((row, s)) = wedge_slot(i, k, n) {
                                m[(row, col)] += akj * &Scalar::from_int(s);
                            }
                        }
                    }
                }
                m
            })
            .collect();
        HModule {
            dim: ps.len(),
            action,
            provenance: Provenance::Wedge2(Box::new(self.provenance.clone())),
        }
    }

    /// Renames the provenance (used for ad-hoc fixtures).
    pub fn with_provenance(mut self, provenance: Provenance) -> HModule {
        self.provenance = provenance;
        self
    }
}

fn bracket_coords(h: &LieAlgebra, i: usize, j: usize) -> Vec<Scalar> {
    (0..h.dim()).map(|k| h.c(i, j, k).clone()).collect()
}

/// Basis of `V^h`, the joint kernel of all action matrices.
pub fn invariants_subspace(v: &HModule) -> Vec<Vec<Scalar>> {
    if v.action.is_empty() {
        return rank_kernel(&Mat::zeros(0, v.dim)).1;
    }
    let mut stacked = v.action[0].clone();
    for a in &v.action[1..] {
        stacked = stacked.vstack(a);
    }
    rank_kernel(&stacked).1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> LieAlgebra {
        LieAlgebra::from_brackets(
            &["H", "E", "F"],
            &[(0, 1, &[(1, 2)]), (0, 2, &[(2, -2)]), (1, 2, &[(0, 1)])],
        )
        .unwrap()
    }

    fn standard_rep(h: &LieAlgebra) -> HModule {
        HModule::new(
            h,
            2,
            vec![
                Mat::from_i64(&[&[1, 0], &[0, -1]]),
                Mat::from_i64(&[&[0, 1], &[0, 0]]),
                Mat::from_i64(&[&[0, 0], &[1, 0]]),
            ],
            Provenance::M,
        )
        .unwrap()
    }

    #[test]
    fn constructions_stay_compatible() {
        let h = sl2();
        let m = standard_rep(&h);
        let ad = HModule::adjoint(&h);
        for v in [
            m.dual(),
            m.tensor(&ad),
            m.dual().exterior_square(),
            m.dual().exterior_square().tensor(&m),
            ad.exterior_square().tensor(&m.dual()),
        ] {
            v.check_compatibility(&h).unwrap();
        }
    }

    #[test]
    fn dimensions() {
        let h = LieAlgebra::abelian(&["a", "b"]);
        let m = HModule::trivial(&h, 4);
        assert_eq!(m.exterior_square().dim(), 6);
        assert_eq!(m.tensor(&HModule::adjoint(&h)).dim(), 8);
        // sol2-sized: Λ²(m*) ⊗ h with dim m = 4, dim h = 2
        assert_eq!(m.dual().exterior_square().tensor(&HModule::adjoint(&h)).dim(), 12);
    }

    #[test]
    fn dual_of_weight() {
        let h = LieAlgebra::abelian(&["a"]);
        let v = HModule::new(&h, 1, vec![Mat::from_i64(&[&[3]])], Provenance::M).unwrap();
        assert_eq!(v.dual().action()[0], Mat::from_i64(&[&[-3]]));
        assert_eq!(v.dual().dual(), v);
    }

    #[test]
    fn invariants_of_trivial_and_standard() {
        let h = sl2();
        assert_eq!(invariants_subspace(&HModule::trivial(&h, 3)).len(), 3);
        assert!(invariants_subspace(&standard_rep(&h)).is_empty());
    }

    #[test]
    fn rejects_non_representation() {
        let h = sl2();
        let bad = HModule::new(
            &h,
            2,
            vec![
                Mat::from_i64(&[&[1, 0], &[0, -1]]),
                Mat::from_i64(&[&[0, 1], &[0, 0]]),
                Mat::from_i64(&[&[0, 0], &[2, 0]]),
            ],
            Provenance::M,
        );
        assert!(matches!(bad, Err(Error::NotRepresentation { .. })));
    }

    #[test]
    fn provenance_display() {
        let h = sl2();
        let m = standard_rep(&h);
        let ad = HModule::adjoint(&h);
        assert_eq!(m.dual().tensor(&ad).provenance().to_string(), "m*⊗h");
        assert_eq!(
            m.dual().exterior_square().tensor(&m).provenance().to_string(),
            "Λ²(m*)⊗m"
        );
    }
}
