//! Isotropy data `(h, m, ρ)` and its extraction from a pair `h ⊂ g`.

use crate::error::{Error, Result};
use crate::exact::{Mat, Scalar};
use crate::lie::algebra::LieAlgebra;
use crate::lie::layout::pairs;
use crate::lie::module::{HModule, Provenance};

/// A representation `ρ: h → End(m)`, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    h: LieAlgebra,
    m_dim: usize,
    rho: Vec<Mat>,
    m_module: HModule,
    m_names: Vec<String>,
}

/// The reconstruction input: the triple `(h, m, ρ)`.
pub type IsotropyData = Representation;

impl Representation {
    pub fn new(h: LieAlgebra, m_dim: usize, rho: Vec<Mat>) -> Result<Self> {
        let m_module = HModule::new(&h, m_dim, rho.clone(), Provenance::M)?;
        Ok(Representation {
            h,
            m_dim,
            rho,
            m_module,
            m_names: (1..=m_dim).map(|p| format!("u{p}")).collect(),
        })
    }

    /// Renames the basis of `m`.
    pub fn with_m_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.m_dim {
            return Err(Error::DimensionMismatch(format!(
                "{} names for m of dimension {}",
                names.len(),
                self.m_dim
            )));
        }
        self.m_names = names;
        Ok(self)
    }

    pub fn m_names(&self) -> &[String] {
        &self.m_names
    }

    pub fn h(&self) -> &LieAlgebra {
        &self.h
    }

    pub fn h_dim(&self) -> usize {
        self.h.dim()
    }

    pub fn m_dim(&self) -> usize {
        self.m_dim
    }

    pub fn rho(&self) -> &[Mat] {
        &self.rho
    }

    pub fn m_module(&self) -> &HModule {
        &self.m_module
    }

    pub fn h_module(&self) -> HModule {
        HModule::adjoint(&self.h)
    }

    /// `m* ⊗ h`, home of `φ(h, ·)` and of the gauge parameter `σ`.
    pub fn hom_m_h(&self) -> HModule {
        self.m_module.dual().tensor(&self.h_module())
    }

    /// `Λ²(m*) ⊗ m`, home of `θ_m`.
    pub fn wedge_m_to_m(&self) -> HModule {
        self.m_module.dual().exterior_square().tensor(&self.m_module)
    }

    /// `Λ²(m*) ⊗ h`, home of `θ_h`.
    pub fn wedge_m_to_h(&self) -> HModule {
        self.m_module.dual().exterior_square().tensor(&self.h_module())
    }
}

/// Result of reading `(h, m, ρ)` and the bracket components off an algebra.
///
/// Coordinates follow the crate layout: `phi[(i * m + p) * h + k]` is the
/// `h_k`-component of `φ(h_i, u_p)`; `theta_h[pair * h + k]` and
/// `theta_m[pair * m + r]` are components of `[u_p, u_q]`, `p < q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub data: IsotropyData,
    pub phi: Vec<Scalar>,
    pub theta_h: Vec<Scalar>,
    pub theta_m: Vec<Scalar>,
    /// Basis of `g` in the new order: `h_indices` then the complement.
    pub basis_order: Vec<usize>,
}

/// Splits `g = h ⊕ m` along basis indices. The complement need not be
/// h-invariant; it defaults to the remaining basis elements in order.
pub fn extract_isotropy(g: &LieAlgebra, h_indices: &[usize], complement: Option<&[usize]>) -> Result<Extraction> {
    let n = g.dim();
    let comp: Vec<usize> = match complement {
        Some(c) => c.to_vec(),
        None => (0..n).filter(|i| !h_indices.contains(i)).collect(),
    };
    let mut seen = vec![false; n];
    for &i in h_indices.iter().chain(&comp) {
        if i >= n {
            return Err(Error::IndexSet(format!("index {i} out of range for dimension {n}")));
        }
        if seen[i] {
            return Err(Error::IndexSet(format!("index {i} listed twice")));
        }
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::IndexSet(
            "subalgebra and complement indices must partition the basis".into(),
        ));
    }
    let h = g.subalgebra(h_indices)?;
    let (a, b) = (h_indices.len(), comp.len());

    let mut rho = vec![Mat::zeros(b, b); a];
    let mut phi = vec![Scalar::zero(); a * b * a];
    for (i, &hi) in h_indices.iter().enumerate() {
        for (p, &up) in comp.iter().enumerate() {
            for (r, &ur) in comp.iter().enumerate() {
                rho[i][(r, p)] = g.c(hi, up, ur).clone();
            }
            for (k, &hk) in h_indices.iter().enumerate() {
                phi[(i * b + p) * a + k] = g.c(hi, up, hk).clone();
            }
        }
    }
    let ps = pairs(b);
    let mut theta_h = vec![Scalar::zero(); ps.len() * a];
    let mut theta_m = vec![Scalar::zero(); ps.len() * b];
    for (idx, &(p, q)) in ps.iter().enumerate() {
        for (k, &hk) in h_indices.iter().enumerate() {
            theta_h[idx * a + k] = g.c(comp[p], comp[q], hk).clone();
        }
        for (r, &ur) in comp.iter().enumerate() {
            theta_m[idx * b + r] = g.c(comp[p], comp[q], ur).clone();
        }
    }
    let data = Representation::new(h, b, rho)?.with_m_names(comp.iter().map(|&i| g.names()[i].clone()).collect())?;
    let mut basis_order = h_indices.to_vec();
    basis_order.extend(&comp);
    Ok(Extraction {
        data,
        phi,
        theta_h,
        theta_m,
        basis_order,
    })
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

    #[test]
    fn sl2_cartan() {
        let ex = extract_isotropy(&sl2(), &[0], None).unwrap();
        assert_eq!(ex.data.rho()[0], Mat::from_i64(&[&[2, 0], &[0, -2]]));
        assert!(ex.phi.iter().all(Scalar::is_zero));
        assert_eq!(ex.theta_h, vec![Scalar::one()]);
        assert!(ex.theta_m.iter().all(Scalar::is_zero));
    }

    #[test]
    fn non_subalgebra_is_rejected() {
        let err = extract_isotropy(&sl2(), &[1, 2], None).unwrap_err();
        assert!(matches!(err, Error::NotSubalgebra { i: 1, j: 2, k: 0, .. }));
    }

    #[test]
    fn bad_partition_is_rejected() {
        assert!(extract_isotropy(&sl2(), &[0], Some(&[1])).is_err());
        assert!(extract_isotropy(&sl2(), &[0], Some(&[0, 1, 2])).is_err());
    }
}
