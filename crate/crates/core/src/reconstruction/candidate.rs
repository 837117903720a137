//! Candidate brackets on `h ⊕ m` and their assembly into structure constants.

use crate::error::{Error, Result};
use crate::exact::{Coeff, Poly, Scalar};
use crate::lie::layout::pairs;
use crate::lie::{extract_isotropy, Extraction, IsotropyData, LieAlgebra, StructureConstants};

use super::ops::{d_sigma, delta_op, potential_sum, Shape};

/// `[h, u] = φ(h, u) + h·u` and `[u₁, u₂] = θ_h(u₁, u₂) + θ_m(u₁, u₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketCandidate<R = Scalar> {
    pub data: IsotropyData,
    pub phi: Vec<R>,
    pub theta_h: Vec<R>,
    pub theta_m: Vec<R>,
}

impl<R: Coeff> BracketCandidate<R> {
    pub fn new(data: IsotropyData, phi: Vec<R>, theta_h: Vec<R>, theta_m: Vec<R>) -> Result<Self> {
        let s = Shape::of(&data);
        for (what, len, want) in [
            ("φ", phi.len(), s.phi_len()),
            ("θ_h", theta_h.len(), s.theta_h_len()),
            ("θ_m", theta_m.len(), s.theta_m_len()),
        ] {
            if len != want {
                return Err(Error::DimensionMismatch(format!(
                    "{what} has {len} coordinates, expected {want}"
                )));
            }
        }
        Ok(BracketCandidate {
            data,
            phi,
            theta_h,
            theta_m,
        })
    }

    /// The flat candidate `φ = θ_h = θ_m = 0`.
    pub fn flat(data: IsotropyData) -> Self {
        let s = Shape::of(&data);
        BracketCandidate {
            data,
            phi: vec![R::zero(); s.phi_len()],
            theta_h: vec![R::zero(); s.theta_h_len()],
            theta_m: vec![R::zero(); s.theta_m_len()],
        }
    }

    pub fn shape(&self) -> Shape {
        Shape::of(&self.data)
    }

    pub fn is_flat(&self) -> bool {
        self.phi
            .iter()
            .chain(&self.theta_h)
            .chain(&self.theta_m)
            .all(Coeff::is_zero)
    }

    /// Structure constants on the basis `h` then `m`.
    pub fn structure_constants(&self) -> StructureConstants<R> {
        let s = self.shape();
        let (a, b) = (s.a, s.b);
        let mut sc = StructureConstants::zero(a + b);
        let h = self.data.h();
        for i in 0..a {
            for j in i + 1..a {
                for k in 0..a {
                    let c = h.c(i, j, k);
                    if !c.is_zero() {
                        sc.set(i, j, k, R::from_scalar(c));
                    }
                }
            }
            for p in 0..b {
                for k in 0..a {
                    let v = &self.phi[s.phi(i, p, k)];
                    if !v.is_zero() {
                        sc.set(i, a + p, k, v.clone());
                    }
                }
                for r in 0..b {
                    let c = &self.data.rho()[i][(r, p)];
                    if !c.is_zero() {
                        sc.set(i, a + p, a + r, R::from_scalar(c));
                    }
                }
            }
        }
        for (idx, (p, q)) in pairs(b).into_iter().enumerate() {
            for k in 0..a {
                let v = &self.theta_h[idx * a + k];
                if !v.is_zero() {
                    sc.set(a + p, a + q, k, v.clone());
                }
            }
            for r in 0..b {
                let v = &self.theta_m[idx * b + r];
                if !v.is_zero() {
                    sc.set(a + p, a + q, a + r, v.clone());
                }
            }
        }
        sc
    }

    /// Every bracket coefficient that may vary, with its weight under the
    /// diagonal scalings `u_p ↦ λ_p u_p` of `m`. The representation `ρ` is
    /// listed too so its off-diagonal entries restrict the admissible scalings.
    pub fn weighted_entries(&self) -> Vec<(Vec<i64>, R)> {
        let s = self.shape();
        let (a, b) = (s.a, s.b);
        let unit = |p: usize| {
            let mut w = vec![0i64; b];
            w[p] += 1;
            w
        };
        let mut out = Vec::new();
        for i in 0..a {
            for r in 0..b {
                for p in 0..b {
                    let c = &self.data.rho()[i][(r, p)];
                    if r != p && !c.is_zero() {
                        let mut w = unit(p);
                        w[r] -= 1;
                        out.push((w, R::from_scalar(c)));
                    }
                }
            }
            for p in 0..b {
                for k in 0..a {
                    out.push((unit(p), self.phi[s.phi(i, p, k)].clone()));
                }
            }
        }
        for (idx, (p, q)) in pairs(b).into_iter().enumerate() {
            let mut w = unit(p);
            w[q] += 1;
            for k in 0..a {
                out.push((w.clone(), self.theta_h[idx * a + k].clone()));
            }
            for r in 0..b {
                let mut wr = w.clone();
                wr[r] -= 1;
                out.push((wr, self.theta_m[idx * b + r].clone()));
            }
        }
        out
    }
}

impl BracketCandidate<Scalar> {
    /// Reads the candidate off an algebra split along basis indices.
    pub fn from_extraction(ex: Extraction) -> Self {
        BracketCandidate {
            data: ex.data,
            phi: ex.phi,
            theta_h: ex.theta_h,
            theta_m: ex.theta_m,
        }
    }

    /// The candidate of `g` relative to the basis subalgebra `h_indices`.
    pub fn from_algebra(g: &LieAlgebra, h_indices: &[usize]) -> Result<Self> {
        Ok(Self::from_extraction(extract_isotropy(g, h_indices, None)?))
    }

    pub fn names(&self) -> Vec<String> {
        let mut names = self.data.h().names().to_vec();
        names.extend(self.data.m_names().iter().cloned());
        names
    }

    /// The algebra on `h ⊕ m`; the Jacobi identity is not checked.
    pub fn assemble(&self) -> LieAlgebra {
        LieAlgebra::candidate(self.names(), self.structure_constants()).expect("names match dimension")
    }

    pub fn evaluate(p: &BracketCandidate<Poly>, values: &[Scalar]) -> Self {
        let ev = |v: &[Poly]| v.iter().map(|x| x.eval(values)).collect();
        BracketCandidate {
            data: p.data.clone(),
            phi: ev(&p.phi),
            theta_h: ev(&p.theta_h),
            theta_m: ev(&p.theta_m),
        }
    }
}

/// The same algebra written on the complement `graph(σ) = {u + σ(u)}`:
/// `φ + dσ`, `θ_m + δσ`, `θ_h + φ₁ + φ₂ − φ₃ − φ₄`.
pub fn gauge_shift(c: &BracketCandidate<Scalar>, sigma: &[Scalar]) -> Result<BracketCandidate<Scalar>> {
    let d = &c.data;
    let ds = d_sigma(d, sigma)?;
    let dl = delta_op(d, sigma)?;
    let pot = potential_sum(d, sigma, &c.phi, &c.theta_m)?;
    let add = |x: &[Scalar], y: &[Scalar]| x.iter().zip(y).map(|(a, b)| a + b).collect();
    Ok(BracketCandidate {
        data: d.clone(),
        phi: add(&c.phi, &ds),
        theta_h: add(&c.theta_h, &pot),
        theta_m: add(&c.theta_m, &dl),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{sl2, sl3};
    use crate::exact::Mat;
    use crate::lie::check_jacobi;

    #[test]
    fn extraction_round_trip() {
        let g = sl3();
        let c = BracketCandidate::from_algebra(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(c.assemble().constants(), g.constants());
    }

    #[test]
    fn gauge_shift_is_a_change_of_complement() {
        let g = sl2();
        let c = BracketCandidate::from_algebra(&g, &[0]).unwrap();
        // σ(E) = 2H, σ(F) = -1/3 H
        let sigma = vec![Scalar::from_int(2), Scalar::new(-1, 3)];
        let shifted = gauge_shift(&c, &sigma).unwrap();
        let mut b = Mat::identity(3);
        b[(0, 1)] = sigma[0].clone();
        b[(0, 2)] = sigma[1].clone();
        let expected = c.assemble().change_basis(&b, c.names()).unwrap();
        assert_eq!(shifted.assemble().constants(), expected.constants());
        assert!(check_jacobi(&shifted.assemble()).is_ok());
    }
}
