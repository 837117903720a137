//! The Chevalley–Eilenberg complex `Λᵏh* ⊗ V` and its cohomology.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{image_basis, quotient_representatives, rank_kernel, AffineSolutionSet, Coeff, Mat, Scalar};
use crate::lie::layout::CochainLayout;
use crate::lie::{HModule, LieAlgebra, Provenance};

/// A cochain in `Λᵏh* ⊗ V`, coordinates in [`CochainLayout`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain<R = Scalar> {
    pub degree: usize,
    pub module: Provenance,
    pub coords: Vec<R>,
}

impl<R: Coeff> Cochain<R> {
    pub fn new(degree: usize, module: &HModule, h_dim: usize, coords: Vec<R>) -> Result<Self> {
        let expected = CochainLayout::new(h_dim, degree, module.dim()).len();
        if coords.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "cochain of degree {degree} in {} needs {expected} coordinates, got {}",
                module.provenance(),
                coords.len()
            )));
        }
        Ok(Cochain {
            degree,
            module: module.provenance().clone(),
            coords,
        })
    }
}

fn check_degree(h: &LieAlgebra, k: usize) -> Result<()> {
    if k > h.dim() {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            max: h.dim(),
        });
    }
    Ok(())
}

/// Matrix of `d: Λᵏh*⊗V → Λᵏ⁺¹h*⊗V`,
/// `dφ(x₀..x_k) = Σ(−1)ⁱ xᵢ·φ(..x̂ᵢ..) + Σ_{i<j}(−1)^{i+j} φ([xᵢ,xⱼ], ..x̂ᵢ..x̂ⱼ..)`.
pub fn ce_differential(h: &LieAlgebra, v: &HModule, k: usize) -> Result<Mat> {
    check_degree(h, k)?;
    let n = h.dim();
    let dv = v.dim();
    let src = CochainLayout::new(n, k, dv);
    let dst = CochainLayout::new(n, k + 1, dv);
    let mut d = Mat::zeros(dst.len(), src.len());
    for (si, s) in dst.subsets().iter().enumerate() {
        let row0 = si * dv;
        for i in 0..s.len() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let rest: Vec<usize> = s.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &x)| x).collect();
            let col0 = src.subset_index(&rest).expect("subset of size k") * dv;
            let a = &v.action()[s[i]];
            for r in 0..dv {
                for c in 0..dv {
                    let x = &a[(r, c)];
                    if !x.is_zero() {
                        d[(row0 + r, col0 + c)] += &(x * &Scalar::from_int(sign));
                    }
                }
            }
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != i && t != j)
                    .map(|(_, &x)| x)
                    .collect();
                for l in 0..n {
                    let c = h.c(s[i], s[j], l);
                    if c.is_zero() {
                        continue;
                    }
                    let mut args = vec![l];
                    args.extend(&rest);
                    let Some((col0, perm)) = src.block(&args) else {
                        continue;
                    };
                    let f = c * &Scalar::from_int(sign * perm);
                    for r in 0..dv {
                        d[(row0 + r, col0 + r)] += &f;
                    }
                }
            }
        }
    }
    Ok(d)
}

/// Matrix of the action of `h_x` on `Λᵏh*⊗V`:
/// `(x·φ)(y₁..y_k) = x·φ(y₁..y_k) − Σ φ(..[x,yᵢ]..)`.
pub fn cochain_action(h: &LieAlgebra, v: &HModule, k: usize, x: usize) -> Result<Mat> {
    check_degree(h, k)?;
    let n = h.dim();
    let dv = v.dim();
    let lay = CochainLayout::new(n, k, dv);
    let mut m = Mat::zeros(lay.len(), lay.len());
    let a = &v.action()[x];
    for (si, s) in lay.subsets().iter().enumerate() {
        let row0 = si * dv;
        for r in 0..dv {
            for c in 0..dv {
                if !a[(r, c)].is_zero() {
                    m[(row0 + r, row0 + c)] += &a[(r, c)];
                }
            }
        }
        for i in 0..s.len() {
            for l in 0..n {
                let c = h.c(x, s[i], l);
                if c.is_zero() {
                    continue;
                }
                let mut args = s.clone();
                args[i] = l;
                let Some((col0, perm)) = lay.block(&args) else {
                    continue;
                };
                let f = -(c * &Scalar::from_int(perm));
                for r in 0..dv {
                    m[(row0 + r, col0 + r)] += &f;
                }
            }
        }
    }
    Ok(m)
}

/// Matrix of the interior product `i_x: Λᵏh*⊗V → Λᵏ⁻¹h*⊗V`, `(i_x φ)(y..) = φ(x, y..)`.
pub fn interior(h: &LieAlgebra, v: &HModule, k: usize, x: usize) -> Result<Mat> {
    check_degree(h, k)?;
    if k == 0 {
        return Err(Error::DegreeOutOfRange {
            degree: 0,
            max: h.dim(),
        });
    }
    let dv = v.dim();
    let src = CochainLayout::new(h.dim(), k, dv);
    let dst = CochainLayout::new(h.dim(), k - 1, dv);
    let mut m = Mat::zeros(dst.len(), src.len());
    for (ti, t) in dst.subsets().iter().enumerate() {
        let mut args = vec![x];
        args.extend(t);
        if let Some((col0, perm)) = src.block(&args) {
            for r in 0..dv {
                m[(ti * dv + r, col0 + r)] = Scalar::from_int(perm);
            }
        }
    }
    Ok(m)
}

/// `H^k(h, V)` with deterministic representatives and coordinate maps.
#[derive(Debug, Clone)]
pub struct CohomologySpace {
    pub module: Provenance,
    pub degree: usize,
    /// Dimensions of `C^{k−1}`, `C^k`, `C^{k+1}`.
    pub cochain_dims: [usize; 3],
    /// Ranks of `d_{k−1}` and `d_k`.
    pub ranks: [usize; 2],
    pub dim: usize,
    pub cocycle_basis: Vec<Vec<Scalar>>,
    pub coboundary_basis: Vec<Vec<Scalar>>,
    pub reps: Vec<Vec<Scalar>>,
    /// `dim × |C^k|`; sends a cocycle to its class coordinates in `reps`.
    pub class_coords: Mat,
    d_in: Mat,
    d_out: Mat,
    /// `|C^{k−1}| × |C^k|`; `d_in · preimage · c = c` for every coboundary `c`.
    preimage: Mat,
    /// Kernel of `d_in`, the ambiguity of a preimage.
    preimage_kernel: Vec<Vec<Scalar>>,
}

impl CohomologySpace {
    pub fn d_in(&self) -> &Mat {
        &self.d_in
    }

    pub fn d_out(&self) -> &Mat {
        &self.d_out
    }

    pub fn preimage_operator(&self) -> &Mat {
        &self.preimage
    }

    pub fn preimage_kernel(&self) -> &[Vec<Scalar>] {
        &self.preimage_kernel
    }

    fn check_len(&self, c: &[Scalar]) -> Result<()> {
        if c.len() != self.cochain_dims[1] {
            return Err(Error::DimensionMismatch(format!(
                "cochain has {} coordinates, expected {}",
                c.len(),
                self.cochain_dims[1]
            )));
        }
        Ok(())
    }

    pub fn is_cocycle(&self, c: &[Scalar]) -> bool {
        self.d_out.apply(c).iter().all(Scalar::is_zero)
    }

    /// Class coordinates of a cocycle, or `NotClosed` carrying `dc`.
    pub fn class_of(&self, c: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_len(c)?;
        let dc = self.d_out.apply(c);
        if dc.iter().any(|x| !x.is_zero()) {
            return Err(Error::NotClosed { witness: dc });
        }
        Ok(self.class_coords.apply(c))
    }

    /// Class coordinates without the closedness check, over any coefficients.
    pub fn class_coords_of<R: Coeff>(&self, c: &[R]) -> Vec<R> {
        self.class_coords.apply(c)
    }

    /// All `x` with `dx = c`, or `NoPreimage` with the nonzero class.
    pub fn exact_preimage(&self, c: &[Scalar]) -> Result<AffineSolutionSet> {
        let class = self.class_of(c)?;
        if class.iter().any(|x| !x.is_zero()) {
            return Err(Error::NoPreimage { class });
        }
        let particular = self.preimage.apply(c);
        let free_params = (0..self.preimage_kernel.len()).map(|i| format!("c{i}")).collect();
        Ok(AffineSolutionSet {
            particular,
            basis: self.preimage_kernel.clone(),
            free_params,
        })
    }

    /// Particular preimage of a coboundary over any coefficients.
    pub fn preimage_of<R: Coeff>(&self, c: &[R]) -> Vec<R> {
        self.preimage.apply(c)
    }

    /// Serializable summary in the report layout.
    pub fn summary(&self) -> CohomologySummary {
        CohomologySummary {
            module: self.module.to_string(),
            degree: self.degree,
            cochain_dims: self.cochain_dims,
            ranks: self.ranks,
            dim: self.dim,
            representatives: self
                .reps
                .iter()
                .map(|r| r.iter().map(Scalar::to_string).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologySummary {
    pub module: String,
    pub degree: usize,
    pub cochain_dims: [usize; 3],
    pub ranks: [usize; 2],
    pub dim: usize,
    pub representatives: Vec<Vec<String>>,
}

fn preimage_operator(d_in: &Mat) -> Mat {
    let (_, pivots, t) = d_in.rref_with_transform();
    let mut g = Mat::zeros(d_in.cols(), d_in.rows());
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..d_in.rows() {
            g[(p, j)] = t[(row, j)].clone();
        }
    }
    g
}

/// `H^k(h, V) = ker d_k / im d_{k−1}`.
pub fn cohomology(h: &LieAlgebra, v: &HModule, k: usize) -> Result<CohomologySpace> {
    check_degree(h, k)?;
    let n = h.dim();
    let len = |deg: usize| CochainLayout::new(n, deg, v.dim()).len();
    let d_out = ce_differential(h, v, k)?;
    let d_in = if k == 0 {
        Mat::zeros(len(0), 0)
    } else {
        ce_differential(h, v, k - 1)?
    };
    let (rank_out, cocycles) = rank_kernel(&d_out);
    let coboundaries = image_basis(&d_in);
    let (reps, class_coords) = quotient_representatives(len(k), &cocycles, &coboundaries)?;
    let preimage_kernel = rank_kernel(&d_in).1;
    Ok(CohomologySpace {
        module: v.provenance().clone(),
        degree: k,
        cochain_dims: [d_in.cols(), len(k), d_out.rows()],
        ranks: [coboundaries.len(), rank_out],
        dim: reps.len(),
        cocycle_basis: cocycles,
        coboundary_basis: coboundaries,
        reps,
        class_coords,
        preimage: preimage_operator(&d_in),
        d_in,
        d_out,
        preimage_kernel,
    })
}

/// Cohomology spaces for one algebra `h`, keyed by module provenance and degree.
#[derive(Debug, Default)]
pub struct CohomologyCache {
    spaces: RwLock<HashMap<(Provenance, usize), Arc<CohomologySpace>>>,
}

impl CohomologyCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, h: &LieAlgebra, v: &HModule, k: usize) -> Result<Arc<CohomologySpace>> {
        let key = (v.provenance().clone(), k);
        if let Some(s) = self.spaces.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(s));
        }
        let space = Arc::new(cohomology(h, v, k)?);
        let mut w = self.spaces.write().expect("cache lock");
        Ok(Arc::clone(w.entry(key).or_insert(space)))
    }

    pub fn len(&self) -> usize {
        self.spaces.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
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

    fn weight(lambda: i64) -> (LieAlgebra, HModule) {
        let h = LieAlgebra::abelian(&["x"]);
        let v = HModule::new(&h, 1, vec![Mat::from_i64(&[&[lambda]])], Provenance::M).unwrap();
        (h, v)
    }

    #[test]
    fn one_dimensional_trivial() {
        let (h, v) = weight(0);
        assert!(ce_differential(&h, &v, 0).unwrap().is_zero());
        assert_eq!(cohomology(&h, &v, 1).unwrap().dim, 1);
    }

    #[test]
    fn one_dimensional_weight() {
        let (h, v) = weight(3);
        assert_eq!(ce_differential(&h, &v, 0).unwrap(), Mat::from_i64(&[&[3]]));
        assert_eq!(cohomology(&h, &v, 1).unwrap().dim, 0);
        assert_eq!(cohomology(&h, &v, 0).unwrap().dim, 0);
    }

    #[test]
    fn degree_out_of_range() {
        let (h, v) = weight(1);
        assert!(matches!(
            ce_differential(&h, &v, 2),
            Err(Error::DegreeOutOfRange { degree: 2, max: 1 })
        ));
    }

    #[test]
    fn adjoint_complex_of_sl2() {
        let h = sl2();
        let ad = HModule::adjoint(&h);
        for k in 0..3 {
            let d0 = ce_differential(&h, &ad, k).unwrap();
            let d1 = ce_differential(&h, &ad, k + 1).unwrap();
            assert!(d1.mul(&d0).is_zero());
        }
        for k in 0..4 {
            assert_eq!(cohomology(&h, &ad, k).unwrap().dim, 0, "H^{k}(sl2, sl2)");
        }
        let triv = HModule::trivial(&h, 1);
        let dims: Vec<usize> = (0..4).map(|k| cohomology(&h, &triv, k).unwrap().dim).collect();
        assert_eq!(dims, vec![1, 0, 0, 1]);
    }

    #[test]
    fn class_and_preimage() {
        let h = sl2();
        let ad = HModule::adjoint(&h);
        let space = cohomology(&h, &ad, 1).unwrap();
        // d of the 0-cochain E is a coboundary
        let de = space.d_in().apply(&[Scalar::zero(), Scalar::one(), Scalar::zero()]);
        assert!(space.class_of(&de).unwrap().is_empty());
        let pre = space.exact_preimage(&de).unwrap();
        assert_eq!(space.d_in().apply(&pre.particular), de);
        let mut bad = vec![Scalar::zero(); 9];
        bad[0] = Scalar::one();
        assert!(matches!(space.class_of(&bad), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn no_preimage_for_nonzero_class() {
        let (h, v) = weight(0);
        let space = cohomology(&h, &v, 1).unwrap();
        assert!(matches!(
            space.exact_preimage(&[Scalar::one()]),
            Err(Error::NoPreimage { .. })
        ));
    }

    #[test]
    fn cache_reuses_spaces() {
        let h = sl2();
        let ad = HModule::adjoint(&h);
        let cache = CohomologyCache::new();
        let a = cache.get(&h, &ad, 1).unwrap();
        let b = cache.get(&h, &ad, 1).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn cartan_formula_on_closed_cochains() {
        let h = sl2();
        let ad = HModule::adjoint(&h);
        let space = cohomology(&h, &ad, 1).unwrap();
        for z in &space.cocycle_basis {
            for x in 0..3 {
                let lhs = cochain_action(&h, &ad, 1, x).unwrap().apply(z);
                let iz = interior(&h, &ad, 1, x).unwrap().apply(z);
                assert_eq!(lhs, space.d_in().apply(&iz));
            }
        }
    }
}
