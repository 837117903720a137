//! Lie algebras given by structure constants.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rank_kernel, span_basis, Coeff, Mat, Scalar};

/// Structure constants `c[i][j][k]` with `[e_i, e_j] = Σ_k c[i][j][k] e_k`,
/// stored antisymmetrically.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants<R> {
    dim: usize,
    c: Vec<R>,
}

impl<R: Coeff> StructureConstants<R> {
    pub fn zero(dim: usize) -> Self {
        StructureConstants {
            dim,
            c: vec![R::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &R {
        &self.c[self.idx(i, j, k)]
    }

    /// Sets `[e_i, e_j]_k = v` and `[e_j, e_i]_k = -v`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: R) {
        assert!(i != j || v.is_zero(), "[e_i, e_i] must vanish");
        let mut neg = R::zero();
        neg.add_scaled(&v, &-Scalar::one());
        let a = self.idx(i, j, k);
        let b = self.idx(j, i, k);
        self.c[a] = v;
        self.c[b] = neg;
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket(&self, x: &[R], y: &[R]) -> Vec<R> {
        let n = self.dim;
        let mut out = vec![R::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let xy = {
                    let mut t = R::zero();
                    t.add_product(&x[i], &y[j], &Scalar::one());
                    t
                };
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        o.add_product(&xy, c, &Scalar::one());
                    }
                }
            }
        }
        out
    }

    /// Component `l` of the Jacobiator on basis elements `i, j, k`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<R> {
        let n = self.dim;
        let mut out = vec![R::zero(); n];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for m in 0..n {
                let x = self.get(a, b, m);
                if x.is_zero() {
                    continue;
                }
                for (l, o) in out.iter_mut().enumerate() {
                    let y = self.get(m, c, l);
                    if !y.is_zero() {
                        o.add_product(x, y, &Scalar::one());
                    }
                }
            }
        }
        out
    }

    /// Every triple `i < j < k` with a nonzero Jacobiator.
    pub fn jacobi_residuals(&self) -> Vec<JacobiViolation<R>> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let r = self.jacobiator(i, j, k);
                    if r.iter().any(|x| !x.is_zero()) {
                        out.push(JacobiViolation {
                            triple: (i, j, k),
                            residual: r,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> S) -> StructureConstants<S> {
        StructureConstants {
            dim: self.dim,
            c: self.c.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> &[R] {
        &self.c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiViolation<R> {
    pub triple: (usize, usize, usize),
    pub residual: Vec<R>,
}

/// Outcome of [`check_jacobi`].
#[derive(Debug, Clone, PartialEq)]
pub enum JacobiCheck {
    Ok,
    Violations(Vec<JacobiViolation<Scalar>>),
}

impl JacobiCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, JacobiCheck::Ok)
    }
}

/// A finite-dimensional algebra over the rationals with named basis.
///
/// Built with [`LieAlgebra::new`] the Jacobi identity is verified eagerly;
/// [`LieAlgebra::candidate`] defers that check.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    names: Vec<String>,
    sc: StructureConstants<Scalar>,
}

impl LieAlgebra {
    pub fn new(names: Vec<String>, sc: StructureConstants<Scalar>) -> Result<Self> {
        let alg = Self::candidate(names, sc)?;
        if let JacobiCheck::Violations(v) = check_jacobi(&alg) {
            let (i, j, k) = v[0].triple;
            return Err(Error::JacobiViolation { i, j, k });
        }
        Ok(alg)
    }

    pub fn candidate(names: Vec<String>, sc: StructureConstants<Scalar>) -> Result<Self> {
        if names.len() != sc.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} basis names for a {}-dimensional algebra",
                names.len(),
                sc.dim()
            )));
        }
        Ok(LieAlgebra { names, sc })
    }

    /// Builds from a bracket table `(i, j, [(k, c)])` listing `[e_i, e_j]`.
    pub fn from_brackets(names: &[&str], brackets: &[(usize, usize, &[(usize, i64)])]) -> Result<Self> {
        let n = names.len();
        let mut sc = StructureConstants::zero(n);
        for &(i, j, coeffs) in brackets {
            if i >= n || j >= n || i == j {
                return Err(Error::IndexSet(format!("bad bracket pair ({i}, {j})")));
            }
            for &(k, c) in coeffs {
                sc.set(i, j, k, Scalar::from_int(c));
            }
        }
        LieAlgebra::new(names.iter().map(|s| s.to_string()).collect(), sc)
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(names: &[&str]) -> Self {
        LieAlgebra {
            names: names.iter().map(|s| s.to_string()).collect(),
            sc: StructureConstants::zero(names.len()),
        }
    }

    pub fn dim(&self) -> usize {
        self.sc.dim()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn constants(&self) -> &StructureConstants<Scalar> {
        &self.sc
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.sc.get(i, j, k)
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.sc.bracket(x, y)
    }

    /// `ad(e_i)` with `ad(e_i)[k][j] = c[i][j][k]`.
    pub fn ad(&self, i: usize) -> Mat {
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                m[(k, j)] = self.c(i, j, k).clone();
            }
        }
        m
    }

    /// Restriction to the listed basis elements, which must span a subalgebra.
    pub fn subalgebra(&self, indices: &[usize]) -> Result<LieAlgebra> {
        let pos: std::collections::HashMap<usize, usize> = indices.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut sc = StructureConstants::zero(indices.len());
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().skip(a + 1) {
                for k in 0..self.dim() {
                    let c = self.c(i, j, k);
                    if c.is_zero() {
                        continue;
                    }
                    match pos.get(&k) {
                        Some(&kk) => sc.set(a, b, kk, c.clone()),
                        None => {
                            return Err(Error::NotSubalgebra {
                                i,
                                j,
                                k,
                                coeff: c.clone(),
                            })
                        }
                    }
                }
            }
        }
        let names = indices.iter().map(|&i| self.names[i].clone()).collect();
        Ok(LieAlgebra { names, sc })
    }

    /// Structure constants in the basis given by the columns of `b`.
    pub fn change_basis(&self, b: &Mat, names: Vec<String>) -> Result<LieAlgebra> {
        let n = self.dim();
        let inv = b
            .inverse()
            .ok_or_else(|| Error::DimensionMismatch("change of basis matrix is not invertible".into()))?;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| b.column(j)).collect();
        let mut sc = StructureConstants::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                let c = inv.apply(&self.bracket(&cols[i], &cols[j]));
                for (k, x) in c.into_iter().enumerate() {
                    if !x.is_zero() {
                        sc.set(i, j, k, x);
                    }
                }
            }
        }
        LieAlgebra::candidate(names, sc)
    }

    pub fn is_abelian(&self) -> bool {
        self.sc.entries().iter().all(Scalar::is_zero)
    }
}

/// Verifies the Jacobi identity on all basis triples.
pub fn check_jacobi(l: &LieAlgebra) -> JacobiCheck {
    let v = l.sc.jacobi_residuals();
    if v.is_empty() {
        JacobiCheck::Ok
    } else {
        JacobiCheck::Violations(v)
    }
}

/// Killing form `B(e_i, e_j) = tr(ad e_i ad e_j)`.
pub fn killing_form(l: &LieAlgebra) -> Mat {
    let ads: Vec<Mat> = (0..l.dim()).map(|i| l.ad(i)).collect();
    let n = l.dim();
    let mut b = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let t = ads[i].mul(&ads[j]).trace();
            b[(i, j)] = t.clone();
            b[(j, i)] = t;
        }
    }
    b
}

/// Basis of the largest ideal of `l` contained in the span of the basis
/// elements `s`. Empty when only the zero ideal fits.
pub fn ideals_within(l: &LieAlgebra, s: &[usize]) -> Vec<Vec<Scalar>> {
    let n = l.dim();
    let ads: Vec<Mat> = (0..n).map(|i| l.ad(i)).collect();
    let mut basis: Vec<Vec<Scalar>> = s
        .iter()
        .map(|&i| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v
        })
        .collect();
    basis = span_basis(n, &basis);
    loop {
        if basis.is_empty() {
            return basis;
        }
        // annihilator of the current span
        let (_, ann) = rank_kernel(&Mat::from_rows(basis.clone()).expect("rows"));
        // conditions on coefficients a_r: <w, ad_j Σ a_r v_r> = 0
        let mut rows = Vec::new();
        for ad in &ads {
            let images: Vec<Vec<Scalar>> = basis.iter().map(|v| ad.apply(v)).collect();
            for w in &ann {
                rows.push(
                    images
                        .iter()
                        .map(|img| img.iter().zip(w).map(|(a, b)| a * b).sum())
                        .collect::<Vec<Scalar>>(),
                );
            }
        }
        if rows.is_empty() {
            return basis;
        }
        let (_, coeffs) = rank_kernel(&Mat::from_rows(rows).expect("rows"));
        if coeffs.len() == basis.len() {
            return basis;
        }
        let next: Vec<Vec<Scalar>> = coeffs
            .iter()
            .map(|a| {
                let mut v = vec![Scalar::zero(); n];
                for (c, b) in a.iter().zip(&basis) {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += c * y;
                    }
                }
                v
            })
            .collect();
        basis = span_basis(n, &next);
    }
}

/// Dimensions of the derived series of the subalgebra spanned by `span`,
/// stopping at zero or when the series stabilizes.
pub fn derived_series(l: &LieAlgebra, span: &[Vec<Scalar>]) -> Vec<usize> {
    let n = l.dim();
    let mut cur = span_basis(n, span);
    let mut dims = vec![cur.len()];
    while !cur.is_empty() {
        let mut brackets = Vec::new();
        for (a, x) in cur.iter().enumerate() {
            for y in cur.iter().skip(a + 1) {
                let b = l.bracket(x, y);
                if b.iter().any(|v| !v.is_zero()) {
                    brackets.push(b);
                }
            }
        }
        let next = span_basis(n, &brackets);
        if next.len() == cur.len() {
            break;
        }
        dims.push(next.len());
        cur = next;
    }
    dims
}

/// Unit vectors `e_i` for the listed indices.
pub fn unit_vectors(n: usize, indices: &[usize]) -> Vec<Vec<Scalar>> {
    indices
        .iter()
        .map(|&i| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v
        })
        .collect()
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
    fn sl2_is_lie() {
        assert!(check_jacobi(&sl2()).is_ok());
    }

    #[test]
    fn perturbed_sl2_violates_on_hef() {
        // [e,f] = h + e
        let mut sc = sl2().constants().clone();
        sc.set(1, 2, 1, Scalar::one());
        let l = LieAlgebra::candidate(sl2().names().to_vec(), sc).unwrap();
        let JacobiCheck::Violations(v) = check_jacobi(&l) else {
            panic!("expected violation")
        };
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].triple, (0, 1, 2));
        // [[h,e],f] = 2[e,f] = 2h + 2e; [[e,f],h] = [h+e,h] = -2e; [[f,h],e] = 2[f,e] = -2h - 2e
        assert_eq!(
            v[0].residual,
            vec![Scalar::zero(), Scalar::from_int(-2), Scalar::zero()]
        );
        assert!(LieAlgebra::new(l.names().to_vec(), l.constants().clone()).is_err());
    }

    #[test]
    fn adjoint_is_traceless_for_sl2() {
        let l = sl2();
        for i in 0..3 {
            assert!(l.ad(i).trace().is_zero());
        }
        assert_eq!(killing_form(&l).rank(), 3);
    }

    #[test]
    fn ideal_generated_by_e2() {
        // R ⋉ R^2 with [e1,e2] = e2, [e1,e3] = -e3
        let l = LieAlgebra::from_brackets(&["e1", "e2", "e3"], &[(0, 1, &[(1, 1)]), (0, 2, &[(2, -1)])]).unwrap();
        let ideal = ideals_within(&l, &[0, 1]);
        assert_eq!(ideal, unit_vectors(3, &[1]));
    }

    #[test]
    fn subalgebra_rejects_non_closed_indices() {
        let err = sl2().subalgebra(&[1, 2]).unwrap_err();
        assert!(matches!(err, Error::NotSubalgebra { i: 1, j: 2, k: 0, .. }));
    }

    #[test]
    fn derived_series_of_heisenberg() {
        let heis = LieAlgebra::from_brackets(&["x", "y", "z"], &[(0, 1, &[(2, 1)])]).unwrap();
        assert_eq!(derived_series(&heis, &unit_vectors(3, &[0, 1, 2])), vec![3, 1, 0]);
        assert_eq!(derived_series(&sl2(), &unit_vectors(3, &[0, 1, 2])), vec![3]);
    }
}
