//! Dense exact matrices and the echelon-form routines built on them.
//!
//! Pivoting is deterministic: scan columns left to right and take the first row
//! (at or below the current one) with a nonzero entry. Kernel vectors are the
//! standard free-variable basis of the reduced echelon form.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::poly::Coeff;
use crate::exact::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience for fixtures: integer rows.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        Mat::from_rows(rows).expect("rectangular fixture")
    }

    /// Matrix whose columns are the given vectors (all of length `n`).
    pub fn from_columns(n: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Mat::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n, "column length");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let mut m = Mat::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * other.rows + k, j * other.cols + l)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product over any coefficient ring.
    pub fn apply<R: Coeff>(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = R::zero();
                for (j, x) in v.iter().enumerate() {
                    acc.add_scaled(x, &self[(i, j)]);
                }
                acc
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let (r, pivots, _) = self.rref_impl(false);
        (r, pivots)
    }

    /// Reduced row echelon form `R = T * self` together with the transform `T`.
    pub fn rref_with_transform(&self) -> (Mat, Vec<usize>, Mat) {
        let (r, p, t) = self.rref_impl(true);
        (r, p, t.expect("transform requested"))
    }

    fn rref_impl(&self, track: bool) -> (Mat, Vec<usize>, Option<Mat>) {
        let mut m = self.clone();
        let mut t = track.then(|| Mat::identity(self.rows));
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            if let Some(t) = t.as_mut() {
                t.swap_rows(row, p);
            }
            let inv = m[(row, col)].recip().expect("nonzero pivot");
            m.scale_row(row, &inv);
            if let Some(t) = t.as_mut() {
                t.scale_row(row, &inv);
            }
            for i in 0..m.rows {
                if i == row || m[(i, col)].is_zero() {
                    continue;
                }
                let f = -m[(i, col)].clone();
                m.add_row_multiple(i, row, &f);
                if let Some(t) = t.as_mut() {
                    t.add_row_multiple(i, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots, t)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &Scalar) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            if !self.data[idx].is_zero() {
                self.data[idx] *= c;
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, f: &Scalar) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let v = s * f;
            self.data[dst * self.cols + j] += v;
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let (r, pivots, t) = self.rref_with_transform();
        (pivots.len() == self.rows && r == Mat::identity(self.rows)).then_some(t)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Rank and reduced-echelon kernel basis.
pub fn rank_kernel(a: &Mat) -> (usize, Vec<Vec<Scalar>>) {
    let (r, pivots) = a.rref();
    (pivots.len(), kernel_from_rref(&r, &pivots))
}

fn kernel_from_rref(r: &Mat, pivots: &[usize]) -> Vec<Vec<Scalar>> {
    let n = r.cols();
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Scalar::zero(); n];
            v[f] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Reduced row basis of the span of the given vectors (all of length `n`).
pub fn span_basis(n: usize, vectors: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Mat::from_rows(vectors.to_vec()).expect("equal lengths");
    debug_assert_eq!(m.cols(), n);
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Basis of the column space of `a`, in reduced form.
pub fn image_basis(a: &Mat) -> Vec<Vec<Scalar>> {
    let t = a.transpose();
    let (r, pivots) = t.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// General solution `particular + span(basis)` of a consistent linear system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineSolutionSet {
    pub particular: Vec<Scalar>,
    pub basis: Vec<Vec<Scalar>>,
    pub free_params: Vec<String>,
}

impl AffineSolutionSet {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `particular + sum coeffs[i] * basis[i]`.
    pub fn point(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coeffs.len(), self.basis.len());
        let mut v = self.particular.clone();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        v
    }
}

/// Solves `A x = b` exactly; on inconsistency returns a left-kernel witness
/// `y` with `y A = 0` and `y b != 0`.
pub fn solve_affine(a: &Mat, b: &[Scalar]) -> Result<AffineSolutionSet> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "system has {} rows but right-hand side has length {}",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let mut aug = Mat::zeros(a.rows(), n + 1);
    for i in 0..a.rows() {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let (r, pivots, t) = aug.rref_with_transform();
    if let Some(row) = pivots.iter().position(|&p| p == n) {
        return Err(Error::Inconsistent {
            witness: t.row(row).to_vec(),
        });
    }
    let mut particular = vec![Scalar::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        particular[p] = r[(row, n)].clone();
    }
    // Kernel of A is read off the same echelon form with the last column dropped.
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let basis: Vec<Vec<Scalar>> = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Scalar::zero(); n];
            v[f] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            v
        })
        .collect();
    let free_params = (0..basis.len()).map(|i| format!("c{i}")).collect();
    Ok(AffineSolutionSet {
        particular,
        basis,
        free_params,
    })
}

/// Indices `j` such that the unit vectors `e_j` complete the independent
/// `vectors` to a basis: the non-pivot columns of their echelon form.
pub fn unit_completion(n: usize, vectors: &[Vec<Scalar>]) -> Vec<usize> {
    let mut is_pivot = vec![false; n];
    if !vectors.is_empty() {
        let (_, pivots) = Mat::from_rows(vectors.to_vec()).expect("equal lengths").rref();
        for p in pivots {
            is_pivot[p] = true;
        }
    }
    (0..n).filter(|&j| !is_pivot[j]).collect()
}

/// Representatives of `span(z) / span(b)` and the matrix sending elements of
/// `span(z)` to their quotient coordinates.
///
/// Representatives are the `z` vectors reduced modulo the echelon basis of
/// `span(b)`, keeping those independent of the ones already chosen.
pub fn quotient_representatives(n: usize, z: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Result<(Vec<Vec<Scalar>>, Mat)> {
    let zbasis = span_basis(n, z);
    let zmat = Mat::from_columns(n, &zbasis);
    for (idx, v) in b.iter().enumerate() {
        if solve_affine(&zmat, v).is_err() {
            return Err(Error::NotSubspace { index: idx });
        }
    }
    let bred = span_basis(n, b);
    let bpivots: Vec<usize> = bred
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();

    let mut reps: Vec<Vec<Scalar>> = Vec::new();
    // Echelon rows of the chosen representatives, for the independence test.
    let mut chosen: Vec<(usize, Vec<Scalar>)> = Vec::new();
    for v in z {
        let mut w = v.clone();
        for (row, &p) in bred.iter().zip(&bpivots) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        let mut e = w.clone();
        for (p, row) in &chosen {
            if !e[*p].is_zero() {
                let f = e[*p].clone();
                for (x, y) in e.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = e.iter().position(|x| !x.is_zero()) {
            let inv = e[p].recip().expect("nonzero");
            let e: Vec<Scalar> = e.iter().map(|x| x * &inv).collect();
            // keep the chosen rows fully reduced against the new pivot
            for (_, row) in chosen.iter_mut() {
                if !row[p].is_zero() {
                    let f = row[p].clone();
                    for (x, y) in row.iter_mut().zip(&e) {
                        *x -= &f * y;
                    }
                }
            }
            chosen.push((p, e));
            reps.push(w);
        }
    }

    // Basis [b..., reps...] of span(z), completed with unit vectors to a basis of
    // the whole space; the rep rows of its inverse are the coordinate map.
    let mut cols: Vec<Vec<Scalar>> = bred.clone();
    cols.extend(reps.iter().cloned());
    let mut full = cols.clone();
    full.extend(unit_completion(n, &cols).into_iter().map(|j| {
        let mut e = vec![Scalar::zero(); n];
        e[j] = Scalar::one();
        e
    }));
    let inv = Mat::from_columns(n, &full)
        .inverse()
        .expect("completed basis is invertible");
    let mut coord = Mat::zeros(reps.len(), n);
    for (r, src) in (bred.len()..bred.len() + reps.len()).enumerate() {
        for j in 0..n {
            coord[(r, j)] = inv[(src, j)].clone();
        }
    }
    Ok((reps, coord))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_kernel_proportional_rows() {
        let a = Mat::from_i64(&[&[1, 2], &[2, 4]]);
        let (rank, ker) = rank_kernel(&a);
        assert_eq!(rank, 1);
        assert_eq!(ker, vec![vec![s(-2), s(1)]]);
    }

    #[test]
    fn rank_kernel_identity() {
        let (rank, ker) = rank_kernel(&Mat::identity(3));
        assert_eq!(rank, 3);
        assert!(ker.is_empty());
    }

    #[test]
    fn rank_kernel_empty_matrix() {
        let (rank, ker) = rank_kernel(&Mat::zeros(0, 2));
        assert_eq!(rank, 0);
        assert_eq!(ker, vec![vec![s(1), s(0)], vec![s(0), s(1)]]);
    }

    #[test]
    fn solve_underdetermined() {
        let a = Mat::from_i64(&[&[1, 0]]);
        let sol = solve_affine(&a, &[s(5)]).unwrap();
        assert_eq!(sol.particular, vec![s(5), s(0)]);
        assert_eq!(sol.basis, vec![vec![s(0), s(1)]]);
    }

    #[test]
    fn solve_inconsistent_witness() {
        let a = Mat::from_i64(&[&[1], &[1]]);
        let err = solve_affine(&a, &[s(0), s(1)]).unwrap_err();
        let Error::Inconsistent { witness } = err else {
            panic!("expected inconsistency")
        };
        // y A = 0 and y b != 0; normalized to (1, -1) up to scale
        assert_eq!(&witness[0] + &witness[1], s(0));
        assert!(!witness[1].is_zero());
        let ratio = &witness[0] / &witness[1];
        assert_eq!(ratio, s(-1));
    }

    #[test]
    fn quotient_examples() {
        let e1 = vec![s(1), s(0)];
        let e2 = vec![s(0), s(1)];
        let (reps, coord) = quotient_representatives(2, &[e1.clone(), e2.clone()], std::slice::from_ref(&e1)).unwrap();
        assert_eq!(reps, vec![e2.clone()]);
        assert_eq!(coord.apply(&e2), vec![s(1)]);
        assert_eq!(coord.apply(&e1), vec![s(0)]);

        let (reps, coord) = quotient_representatives(2, std::slice::from_ref(&e1), std::slice::from_ref(&e1)).unwrap();
        assert!(reps.is_empty());
        assert_eq!(coord.rows(), 0);

        let err = quotient_representatives(2, std::slice::from_ref(&e1), &[e2]).unwrap_err();
        assert_eq!(err, Error::NotSubspace { index: 0 });
    }

    #[test]
    fn inverse_round_trip() {
        let a = Mat::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
