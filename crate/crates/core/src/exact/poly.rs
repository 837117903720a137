//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are plain indices into a caller-owned name list. A monomial is the
//! sorted multiset of its variable indices, so `x0*x0*x3` is `[0, 0, 3]` and its
//! total degree is the length of that list.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::Scalar;

/// Sorted multiset of variable indices.
pub type Monomial = Vec<u32>;

/// Hard cap on the degree of polynomials entering the constraint systems.
pub const DEGREE_CAP: usize = 2;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(index: u32) -> Self {
        let mut p = Poly::zero();
        p.add_term(vec![index], Scalar::one());
        p
    }

    /// `c * x_index`.
    pub fn linear(index: u32, c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(vec![index], c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Poly::zero();
        for (mut m, c) in terms {
            m.sort_unstable();
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m` where `m` is already sorted.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// The constant term (zero when absent).
    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The value when the polynomial has no variables at all.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Coefficient of the linear monomial `x_index`.
    pub fn linear_coeff(&self, index: u32) -> Scalar {
        self.terms.get(&vec![index]).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|m| m.iter().copied()).collect()
    }

    pub fn contains_var(&self, index: u32) -> bool {
        self.terms.keys().any(|m| m.contains(&index))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Scalar::one())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(merge_monomials(ma, mb), ca * cb);
            }
        }
        out
    }

    /// Product that refuses to exceed [`DEGREE_CAP`].
    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        let p = self.mul(other);
        p.check_degree()?;
        Ok(p)
    }

    /// Errors with the offending term when the total degree exceeds the cap.
    pub fn check_degree(&self) -> Result<()> {
        if let Some((m, c)) = self.terms.iter().find(|(m, _)| m.len() > DEGREE_CAP) {
            return Err(Error::DegreeExceeded {
                term: format_term(c, m, &default_name),
                degree: m.len(),
            });
        }
        Ok(())
    }

    /// Substitutes `values[i]` for every variable `i` that has `Some` value.
    pub fn substitute(&self, values: &[Option<Poly>]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut rest: Monomial = Vec::new();
            for &v in m {
                match values.get(v as usize).and_then(Option::as_ref) {
                    Some(p) => acc = acc.mul(p),
                    None => rest.push(v),
                }
            }
            if rest.is_empty() {
                out.add_assign(&acc);
            } else {
                let mono = Poly::from_terms([(rest, Scalar::one())]);
                out.add_assign(&acc.mul(&mono));
            }
        }
        out
    }

    /// Substitutes a single variable.
    pub fn substitute_one(&self, index: u32, value: &Poly) -> Poly {
        if !self.contains_var(index) {
            return self.clone();
        }
        let mut values = vec![None; index as usize + 1];
        values[index as usize] = Some(value.clone());
        self.substitute(&values)
    }

    /// Evaluates at a full assignment.
    pub fn eval(&self, values: &[Scalar]) -> Scalar {
        self.terms
            .iter()
            .map(|(m, c)| m.iter().fold(c.clone(), |acc, &v| acc * &values[v as usize]))
            .sum()
    }

    /// Number of terms mentioning `index`.
    pub fn occurrences(&self, index: u32) -> usize {
        self.terms.keys().filter(|m| m.contains(&index)).count()
    }

    /// Divides by the leading coefficient so equal-up-to-scale equations coincide.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip().expect("nonzero leading coefficient")),
            None => Poly::zero(),
        }
    }

    /// Leading term in graded-lexicographic order (highest degree first).
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.canonical_terms().into_iter().next()
    }

    /// Terms in canonical order: descending degree, then ascending variable indices.
    pub fn canonical_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        v
    }

    /// Renders with the given variable names.
    pub fn display_with<F: Fn(u32) -> String>(&self, name: F) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.canonical_terms().into_iter().enumerate() {
            let term = format_term(c, m, &name);
            if idx == 0 {
                out.push_str(&term);
            } else if let Some(stripped) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        out
    }
}

fn default_name(i: u32) -> String {
    format!("x{i}")
}

fn format_term<F: Fn(u32) -> String>(c: &Scalar, m: &Monomial, name: &F) -> String {
    if m.is_empty() {
        return c.to_string();
    }
    let vars: Vec<String> = m.iter().map(|&v| name(v)).collect();
    let body = vars.join("*");
    if c.is_one() {
        body
    } else if *c == -1 {
        format!("-{body}")
    } else {
        format!("{c}*{body}")
    }
}

fn merge_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(default_name))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Coefficient ring used by the tensor operators, so the same code evaluates
/// concrete brackets and parametrized candidates.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn from_scalar(s: &Scalar) -> Self;
    /// `self += c * x`
    fn add_scaled(&mut self, x: &Self, c: &Scalar);
    /// `self += c * x * y`
    fn add_product(&mut self, x: &Self, y: &Self, c: &Scalar);
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn add_scaled(&mut self, x: &Self, c: &Scalar) {
        if !c.is_zero() && !x.is_zero() {
            *self += x * c;
        }
    }
    fn add_product(&mut self, x: &Self, y: &Self, c: &Scalar) {
        if !c.is_zero() && !x.is_zero() && !y.is_zero() {
            *self += &(x * y) * c;
        }
    }
}

impl Coeff for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn from_scalar(s: &Scalar) -> Self {
        Poly::constant(s.clone())
    }
    fn add_scaled(&mut self, x: &Self, c: &Scalar) {
        Poly::add_scaled(self, x, c)
    }
    fn add_product(&mut self, x: &Self, y: &Self, c: &Scalar) {
        if c.is_zero() || x.is_zero() || y.is_zero() {
            return;
        }
        let p = x.mul(y);
        Poly::add_scaled(self, &p, c)
    }
}

/// Linear part of a list of degree <= 1 polynomials as `A x = b` over the
/// listed variables.
pub struct LinearSystem {
    pub vars: Vec<u32>,
    pub a: crate::exact::Mat,
    pub b: Vec<Scalar>,
}

/// Splits a system into its affine equations (as a matrix over the variables
/// they mention) and the equations carrying a degree-2 term.
pub fn poly_split(system: &[Poly]) -> Result<(LinearSystem, Vec<Poly>)> {
    let mut linear = Vec::new();
    let mut quadratic = Vec::new();
    for p in system {
        p.check_degree()?;
        if p.is_zero() {
            continue;
        }
        if p.degree() <= 1 {
            linear.push(p);
        } else {
            quadratic.push(p.clone());
        }
    }
    let vars: Vec<u32> = linear
        .iter()
        .flat_map(|p| p.variables())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let col: BTreeMap<u32, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut a = crate::exact::Mat::zeros(linear.len(), vars.len());
    let mut b = Vec::with_capacity(linear.len());
    for (r, p) in linear.iter().enumerate() {
        for (m, c) in p.terms() {
            if let [v] = m.as_slice() {
                a[(r, col[v])] = c.clone();
            }
        }
        b.push(-p.constant_term());
    }
    Ok((LinearSystem { vars, a, b }, quadratic))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }

    #[test]
    fn arithmetic_and_display() {
        let p = x().mul(&y()).sub(&Poly::constant(Scalar::one()));
        assert_eq!(p.to_string(), "x0*x1 - 1");
        assert_eq!(p.degree(), 2);
        let sq = x().add(&y()).mul(&x().add(&y()));
        assert_eq!(sq.to_string(), "x0*x0 + 2*x0*x1 + x1*x1");
    }

    #[test]
    fn degree_cap_enforced() {
        let p = x().mul(&y());
        let err = p.checked_mul(&x()).unwrap_err();
        assert!(matches!(err, Error::DegreeExceeded { degree: 3, .. }));
    }

    #[test]
    fn substitution() {
        // x*y - 1 with y = 2x + 1 -> 2x^2 + x - 1
        let p = x().mul(&y()).sub(&Poly::constant(Scalar::one()));
        let val = x().scale(&Scalar::from_int(2)).add(&Poly::constant(Scalar::one()));
        let q = p.substitute_one(1, &val);
        assert_eq!(q.to_string(), "2*x0*x0 + x0 - 1");
        assert_eq!(q.eval(&[Scalar::from_int(1), Scalar::zero()]), Scalar::from_int(2));
    }

    #[test]
    fn split_linear_only() {
        // {x + 2} -> x = -2, no quadratic part
        let p = x().add(&Poly::constant(Scalar::from_int(2)));
        let (lin, quad) = poly_split(&[p]).unwrap();
        assert!(quad.is_empty());
        assert_eq!(lin.vars, vec![0]);
        assert_eq!(lin.a[(0, 0)], Scalar::one());
        assert_eq!(lin.b, vec![Scalar::from_int(-2)]);
    }

    #[test]
    fn split_mixed() {
        // {x*y - 1, x + y} -> linear x + y = 0, quadratic {x*y - 1}
        let q = x().mul(&y()).sub(&Poly::constant(Scalar::one()));
        let l = x().add(&y());
        let (lin, quad) = poly_split(&[q.clone(), l]).unwrap();
        assert_eq!(quad, vec![q]);
        assert_eq!(lin.a.rows(), 1);
        assert_eq!(lin.vars, vec![0, 1]);
        assert_eq!(lin.b, vec![Scalar::zero()]);
    }

    #[test]
    fn split_rejects_cubic() {
        let c = x().mul(&x()).mul(&y());
        assert!(matches!(poly_split(&[c]), Err(Error::DegreeExceeded { .. })));
    }
}
