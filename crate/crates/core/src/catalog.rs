//! Built-in algebras and isotropy data used as fixtures and demonstrations.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{solve_affine, Mat, Scalar};
use crate::lie::{extract_isotropy, IsotropyData, LieAlgebra, Representation, StructureConstants};

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Stated in the published treatment of the example.
    Published,
    /// Computed independently when the fixture was built.
    Computed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ExpectedValue {
    Count(usize),
    Flag(bool),
    Dims(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub value: ExpectedValue,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Algebra(LieAlgebra),
    Isotropy(IsotropyData),
    /// An algebra with the basis indices of a subalgebra `h`.
    Pair {
        algebra: LieAlgebra,
        h_indices: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub payload: Payload,
    /// Keys: `h1:<module>`, `branches`, `rigid`, `derived_series`,
    /// `derived_series_m` (span of `m`), `derived_series_w1`.
    pub expected: BTreeMap<String, Expected>,
}

impl CatalogEntry {
    /// Isotropy data of the entry, if it carries any.
    pub fn isotropy(&self) -> Option<IsotropyData> {
        match &self.payload {
            Payload::Algebra(_) => None,
            Payload::Isotropy(d) => Some(d.clone()),
            Payload::Pair { algebra, h_indices } => Some(
                extract_isotropy(algebra, h_indices, None)
                    .expect("catalog pairs are subalgebras")
                    .data,
            ),
        }
    }

    /// The ambient algebra of the entry, if it has one.
    pub fn algebra(&self) -> Option<&LieAlgebra> {
        match &self.payload {
            Payload::Algebra(a) | Payload::Pair { algebra: a, .. } => Some(a),
            Payload::Isotropy(_) => None,
        }
    }
}

/// The three coefficient modules of the reconstruction, in report order.
pub const RECONSTRUCTION_MODULES: [&str; 3] = ["m*⊗h", "Λ²(m*)⊗m", "Λ²(m*)⊗h"];

fn expect(map: &mut BTreeMap<String, Expected>, key: &str, value: ExpectedValue, source: Source) {
    map.insert(key.to_string(), Expected { value, source });
}

fn expect_h1(map: &mut BTreeMap<String, Expected>, dims: [usize; 3], source: [Source; 3]) {
    for ((m, d), s) in RECONSTRUCTION_MODULES.iter().zip(dims).zip(source) {
        expect(map, &format!("h1:{m}"), ExpectedValue::Count(d), s);
    }
}

/// Structure constants of the span of linearly independent matrices closed
/// under the commutator.
fn from_matrices(names: &[&str], mats: &[Mat]) -> LieAlgebra {
    let n = mats.len();
    let flat: Vec<Vec<Scalar>> = mats
        .iter()
        .map(|m| (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect())
        .collect();
    let basis = Mat::from_columns(flat[0].len(), &flat);
    let mut sc = StructureConstants::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let c = mats[i].commutator(&mats[j]);
            let target: Vec<Scalar> = (0..c.rows()).flat_map(|r| c.row(r).to_vec()).collect();
            let sol = solve_affine(&basis, &target).expect("closed under commutator");
            for (k, x) in sol.particular.into_iter().enumerate() {
                if !x.is_zero() {
                    sc.set(i, j, k, x);
                }
            }
        }
    }
    LieAlgebra::new(names.iter().map(|s| s.to_string()).collect(), sc).expect("matrix algebra")
}

fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    m[(i, j)] = Scalar::one();
    m
}

/// `sl₂` on the basis `H, E, F`.
pub fn sl2() -> LieAlgebra {
    LieAlgebra::from_brackets(
        &["H", "E", "F"],
        &[(0, 1, &[(1, 2)]), (0, 2, &[(2, -2)]), (1, 2, &[(0, 1)])],
    )
    .expect("sl2")
}

/// `sl₃` on the basis `H1, H2, E12, E13, E23, E21, E31, E32`.
pub fn sl3() -> LieAlgebra {
    let h1 = unit(3, 0, 0).sub(&unit(3, 1, 1));
    let h2 = unit(3, 1, 1).sub(&unit(3, 2, 2));
    from_matrices(
        &["H1", "H2", "E12", "E13", "E23", "E21", "E31", "E32"],
        &[
            h1,
            h2,
            unit(3, 0, 1),
            unit(3, 0, 2),
            unit(3, 1, 2),
            unit(3, 1, 0),
            unit(3, 2, 0),
            unit(3, 2, 1),
        ],
    )
}

/// `h = ⟨e₁, e₂⟩`, `[e₁, e₂] = e₂`, acting on `ℂ²` realified to `ℝ⁴`.
///
/// The complex matrices `e₁ = [[0,0],[0,1]]`, `e₂ = [[0,0],[1,0]]` have real
/// entries, so each becomes `entry · I₂` in blocks on the real basis
/// `(f₁, Jf₁, f₂, Jf₂)`.
pub fn sol2_almost_complex() -> IsotropyData {
    let h = LieAlgebra::from_brackets(&["e1", "e2"], &[(0, 1, &[(1, 1)])]).expect("sol2");
    let realify = |c: &Mat| c.kron(&Mat::identity(2));
    let rho = vec![
        realify(&Mat::from_i64(&[&[0, 0], &[0, 1]])),
        realify(&Mat::from_i64(&[&[0, 0], &[1, 0]])),
    ];
    Representation::new(h, 4, rho).expect("sol2 representation")
}

/// `sl₂` on its standard representation `ℝ²`.
pub fn sl2_standard() -> IsotropyData {
    Representation::new(
        sl2(),
        2,
        vec![
            Mat::from_i64(&[&[1, 0], &[0, -1]]),
            Mat::from_i64(&[&[0, 1], &[0, 0]]),
            Mat::from_i64(&[&[0, 0], &[1, 0]]),
        ],
    )
    .expect("standard representation")
}

/// The flat algebra `h ⋉ m` with abelian `m`; basis `h` first, then `m`.
pub fn flat_algebra(data: &IsotropyData) -> LieAlgebra {
    let (a, b) = (data.h_dim(), data.m_dim());
    let mut sc = StructureConstants::zero(a + b);
    let h = data.h();
    for i in 0..a {
        for j in i + 1..a {
            for k in 0..a {
                let c = h.c(i, j, k);
                if !c.is_zero() {
                    sc.set(i, j, k, c.clone());
                }
            }
        }
        for p in 0..b {
            for r in 0..b {
                let c = &data.rho()[i][(r, p)];
                if !c.is_zero() {
                    sc.set(i, a + p, a + r, c.clone());
                }
            }
        }
    }
    let mut names: Vec<String> = h.names().to_vec();
    names.extend((0..b).map(|p| format!("u{}", p + 1)));
    LieAlgebra::new(names, sc).expect("flat algebra is Lie")
}

struct Builder {
    entries: Vec<CatalogEntry>,
}

impl Builder {
    fn add(&mut self, name: &str, description: &str, payload: Payload, expected: BTreeMap<String, Expected>) {
        self.entries.push(CatalogEntry {
            name: name.to_string(),
            description: description.to_string(),
            payload,
            expected,
        });
    }

    fn add_with_flat(&mut self, name: &str, description: &str, payload: Payload, expected: BTreeMap<String, Expected>) {
        self.add(name, description, payload, expected);
        let data = self.entries.last().unwrap().isotropy().expect("isotropy entry");
        let a = data.h_dim();
        self.add(
            &format!("{name}-flat"),
            &format!("flat algebra h⋉m for {name}"),
            Payload::Pair {
                algebra: flat_algebra(&data),
                h_indices: (0..a).collect(),
            },
            BTreeMap::new(),
        );
    }
}

fn build() -> Vec<CatalogEntry> {
    use Source::{Computed, Published};
    let mut b = Builder { entries: Vec::new() };

    let mut e = BTreeMap::new();
    expect(&mut e, "derived_series", ExpectedValue::Dims(vec![3]), Computed);
    b.add("sl2", "sl2 on the basis H, E, F", Payload::Algebra(sl2()), e);

    let mut e = BTreeMap::new();
    expect(&mut e, "branches", ExpectedValue::Count(2), Published);
    b.add_with_flat(
        "sl2-cartan",
        "sl2 with h = <H>",
        Payload::Pair {
            algebra: sl2(),
            h_indices: vec![0],
        },
        e,
    );
    b.add_with_flat(
        "sl2-nilpotent",
        "sl2 with h = <E>",
        Payload::Pair {
            algebra: sl2(),
            h_indices: vec![1],
        },
        BTreeMap::new(),
    );
    let mut e = BTreeMap::new();
    expect(&mut e, "branches", ExpectedValue::Count(2), Published);
    b.add_with_flat(
        "sl2-borel",
        "sl2 with h = <H, E>",
        Payload::Pair {
            algebra: sl2(),
            h_indices: vec![0, 1],
        },
        e,
    );
    b.add_with_flat(
        "sl2-standard",
        "sl2 acting on its standard representation R^2",
        Payload::Isotropy(sl2_standard()),
        BTreeMap::new(),
    );

    let mut e = BTreeMap::new();
    expect(&mut e, "derived_series", ExpectedValue::Dims(vec![8]), Computed);
    b.add(
        "sl3",
        "sl3 on the basis H1, H2, E12, E13, E23, E21, E31, E32",
        Payload::Algebra(sl3()),
        e,
    );

    let mut e = BTreeMap::new();
    expect_h1(&mut e, [1, 3, 0], [Published; 3]);
    expect(&mut e, "branches", ExpectedValue::Count(2), Published);
    expect(&mut e, "rigid", ExpectedValue::Flag(true), Published);
    b.add_with_flat(
        "sl3-borel",
        "sl3 with h = upper triangular Borel subalgebra",
        Payload::Pair {
            algebra: sl3(),
            h_indices: vec![0, 1, 2, 3, 4],
        },
        e,
    );

    let mut e = BTreeMap::new();
    expect_h1(&mut e, [0, 12, 12], [Published, Computed, Computed]);
    expect(&mut e, "rigid", ExpectedValue::Flag(false), Published);
    b.add_with_flat(
        "sl3-cartan",
        "sl3 with h = Cartan subalgebra <H1, H2>",
        Payload::Pair {
            algebra: sl3(),
            h_indices: vec![0, 1],
        },
        e,
    );

    let mut e = BTreeMap::new();
    expect(&mut e, "h1:m*⊗h", ExpectedValue::Count(12), Computed);
    b.add_with_flat(
        "sl3-nilradical-P1",
        "sl3 with h = <E21, E31>, the negative part of the |1|-grading for P1; m = p",
        Payload::Pair {
            algebra: sl3(),
            h_indices: vec![5, 6],
        },
        e,
    );

    let mut e = BTreeMap::new();
    expect_h1(&mut e, [2, 8, 4], [Published; 3]);
    b.add_with_flat(
        "sol2-almost-complex-4d",
        "h = <e1, e2>, [e1, e2] = e2, on C^2 realified with basis (f1, Jf1, f2, Jf2)",
        Payload::Isotropy(sol2_almost_complex()),
        e,
    );

    for (i, (alg, desc, signatures)) in cartan_outcomes().into_iter().enumerate() {
        let mut e = BTreeMap::new();
        for (key, dims, source) in signatures {
            expect(&mut e, key, ExpectedValue::Dims(dims), source);
        }
        b.add(
            &format!("sl3-cartan-outcome-{}", i + 1),
            desc,
            Payload::Pair {
                algebra: alg,
                h_indices: vec![0, 1],
            },
            e,
        );
    }
    b.entries
}

/// `sl₃` with `E31` replaced by `-E31`, the realisation the reconstruction
/// normalises to.
pub fn sl3_normalized() -> LieAlgebra {
    let mut diag = vec![Scalar::one(); 8];
    diag[6] = Scalar::from_int(-1);
    let g = sl3();
    g.change_basis(&Mat::diag(&diag), g.names().to_vec())
        .expect("diagonal change of basis")
}

/// `sl3-cartan`'s torus action plus the listed brackets `[x, y] = c z` among
/// root vectors (indices into `H1, H2, E12, E13, E23, E21, E31, E32`).
fn torus_extension(brackets: &[(usize, usize, usize, i64)]) -> LieAlgebra {
    let g = sl3();
    let mut sc = StructureConstants::zero(8);
    for i in 0..2 {
        for p in 2..8 {
            for k in 0..8 {
                let c = g.c(i, p, k);
                if !c.is_zero() {
                    sc.set(i, p, k, c.clone());
                }
            }
        }
    }
    for &(x, y, z, c) in brackets {
        sc.set(x, y, z, Scalar::from_int(c));
    }
    LieAlgebra::new(g.names().to_vec(), sc).expect("torus extension is Lie")
}

type Signature = (&'static str, Vec<usize>, Source);

/// The seven algebras with the isotropy data of `sl3-cartan`, on the basis
/// `H1, H2, E12, E13, E23, E21, E31, E32`. Realisations are chosen in the
/// normal form of the reconstruction: root vectors rescaled so that every
/// free bracket coefficient is `1`.
///
/// (2) is `gl₂ ⋉ W` with `gl₂ = ⟨H1, H2, E12, E21⟩` and `W = ⟨E13, E23, E31, E32⟩`
/// abelian: `sl3_normalized` with `[W, W]` set to zero. (3) is the free 2-step
/// nilpotent algebra on `E12, E23, E31`. In (4) the summand
/// `W₁ = ⟨E12, E23, E31, E13, E32⟩` has `E12` bracketing `E23, E31` and `E21`
/// is central. (5) is `heis(E12, E23; E13) ⊕ heis(E21, E32; E31)`, (6) keeps
/// only `heis(E12, E23; E13)`.
fn cartan_outcomes() -> Vec<(LieAlgebra, &'static str, Vec<Signature>)> {
    use Source::{Computed, Published};
    let (e12, e13, e23, e21, e31, e32) = (2, 3, 4, 5, 6, 7);
    let gl2 = {
        let g = sl3_normalized();
        let w = [e13, e23, e31, e32];
        let mut sc = g.constants().clone();
        for &x in &w {
            for &y in &w {
                if x < y {
                    for k in 0..8 {
                        sc.set(x, y, k, Scalar::zero());
                    }
                }
            }
        }
        LieAlgebra::new(g.names().to_vec(), sc).expect("gl2 ⋉ W is Lie")
    };
    vec![
        (
            sl3_normalized(),
            "sl3 itself, with E31 replaced by -E31",
            vec![("derived_series", vec![8], Computed)],
        ),
        (
            gl2,
            "gl2 ⋉ W, W = R^2 ⊕ R^2* abelian",
            vec![("derived_series", vec![8, 7], Computed)],
        ),
        (
            torus_extension(&[(e12, e23, e13, 1), (e12, e31, e32, 1), (e23, e31, e21, 1)]),
            "R^2 ⋉ (R^3 + Λ²R^3), 2-step nilpotent",
            vec![("derived_series_m", vec![6, 3, 0], Published)],
        ),
        (
            torus_extension(&[(e12, e23, e13, 1), (e12, e31, e32, 1)]),
            "R^2 ⋉ (W1 ⊕ R), W1 2-step nilpotent of dimension 5",
            vec![
                ("derived_series_w1", vec![5, 2, 0], Published),
                ("derived_series_m", vec![6, 2, 0], Computed),
            ],
        ),
        (
            torus_extension(&[(e12, e23, e13, 1), (e21, e32, e31, 1)]),
            "R^2 ⋉ (heis3 ⊕ heis3)",
            vec![("derived_series_m", vec![6, 2, 0], Computed)],
        ),
        (
            torus_extension(&[(e12, e23, e13, 1)]),
            "R^2 ⋉ (heis3 ⊕ R^3)",
            vec![("derived_series_m", vec![6, 1, 0], Computed)],
        ),
        (
            torus_extension(&[]),
            "R^2 ⋉ R^6, the flat algebra",
            vec![("derived_series_m", vec![6, 0], Computed)],
        ),
    ]
}

/// Basis indices of `W₁` in `sl3-cartan-outcome-4`.
pub const OUTCOME_4_W1: [usize; 5] = [2, 4, 6, 3, 7];

/// Names of all catalog entries, in catalog order.
pub fn catalog_list() -> Vec<String> {
    build().into_iter().map(|e| e.name).collect()
}

/// All entries, in catalog order.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    build()
}

pub fn catalog_get(name: &str) -> Result<CatalogEntry> {
    let entries = build();
    let available = entries.iter().map(|e| e.name.clone()).collect();
    entries
        .into_iter()
        .find(|e| e.name == name)
        .ok_or(Error::UnknownCatalogEntry {
            name: name.to_string(),
            available,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl3_brackets() {
        let g = sl3();
        // [E12, E21] = H1, [E13, E31] = H1 + H2, [H1, E12] = 2 E12
        assert_eq!(g.c(2, 5, 0), &Scalar::one());
        assert_eq!(
            (g.c(3, 6, 0).clone(), g.c(3, 6, 1).clone()),
            (Scalar::one(), Scalar::one())
        );
        assert_eq!(g.c(0, 2, 2), &Scalar::from_int(2));
        assert_eq!(g.c(0, 3, 3), &Scalar::one());
    }

    #[test]
    fn sol2_representation() {
        let d = sol2_almost_complex();
        let r = d.rho();
        assert_eq!(r[0].commutator(&r[1]), r[1]);
    }

    #[test]
    fn unknown_name_lists_available() {
        match catalog_get("nope") {
            Err(Error::UnknownCatalogEntry { available, .. }) => {
                assert!(available.contains(&"sl3-borel".to_string()))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cartan_outcomes_share_isotropy_and_signatures() {
        use crate::lie::{check_jacobi, derived_series, unit_vectors};
        let base = catalog_get("sl3-cartan").unwrap().isotropy().unwrap();
        for i in 1..=7 {
            let e = catalog_get(&format!("sl3-cartan-outcome-{i}")).unwrap();
            let g = e.algebra().unwrap();
            assert!(check_jacobi(g).is_ok());
            let d = e.isotropy().unwrap();
            assert_eq!(d.rho(), base.rho(), "outcome {i}");
            for (key, exp) in &e.expected {
                let span: Vec<usize> = match key.as_str() {
                    "derived_series" => (0..8).collect(),
                    "derived_series_m" => (2..8).collect(),
                    "derived_series_w1" => OUTCOME_4_W1.to_vec(),
                    _ => continue,
                };
                let got = derived_series(g, &unit_vectors(8, &span));
                assert_eq!(exp.value, ExpectedValue::Dims(got), "outcome {i} {key}");
            }
        }
    }
}
