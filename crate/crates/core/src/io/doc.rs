//! JSON interchange documents.
//!
//! An algebra is `{dim, basis, brackets: [{i, j, coeffs: {"k": "p/q"}}]}` with
//! `i < j` and only nonzero brackets listed. Isotropy data is
//! `{h, m_dim, rho}` with `rho[i]` the matrix of `h_i` on `m` (row-major).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::catalog::{catalog_get, CatalogEntry, Payload};
use crate::error::{Error, Result};
use crate::exact::{Mat, Scalar};
use crate::lie::{extract_isotropy, IsotropyData, LieAlgebra, Representation, StructureConstants};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, Scalar>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotropyDoc {
    pub h: AlgebraDoc,
    pub m_dim: usize,
    pub rho: Vec<Vec<Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_basis: Option<Vec<String>>,
}

impl AlgebraDoc {
    pub fn from_algebra(g: &LieAlgebra) -> Self {
        let n = g.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs: BTreeMap<String, Scalar> = (0..n)
                    .filter(|&k| !g.c(i, j, k).is_zero())
                    .map(|k| (k.to_string(), g.c(i, j, k).clone()))
                    .collect();
                if !coeffs.is_empty() {
                    brackets.push(BracketDoc { i, j, coeffs });
                }
            }
        }
        AlgebraDoc {
            dim: n,
            basis: g.names().to_vec(),
            brackets,
        }
    }

    /// Structure constants without the Jacobi check.
    pub fn to_candidate(&self) -> Result<LieAlgebra> {
        let n = self.dim;
        if self.basis.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "basis has {} names, dim is {n}",
                self.basis.len()
            )));
        }
        let mut sc = StructureConstants::zero(n);
        let mut seen = std::collections::BTreeSet::new();
        for b in &self.brackets {
            if b.i >= b.j || b.j >= n {
                return Err(Error::IndexSet(format!(
                    "bracket ({}, {}) must satisfy i < j < {n}",
                    b.i, b.j
                )));
            }
            if !seen.insert((b.i, b.j)) {
                return Err(Error::IndexSet(format!("bracket ({}, {}) listed twice", b.i, b.j)));
            }
            for (k, c) in &b.coeffs {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("coefficient key {k:?} is not an index")))?;
                if k >= n {
                    return Err(Error::IndexSet(format!("coefficient index {k} out of range 0..{n}")));
                }
                sc.set(b.i, b.j, k, c.clone());
            }
        }
        LieAlgebra::candidate(self.basis.clone(), sc)
    }

    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let g = self.to_candidate()?;
        LieAlgebra::new(g.names().to_vec(), g.constants().clone())
    }
}

impl IsotropyDoc {
    pub fn from_data(d: &IsotropyData) -> Self {
        IsotropyDoc {
            h: AlgebraDoc::from_algebra(d.h()),
            m_dim: d.m_dim(),
            rho: d.rho().iter().map(Mat::row_vecs).collect(),
            m_basis: Some(d.m_names().to_vec()),
        }
    }

    pub fn to_data(&self) -> Result<IsotropyData> {
        let h = self.h.to_algebra()?;
        let mut rho = Vec::with_capacity(self.rho.len());
        for (i, rows) in self.rho.iter().enumerate() {
            if rows.len() != self.m_dim || rows.iter().any(|r| r.len() != self.m_dim) {
                return Err(Error::DimensionMismatch(format!("rho[{i}] is not {0}x{0}", self.m_dim)));
            }
            rho.push(Mat::from_rows(rows.clone())?);
        }
        let d = Representation::new(h, self.m_dim, rho)?;
        match &self.m_basis {
            Some(names) => d.with_m_names(names.clone()),
            None => Ok(d),
        }
    }
}

/// A loaded input: an algebra (optionally with a subalgebra) or isotropy data.
#[derive(Debug, Clone)]
pub enum Input {
    Algebra {
        /// Jacobi is not checked on load.
        algebra: LieAlgebra,
        h_indices: Option<Vec<usize>>,
    },
    Isotropy(IsotropyData),
}

impl Input {
    pub fn from_payload(p: &Payload) -> Self {
        match p {
            Payload::Algebra(a) => Input::Algebra {
                algebra: a.clone(),
                h_indices: None,
            },
            Payload::Pair { algebra, h_indices } => Input::Algebra {
                algebra: algebra.clone(),
                h_indices: Some(h_indices.clone()),
            },
            Payload::Isotropy(d) => Input::Isotropy(d.clone()),
        }
    }

    pub fn to_payload(&self) -> Payload {
        match self {
            Input::Algebra {
                algebra,
                h_indices: None,
            } => Payload::Algebra(algebra.clone()),
            Input::Algebra {
                algebra,
                h_indices: Some(h),
            } => Payload::Pair {
                algebra: algebra.clone(),
                h_indices: h.clone(),
            },
            Input::Isotropy(d) => Payload::Isotropy(d.clone()),
        }
    }

    /// Isotropy data, extracting it from an algebra with a subalgebra.
    pub fn isotropy(&self) -> Result<IsotropyData> {
        match self {
            Input::Isotropy(d) => Ok(d.clone()),
            Input::Algebra {
                algebra,
                h_indices: Some(h),
            } => {
                let g = LieAlgebra::new(algebra.names().to_vec(), algebra.constants().clone())?;
                Ok(extract_isotropy(&g, h, None)?.data)
            }
            Input::Algebra { h_indices: None, .. } => Err(Error::Precondition(
                "input is an algebra without h_indices; isotropy data is required".into(),
            )),
        }
    }

    pub fn algebra(&self) -> Result<&LieAlgebra> {
        match self {
            Input::Algebra { algebra, .. } => Ok(algebra),
            Input::Isotropy(_) => Err(Error::Precondition(
                "input is isotropy data, an algebra is required".into(),
            )),
        }
    }
}

/// Document for a payload: an algebra (with `h_indices` for a pair) or isotropy data.
pub fn payload_to_json(p: &Payload) -> Value {
    match p {
        Payload::Algebra(a) => serde_json::to_value(AlgebraDoc::from_algebra(a)).expect("serializable"),
        Payload::Pair { algebra, h_indices } => {
            let mut v = serde_json::to_value(AlgebraDoc::from_algebra(algebra)).expect("serializable");
            v["h_indices"] = serde_json::to_value(h_indices).expect("serializable");
            v
        }
        Payload::Isotropy(d) => serde_json::to_value(IsotropyDoc::from_data(d)).expect("serializable"),
    }
}

pub fn entry_to_json(e: &CatalogEntry) -> Value {
    let mut v = payload_to_json(&e.payload);
    v["name"] = Value::String(e.name.clone());
    v["description"] = Value::String(e.description.clone());
    v["expected"] = serde_json::to_value(&e.expected).expect("serializable");
    v
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Deserialize)]
struct PairIndices {
    h_indices: Option<Vec<usize>>,
}

/// Reads a document; extra fields such as `name` are ignored. Errors carry
/// the line and column of the offending token.
pub fn input_from_json(text: &str) -> Result<Input> {
    let v: Value = serde_json::from_str(text).map_err(parse_error)?;
    // typed passes reparse the text so that errors keep their positions
    if v.get("rho").is_some() {
        let doc: IsotropyDoc = serde_json::from_str(text).map_err(parse_error)?;
        return Ok(Input::Isotropy(doc.to_data()?));
    }
    if v.get("brackets").is_some() {
        let doc: AlgebraDoc = serde_json::from_str(text).map_err(parse_error)?;
        let pair: PairIndices = serde_json::from_str(text).map_err(parse_error)?;
        return Ok(Input::Algebra {
            algebra: doc.to_candidate()?,
            h_indices: pair.h_indices,
        });
    }
    Err(Error::Parse(
        "line 1 column 1: document has neither \"brackets\" (algebra) nor \"rho\" (isotropy data)".into(),
    ))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Loads `catalog:<name>` or a JSON file. Returns the input and the SHA-256
/// of its bytes (for catalog entries, of the exported document).
pub fn load_input(source: &str) -> Result<(Input, String)> {
    if let Some(name) = source.strip_prefix("catalog:") {
        let e = catalog_get(name)?;
        let text = serde_json::to_string(&payload_to_json(&e.payload)).expect("serializable");
        return Ok((Input::from_payload(&e.payload), sha256_hex(text.as_bytes())));
    }
    let bytes = std::fs::read(Path::new(source)).map_err(|e| Error::Parse(format!("cannot read {source}: {e}")))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Parse(format!("{source} is not UTF-8")))?;
    Ok((input_from_json(&text)?, sha256_hex(&bytes)))
}
