//! Filtered simplicial complexes in canonical order and their text format.
//!
//! The text format has one simplex per line, `<value> <v0> <v1> ... <vk>`,
//! with `#` starting a comment. Values are exact: integers, fractions,
//! decimals (converted exactly) or sums of `c*sqrt(q)` terms written without
//! spaces.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::exact::Exact;
use super::field::PrimeField;
use super::simplex::{Simplex, SimplexError};
use super::sparse::{SparseMatrix, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("simplex {simplex} is present but its face {face} is not")]
    NotClosed { face: Simplex, simplex: Simplex },
    #[error("face {face} enters at {face_value} after simplex {simplex} at {simplex_value}")]
    NonMonotone {
        face: Simplex,
        simplex: Simplex,
        face_value: String,
        simplex_value: String,
    },
    #[error("simplex {0} listed twice")]
    Duplicate(Simplex),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Checks face closure and monotonicity of a list of filtered simplices.
/// Reports the first offending pair in input order.
pub fn validate(entries: &[(Simplex, Exact)]) -> Result<(), ComplexError> {
    let mut value_of: HashMap<&Simplex, &Exact> = HashMap::with_capacity(entries.len());
    for (s, v) in entries {
        if value_of.insert(s, v).is_some() {
            return Err(ComplexError::Duplicate(s.clone()));
        }
    }
    for (s, v) in entries {
        for face in s.facets() {
            match value_of.get(&face) {
                None => {
                    return Err(ComplexError::NotClosed {
                        face,
                        simplex: s.clone(),
                    })
                }
                Some(fv) if *fv > v => {
                    return Err(ComplexError::NonMonotone {
                        face_value: fv.to_string(),
                        simplex_value: v.to_string(),
                        face,
                        simplex: s.clone(),
                    })
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// A finite simplicial complex with a monotone filtration, stored in the
/// canonical order: by value, then dimension, then vertex lists.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    simplices: Vec<Simplex>,
    values: Vec<Exact>,
    facets: Vec<Vec<usize>>,
    index: HashMap<Simplex, usize>,
    skeleton_cap: Option<usize>,
}

impl FilteredComplex {
    pub fn empty() -> FilteredComplex {
        FilteredComplex {
            simplices: Vec::new(),
            values: Vec::new(),
            facets: Vec::new(),
            index: HashMap::new(),
            skeleton_cap: None,
        }
    }

    pub fn new(mut entries: Vec<(Simplex, Exact)>) -> Result<FilteredComplex, ComplexError> {
        validate(&entries)?;
        entries.sort_by(|(a, va), (b, vb)| va.cmp(vb).then(a.dim().cmp(&b.dim())).then_with(|| a.cmp(b)));
        let index: HashMap<Simplex, usize> = entries
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.clone(), i))
            .collect();
        let facets = entries
            .iter()
            .map(|(s, _)| s.facets().map(|f| index[&f]).collect())
            .collect();
        let (simplices, values) = entries.into_iter().unzip();
        Ok(FilteredComplex {
            simplices,
            values,
            facets,
            index,
            skeleton_cap: None,
        })
    }

    /// Marks the complex as a truncated skeleton of dimension `max_dim`:
    /// homology is only reliable in degrees below `max_dim`.
    pub fn with_skeleton_cap(mut self, max_dim: usize) -> FilteredComplex {
        self.skeleton_cap = Some(max_dim);
        self
    }

    pub fn skeleton_cap(&self) -> Option<usize> {
        self.skeleton_cap
    }

    /// Whether `H_p` of every sublevel complex is the homology of the full
    /// (untruncated) construction.
    pub fn is_reliable_degree(&self, p: usize) -> bool {
        self.skeleton_cap.is_none_or(|cap| p < cap)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn value(&self, i: usize) -> &Exact {
        &self.values[i]
    }

    pub fn values(&self) -> &[Exact] {
        &self.values
    }

    pub fn dim(&self, i: usize) -> usize {
        self.simplices[i].dim()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.simplices.iter().map(Simplex::dim).max()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Indices of the codimension-one faces, ordered by the removed vertex.
    pub fn facets(&self, i: usize) -> &[usize] {
        &self.facets[i]
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Simplex, &Exact)> {
        self.simplices.iter().zip(&self.values)
    }

    /// Distinct filtration values in increasing order.
    pub fn grades(&self) -> Vec<Exact> {
        let mut out: Vec<Exact> = Vec::new();
        for v in &self.values {
            if out.last() != Some(v) {
                out.push(v.clone());
            }
        }
        out
    }

    /// Number of simplices with value `<= t`; they form a prefix.
    pub fn prefix_len(&self, t: &Exact) -> usize {
        self.values.partition_point(|v| v <= t)
    }

    /// The sublevel complex at `t` as a list of simplices.
    pub fn sublevel(&self, t: &Exact) -> &[Simplex] {
        &self.simplices[..self.prefix_len(t)]
    }

    /// Boundary of simplex `i` in the simplex index basis.
    pub fn boundary_column(&self, i: usize, field: PrimeField) -> SparseVec {
        SparseVec::from_pairs(
            self.facets[i]
                .iter()
                .enumerate()
                .map(|(k, &j)| (j, field.sign(k))),
            field,
        )
    }

    /// Matrix of the boundary on the sublevel complex at `t` (`None` for the
    /// whole complex). Rows and columns follow the canonical order.
    pub fn boundary_matrix(&self, t: Option<&Exact>, field: PrimeField) -> SparseMatrix {
        let n = t.map_or(self.len(), |t| self.prefix_len(t));
        SparseMatrix::from_columns(n, (0..n).map(|i| self.boundary_column(i, field)).collect(), field)
    }

    pub fn parse_text(text: &str) -> Result<FilteredComplex, ComplexError> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| ComplexError::Parse {
                line: lineno + 1,
                message,
            };
            let mut tokens = line.split_whitespace();
            let value: Exact = tokens
                .next()
                .unwrap_or_default()
                .parse()
                .map_err(|e: super::exact::ParseExactError| parse_err(e.to_string()))?;
            let vertices = tokens
                .map(|t| t.parse::<u32>().map_err(|e| parse_err(format!("vertex {t:?}: {e}"))))
                .collect::<Result<Vec<u32>, _>>()?;
            let simplex = Simplex::new(vertices).map_err(|e: SimplexError| parse_err(e.to_string()))?;
            entries.push((simplex, value));
        }
        FilteredComplex::new(entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, v) in self.entries() {
            let value: String = v.to_string().chars().filter(|c| !c.is_whitespace()).collect();
            let _ = write!(out, "{}", value);
            for x in s.vertices() {
                let _ = write!(out, " {}", x);
            }
            out.push('\n');
        }
        out
    }
}
