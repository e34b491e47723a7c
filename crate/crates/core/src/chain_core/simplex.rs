//! Simplices, chains, the simplicial boundary and the Alexander–Whitney diagonal.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("a simplex needs at least one vertex")]
    Empty,
    #[error("repeated vertex {0}")]
    Repeated(u32),
}

/// A simplex given by strictly increasing vertex ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Sorts the vertices; rejects empty input and repeated vertices.
    pub fn new(mut vertices: Vec<u32>) -> Result<Simplex, SimplexError> {
        if vertices.is_empty() {
            return Err(SimplexError::Empty);
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(SimplexError::Repeated(w[0]));
        }
        Ok(Simplex(vertices))
    }

    /// Panics on invalid input; meant for literals.
    pub fn of(vertices: &[u32]) -> Simplex {
        Simplex::new(vertices.to_vec()).expect("invalid simplex literal")
    }

    pub fn vertex(v: u32) -> Simplex {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The `i`-th codimension-one face (vertex `i` removed). Empty for vertices.
    pub fn facet(&self, i: usize) -> Option<Simplex> {
        if self.0.len() < 2 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(i);
        Some(Simplex(v))
    }

    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).filter_map(move |i| self.facet(i))
    }

    /// The front face `v_0 ... v_i`.
    pub fn front(&self, i: usize) -> Simplex {
        Simplex(self.0[..=i].to_vec())
    }

    /// The back face `v_i ... v_q`.
    pub fn back(&self, i: usize) -> Simplex {
        Simplex(self.0[i..].to_vec())
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }
}

impl TryFrom<Vec<u32>> for Simplex {
    type Error = SimplexError;
    fn try_from(v: Vec<u32>) -> Result<Self, SimplexError> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<u32> {
    fn from(s: Simplex) -> Vec<u32> {
        s.0
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A homogeneous simplicial chain. Degree `-1` is used for the empty boundary
/// of a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    degree: isize,
    field: PrimeField,
    terms: BTreeMap<Simplex, u32>,
}

impl Chain {
    pub fn zero(degree: isize, field: PrimeField) -> Chain {
        Chain {
            degree,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_simplex(s: Simplex, field: PrimeField) -> Chain {
        let mut c = Chain::zero(s.dim() as isize, field);
        c.add_term(s, 1);
        c
    }

    pub fn degree(&self) -> isize {
        self.degree
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Simplex, u32> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &Simplex) -> u32 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    /// Adds `c * s`. Panics if the dimension does not match the degree.
    pub fn add_term(&mut self, s: Simplex, c: u32) {
        assert_eq!(s.dim() as isize, self.degree, "simplex dimension differs from chain degree");
        let f = self.field;
        let c = c % f.characteristic();
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(s).or_insert(0);
        *slot = f.add(*slot, c);
        if *slot == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn add_chain(&mut self, other: &Chain, c: u32) {
        if other.is_zero() {
            return;
        }
        assert_eq!(self.degree, other.degree, "degree mismatch");
        for (s, &v) in &other.terms {
            self.add_term(s.clone(), self.field.mul(c, v));
        }
    }

    /// Linear extension of the boundary.
    pub fn boundary(&self) -> Chain {
        let mut out = Chain::zero(self.degree - 1, self.field);
        for (s, &c) in &self.terms {
            out.add_chain(&boundary(s, self.field), c);
        }
        out
    }
}

/// Alternating sum of codimension-one faces; the empty chain of degree `-1`
/// for a vertex.
pub fn boundary(s: &Simplex, field: PrimeField) -> Chain {
    let mut out = Chain::zero(s.dim() as isize - 1, field);
    for i in 0..=s.dim() {
        if let Some(face) = s.facet(i) {
            out.add_term(face, field.sign(i));
        }
    }
    out
}

/// An element of a tensor power of the chain complex: words of simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorChain {
    field: PrimeField,
    terms: BTreeMap<Vec<Simplex>, u32>,
}

impl TensorChain {
    pub fn zero(field: PrimeField) -> TensorChain {
        TensorChain {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Simplex>, u32> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, word: Vec<Simplex>, c: u32) {
        let f = self.field;
        let c = c % f.characteristic();
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(word.clone()).or_insert(0);
        *slot = f.add(*slot, c);
        if *slot == 0 {
            self.terms.remove(&word);
        }
    }

    /// Applies the diagonal to tensor factor `pos` of every word, with the
    /// Koszul sign of a degree-zero map (trivial).
    pub fn diagonal_at(&self, pos: usize) -> TensorChain {
        let mut out = TensorChain::zero(self.field);
        for (word, &c) in &self.terms {
            for (w2, c2) in aw_diagonal(&word[pos], self.field).terms {
                let mut new_word = word[..pos].to_vec();
                new_word.extend(w2);
                new_word.extend_from_slice(&word[pos + 1..]);
                out.add_term(new_word, self.field.mul(c, c2));
            }
        }
        out
    }

    /// Applies the augmentation (1 on vertices, 0 elsewhere) to factor `pos`.
    pub fn counit_at(&self, pos: usize) -> TensorChain {
        let mut out = TensorChain::zero(self.field);
        for (word, &c) in &self.terms {
            if word[pos].dim() == 0 {
                let mut w = word.clone();
                w.remove(pos);
                out.add_term(w, c);
            }
        }
        out
    }
}

/// `Δ(v_0...v_q) = Σ_i (v_0...v_i) ⊗ (v_i...v_q)`.
pub fn aw_diagonal(s: &Simplex, field: PrimeField) -> TensorChain {
    let mut out = TensorChain::zero(field);
    for i in 0..=s.dim() {
        out.add_term(vec![s.front(i), s.back(i)], 1);
    }
    out
}
