//! Homotopy transfer of the Alexander–Whitney coalgebra of a filtered
//! complex onto its homology.
//!
//! A contraction `(π, ι, φ)` from chains onto a minimal complex is built by a
//! sequence of elementary reductions: first free-face collapses (a greedy
//! acyclic matching), then algebraic eliminations of the remaining nonzero
//! differential entries. The higher operations are sums over planar binary
//! trees with the Alexander–Whitney diagonal at internal vertices, `φ` on
//! internal edges, `ι` at the root and `π` at the leaves:
//!
//! ```text
//! T_1 = π,   T_k = Σ_{i+j=k} (L_i ⊗ L_j) Δ,   L_1 = π,  L_i = T_i φ  (i ≥ 2),
//! Δ_n = T_n ι.
//! ```
//!
//! Over `F_2` these carry no signs. Over odd primes only `Δ_2 = π⊗π Δ ι` is
//! produced.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain_core::{Exact, FilteredComplex, PrimeField, SparseMatrix, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("operations of arity {n} are only defined over F_2 here (field is F_{p})")]
    UnsupportedSigns { n: usize, p: u32 },
    #[error("n_max must be at least 2, got {0}")]
    InvalidCap(usize),
    #[error("identity SI({n}) needs operations up to arity {needed}, structure stops at {n_max}")]
    BeyondCap { n: usize, needed: usize, n_max: usize },
    #[error("structure on a disconnected complex cannot be reduced globally")]
    Disconnected,
    #[error("side condition {0} fails")]
    SideCondition(&'static str),
}

/// Position of a homology basis element: homological degree and index
/// within that degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HIndex {
    pub degree: usize,
    pub index: usize,
}

/// Chain contraction onto a complex with zero differential.
#[derive(Debug, Clone)]
pub struct Contraction {
    field: PrimeField,
    grade: Option<Exact>,
    seed: u64,
    dims: Vec<usize>,
    boundary: Vec<SparseVec>,
    aw: Vec<Vec<(usize, usize)>>,
    h_cells: Vec<usize>,
    h_dims: Vec<usize>,
    pi: Vec<SparseVec>,
    iota: Vec<SparseVec>,
    phi: Vec<SparseVec>,
}

struct Eliminator {
    f: PrimeField,
    alive: Vec<bool>,
    d: Vec<SparseVec>,
    cof: Vec<BTreeSet<usize>>,
    pi: Vec<SparseVec>,
    pi_rows: Vec<BTreeSet<usize>>,
    iota: Vec<SparseVec>,
    phi: Vec<SparseVec>,
}

impl Eliminator {
    fn new(d: Vec<SparseVec>, f: PrimeField) -> Eliminator {
        let n = d.len();
        let mut cof = vec![BTreeSet::new(); n];
        for (x, col) in d.iter().enumerate() {
            for (r, _) in col.iter() {
                cof[r].insert(x);
            }
        }
        Eliminator {
            f,
            alive: vec![true; n],
            d,
            cof,
            pi: (0..n).map(SparseVec::unit).collect(),
            pi_rows: (0..n).map(|i| BTreeSet::from([i])).collect(),
            iota: (0..n).map(SparseVec::unit).collect(),
            phi: vec![SparseVec::new(); n],
        }
    }

    /// Removes the pair `(a, b)` with `d(b)[a] != 0`, composing the current
    /// contraction with the elementary one.
    fn eliminate(&mut self, a: usize, b: usize) {
        let f = self.f;
        let lam = self.d[b].get(a);
        assert!(lam != 0, "eliminating a pair with zero incidence");
        let inv = f.inv(lam);
        let db = self.d[b].clone();
        let mut beta = db.clone();
        beta.set(a, 0);
        let iota_b = self.iota[b].clone();

        let cofaces: Vec<usize> = self.cof[a].iter().copied().filter(|&x| x != b).collect();
        for x in cofaces {
            let c = f.neg(f.mul(self.d[x].get(a), inv));
            self.d[x].add_scaled(&db, c, f);
            for (r, _) in db.iter() {
                if self.d[x].get(r) != 0 {
                    self.cof[r].insert(x);
                } else {
                    self.cof[r].remove(&x);
                }
            }
            self.iota[x].add_scaled(&iota_b, c, f);
        }
        for y in std::mem::take(&mut self.cof[b]) {
            self.d[y].set(b, 0);
        }
        for (r, _) in self.d[a].iter() {
            self.cof[r].remove(&a);
        }
        for (r, _) in db.iter() {
            self.cof[r].remove(&b);
        }
        self.cof[a].clear();

        for s in std::mem::take(&mut self.pi_rows[a]) {
            let c = self.pi[s].get(a);
            let scale = f.neg(f.mul(c, inv));
            self.phi[s].add_scaled(&iota_b, scale, f);
            self.pi[s].set(a, 0);
            self.pi[s].add_scaled(&beta, scale, f);
            for (r, _) in beta.iter() {
                if self.pi[s].get(r) != 0 {
                    self.pi_rows[r].insert(s);
                } else {
                    self.pi_rows[r].remove(&s);
                }
            }
        }
        for s in std::mem::take(&mut self.pi_rows[b]) {
            self.pi[s].set(b, 0);
        }
        for cell in [a, b] {
            self.alive[cell] = false;
            self.d[cell] = SparseVec::new();
            self.iota[cell] = SparseVec::new();
        }
    }

    fn collapse(&mut self, order: &[usize], rank: &[usize]) {
        let mut queue: BTreeSet<(usize, usize)> = order.iter().map(|&c| (rank[c], c)).collect();
        while let Some((_, a)) = queue.pop_first() {
            if !self.alive[a] || self.cof[a].len() != 1 {
                continue;
            }
            let b = *self.cof[a].iter().next().unwrap();
            let touched: Vec<usize> = self.d[a].iter().chain(self.d[b].iter()).map(|(r, _)| r).collect();
            self.eliminate(a, b);
            for r in touched {
                if self.alive[r] {
                    queue.insert((rank[r], r));
                }
            }
        }
    }

    fn clear_remaining(&mut self, order: &[usize]) {
        for &b in order {
            if self.alive[b] {
                if let Some(a) = self.d[b].low() {
                    self.eliminate(a, b);
                }
            }
        }
    }
}

/// Builds a contraction of the sublevel complex at `t` (the whole complex for
/// `None`). Seed `0` processes cells in canonical order; other seeds shuffle
/// the order and so produce different matchings.
pub fn build_contraction(k: &FilteredComplex, t: Option<&Exact>, field: PrimeField, seed: u64) -> Contraction {
    let n = t.map_or(k.len(), |t| k.prefix_len(t));
    let boundary: Vec<SparseVec> = (0..n).map(|i| k.boundary_column(i, field)).collect();
    let dims: Vec<usize> = (0..n).map(|i| k.dim(i)).collect();
    let aw = (0..n)
        .map(|i| {
            let s = k.simplex(i);
            (0..=s.dim())
                .map(|j| {
                    let front = k.index_of(&s.front(j)).expect("closed complex");
                    let back = k.index_of(&s.back(j)).expect("closed complex");
                    (front, back)
                })
                .collect()
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    if seed != 0 {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut rank = vec![0; n];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }

    let mut el = Eliminator::new(boundary.clone(), field);
    el.collapse(&order, &rank);
    el.clear_remaining(&order);

    let mut h_cells: Vec<usize> = (0..n).filter(|&i| el.alive[i]).collect();
    h_cells.sort_by_key(|&i| (dims[i], i));
    let top = h_cells.last().map_or(0, |&c| dims[c] + 1);
    let mut h_dims = vec![0; top];
    for &c in &h_cells {
        h_dims[dims[c]] += 1;
    }
    let mut flat = vec![usize::MAX; n];
    for (i, &c) in h_cells.iter().enumerate() {
        flat[c] = i;
    }
    let pi = el
        .pi
        .iter()
        .map(|v| v.remap(|c| Some(flat[c]).filter(|&i| i != usize::MAX), field))
        .collect();
    let iota = h_cells.iter().map(|&c| el.iota[c].clone()).collect();
    Contraction {
        field,
        grade: t.cloned(),
        seed,
        dims,
        boundary,
        aw,
        h_cells,
        h_dims,
        pi,
        iota,
        phi: el.phi,
    }
}

impl Contraction {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn grade(&self) -> Option<&Exact> {
        self.grade.as_ref()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of chain-level cells.
    pub fn size(&self) -> usize {
        self.dims.len()
    }

    /// Homology dimensions per degree.
    pub fn h_dims(&self) -> &[usize] {
        &self.h_dims
    }

    pub fn h_len(&self) -> usize {
        self.h_cells.len()
    }

    /// Critical simplices carrying the homology basis, ordered by degree.
    pub fn critical_cells(&self) -> &[usize] {
        &self.h_cells
    }

    pub fn h_degree(&self, flat: usize) -> usize {
        self.dims[self.h_cells[flat]]
    }

    pub fn h_index(&self, flat: usize) -> HIndex {
        let degree = self.h_degree(flat);
        let offset: usize = self.h_dims[..degree].iter().sum();
        HIndex {
            degree,
            index: flat - offset,
        }
    }

    /// `π` of a chain given in simplex coordinates.
    pub fn project(&self, chain: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (s, c) in chain.iter() {
            out.add_scaled(&self.pi[s], c, self.field);
        }
        out
    }

    pub fn pi_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.h_len(), self.pi.clone(), self.field)
    }

    pub fn iota_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.size(), self.iota.clone(), self.field)
    }

    pub fn phi_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.size(), self.phi.clone(), self.field)
    }

    pub fn boundary_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.size(), self.boundary.clone(), self.field)
    }

    /// Checks `πι = id`, `πφ = 0`, `φι = 0`, `φφ = 0`, `φ∂ + ∂φ = ιπ - id`,
    /// and that `π`, `ι` are chain maps to the zero differential.
    pub fn verify(&self) -> Result<(), TransferError> {
        let f = self.field;
        let (d, p, i, h) = (self.boundary_matrix(), self.pi_matrix(), self.iota_matrix(), self.phi_matrix());
        let check = |ok: bool, name| if ok { Ok(()) } else { Err(TransferError::SideCondition(name)) };
        check(p.mul(&i) == SparseMatrix::identity(self.h_len(), f), "pi iota = id")?;
        check(p.mul(&h).is_zero(), "pi phi = 0")?;
        check(h.mul(&i).is_zero(), "phi iota = 0")?;
        check(h.mul(&h).is_zero(), "phi phi = 0")?;
        let lhs = h.mul(&d).add(&d.mul(&h));
        let rhs = i.mul(&p).sub(&SparseMatrix::identity(self.size(), f));
        check(lhs == rhs, "phi d + d phi = iota pi - id")?;
        check(d.mul(&i).is_zero(), "d iota = 0")?;
        check(p.mul(&d).is_zero(), "pi d = 0")
    }
}

/// A tensor in `H^{⊗n}`: words of flat homology indices with coefficients.
pub type TensorVec = BTreeMap<Vec<usize>, u32>;

fn tensor_add(acc: &mut TensorVec, word: Vec<usize>, c: u32, f: PrimeField) {
    if c == 0 {
        return;
    }
    let slot = acc.entry(word.clone()).or_insert(0);
    *slot = f.add(*slot, c);
    if *slot == 0 {
        acc.remove(&word);
    }
}

/// A minimal A∞-coalgebra on homology, with operations `Δ_2 ..= Δ_{n_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AInftyStructure {
    field: PrimeField,
    dims: Vec<usize>,
    n_max: usize,
    deltas: Vec<Vec<TensorVec>>,
    component_split: bool,
    reduced: bool,
    seed: u64,
}

struct TreeExpansion<'a> {
    c: &'a Contraction,
    positive_only: bool,
    t_memo: HashMap<(usize, usize), Rc<TensorVec>>,
    l_memo: HashMap<(usize, usize), Rc<TensorVec>>,
}

impl TreeExpansion<'_> {
    fn t(&mut self, k: usize, s: usize) -> Rc<TensorVec> {
        if let Some(v) = self.t_memo.get(&(k, s)) {
            return v.clone();
        }
        let f = self.c.field;
        let mut out = TensorVec::new();
        if k == 1 {
            for (h, x) in self.c.pi[s].iter() {
                if !self.positive_only || self.c.h_degree(h) > 0 {
                    out.insert(vec![h], x);
                }
            }
        } else {
            for &(u, w) in &self.c.aw[s] {
                for i in 1..k {
                    let lu = self.l(i, u);
                    if lu.is_empty() {
                        continue;
                    }
                    let lw = self.l(k - i, w);
                    for (wu, cu) in lu.iter() {
                        for (ww, cw) in lw.iter() {
                            let mut word = wu.clone();
                            word.extend_from_slice(ww);
                            tensor_add(&mut out, word, f.mul(*cu, *cw), f);
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.t_memo.insert((k, s), out.clone());
        out
    }

    fn l(&mut self, i: usize, u: usize) -> Rc<TensorVec> {
        if i == 1 {
            return self.t(1, u);
        }
        if let Some(v) = self.l_memo.get(&(i, u)) {
            return v.clone();
        }
        let f = self.c.field;
        let mut out = TensorVec::new();
        let phi_u = self.c.phi[u].clone();
        for (r, x) in phi_u.iter() {
            for (word, c) in self.t(i, r).iter() {
                tensor_add(&mut out, word.clone(), f.mul(x, *c), f);
            }
        }
        let out = Rc::new(out);
        self.l_memo.insert((i, u), out.clone());
        out
    }
}

/// Transfers the Alexander–Whitney diagonal along `c`, producing `Δ_2..Δ_{n_max}`.
pub fn transfer_delta(c: &Contraction, n_max: usize) -> Result<AInftyStructure, TransferError> {
    transfer_delta_with(c, n_max, false)
}

/// As [`transfer_delta`]; with `positive_only` every tensor word containing a
/// degree-zero factor is dropped during the expansion, which yields the
/// positive-degree projection directly.
pub fn transfer_delta_with(c: &Contraction, n_max: usize, positive_only: bool) -> Result<AInftyStructure, TransferError> {
    if n_max < 2 {
        return Err(TransferError::InvalidCap(n_max));
    }
    if n_max >= 3 && !c.field.is_f2() {
        return Err(TransferError::UnsupportedSigns {
            n: n_max,
            p: c.field.characteristic(),
        });
    }
    let f = c.field;
    let mut ex = TreeExpansion {
        c,
        positive_only,
        t_memo: HashMap::new(),
        l_memo: HashMap::new(),
    };
    let mut deltas = Vec::with_capacity(n_max - 1);
    for n in 2..=n_max {
        let mut per_gen = Vec::with_capacity(c.h_len());
        for g in 0..c.h_len() {
            let mut acc = TensorVec::new();
            if !(positive_only && c.h_degree(g) == 0) {
                for (s, x) in c.iota[g].iter() {
                    for (word, y) in ex.t(n, s).iter() {
                        tensor_add(&mut acc, word.clone(), f.mul(x, *y), f);
                    }
                }
            }
            per_gen.push(acc);
        }
        deltas.push(per_gen);
    }
    let structure = AInftyStructure {
        field: f,
        dims: c.h_dims.clone(),
        n_max,
        deltas,
        component_split: true,
        reduced: false,
        seed: c.seed,
    };
    Ok(if positive_only {
        structure.project_positive()
    } else {
        structure
    })
}

/// Outcome of the k-invariant computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KInvariant {
    /// The smallest `n` with `Δ_n ≠ 0` on reduced homology.
    Exactly(usize),
    /// All computed operations vanish; only a lower bound is certified.
    AtLeast(usize),
}

impl AInftyStructure {
    /// Builds a structure from explicit operation tables, `deltas[n - 2][g]`.
    pub fn from_parts(field: PrimeField, dims: Vec<usize>, deltas: Vec<Vec<TensorVec>>) -> AInftyStructure {
        let n_max = deltas.len() + 1;
        AInftyStructure {
            field,
            dims,
            n_max,
            deltas,
            component_split: false,
            reduced: false,
            seed: 0,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Minimal structures have no `Δ_1`; transferred ones are always minimal.
    pub fn is_minimal(&self) -> bool {
        true
    }

    pub fn degree_of(&self, flat: usize) -> usize {
        let mut acc = 0;
        for (d, &n) in self.dims.iter().enumerate() {
            acc += n;
            if flat < acc {
                return d;
            }
        }
        panic!("homology index {flat} out of range")
    }

    pub fn flat(&self, h: HIndex) -> usize {
        self.dims[..h.degree].iter().sum::<usize>() + h.index
    }

    pub fn h_index(&self, flat: usize) -> HIndex {
        let degree = self.degree_of(flat);
        HIndex {
            degree,
            index: flat - self.dims[..degree].iter().sum::<usize>(),
        }
    }

    /// `Δ_n` of the basis element with flat index `g`. `Δ_1` and arities
    /// beyond the cap are returned as zero.
    pub fn delta(&self, n: usize, g: usize) -> TensorVec {
        if n < 2 || n > self.n_max {
            return TensorVec::new();
        }
        self.deltas[n - 2][g].clone()
    }

    fn delta_ref(&self, n: usize, g: usize) -> Option<&TensorVec> {
        if n < 2 || n > self.n_max {
            None
        } else {
            Some(&self.deltas[n - 2][g])
        }
    }

    pub fn delta_is_zero(&self, n: usize) -> bool {
        n < 2 || n > self.n_max || self.deltas[n - 2].iter().all(BTreeMap::is_empty)
    }

    fn project_positive(&self) -> AInftyStructure {
        let d0 = self.dims.first().copied().unwrap_or(0);
        let f = self.field;
        let keep = |word: &Vec<usize>| word.iter().all(|&h| h >= d0);
        let deltas = self
            .deltas
            .iter()
            .map(|per_gen| {
                per_gen[d0.min(per_gen.len())..]
                    .iter()
                    .map(|t| {
                        let mut out = TensorVec::new();
                        for (w, &c) in t.iter().filter(|(w, _)| keep(w)) {
                            tensor_add(&mut out, w.iter().map(|h| h - d0).collect(), c, f);
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        let mut dims = self.dims.clone();
        if let Some(first) = dims.first_mut() {
            *first = 0;
        }
        AInftyStructure {
            field: f,
            dims,
            n_max: self.n_max,
            deltas,
            component_split: self.component_split,
            reduced: true,
            seed: self.seed,
        }
    }

    /// Restricts to positive-degree sources and projects onto tensor words
    /// whose factors all have positive degree.
    pub fn reduce_to_positive_degrees(&self) -> Result<AInftyStructure, TransferError> {
        if self.reduced {
            return Ok(self.clone());
        }
        if self.dims.first().copied().unwrap_or(0) > 1 && !self.component_split {
            return Err(TransferError::Disconnected);
        }
        Ok(self.project_positive())
    }

    /// Smallest `n` with `Δ_n ≠ 0` on reduced homology, or a lower bound.
    pub fn k_invariant(&self) -> KInvariant {
        let reduced = if self.reduced {
            self.clone()
        } else {
            self.project_positive()
        };
        (2..=self.n_max)
            .find(|&n| !reduced.delta_is_zero(n))
            .map_or(KInvariant::AtLeast(self.n_max + 1), KInvariant::Exactly)
    }

    /// Left-hand side of the Stasheff identity `SI(n)` on every basis element.
    /// Needs the operations up to arity `n - 1`.
    pub fn stasheff_residual(&self, n: usize) -> Result<Vec<TensorVec>, TransferError> {
        if n >= 3 && n - 1 > self.n_max {
            return Err(TransferError::BeyondCap {
                n,
                needed: n - 1,
                n_max: self.n_max,
            });
        }
        let f = self.field;
        let total = self.total_dim();
        let mut out = vec![TensorVec::new(); total];
        for (g, slot) in out.iter_mut().enumerate() {
            for i in 2..n {
                let m = n - i + 1;
                let Some(outer) = self.delta_ref(m, g) else { continue };
                for (word, &c) in outer {
                    for j in 0..=(n - i) {
                        let pos = n - i - j;
                        let koszul: usize = word[..pos].iter().map(|&h| self.degree_of(h)).sum::<usize>() * (i - 2);
                        let sign = f.sign(i + j + i * j + koszul);
                        let Some(inner) = self.delta_ref(i, word[pos]) else { continue };
                        for (w2, &c2) in inner {
                            let mut new_word = word[..pos].to_vec();
                            new_word.extend_from_slice(w2);
                            new_word.extend_from_slice(&word[pos + 1..]);
                            tensor_add(slot, new_word, f.mul(sign, f.mul(c, c2)), f);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> AInftyJson {
        let deltas = self
            .deltas
            .iter()
            .enumerate()
            .map(|(k, per_gen)| DeltaJson {
                n: k + 2,
                entries: per_gen
                    .iter()
                    .enumerate()
                    .flat_map(|(g, t)| {
                        t.iter().map(move |(w, &c)| (g, w, c))
                    })
                    .map(|(g, w, c)| {
                        let src = self.h_index(g);
                        DeltaEntry {
                            source: (src.degree, src.index),
                            target: w
                                .iter()
                                .map(|&h| {
                                    let t = self.h_index(h);
                                    (t.degree, t.index)
                                })
                                .collect(),
                            coeff: c,
                        }
                    })
                    .collect(),
            })
            .collect();
        AInftyJson {
            field: self.field.characteristic(),
            dims: self.dims.clone(),
            n_max: self.n_max,
            reduced: self.reduced,
            seed: self.seed,
            deltas,
        }
    }

    pub fn from_json(j: &AInftyJson) -> Result<AInftyStructure, String> {
        let field = PrimeField::new(j.field as u64).map_err(|e| e.to_string())?;
        let mut s = AInftyStructure {
            field,
            dims: j.dims.clone(),
            n_max: j.n_max,
            deltas: vec![vec![TensorVec::new(); j.dims.iter().sum()]; j.n_max.saturating_sub(1)],
            component_split: true,
            reduced: j.reduced,
            seed: j.seed,
        };
        for d in &j.deltas {
            if d.n < 2 || d.n > j.n_max {
                return Err(format!("arity {} outside 2..={}", d.n, j.n_max));
            }
            for e in &d.entries {
                let check = |(deg, idx): (usize, usize)| {
                    if deg < s.dims.len() && idx < s.dims[deg] {
                        Ok(s.flat(HIndex { degree: deg, index: idx }))
                    } else {
                        Err(format!("index ({deg}, {idx}) out of range"))
                    }
                };
                let g = check(e.source)?;
                let word = e.target.iter().map(|&t| check(t)).collect::<Result<Vec<_>, _>>()?;
                if word.len() != d.n {
                    return Err(format!("word of length {} in arity {}", word.len(), d.n));
                }
                tensor_add(&mut s.deltas[d.n - 2][g], word, e.coeff % field.characteristic(), field);
            }
        }
        Ok(s)
    }
}

/// JSON form of an [`AInftyStructure`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AInftyJson {
    pub field: u32,
    pub dims: Vec<usize>,
    pub n_max: usize,
    pub reduced: bool,
    pub seed: u64,
    pub deltas: Vec<DeltaJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaJson {
    pub n: usize,
    pub entries: Vec<DeltaEntry>,
}

/// One coefficient of `Δ_n`: source `(degree, index)`, target word of
/// `(degree, index)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub source: (usize, usize),
    pub target: Vec<(usize, usize)>,
    pub coeff: u32,
}
