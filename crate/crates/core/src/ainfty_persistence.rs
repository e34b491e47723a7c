//! Persistence modules of kernels `κ_{n,p}(X_t) = Ker Δ_n|H̃_p(X_t)` over a
//! filtration, their interval decompositions, and the higher-operation
//! vanishing check required for functoriality when `n ≥ 3`.
//!
//! Kernels are taken on reduced homology: targets are projected onto tensor
//! words of positive-degree classes, and in degree 0 the kernel is the
//! kernel of the augmentation.
//!
//! The module is only evaluated at event grades: grades where a simplex of
//! dimension `1..=p+1` enters (`0..=1` for `p = 0`), or every grade when
//! `n ≥ 3`. `Δ_n` on `H_p` lands in tensor words of classes of degree
//! `1..p`, so between event grades every relevant homology group maps
//! isomorphically and the kernel module is constant.

use std::collections::HashMap;

use thiserror::Error;

use crate::chain_core::{Exact, FilteredComplex, PrimeField, SparseMatrix, SparseVec};
use crate::reduction::{reduce, Barcode, HomologyBasis, Interval, ReducedDecomposition};
use crate::transfer::{build_contraction, transfer_delta_with, AInftyStructure, Contraction, TransferError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KappaError {
    #[error("grade {grade}: Δ_{m} is nonzero on reduced H_{degree} (witness {witness}), outside the class where kernels are functorial")]
    TopNViolation {
        grade: String,
        m: usize,
        degree: usize,
        witness: String,
    },
    #[error("grade {grade}: the image of the previous kernel is not contained in the kernel")]
    ContainmentFailure { grade: String },
    #[error("degree {degree} is not reliable in a complex truncated at dimension {cap}")]
    UnreliableDegree { degree: usize, cap: usize },
    #[error("operation index must be at least 2, got {0}")]
    InvalidArity(usize),
    #[error(transparent)]
    Transfer(#[from] TransferError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("grades must be strictly increasing")]
    UnsortedGrades,
    #[error("map {index} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        index: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
}

/// A persistence module on finitely many grades `t_0 < ... < t_k`; the space
/// at `x` is that of the last grade `<= x` (zero before `t_0`).
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceModule {
    field: PrimeField,
    grades: Vec<Exact>,
    dims: Vec<usize>,
    maps: Vec<SparseMatrix>,
}

impl PersistenceModule {
    pub fn new(
        field: PrimeField,
        grades: Vec<Exact>,
        dims: Vec<usize>,
        maps: Vec<SparseMatrix>,
    ) -> Result<PersistenceModule, ModuleError> {
        if grades.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModuleError::UnsortedGrades);
        }
        assert_eq!(grades.len(), dims.len(), "one dimension per grade");
        assert_eq!(maps.len() + 1, grades.len().max(1), "one map per consecutive pair");
        for (i, m) in maps.iter().enumerate() {
            if m.rows() != dims[i + 1] || m.cols() != dims[i] {
                return Err(ModuleError::Shape {
                    index: i,
                    rows: m.rows(),
                    cols: m.cols(),
                    expected_rows: dims[i + 1],
                    expected_cols: dims[i],
                });
            }
        }
        Ok(PersistenceModule {
            field,
            grades,
            dims,
            maps,
        })
    }

    /// Direct sum of interval modules. Only finite births are supported.
    pub fn from_barcode(field: PrimeField, barcode: &Barcode) -> PersistenceModule {
        let mut grades: Vec<Exact> = barcode.endpoints();
        grades.sort();
        let alive: Vec<Vec<usize>> = grades
            .iter()
            .map(|t| (0..barcode.len()).filter(|&i| barcode.intervals[i].contains(t)).collect())
            .collect();
        let dims = alive.iter().map(Vec::len).collect();
        let maps = alive
            .windows(2)
            .map(|w| {
                let columns = w[0]
                    .iter()
                    .map(|i| match w[1].binary_search(i) {
                        Ok(pos) => SparseVec::unit(pos),
                        Err(_) => SparseVec::new(),
                    })
                    .collect();
                SparseMatrix::from_columns(w[1].len(), columns, field)
            })
            .collect();
        PersistenceModule::new(field, grades, dims, maps).expect("consistent by construction")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn grades(&self) -> &[Exact] {
        &self.grades
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[SparseMatrix] {
        &self.maps
    }

    /// Index of the last grade `<= x`.
    pub fn index_at(&self, x: &Exact) -> Option<usize> {
        self.grades.partition_point(|g| g <= x).checked_sub(1)
    }

    pub fn dim_at(&self, x: &Exact) -> usize {
        self.index_at(x).map_or(0, |i| self.dims[i])
    }

    /// Composite of the transition maps from grade `i` to grade `j >= i`.
    pub fn composite(&self, i: usize, j: usize) -> SparseMatrix {
        let mut acc = SparseMatrix::identity(self.dims[i], self.field);
        for m in &self.maps[i..j] {
            acc = m.mul(&acc);
        }
        acc
    }

    /// The structure map `V(x) -> V(y)` for `x <= y`.
    pub fn map_between(&self, x: &Exact, y: &Exact) -> SparseMatrix {
        match (self.index_at(x), self.index_at(y)) {
            (Some(i), Some(j)) => self.composite(i, j),
            (None, j) => SparseMatrix::zeros(j.map_or(0, |j| self.dims[j]), 0, self.field),
            (Some(_), None) => unreachable!("x <= y"),
        }
    }

    /// Ranks `r(i, j)` of all composites, `i <= j`.
    pub fn rank_table(&self) -> Vec<Vec<usize>> {
        let k = self.grades.len();
        let mut table = vec![vec![0; k]; k];
        for i in 0..k {
            let mut acc = SparseMatrix::identity(self.dims[i], self.field);
            table[i][i] = self.dims[i];
            for j in (i + 1)..k {
                acc = self.maps[j - 1].mul(&acc);
                table[i][j] = acc.rank();
            }
        }
        table
    }
}

/// Interval decomposition by pushing a barcode basis forward grade by grade.
///
/// Images of live representatives are reduced oldest first; a representative
/// whose image falls into the span of older ones dies (elder rule), and a
/// complement of the surviving images is born. The result has degree 0;
/// callers relabel.
pub fn interval_decomposition(m: &PersistenceModule) -> Barcode {
    let f = m.field;
    let mut intervals = Vec::new();
    // (birth grade index, representative), oldest first.
    let mut live: Vec<(usize, SparseVec)> = Vec::new();
    for i in 0..m.grades.len() {
        let mut pivots: HashMap<usize, SparseVec> = HashMap::new();
        let mut next: Vec<(usize, SparseVec)> = Vec::with_capacity(m.dims[i]);
        for (birth, rep) in live.drain(..) {
            let image = if i == 0 { rep } else { m.maps[i - 1].apply(&rep) };
            let reduced = reduce_against(image, &pivots, f);
            match reduced.low() {
                Some(l) => {
                    pivots.insert(l, reduced.clone());
                    next.push((birth, reduced));
                }
                None => intervals.push(Interval::finite(m.grades[birth].clone(), m.grades[i].clone())),
            }
        }
        for r in 0..m.dims[i] {
            let reduced = reduce_against(SparseVec::unit(r), &pivots, f);
            if let Some(l) = reduced.low() {
                pivots.insert(l, reduced.clone());
                next.push((i, reduced));
            }
        }
        live = next;
    }
    intervals.extend(live.into_iter().map(|(b, _)| Interval::infinite(m.grades[b].clone())));
    Barcode::new(f.characteristic(), 0, false, intervals)
}

fn reduce_against(mut v: SparseVec, pivots: &HashMap<usize, SparseVec>, f: PrimeField) -> SparseVec {
    while let Some((l, x)) = v.low_entry() {
        let Some(p) = pivots.get(&l) else { break };
        v.add_scaled(p, f.neg(f.div(x, p.get(l))), f);
    }
    v
}

/// Result of the vanishing check for `Δ_m`, `2 <= m < n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopN {
    Verified,
    Violation { m: usize, degree: usize, witness: String },
}

/// Kernel of `Δ_n` on reduced `H_p` at one grade.
#[derive(Debug, Clone)]
pub struct KappaAt {
    pub basis: HomologyBasis,
    /// Kernel basis as columns in the coordinates of `basis`.
    pub kernel: SparseMatrix,
    pub top_n: TopN,
}

impl KappaAt {
    pub fn dimension(&self) -> usize {
        self.kernel.cols()
    }
}

/// The kernel persistence module together with its per-grade data.
#[derive(Debug, Clone)]
pub struct KappaModule {
    pub module: PersistenceModule,
    pub n: usize,
    pub p: usize,
    pub kernel_bases: Vec<SparseMatrix>,
    pub homology_dims: Vec<usize>,
    pub top_n_verified: Vec<bool>,
    pub seed: u64,
}

impl KappaModule {
    pub fn barcode(&self) -> Barcode {
        let mut b = interval_decomposition(&self.module);
        b.degree = self.p;
        b.reduced = true;
        b.n = Some(self.n);
        b.top_n_verified = Some(self.top_n_verified.iter().all(|&v| v));
        b
    }
}

/// Evaluates kernels of `Δ_n` on one filtered complex, caching the
/// reduction.
pub struct KappaEngine<'a> {
    k: &'a FilteredComplex,
    field: PrimeField,
    seed: u64,
    red: ReducedDecomposition,
}

fn word_exists(dims: &[usize], total: usize, parts: usize) -> bool {
    // Whether `total` splits into `parts` degrees >= 1 with nonzero homology.
    let mut reach = vec![vec![false; total + 1]; parts + 1];
    reach[0][0] = true;
    for used in 0..parts {
        for s in 0..=total {
            if !reach[used][s] {
                continue;
            }
            for (q, &d) in dims.iter().enumerate().skip(1) {
                if d > 0 && s + q <= total {
                    reach[used + 1][s + q] = true;
                }
            }
        }
    }
    reach[parts][total]
}

impl<'a> KappaEngine<'a> {
    pub fn new(k: &'a FilteredComplex, field: PrimeField, seed: u64) -> KappaEngine<'a> {
        KappaEngine {
            k,
            field,
            seed,
            red: reduce(k, field),
        }
    }

    pub fn reduction(&self) -> &ReducedDecomposition {
        &self.red
    }

    fn homology_dims(&self, prefix: usize, top: usize) -> Vec<usize> {
        let mut dims = vec![0; top + 1];
        for i in 0..prefix {
            let d = self.k.dim(i);
            if d <= top && self.red.is_positive(i) && self.red.killer(i).is_none_or(|x| x >= prefix) {
                dims[d] += 1;
            }
        }
        dims
    }

    fn structure_at(&self, t: &Exact, n: usize) -> Result<(Contraction, AInftyStructure), KappaError> {
        let c = build_contraction(self.k, Some(t), self.field, self.seed);
        let a = transfer_delta_with(&c, n, true)?;
        Ok((c, a))
    }

    /// Kernel of `Δ_n` restricted to reduced `H_p` at grade `t`.
    pub fn kappa_at(&self, t: &Exact, n: usize, p: usize) -> Result<KappaAt, KappaError> {
        if n < 2 {
            return Err(KappaError::InvalidArity(n));
        }
        if let Some(cap) = self.k.skeleton_cap() {
            if p >= cap {
                return Err(KappaError::UnreliableDegree { degree: p, cap });
            }
        }
        let f = self.field;
        let prefix = self.k.prefix_len(t);
        let basis = self.red.basis_at_prefix(t.clone(), prefix, p);
        let reliable_top = self.k.skeleton_cap().map_or(self.k.max_dim().unwrap_or(0), |c| c.saturating_sub(1));
        let hdims = self.homology_dims(prefix, reliable_top.max(p));

        let needs_top_n = n >= 3
            && (2..n).any(|m| (1..=reliable_top).any(|q| hdims[q] > 0 && word_exists(&hdims, q + m - 2, m)));
        let needs_kernel = p >= 1 && basis.dimension() > 0 && word_exists(&hdims, p + n - 2, n);

        let structure = if needs_top_n || needs_kernel {
            Some(self.structure_at(t, n)?)
        } else {
            None
        };

        let mut top_n = TopN::Verified;
        if let (true, Some((c, a))) = (needs_top_n, &structure) {
            'search: for m in 2..n {
                for g in 0..a.total_dim() {
                    let degree = a.degree_of(g);
                    if degree > reliable_top {
                        continue;
                    }
                    if !a.delta(m, g).is_empty() {
                        let d0 = c.h_dims().first().copied().unwrap_or(0);
                        let cell = c.critical_cells()[g + d0];
                        let chain = c.iota_matrix().column(g + d0).clone();
                        let terms: Vec<String> = chain
                            .iter()
                            .map(|(s, x)| if x == 1 { self.k.simplex(s).to_string() } else { format!("{}{}", x, self.k.simplex(s)) })
                            .collect();
                        top_n = TopN::Violation {
                            m,
                            degree,
                            witness: format!("class of {} = {}", self.k.simplex(cell), terms.join(" + ")),
                        };
                        break 'search;
                    }
                }
            }
        }

        let dim = basis.dimension();
        let kernel = if dim == 0 {
            SparseMatrix::zeros(0, 0, f)
        } else if p == 0 {
            let aug = SparseMatrix::from_columns(1, vec![SparseVec::unit(0); dim], f);
            aug.kernel()
        } else if let (true, Some((c, a))) = (needs_kernel, &structure) {
            let d0 = c.h_dims().first().copied().unwrap_or(0);
            let mut rows: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut columns = Vec::with_capacity(dim);
            for z in &basis.cycles {
                let mut col: Vec<(usize, u32)> = Vec::new();
                for (h, x) in c.project(z).iter() {
                    debug_assert_eq!(c.h_degree(h), p);
                    for (word, y) in a.delta(n, h - d0) {
                        let next = rows.len();
                        let r = *rows.entry(word).or_insert(next);
                        col.push((r, f.mul(x, y)));
                    }
                }
                columns.push(SparseVec::from_pairs(col, f));
            }
            SparseMatrix::from_columns(rows.len(), columns, f).kernel()
        } else {
            SparseMatrix::identity(dim, f)
        };
        Ok(KappaAt { basis, kernel, top_n })
    }

    /// Vanishing of reduced `Δ_m`, `2 <= m < n`, at grade `t`.
    pub fn check_top_n(&self, t: &Exact, n: usize) -> Result<TopN, KappaError> {
        if n <= 2 {
            return Ok(TopN::Verified);
        }
        Ok(self.kappa_at(t, n, 0)?.top_n)
    }

    fn event_grades(&self, n: usize, p: usize) -> Vec<Exact> {
        let (lo, hi) = if p == 0 { (0, 1) } else { (1, p + 1) };
        let mut out: Vec<Exact> = Vec::new();
        for (s, v) in self.k.entries() {
            if (n >= 3 || (lo..=hi).contains(&s.dim())) && out.last() != Some(v) {
                out.push(v.clone());
            }
        }
        out
    }

    /// The kernel persistence module over all event grades.
    pub fn kappa_module(&self, n: usize, p: usize) -> Result<KappaModule, KappaError> {
        let grades = self.event_grades(n, p);
        let mut at: Vec<KappaAt> = Vec::with_capacity(grades.len());
        for t in &grades {
            let k = self.kappa_at(t, n, p)?;
            if let TopN::Violation { m, degree, witness } = &k.top_n {
                return Err(KappaError::TopNViolation {
                    grade: t.to_string(),
                    m: *m,
                    degree: *degree,
                    witness: witness.clone(),
                });
            }
            at.push(k);
        }
        let mut maps = Vec::with_capacity(grades.len().saturating_sub(1));
        for w in at.windows(2) {
            let induced = self.red.induced_map(&w[0].basis, &w[1].basis);
            let image = induced.mul(&w[0].kernel);
            let transition = w[1].kernel.solve(&image).ok_or_else(|| KappaError::ContainmentFailure {
                grade: w[1].basis.grade.to_string(),
            })?;
            maps.push(transition);
        }
        let dims = at.iter().map(KappaAt::dimension).collect();
        let top_n_verified = vec![true; grades.len()];
        let module = PersistenceModule::new(self.field, grades, dims, maps).expect("shapes agree");
        Ok(KappaModule {
            module,
            n,
            p,
            homology_dims: at.iter().map(|k| k.basis.dimension()).collect(),
            kernel_bases: at.into_iter().map(|k| k.kernel).collect(),
            top_n_verified,
            seed: self.seed,
        })
    }
}

/// Kernel of `Δ_n` on reduced `H_p` at grade `t`.
pub fn kappa_at(k: &FilteredComplex, field: PrimeField, t: &Exact, n: usize, p: usize) -> Result<KappaAt, KappaError> {
    KappaEngine::new(k, field, 0).kappa_at(t, n, p)
}

/// Vanishing of `Δ_m` on reduced homology for `2 <= m < n` at grade `t`.
pub fn check_top_n(k: &FilteredComplex, field: PrimeField, t: &Exact, n: usize) -> Result<TopN, KappaError> {
    KappaEngine::new(k, field, 0).check_top_n(t, n)
}

/// The `κ_{n,p}` persistence module of a filtration.
pub fn kappa_module(k: &FilteredComplex, field: PrimeField, n: usize, p: usize) -> Result<KappaModule, KappaError> {
    KappaEngine::new(k, field, 0).kappa_module(n, p)
}

/// The `Δ_{n,p}`-barcode of a filtration.
pub fn kappa_barcode(k: &FilteredComplex, field: PrimeField, n: usize, p: usize) -> Result<Barcode, KappaError> {
    Ok(kappa_module(k, field, n, p)?.barcode())
}

/// Critical values of a kernel module and the feature size (smallest
/// positive critical value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalValues {
    pub values: Vec<Exact>,
    pub feature_size: Option<Exact>,
}

/// Grades where the kernel module fails to be locally an isomorphism, with
/// the module taken to be zero before its first grade.
pub fn delta_critical_values(m: &KappaModule) -> CriticalValues {
    let values = m.barcode().endpoints();
    let feature_size = values.iter().find(|v| v.signum() == std::cmp::Ordering::Greater).cloned();
    CriticalValues { values, feature_size }
}
