//! Sparse vectors and column-major sparse matrices over a prime field.

use std::fmt;

use super::field::PrimeField;

/// A sparse vector: `(index, value)` pairs sorted by index, no stored zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, u32)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, 1)],
        }
    }

    /// Builds from arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>, f: PrimeField) -> Self {
        let mut raw: Vec<(usize, u32)> = pairs.into_iter().collect();
        raw.sort_by_key(|e| e.0);
        let mut entries: Vec<(usize, u32)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            let v = v % f.characteristic();
            match entries.last_mut() {
                Some(last) if last.0 == i => last.1 = f.add(last.1, v),
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|e| e.1 != 0);
        SparseVec { entries }
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.entries.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> u32 {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1,
            Err(_) => 0,
        }
    }

    /// Largest index with a nonzero entry.
    pub fn low(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn low_entry(&self) -> Option<(usize, u32)> {
        self.entries.last().copied()
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec, c: u32, f: PrimeField) {
        if c == 0 || other.is_zero() {
            return;
        }
        let a = &self.entries;
        let b = &other.entries;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0, f.mul(c, b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let v = f.add(a[i].1, f.mul(c, b[j].1));
                    if v != 0 {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(k, v)| (k, f.mul(c, v))));
        self.entries = out;
    }

    pub fn scaled(&self, c: u32, f: PrimeField) -> SparseVec {
        if c % f.characteristic() == 0 {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|&(i, v)| (i, f.mul(c, v))).collect(),
        }
    }

    /// Sets entry `i` to `v` (removing it when `v == 0`).
    pub fn set(&mut self, i: usize, v: u32) {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => {
                if v == 0 {
                    self.entries.remove(k);
                } else {
                    self.entries[k].1 = v;
                }
            }
            Err(k) => {
                if v != 0 {
                    self.entries.insert(k, (i, v));
                }
            }
        }
    }

    pub fn retain(&mut self, mut keep: impl FnMut(usize) -> bool) {
        self.entries.retain(|e| keep(e.0));
    }

    /// Reindexes through `map`, dropping entries mapped to `None`.
    pub fn remap(&self, map: impl Fn(usize) -> Option<usize>, f: PrimeField) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().filter_map(|&(i, v)| map(i).map(|j| (j, v))), f)
    }

    pub fn dot(&self, other: &SparseVec, f: PrimeField) -> u32 {
        let mut acc = 0;
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = f.add(acc, f.mul(a[i].1, b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// Column-major sparse matrix over `F_p`.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    field: PrimeField,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize, field: PrimeField) -> Self {
        SparseMatrix {
            rows,
            field,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize, field: PrimeField) -> Self {
        SparseMatrix {
            rows: n,
            field,
            columns: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>, field: PrimeField) -> Self {
        debug_assert!(columns.iter().all(|c| c.low().is_none_or(|l| l < rows)));
        SparseMatrix {
            rows,
            field,
            columns,
        }
    }

    /// Dense constructor, row-major; values are reduced mod p.
    pub fn from_dense(data: &[Vec<i64>], cols: usize, field: PrimeField) -> Self {
        let rows = data.len();
        let columns = (0..cols)
            .map(|j| {
                SparseVec::from_pairs(
                    (0..rows).map(|i| (i, field.from_i64(data[i][j]))),
                    field,
                )
            })
            .collect();
        SparseMatrix {
            rows,
            field,
            columns,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0; self.cols()]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                out[i][j] = v;
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.columns[j].get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVec::nnz).sum()
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            out.add_scaled(&self.columns[j], c, self.field);
        }
        out
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), rhs.rows, "dimension mismatch in product");
        assert_eq!(self.field, rhs.field, "field mismatch in product");
        SparseMatrix {
            rows: self.rows,
            field: self.field,
            columns: rhs.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    fn combine(&self, rhs: &SparseMatrix, c: u32) -> SparseMatrix {
        assert_eq!((self.rows, self.cols()), (rhs.rows, rhs.cols()), "shape mismatch");
        let mut out = self.clone();
        for (a, b) in out.columns.iter_mut().zip(&rhs.columns) {
            a.add_scaled(b, c, self.field);
        }
        out
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.combine(rhs, 1)
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.combine(rhs, self.field.neg(1))
    }

    pub fn scale(&self, c: u32) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            field: self.field,
            columns: self.columns.iter().map(|v| v.scaled(c, self.field)).collect(),
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<Vec<(usize, u32)>> = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                cols[i].push((j, v));
            }
        }
        SparseMatrix {
            rows: self.cols(),
            field: self.field,
            columns: cols.into_iter().map(|e| SparseVec { entries: e }).collect(),
        }
    }

    /// Selects a subset of columns.
    pub fn select_columns(&self, idx: &[usize]) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            field: self.field,
            columns: idx.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }

    /// Leading `r x c` submatrix.
    pub fn leading(&self, r: usize, c: usize) -> SparseMatrix {
        SparseMatrix {
            rows: r,
            field: self.field,
            columns: self.columns[..c]
                .iter()
                .map(|v| {
                    let mut v = v.clone();
                    v.retain(|i| i < r);
                    v
                })
                .collect(),
        }
    }

    /// Column echelon form `R = self * V` with distinct lows; returns `(R, V)`.
    pub fn column_reduce(&self) -> (Vec<SparseVec>, Vec<SparseVec>) {
        let f = self.field;
        let mut r = self.columns.clone();
        let mut v: Vec<SparseVec> = (0..self.cols()).map(SparseVec::unit).collect();
        let mut pivot: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        for j in 0..r.len() {
            while let Some((l, x)) = r[j].low_entry() {
                let Some(&k) = pivot.get(&l) else {
                    pivot.insert(l, j);
                    break;
                };
                let c = f.neg(f.div(x, r[k].get(l)));
                let (rk, vk) = (r[k].clone(), v[k].clone());
                r[j].add_scaled(&rk, c, f);
                v[j].add_scaled(&vk, c, f);
            }
        }
        (r, v)
    }

    pub fn rank(&self) -> usize {
        self.column_reduce().0.iter().filter(|c| !c.is_zero()).count()
    }

    /// Basis of the null space, as the columns of a matrix.
    pub fn kernel(&self) -> SparseMatrix {
        let (r, v) = self.column_reduce();
        let columns = r
            .iter()
            .zip(v)
            .filter(|(rc, _)| rc.is_zero())
            .map(|(_, vc)| vc)
            .collect();
        SparseMatrix {
            rows: self.cols(),
            field: self.field,
            columns,
        }
    }

    /// Solves `self * X = B` for `X` when every column of `B` lies in the
    /// column space. Returns `None` otherwise.
    pub fn solve(&self, b: &SparseMatrix) -> Option<SparseMatrix> {
        assert_eq!(self.rows, b.rows, "row mismatch in solve");
        let f = self.field;
        let (r, v) = self.column_reduce();
        let pivot: std::collections::HashMap<usize, usize> = r
            .iter()
            .enumerate()
            .filter_map(|(j, c)| c.low().map(|l| (l, j)))
            .collect();
        let mut columns = Vec::with_capacity(b.cols());
        for col in &b.columns {
            let mut rest = col.clone();
            let mut x = SparseVec::new();
            while let Some((l, val)) = rest.low_entry() {
                let &k = pivot.get(&l)?;
                let c = f.div(val, r[k].get(l));
                rest.add_scaled(&r[k], f.neg(c), f);
                x.add_scaled(&v[k], c, f);
            }
            columns.push(x);
        }
        Some(SparseMatrix {
            rows: self.cols(),
            field: f,
            columns,
        })
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} over {}", self.rows, self.cols(), self.field)?;
        for row in self.to_dense() {
            writeln!(f, "  {:?}", row)?;
        }
        Ok(())
    }
}
