//! Bottleneck, interleaving, Hausdorff and sup distances, all exact.

use std::collections::{BTreeMap, VecDeque};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ainfty_persistence::{interval_decomposition, PersistenceModule};
use crate::chain_core::{Exact, SparseMatrix};
use crate::reduction::{Barcode, Extended, Interval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("Hausdorff distance of an empty point set")]
    EmptySet,
    #[error("point dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("functions are defined on different vertex sets")]
    CarrierMismatch,
    #[error("modules are over different fields")]
    FieldMismatch,
    #[error("interleaving search space has {0} candidates, above the limit")]
    SearchTooLarge(u128),
}

/// Off-diagonal points of a persistence diagram. The diagonal is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub intervals: Vec<Interval>,
}

impl PersistenceDiagram {
    pub fn new(mut intervals: Vec<Interval>) -> PersistenceDiagram {
        intervals.sort();
        PersistenceDiagram { intervals }
    }

    pub fn from_barcode(b: &Barcode) -> PersistenceDiagram {
        PersistenceDiagram::new(b.intervals.clone())
    }

    /// Parses barcode JSON (an object with `intervals`) or a bare array of
    /// pairs.
    pub fn from_json(s: &str) -> Result<PersistenceDiagram, serde_json::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Form {
            Object { intervals: Vec<Interval> },
            Bare(Vec<Interval>),
        }
        let form: Form = serde_json::from_str(s)?;
        Ok(PersistenceDiagram::new(match form {
            Form::Object { intervals } | Form::Bare(intervals) => intervals,
        }))
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

fn category(i: &Interval) -> (bool, bool) {
    (i.birth == Extended::NegInf, i.death == Extended::PosInf)
}

fn diff(a: &Extended, b: &Extended) -> Option<Exact> {
    match (a, b) {
        (Extended::Finite(x), Extended::Finite(y)) => Some((x - y).abs()),
        (x, y) if x == y => Some(Exact::zero()),
        _ => None,
    }
}

/// `ℓ∞` distance between two points; `None` for infinite distance.
pub fn point_cost(a: &Interval, b: &Interval) -> Option<Exact> {
    Some(diff(&a.birth, &b.birth)?.max(diff(&a.death, &b.death)?))
}

/// Cost of matching a point to the diagonal: half its length.
pub fn diagonal_cost(a: &Interval) -> Option<Exact> {
    a.length().map(|l| l.half())
}

/// Bottleneck distance, exact, `+∞` when infinite points cannot be matched.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Extended {
    let mut finite = (Vec::new(), Vec::new());
    let mut essential: BTreeMap<(bool, bool), (Vec<&Interval>, Vec<&Interval>)> = BTreeMap::new();
    for (side, d) in [(0, d1), (1, d2)] {
        for i in &d.intervals {
            let cat = category(i);
            if cat == (false, false) && i.birth.is_finite() {
                if side == 0 { finite.0.push(i) } else { finite.1.push(i) }
            } else {
                let e = essential.entry(cat).or_default();
                if side == 0 { e.0.push(i) } else { e.1.push(i) }
            }
        }
    }
    let mut best = Exact::zero();
    for (a, b) in essential.values_mut() {
        if a.len() != b.len() {
            return Extended::PosInf;
        }
        // One finite coordinate per category; sorted pairing is optimal.
        a.sort();
        b.sort();
        for (x, y) in a.iter().zip(b.iter()) {
            match point_cost(x, y) {
                Some(c) => best = best.max(c),
                None => return Extended::PosInf,
            }
        }
    }
    Extended::Finite(best.max(bottleneck_finite(&finite.0, &finite.1)))
}

pub fn bottleneck_barcodes(a: &Barcode, b: &Barcode) -> Extended {
    bottleneck(&PersistenceDiagram::from_barcode(a), &PersistenceDiagram::from_barcode(b))
}

fn bottleneck_finite(a: &[&Interval], b: &[&Interval]) -> Exact {
    let (n, m) = (a.len(), b.len());
    if n + m == 0 {
        return Exact::zero();
    }
    let cost: Vec<Vec<Exact>> = a
        .iter()
        .map(|x| b.iter().map(|y| point_cost(x, y).expect("finite points")).collect())
        .collect();
    let diag_a: Vec<Exact> = a.iter().map(|x| diagonal_cost(x).expect("finite")).collect();
    let diag_b: Vec<Exact> = b.iter().map(|y| diagonal_cost(y).expect("finite")).collect();

    let mut candidates: Vec<Exact> = cost.iter().flatten().cloned().collect();
    candidates.extend(diag_a.iter().cloned());
    candidates.extend(diag_b.iter().cloned());
    candidates.sort();
    candidates.dedup();

    // Left: a_0..a_n then diagonal copies of b. Right: b_0..b_m then
    // diagonal copies of a.
    let feasible = |eps: &Exact| -> bool {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + m];
        for i in 0..n {
            for j in 0..m {
                if &cost[i][j] <= eps {
                    adj[i].push(j);
                }
            }
            if &diag_a[i] <= eps {
                adj[i].push(m + i);
            }
        }
        for j in 0..m {
            if &diag_b[j] <= eps {
                adj[n + j].push(j);
            }
            adj[n + j].extend(m..m + n);
        }
        hopcroft_karp(&adj, n + m) == n + m
    };

    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    debug_assert!(feasible(&candidates[hi]));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo].clone()
}

/// Maximum bipartite matching size; `adj[u]` lists right vertices.
fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> usize {
    const NIL: usize = usize::MAX;
    let left = adj.len();
    let mut match_l = vec![NIL; left];
    let mut match_r = vec![NIL; right];
    let mut dist = vec![0usize; left];
    let mut size = 0;
    loop {
        let mut queue = VecDeque::new();
        let mut found = false;
        for u in 0..left {
            if match_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return size;
        }
        fn augment(
            u: usize,
            adj: &[Vec<usize>],
            match_l: &mut [usize],
            match_r: &mut [usize],
            dist: &mut [usize],
        ) -> bool {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == usize::MAX || (dist[w] == dist[u] + 1 && augment(w, adj, match_l, match_r, dist)) {
                    match_l[u] = v;
                    match_r[v] = u;
                    return true;
                }
            }
            dist[u] = usize::MAX;
            false
        }
        for u in 0..left {
            if match_l[u] == NIL && augment(u, adj, &mut match_l, &mut match_r, &mut dist) {
                size += 1;
            }
        }
    }
}

/// Interleaving distance of two modules, computed as the bottleneck
/// distance of their interval decompositions.
pub fn interleaving(m1: &PersistenceModule, m2: &PersistenceModule) -> Extended {
    bottleneck_barcodes(&interval_decomposition(m1), &interval_decomposition(m2))
}

/// Upper bound on the number of natural transformation candidates
/// enumerated by [`is_interleaved`].
pub const INTERLEAVING_SEARCH_LIMIT: u128 = 1 << 16;

struct Unknowns {
    offsets: Vec<usize>,
    shapes: Vec<(usize, usize)>,
    total: usize,
}

impl Unknowns {
    fn new(shapes: Vec<(usize, usize)>) -> Unknowns {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut total = 0;
        for &(r, c) in &shapes {
            offsets.push(total);
            total += r * c;
        }
        Unknowns { offsets, shapes, total }
    }

    fn var(&self, cell: usize, r: usize, c: usize) -> usize {
        self.offsets[cell] + r * self.shapes[cell].1 + c
    }

    fn matrix(&self, x: &[u32], cell: usize) -> Vec<Vec<u32>> {
        let (rows, cols) = self.shapes[cell];
        (0..rows).map(|r| (0..cols).map(|c| x[self.var(cell, r, c)]).collect()).collect()
    }
}

/// Whether an explicit `ε`-interleaving exists, by solving for natural
/// `f: V → W[ε]` and enumerating it over its solution space, then solving
/// the linear system for `g: W → V[ε]`.
pub fn is_interleaved(v: &PersistenceModule, w: &PersistenceModule, eps: &Exact) -> Result<bool, MetricsError> {
    if v.field() != w.field() {
        return Err(MetricsError::FieldMismatch);
    }
    let field = v.field();
    let p = field.characteristic() as u128;
    let two_eps = eps + eps;

    let mut cells: Vec<Exact> = Vec::new();
    for g in v.grades().iter().chain(w.grades()) {
        cells.push(g.clone());
        cells.push(g - eps);
        cells.push(g - &two_eps);
    }
    cells.sort();
    cells.dedup();
    let k = cells.len();
    let cell_of = |x: &Exact| cells.partition_point(|c| c <= x).checked_sub(1);

    let to_dense = |m: &SparseMatrix| m.to_dense();
    let fu = Unknowns::new(cells.iter().map(|c| (w.dim_at(&(c + eps)), v.dim_at(c))).collect());
    let gu = Unknowns::new(cells.iter().map(|c| (v.dim_at(&(c + eps)), w.dim_at(c))).collect());

    // Naturality rows: A(i→i+1 shifted) X_i − X_{i+1} B(i→i+1) = 0, where
    // X maps `src` at c to `dst` at c + ε.
    let naturality = |u: &Unknowns, src: &PersistenceModule, dst: &PersistenceModule| -> Vec<Vec<i64>> {
        let mut rows = Vec::new();
        for i in 0..k.saturating_sub(1) {
            let a = to_dense(&dst.map_between(&(&cells[i] + eps), &(&cells[i + 1] + eps)));
            let b = to_dense(&src.map_between(&cells[i], &cells[i + 1]));
            let (r1, c1) = u.shapes[i + 1];
            let inner_a = u.shapes[i].0;
            let inner_b = u.shapes[i].1;
            for r in 0..r1 {
                for c in 0..inner_b {
                    let mut row = vec![0i64; u.total];
                    for q in 0..inner_a {
                        row[u.var(i, q, c)] += a[r][q] as i64;
                    }
                    for q in 0..c1 {
                        row[u.var(i + 1, r, q)] -= b[q][c] as i64;
                    }
                    rows.push(row);
                }
            }
        }
        rows
    };

    let f_rows = naturality(&fu, v, w);
    let f_space = if fu.total == 0 {
        SparseMatrix::zeros(0, 0, field)
    } else if f_rows.is_empty() {
        SparseMatrix::identity(fu.total, field)
    } else {
        SparseMatrix::from_dense(&f_rows, fu.total, field).kernel()
    };
    let basis = f_space.cols();
    let count = p.checked_pow(basis as u32).unwrap_or(u128::MAX);
    if count > INTERLEAVING_SEARCH_LIMIT {
        return Err(MetricsError::SearchTooLarge(count));
    }
    let g_natural = naturality(&gu, w, v);

    for code in 0..count {
        let mut x = vec![0u32; fu.total];
        let mut rest = code;
        for j in 0..basis {
            let coef = (rest % p) as u32;
            rest /= p;
            for (idx, val) in f_space.column(j).iter() {
                x[idx] = field.add(x[idx], field.mul(coef, val));
            }
        }
        let mut rows = g_natural.clone();
        let mut rhs: Vec<i64> = vec![0; rows.len()];
        // g_{cell(c+ε)} f_c = V(c → c+2ε) and f_{cell(c+ε)} g_c = W(c → c+2ε).
        for i in 0..k {
            let Some(j) = cell_of(&(&cells[i] + eps)) else { continue };
            let target_v = to_dense(&v.map_between(&cells[i], &(&cells[i] + &two_eps)));
            let fi = fu.matrix(&x, i);
            let (gr, gc) = gu.shapes[j];
            for r in 0..gr {
                for c in 0..fu.shapes[i].1 {
                    let mut row = vec![0i64; gu.total];
                    for q in 0..gc {
                        row[gu.var(j, r, q)] += fi[q][c] as i64;
                    }
                    rows.push(row);
                    rhs.push(target_v[r][c] as i64);
                }
            }
            let target_w = to_dense(&w.map_between(&cells[i], &(&cells[i] + &two_eps)));
            let fj = fu.matrix(&x, j);
            let (_, gi_cols) = gu.shapes[i];
            let inner = gu.shapes[i].0;
            for r in 0..fu.shapes[j].0 {
                for c in 0..gi_cols {
                    let mut row = vec![0i64; gu.total];
                    for q in 0..inner {
                        row[gu.var(i, q, c)] += fj[r][q] as i64;
                    }
                    rows.push(row);
                    rhs.push(target_w[r][c] as i64);
                }
            }
        }
        if rows.is_empty() {
            return Ok(true);
        }
        let a = SparseMatrix::from_dense(&rows, gu.total, field);
        let b = SparseMatrix::from_dense(&rhs.iter().map(|&x| vec![x]).collect::<Vec<_>>(), 1, field);
        if a.solve(&b).is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn squared_distance(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| {
        let d = x - y;
        acc + &d * &d
    })
}

fn directed_squared(p: &[Vec<BigRational>], q: &[Vec<BigRational>]) -> BigRational {
    p.iter()
        .map(|x| q.iter().map(|y| squared_distance(x, y)).min().expect("nonempty"))
        .max()
        .expect("nonempty")
}

/// Euclidean Hausdorff distance between finite point sets.
pub fn hausdorff(p: &[Vec<BigRational>], q: &[Vec<BigRational>]) -> Result<Exact, MetricsError> {
    if p.is_empty() || q.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    let d = p[0].len();
    if let Some(bad) = p.iter().chain(q).find(|x| x.len() != d) {
        return Err(MetricsError::DimensionMismatch(d, bad.len()));
    }
    let sq = directed_squared(p, q).max(directed_squared(q, p));
    Ok(Exact::sqrt_of(&sq).expect("squared distances are nonnegative"))
}

/// Hausdorff distance of two subsets of a finite metric space, given as
/// index lists into a distance matrix.
pub fn hausdorff_in(dist: &[Vec<Exact>], p: &[usize], q: &[usize]) -> Result<Exact, MetricsError> {
    if p.is_empty() || q.is_empty() {
        return Err(MetricsError::EmptySet);
    }
    let directed = |a: &[usize], b: &[usize]| {
        a.iter()
            .map(|&i| b.iter().map(|&j| dist[i][j].clone()).min().expect("nonempty"))
            .max()
            .expect("nonempty")
    };
    Ok(directed(p, q).max(directed(q, p)))
}

/// `max_v |f(v) − g(v)|` for functions on the same vertex set.
pub fn sup_distance(f: &BTreeMap<u32, Exact>, g: &BTreeMap<u32, Exact>) -> Result<Exact, MetricsError> {
    if f.len() != g.len() || f.keys().zip(g.keys()).any(|(a, b)| a != b) {
        return Err(MetricsError::CarrierMismatch);
    }
    Ok(f.values().zip(g.values()).map(|(a, b)| (a - b).abs()).max().unwrap_or_else(Exact::zero))
}
