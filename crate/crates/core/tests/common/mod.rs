//! Random generators and brute-force oracles shared by integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ainfty_core::reduction::{Extended, Interval};
use ainfty_core::{ratio, Exact, FilteredComplex, PrimeField, Simplex};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn small_rational(rng: &mut impl Rng, max_num: i64, den: i64) -> BigRational {
    ratio(rng.gen_range(0..=max_num), den)
}

/// Random face-closed set of at most `max_simplices` simplices of dimension
/// at most `max_dim` on `n_vertices` vertices.
pub fn random_simplices(rng: &mut impl Rng, n_vertices: u32, max_dim: usize, max_simplices: usize) -> Vec<Simplex> {
    let mut all: BTreeSet<Simplex> = (0..n_vertices).map(Simplex::vertex).collect();
    let verts: Vec<u32> = (0..n_vertices).collect();
    for _ in 0..400 {
        let d = rng.gen_range(1..=max_dim.min(n_vertices as usize - 1));
        let mut vs: Vec<u32> = verts.choose_multiple(rng, d + 1).copied().collect();
        vs.sort_unstable();
        let s = Simplex::of(&vs);
        let faces = s.faces();
        let new: Vec<&Simplex> = faces.iter().filter(|f| !all.contains(f)).collect();
        if all.len() + new.len() > max_simplices {
            continue;
        }
        all.extend(faces);
    }
    all.into_iter().collect()
}

/// Random monotone values with small denominators.
pub fn random_filtration(rng: &mut impl Rng, simplices: &[Simplex]) -> FilteredComplex {
    let mut sorted = simplices.to_vec();
    sorted.sort_by_key(Simplex::dim);
    let mut values: BTreeMap<Simplex, Exact> = BTreeMap::new();
    for s in sorted {
        let own = Exact::from_rational(small_rational(rng, 12, 2));
        let v = s.facets().filter_map(|f| values.get(&f).cloned()).fold(own, Exact::max);
        values.insert(s, v);
    }
    FilteredComplex::new(values.into_iter().collect()).expect("monotone by construction")
}

pub fn random_complex(rng: &mut impl Rng, max_dim: usize, max_simplices: usize) -> FilteredComplex {
    let n = rng.gen_range(4..=9);
    let s = random_simplices(rng, n, max_dim, max_simplices);
    random_filtration(rng, &s)
}

/// Rank of a dense matrix over `F_p` by row reduction.
pub fn dense_rank(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] % p != 0) else { continue };
        m.swap(rank, piv);
        let inv = mod_pow(m[rank][c] % p, p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r][c] % p != 0 {
                let f = m[r][c] % p;
                for k in 0..cols {
                    m[r][k] = (m[r][k] + p * p - f * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn dense_mul(a: &[Vec<u64>], b: &[Vec<u64>], inner: usize, cols: usize, p: u64) -> Vec<Vec<u64>> {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j] % p).sum::<u64>() % p).collect())
        .collect()
}

/// Cost between two diagram points with the conventions for infinite
/// coordinates; `None` is infinite.
fn coord_gap(a: &Extended, b: &Extended) -> Option<Exact> {
    match (a.finite(), b.finite()) {
        (Some(x), Some(y)) => Some((x - y).abs()),
        _ if a == b => Some(Exact::zero()),
        _ => None,
    }
}

fn pair_cost(a: &Interval, b: &Interval) -> Option<Exact> {
    Some(coord_gap(&a.birth, &b.birth)?.max(coord_gap(&a.death, &b.death)?))
}

fn diag_cost(a: &Interval) -> Option<Exact> {
    Some((a.death.finite()? - a.birth.finite()?).half())
}

/// Exhaustive bottleneck: minimum over every partial matching, unmatched
/// points going to the diagonal.
pub fn brute_force_bottleneck(a: &[Interval], b: &[Interval]) -> Option<Exact> {
    fn go(i: usize, a: &[Interval], b: &[Interval], used: &mut Vec<bool>, acc: Option<Exact>, best: &mut Option<Option<Exact>>) {
        if i == a.len() {
            let mut total = acc;
            for (j, y) in b.iter().enumerate() {
                if !used[j] {
                    total = match (total, diag_cost(y)) {
                        (Some(t), Some(c)) => Some(t.max(c)),
                        _ => None,
                    };
                }
            }
            let better = match (&*best, &total) {
                (None, _) => true,
                (Some(None), Some(_)) => true,
                (Some(Some(x)), Some(y)) => y < x,
                _ => false,
            };
            if better {
                *best = Some(total);
            }
            return;
        }
        let with = |c: Option<Exact>| match (&acc, c) {
            (Some(t), Some(c)) => Some(t.clone().max(c)),
            _ => None,
        };
        go(i + 1, a, b, used, with(diag_cost(&a[i])), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, a, b, used, with(pair_cost(&a[i], &b[j])), best);
                used[j] = false;
            }
        }
    }
    let mut best = None;
    go(0, a, b, &mut vec![false; b.len()], Some(Exact::zero()), &mut best);
    best.expect("at least one matching")
}

pub fn field(p: u64) -> PrimeField {
    PrimeField::new(p).expect("prime")
}

/// Random filtration of the 7-vertex torus with some triangles dropped and a
/// few extra random simplices on up to three more vertices.
pub fn random_torus_complex(rng: &mut impl Rng, max_simplices: usize) -> FilteredComplex {
    let mut all: BTreeSet<Simplex> = BTreeSet::new();
    let keep = if rng.gen_bool(0.6) { 1.0 } else { 0.85 };
    for t in ainfty_core::fixtures::torus_triangles() {
        if rng.gen_bool(keep) {
            all.extend(t.faces());
        }
    }
    for v in 0..7 {
        all.insert(Simplex::vertex(v));
    }
    let extra = random_simplices(rng, 10, 3, 40);
    for s in extra {
        if all.len() >= max_simplices {
            break;
        }
        if rng.gen_bool(0.3) && s.faces().iter().all(|f| f.dim() == s.dim() || all.contains(f)) {
            all.insert(s);
        }
    }
    let simplices: Vec<Simplex> = all.into_iter().collect();
    random_filtration(rng, &simplices)
}

/// Basis of the null space of a dense matrix over `F_p`.
pub fn dense_kernel(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = mod_pow(a[r][c], p - 2, p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for k in 0..cols {
                    a[i][k] = (a[i][k] + p * p - f * a[r][k] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[i][fc]) % p;
            }
            v
        })
        .collect()
}

/// Dense boundary matrix from degree `p` to degree `p - 1` of the simplices
/// in `cells`, with rows and columns in the given order.
pub fn dense_boundary(cells: &[Simplex], p: usize, modulus: u64) -> (Vec<usize>, Vec<usize>, Vec<Vec<u64>>) {
    let rows: Vec<usize> = (0..cells.len()).filter(|&i| p > 0 && cells[i].dim() == p - 1).collect();
    let cols: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].dim() == p).collect();
    let mut m = vec![vec![0u64; cols.len()]; rows.len()];
    for (c, &j) in cols.iter().enumerate() {
        let vs = cells[j].vertices();
        for skip in 0..vs.len() {
            if vs.len() == 1 {
                break;
            }
            let face: Vec<u32> = vs.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
            let r = rows.iter().position(|&i| cells[i].vertices() == face.as_slice()).expect("closed");
            m[r][c] = if skip % 2 == 0 { 1 } else { modulus - 1 };
        }
    }
    (rows, cols, m)
}

/// Rank of `H_p(X_t) -> H_p(X_s)` from cycle and boundary spaces, `t <= s`.
pub fn homology_map_rank(k: &FilteredComplex, p: usize, t: &Exact, s: &Exact, modulus: u64) -> usize {
    let cells = k.simplices();
    let nt = k.prefix_len(t);
    let ns = k.prefix_len(s);
    let (_, cols_p, d_p) = dense_boundary(&cells[..nt], p, modulus);
    let cycles = dense_kernel(&d_p, cols_p.len(), modulus);
    let (_, cols_s, _) = dense_boundary(&cells[..ns], p, modulus);
    let (rows_up, _, d_up) = dense_boundary(&cells[..ns], p + 1, modulus);
    // Express everything in the p-simplices of X_s.
    let embed = |v: &[u64], from: &[usize]| -> Vec<u64> {
        let mut out = vec![0; cols_s.len()];
        for (a, &i) in from.iter().enumerate() {
            out[cols_s.iter().position(|&j| j == i).expect("sublevel")] = v[a];
        }
        out
    };
    let boundaries: Vec<Vec<u64>> = (0..d_up.first().map_or(0, Vec::len))
        .map(|c| embed(&d_up.iter().map(|row| row[c]).collect::<Vec<_>>(), &rows_up))
        .collect();
    let cyc: Vec<Vec<u64>> = cycles.iter().map(|z| embed(z, &cols_p)).collect();
    let rank_b = dense_rank(boundaries.clone(), modulus);
    let mut both = boundaries;
    both.extend(cyc);
    dense_rank(both, modulus) - rank_b
}
