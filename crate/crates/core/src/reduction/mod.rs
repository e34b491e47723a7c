//! Persistent homology by left-to-right column reduction of the filtered
//! boundary matrix, homology bases at every grade, and induced maps.

mod barcode;

pub use barcode::{Barcode, Extended, Interval};

use crate::chain_core::{Chain, Exact, FilteredComplex, PrimeField, SparseMatrix, SparseVec};

/// `R = D V` with `V` unit upper triangular and distinct lows in `R`.
///
/// Because the reduction only adds earlier columns to later ones, the leading
/// block of the decomposition is the decomposition of every sublevel complex.
#[derive(Debug, Clone)]
pub struct ReducedDecomposition {
    field: PrimeField,
    dims: Vec<usize>,
    r: Vec<SparseVec>,
    v: Vec<SparseVec>,
    killer: Vec<Option<usize>>,
    pairs: Vec<(usize, usize)>,
    essentials: Vec<usize>,
}

/// Reduces the boundary matrix of the whole complex.
pub fn reduce(k: &FilteredComplex, field: PrimeField) -> ReducedDecomposition {
    let n = k.len();
    let mut r: Vec<SparseVec> = (0..n).map(|i| k.boundary_column(i, field)).collect();
    let mut v: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();
    let mut pivot_col: Vec<Option<usize>> = vec![None; n];
    let mut killer = vec![None; n];
    let mut pairs = Vec::new();
    for j in 0..n {
        while let Some((l, x)) = r[j].low_entry() {
            match pivot_col[l] {
                Some(c) => {
                    let coef = field.neg(field.div(x, r[c].get(l)));
                    let (rc, vc) = (r[c].clone(), v[c].clone());
                    r[j].add_scaled(&rc, coef, field);
                    v[j].add_scaled(&vc, coef, field);
                }
                None => {
                    pivot_col[l] = Some(j);
                    killer[l] = Some(j);
                    pairs.push((l, j));
                    break;
                }
            }
        }
    }
    let essentials = (0..n).filter(|&i| r[i].is_zero() && killer[i].is_none()).collect();
    ReducedDecomposition {
        field,
        dims: (0..n).map(|i| k.dim(i)).collect(),
        r,
        v,
        killer,
        pairs,
        essentials,
    }
}

/// Representatives of a basis of `H_p` of the sublevel complex at a grade.
#[derive(Debug, Clone)]
pub struct HomologyBasis {
    pub grade: Exact,
    pub degree: usize,
    /// Simplex indices of the positive simplices whose classes form the basis.
    pub generators: Vec<usize>,
    /// Cycle representatives, in simplex index coordinates.
    pub cycles: Vec<SparseVec>,
    prefix: usize,
}

impl HomologyBasis {
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    /// Representatives as chains of simplices.
    pub fn chains(&self, k: &FilteredComplex, field: PrimeField) -> Vec<Chain> {
        self.cycles
            .iter()
            .map(|z| {
                let mut c = Chain::zero(self.degree as isize, field);
                for (i, x) in z.iter() {
                    c.add_term(k.simplex(i).clone(), x);
                }
                c
            })
            .collect()
    }

    fn position(&self, simplex: usize) -> Option<usize> {
        self.generators.binary_search(&simplex).ok()
    }
}

impl ReducedDecomposition {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn r_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.len(), self.r.clone(), self.field)
    }

    pub fn v_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.len(), self.v.clone(), self.field)
    }

    /// `(birth, death)` simplex index pairs, including zero-length ones.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Simplices creating classes that never die.
    pub fn essentials(&self) -> &[usize] {
        &self.essentials
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.r[i].is_zero()
    }

    /// The simplex whose entrance kills the class created by `i`, if any.
    pub fn killer(&self, i: usize) -> Option<usize> {
        self.killer[i]
    }

    pub fn cycle(&self, i: usize) -> &SparseVec {
        &self.v[i]
    }

    pub fn reduced_column(&self, i: usize) -> &SparseVec {
        &self.r[i]
    }

    /// Basis of `H_p` on the first `prefix` simplices.
    pub fn basis_at_prefix(&self, grade: Exact, prefix: usize, p: usize) -> HomologyBasis {
        let generators: Vec<usize> = (0..prefix)
            .filter(|&i| self.dims[i] == p && self.r[i].is_zero() && self.killer[i].is_none_or(|d| d >= prefix))
            .collect();
        let cycles = generators.iter().map(|&i| self.v[i].clone()).collect();
        HomologyBasis {
            grade,
            degree: p,
            generators,
            cycles,
            prefix,
        }
    }

    /// Basis of `H_p` of the sublevel complex at `t`.
    pub fn homology_basis(&self, k: &FilteredComplex, t: &Exact, p: usize) -> HomologyBasis {
        self.basis_at_prefix(t.clone(), k.prefix_len(t), p)
    }

    /// Coordinates of the class of the cycle `z` in `basis`.
    ///
    /// Panics if `z` is not a cycle supported on the basis' sublevel complex.
    pub fn express_cycle(&self, z: &SparseVec, basis: &HomologyBasis) -> SparseVec {
        let f = self.field;
        let mut z = z.clone();
        let mut coords = Vec::new();
        while let Some((l, x)) = z.low_entry() {
            assert!(l < basis.prefix, "cycle leaves the sublevel complex");
            if let Some(pos) = basis.position(l) {
                coords.push((pos, x));
                let vl = &self.v[l];
                z.add_scaled(vl, f.neg(f.div(x, vl.get(l))), f);
            } else {
                let tau = self.killer[l]
                    .filter(|&t| t < basis.prefix)
                    .expect("chain is not a cycle");
                let rt = &self.r[tau];
                z.add_scaled(rt, f.neg(f.div(x, rt.get(l))), f);
            }
        }
        SparseVec::from_pairs(coords, f)
    }

    /// Matrix of `H_p(X_t) -> H_p(X_s)` in the bases at `t` and `s`.
    pub fn induced_map(&self, from: &HomologyBasis, to: &HomologyBasis) -> SparseMatrix {
        assert!(from.prefix <= to.prefix && from.degree == to.degree, "maps go forward in one degree");
        let columns = from.cycles.iter().map(|z| self.express_cycle(z, to)).collect();
        SparseMatrix::from_columns(to.dimension(), columns, self.field)
    }

    /// Barcode of `H_p`, dropping zero-length pairs. In reduced degree 0 one
    /// infinite bar with the earliest birth is removed.
    pub fn barcode(&self, k: &FilteredComplex, p: usize, reduced: bool) -> Barcode {
        let mut intervals: Vec<Interval> = self
            .pairs
            .iter()
            .filter(|&&(b, _)| self.dims[b] == p)
            .filter(|&&(b, d)| k.value(b) < k.value(d))
            .map(|&(b, d)| Interval::finite(k.value(b).clone(), k.value(d).clone()))
            .collect();
        let mut infinite: Vec<Interval> = self
            .essentials
            .iter()
            .filter(|&&b| self.dims[b] == p)
            .map(|&b| Interval::infinite(k.value(b).clone()))
            .collect();
        infinite.sort();
        if reduced && p == 0 && !infinite.is_empty() {
            infinite.remove(0);
        }
        intervals.extend(infinite);
        Barcode::new(self.field.characteristic(), p, reduced, intervals)
    }
}

/// Barcode of `H_p` of the sublevel filtration.
pub fn barcode(k: &FilteredComplex, field: PrimeField, p: usize, reduced: bool) -> Barcode {
    reduce(k, field).barcode(k, p, reduced)
}

/// Matrix of `H_p(X_t) -> H_p(X_s)` for `t <= s`.
pub fn induced_map(k: &FilteredComplex, field: PrimeField, p: usize, t: &Exact, s: &Exact) -> SparseMatrix {
    let red = reduce(k, field);
    let from = red.homology_basis(k, t, p);
    let to = red.homology_basis(k, s, p);
    red.induced_map(&from, &to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain_core::Simplex;

    fn e(v: i64) -> Exact {
        Exact::from_integer(v)
    }

    fn complex(items: &[(&[u32], i64)]) -> FilteredComplex {
        FilteredComplex::new(items.iter().map(|(s, v)| (Simplex::of(s), e(*v))).collect()).unwrap()
    }

    fn hollow(tri_value: Option<i64>) -> FilteredComplex {
        let mut items: Vec<(&[u32], i64)> =
            vec![(&[0], 0), (&[1], 0), (&[2], 0), (&[0, 1], 0), (&[0, 2], 0), (&[1, 2], 0)];
        if let Some(v) = tri_value {
            items.push((&[0, 1, 2], v));
        }
        complex(&items)
    }

    #[test]
    fn hollow_triangle_essentials() {
        let k = hollow(None);
        let red = reduce(&k, PrimeField::F2);
        let dims: Vec<usize> = red.essentials().iter().map(|&i| k.dim(i)).collect();
        assert_eq!(dims, vec![0, 1]);
        let d = k.boundary_matrix(None, PrimeField::F2);
        assert_eq!(d.mul(&red.v_matrix()), red.r_matrix());
    }

    #[test]
    fn filled_triangle_pairs_the_cycle() {
        let k = hollow(Some(1));
        let b = barcode(&k, PrimeField::F2, 1, false);
        assert_eq!(b.intervals, vec![Interval::finite(e(0), e(1))]);
    }

    #[test]
    fn empty_complex() {
        let k = FilteredComplex::empty();
        let red = reduce(&k, PrimeField::F2);
        assert!(red.is_empty() && red.pairs().is_empty());
        assert!(barcode(&k, PrimeField::F2, 0, true).is_empty());
    }

    #[test]
    fn merge_example() {
        let k = complex(&[(&[0], 0), (&[1], 0), (&[0, 1], 1)]);
        let b = barcode(&k, PrimeField::F2, 0, false);
        assert_eq!(b.intervals, vec![Interval::finite(e(0), e(1)), Interval::infinite(e(0))]);
        let reduced = barcode(&k, PrimeField::F2, 0, true);
        assert_eq!(reduced.intervals, vec![Interval::finite(e(0), e(1))]);
        let m = induced_map(&k, PrimeField::F2, 0, &e(0), &e(1));
        assert_eq!(m.to_dense(), vec![vec![1, 1]]);
        let id = induced_map(&k, PrimeField::F2, 0, &e(0), &e(0));
        assert_eq!(id, SparseMatrix::identity(2, PrimeField::F2));
    }

    #[test]
    fn odd_characteristic_merge_signs() {
        let f = PrimeField::new(5).unwrap();
        let k = complex(&[(&[0], 0), (&[1], 0), (&[0, 1], 1)]);
        let m = induced_map(&k, f, 0, &e(0), &e(1));
        assert_eq!(m.to_dense(), vec![vec![1, 1]]);
    }
}
