//! Small named filtered complexes used in examples and tests.

use crate::chain_core::{Exact, FilteredComplex, Simplex};

fn closure_entries(tops: &[Simplex], value: impl Fn(&Simplex) -> Exact) -> Vec<(Simplex, Exact)> {
    let mut all: Vec<Simplex> = tops.iter().flat_map(Simplex::faces).collect();
    all.sort();
    all.dedup();
    all.into_iter().map(|s| {
        let v = value(&s);
        (s, v)
    }).collect()
}

/// Triangles of the 7-vertex triangulation of the torus.
pub fn torus_triangles() -> Vec<Simplex> {
    (0..7u32)
        .flat_map(|i| {
            [
                Simplex::of(&[i, (i + 1) % 7, (i + 3) % 7]),
                Simplex::of(&[i, (i + 2) % 7, (i + 3) % 7]),
            ]
        })
        .collect()
}

/// Triangles of a wedge of a 2-sphere and two circles: the boundary of a
/// tetrahedron on `0..4` and two hollow triangles attached at vertex 0. The
/// circles contribute only edges.
pub fn wedge_triangles() -> (Vec<Simplex>, Vec<Simplex>) {
    let sphere: Vec<Simplex> = Simplex::of(&[0, 1, 2, 3]).facets().collect();
    let circles = vec![
        Simplex::of(&[0, 4]),
        Simplex::of(&[0, 5]),
        Simplex::of(&[4, 5]),
        Simplex::of(&[0, 6]),
        Simplex::of(&[0, 7]),
        Simplex::of(&[6, 7]),
    ];
    (sphere, circles)
}

/// Cone off `base` with apex `apex` at value `at`, adding every cone simplex.
fn with_cone(mut entries: Vec<(Simplex, Exact)>, apex: u32, at: Exact) -> Vec<(Simplex, Exact)> {
    let cones: Vec<(Simplex, Exact)> = entries
        .iter()
        .map(|(s, _)| {
            let mut v = s.vertices().to_vec();
            v.push(apex);
            (Simplex::new(v).expect("apex is a new vertex"), at.clone())
        })
        .collect();
    entries.push((Simplex::vertex(apex), at));
    entries.extend(cones);
    entries
}

fn surface_then_cone(tops: &[Simplex], apex: u32, t0: i64, t1: i64) -> FilteredComplex {
    let entries = closure_entries(tops, |s| Exact::from_integer(if s.dim() >= 2 { t0 } else { 0 }));
    FilteredComplex::new(with_cone(entries, apex, Exact::from_integer(t1))).expect("fixture is a valid filtration")
}

/// Torus filtration: 1-skeleton at 0, triangles at 1, coned off at 3.
/// Degree-2 homology lives exactly on `[1, 3)`.
pub fn torus_filtration() -> FilteredComplex {
    surface_then_cone(&torus_triangles(), 7, 1, 3)
}

/// Wedge filtration with the same shape as [`torus_filtration`].
pub fn wedge_filtration() -> FilteredComplex {
    let (sphere, circles) = wedge_triangles();
    let mut tops = sphere;
    tops.extend(circles);
    surface_then_cone(&tops, 8, 1, 3)
}

/// Boundary of a triangle, all at value 0.
pub fn hollow_triangle() -> FilteredComplex {
    let tops: Vec<Simplex> = Simplex::of(&[0, 1, 2]).facets().collect();
    FilteredComplex::new(closure_entries(&tops, |_| Exact::zero())).expect("valid")
}

/// Boundary of a `dim + 1` simplex (a `dim`-sphere), all at value 0.
pub fn sphere(dim: usize) -> FilteredComplex {
    let top: Vec<u32> = (0..=(dim as u32 + 1)).collect();
    let tops: Vec<Simplex> = Simplex::of(&top).facets().collect();
    FilteredComplex::new(closure_entries(&tops, |_| Exact::zero())).expect("valid")
}

/// Unfiltered 7-vertex torus (all values 0).
pub fn torus() -> FilteredComplex {
    FilteredComplex::new(closure_entries(&torus_triangles(), |_| Exact::zero())).expect("valid")
}
