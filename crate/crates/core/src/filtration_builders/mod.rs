//! Filtered complexes built from data: Vietoris–Rips and Čech filtrations of
//! point clouds, lower-star filtrations of vertex functions, and the
//! inference routine counting kernel bars over a certified window.

pub mod miniball;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::ainfty_persistence::{kappa_barcode, KappaError};
use crate::chain_core::{parse_rational, ComplexError, Exact, FilteredComplex, PrimeField, Simplex};
use crate::metrics::{self, MetricsError};
use crate::reduction::{Barcode, Extended};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("distance matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("distance matrix has a nonzero diagonal entry at {0}")]
    NonzeroDiagonal(usize),
    #[error("negative distance at ({0}, {1})")]
    NegativeDistance(usize, usize),
    #[error("triangle inequality fails for ({0}, {1}, {2})")]
    TriangleInequality(usize, usize, usize),
    #[error("the Čech filtration needs Euclidean coordinates")]
    NotEuclidean,
    #[error("vertex {0} has no function value")]
    MissingValue(u32),
    #[error("epsilon must be positive")]
    InvalidEpsilon,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Kappa(#[from] KappaError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Points in `ℝ^d` with rational coordinates, or a finite metric space given
/// by its distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum PointCloud {
    Euclidean(Vec<Vec<BigRational>>),
    Metric(Vec<Vec<Exact>>),
}

fn rows_of(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return None;
        }
        let fields = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
        Some((i + 1, fields))
    })
}

impl PointCloud {
    /// Parses one point (or one distance-matrix row) per line, fields
    /// separated by commas or whitespace; `#` starts a comment line.
    pub fn from_csv(text: &str, distance_matrix: bool) -> Result<PointCloud, BuildError> {
        let parse_err = |line, e: &dyn std::fmt::Display| BuildError::Parse {
            line,
            message: e.to_string(),
        };
        let cloud = if distance_matrix {
            let mut rows = Vec::new();
            for (line, fields) in rows_of(text) {
                let row: Result<Vec<Exact>, _> = fields.iter().map(|f| f.parse::<Exact>()).collect();
                rows.push(row.map_err(|e| parse_err(line, &e))?);
            }
            PointCloud::Metric(rows)
        } else {
            let mut rows = Vec::new();
            for (line, fields) in rows_of(text) {
                let row: Result<Vec<BigRational>, _> = fields.iter().map(|f| parse_rational(f)).collect();
                rows.push(row.map_err(|e| parse_err(line, &e))?);
            }
            PointCloud::Euclidean(rows)
        };
        cloud.validate()?;
        Ok(cloud)
    }

    pub fn len(&self) -> usize {
        match self {
            PointCloud::Euclidean(p) => p.len(),
            PointCloud::Metric(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks shapes, symmetry, the zero diagonal, and the triangle
    /// inequality on a deterministic sample of triples.
    pub fn validate(&self) -> Result<(), BuildError> {
        match self {
            PointCloud::Euclidean(points) => {
                let d = points.first().map_or(0, Vec::len);
                for (row, p) in points.iter().enumerate() {
                    if p.len() != d {
                        return Err(BuildError::Ragged {
                            row,
                            found: p.len(),
                            expected: d,
                        });
                    }
                }
                Ok(())
            }
            PointCloud::Metric(m) => {
                let n = m.len();
                for (row, r) in m.iter().enumerate() {
                    if r.len() != n {
                        return Err(BuildError::Ragged {
                            row,
                            found: r.len(),
                            expected: n,
                        });
                    }
                }
                for i in 0..n {
                    if !m[i][i].is_zero() {
                        return Err(BuildError::NonzeroDiagonal(i));
                    }
                    for j in (i + 1)..n {
                        if m[i][j] != m[j][i] {
                            return Err(BuildError::NotSymmetric(i, j));
                        }
                        if m[i][j].signum() == std::cmp::Ordering::Less {
                            return Err(BuildError::NegativeDistance(i, j));
                        }
                    }
                }
                let step = n.div_ceil(24).max(1);
                for i in (0..n).step_by(step) {
                    for j in 0..n {
                        for k in (0..n).step_by(step) {
                            if m[i][k] > &m[i][j] + &m[j][k] {
                                return Err(BuildError::TriangleInequality(i, j, k));
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Squared Euclidean distance, for coordinate clouds.
    pub fn squared_distance(&self, i: usize, j: usize) -> Option<BigRational> {
        match self {
            PointCloud::Euclidean(p) => Some(p[i].iter().zip(&p[j]).map(|(a, b)| (a - b) * (a - b)).sum()),
            PointCloud::Metric(_) => None,
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> Exact {
        match self {
            PointCloud::Euclidean(_) => {
                Exact::sqrt_of(&self.squared_distance(i, j).expect("euclidean")).expect("nonnegative")
            }
            PointCloud::Metric(d) => d[i][j].clone(),
        }
    }

    /// Hausdorff distance to another cloud of the same kind. Metric clouds
    /// are compared as subsets of one space only when they are the same
    /// matrix, so only coordinate clouds are supported.
    pub fn hausdorff(&self, other: &PointCloud) -> Result<Exact, BuildError> {
        match (self, other) {
            (PointCloud::Euclidean(p), PointCloud::Euclidean(q)) => Ok(metrics::hausdorff(p, q)?),
            _ => Err(BuildError::NotEuclidean),
        }
    }

    /// `n` rational points on the circle of radius `r` centered at `center`,
    /// placed at rational half-angle tangents close to even spacing.
    pub fn circle(n: usize, center: (BigRational, BigRational), r: BigRational) -> PointCloud {
        let points = (0..n)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                let (c, s) = rational_unit_point(theta);
                vec![&center.0 + &r * c, &center.1 + &r * s]
            })
            .collect();
        PointCloud::Euclidean(points)
    }
}

/// A rational point on the unit circle at angle close to `theta`, from the
/// parametrization `t ↦ ((1 − t²)/(1 + t²), 2t/(1 + t²))`.
fn rational_unit_point(theta: f64) -> (BigRational, BigRational) {
    let half = theta / 2.0;
    if (half - std::f64::consts::FRAC_PI_2).abs() < 1e-12 {
        return (BigRational::from_integer((-1).into()), BigRational::from_integer(0.into()));
    }
    let t = BigRational::new(((half.tan() * 1e6).round() as i64).into(), 1_000_000.into());
    let one = BigRational::from_integer(1.into());
    let t2 = &t * &t;
    let den = &one + &t2;
    ((&one - &t2) / &den, (&t + &t) / &den)
}

/// Which filtration a routine used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiltrationKind {
    Rips,
    Cech,
}

fn expand(
    n: usize,
    max_dim: usize,
    edge: impl Fn(usize, usize) -> Option<Exact>,
    higher: impl Fn(&[usize]) -> Option<Exact>,
) -> FilteredComplex {
    let mut entries: Vec<(Simplex, Exact)> = Vec::new();
    let edges: Vec<Vec<Option<Exact>>> = (0..n).map(|i| (0..n).map(|j| if i < j { edge(i, j) } else { None }).collect()).collect();
    let mut frontier: Vec<(Vec<usize>, Exact)> = (0..n).map(|i| (vec![i], Exact::zero())).collect();
    for dim in 0..=max_dim {
        let mut next = Vec::new();
        for (vs, value) in frontier {
            if dim < max_dim {
                let last = *vs.last().expect("nonempty");
                for w in (last + 1)..n {
                    if vs.iter().any(|&v| edges[v][w].is_none()) {
                        continue;
                    }
                    let mut ext = vs.clone();
                    ext.push(w);
                    let v = if dim == 0 {
                        edges[last][w].clone()
                    } else {
                        higher(&ext)
                    };
                    if let Some(v) = v {
                        next.push((ext, v));
                    }
                }
            }
            entries.push((Simplex::of(&vs.iter().map(|&v| v as u32).collect::<Vec<_>>()), value));
        }
        frontier = next;
    }
    FilteredComplex::new(entries).expect("clique expansions are monotone")
}

fn within(v: Exact, max_r: Option<&Exact>) -> Option<Exact> {
    match max_r {
        Some(r) if &v > r => None,
        _ => Some(v),
    }
}

/// Vietoris–Rips filtration: a simplex enters at half the largest pairwise
/// distance of its vertices. Simplices above `max_r` are omitted.
pub fn rips_filtration(p: &PointCloud, max_dim: usize, max_r: Option<&Exact>) -> FilteredComplex {
    let n = p.len();
    let half: Vec<Vec<Exact>> = (0..n).map(|i| (0..n).map(|j| p.distance(i, j).half()).collect()).collect();
    expand(
        n,
        max_dim,
        |i, j| within(half[i][j].clone(), max_r),
        |vs| {
            let v = vs
                .iter()
                .enumerate()
                .flat_map(|(a, &i)| vs[a + 1..].iter().map(move |&j| (i, j)))
                .map(|(i, j)| half[i][j].clone())
                .max()
                .expect("at least one edge");
            within(v, max_r)
        },
    )
}

/// Euclidean Čech filtration: a simplex enters at the radius of the
/// smallest ball enclosing its vertices.
pub fn cech_filtration(p: &PointCloud, max_dim: usize, max_r: Option<&Exact>) -> Result<FilteredComplex, BuildError> {
    let PointCloud::Euclidean(_) = p else {
        return Err(BuildError::NotEuclidean);
    };
    let n = p.len();
    let sq: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| p.squared_distance(i, j).expect("euclidean")).collect()).collect();
    let sqf = |i: usize, j: usize| sq[i][j].clone();
    let radius = |r2: BigRational| Exact::sqrt_of(&r2).expect("nonnegative");
    let quarter = BigRational::new(1.into(), 4.into());
    Ok(expand(
        n,
        max_dim,
        |i, j| within(radius(&sq[i][j] * &quarter), max_r),
        |vs| {
            let ball = miniball::miniball(vs, &sqf);
            debug_assert!(!ball.radius_sq.is_negative());
            within(radius(ball.radius_sq), max_r)
        },
    ))
}

/// Lower-star filtration: every simplex of the face closure of `simplices`
/// enters at the largest value of its vertices.
pub fn lower_star(simplices: &[Simplex], f: &BTreeMap<u32, Exact>) -> Result<FilteredComplex, BuildError> {
    let mut all: Vec<Simplex> = simplices.iter().flat_map(Simplex::faces).collect();
    all.sort();
    all.dedup();
    let mut entries = Vec::with_capacity(all.len());
    for s in all {
        let mut value: Option<Exact> = None;
        for v in s.vertices() {
            let x = f.get(v).ok_or(BuildError::MissingValue(*v))?;
            value = Some(value.map_or(x.clone(), |y| y.max(x.clone())));
        }
        entries.push((s, value.expect("simplices are nonempty")));
    }
    Ok(FilteredComplex::new(entries)?)
}

/// Outcome of [`infer`].
#[derive(Debug, Clone, Serialize)]
pub struct Inference {
    pub count: usize,
    /// The window `[ε, 3ε]` every counted interval contains.
    pub window: (Exact, Exact),
    pub n: usize,
    pub degree: usize,
    pub filtration: FiltrationKind,
    pub top_n_verified: bool,
    pub barcode: Barcode,
}

/// Counts intervals `[a, b)` of the kernel barcode with `a <= ε` and
/// `b > 3ε`. The filtration is truncated at `3ε` and dimension `p + 1`, so
/// classes alive at `3ε` appear as infinite bars. Coordinate clouds use the
/// Čech filtration; metric clouds fall back to Rips, which is flagged.
pub fn infer(cloud: &PointCloud, n: usize, p: usize, eps: &Exact, field: PrimeField) -> Result<Inference, BuildError> {
    if eps.signum() != std::cmp::Ordering::Greater {
        return Err(BuildError::InvalidEpsilon);
    }
    let top = eps.mul_rational(&BigRational::from_integer(3.into()));
    let (k, kind) = match cloud {
        PointCloud::Euclidean(_) => (cech_filtration(cloud, p + 1, Some(&top))?, FiltrationKind::Cech),
        PointCloud::Metric(_) => (rips_filtration(cloud, p + 1, Some(&top)), FiltrationKind::Rips),
    };
    let k = k.with_skeleton_cap(p + 1);
    let barcode = kappa_barcode(&k, field, n, p)?;
    let eps_ext = Extended::Finite(eps.clone());
    let top_ext = Extended::Finite(top.clone());
    let count = barcode.intervals.iter().filter(|i| i.birth <= eps_ext && i.death > top_ext).count();
    Ok(Inference {
        count,
        window: (eps.clone(), top),
        n,
        degree: p,
        filtration: kind,
        top_n_verified: barcode.top_n_verified.unwrap_or(true),
        barcode,
    })
}
