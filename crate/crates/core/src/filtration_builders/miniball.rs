//! Smallest enclosing balls from squared pairwise distances.
//!
//! A ball is kept as barycentric weights of its center over a support set;
//! every predicate only needs squared distances, so everything stays in
//! exact rationals in any ambient dimension.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Ball whose center is `Σ weights[i] · p[support[i]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub support: Vec<usize>,
    pub weights: Vec<BigRational>,
    pub radius_sq: BigRational,
}

impl Ball {
    /// Squared distance from the center to point `x`.
    pub fn distance_sq(&self, x: usize, sq: &impl Fn(usize, usize) -> BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, &a) in self.support.iter().enumerate() {
            acc += &self.weights[i] * sq(x, a);
            for (j, &b) in self.support.iter().enumerate().skip(i + 1) {
                acc -= &self.weights[i] * &self.weights[j] * sq(a, b);
            }
        }
        acc
    }

    pub fn contains(&self, x: usize, sq: &impl Fn(usize, usize) -> BigRational) -> bool {
        self.distance_sq(x, sq) <= self.radius_sq
    }
}

/// Solves `a x = b` by Gaussian elimination; `None` when singular.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[col][col];
                for c in col..n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &factor * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// The smallest ball with every point of `support` on its boundary, centered
/// in their affine hull. `None` for affinely dependent supports.
pub fn circumball(support: &[usize], sq: &impl Fn(usize, usize) -> BigRational) -> Option<Ball> {
    let Some((&p0, rest)) = support.split_first() else {
        return None;
    };
    let k = rest.len();
    let gram: Vec<Vec<BigRational>> = rest
        .iter()
        .map(|&i| {
            rest.iter()
                .map(|&j| (sq(p0, i) + sq(p0, j) - sq(i, j)) / BigRational::from_integer(2.into()))
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> = (0..k).map(|i| &gram[i][i] / BigRational::from_integer(2.into())).collect();
    let lambda = solve(gram.clone(), rhs)?;
    let mut radius_sq = BigRational::zero();
    for i in 0..k {
        for j in 0..k {
            radius_sq += &lambda[i] * &gram[i][j] * &lambda[j];
        }
    }
    let mut weights = vec![BigRational::one() - lambda.iter().fold(BigRational::zero(), |a, x| a + x)];
    weights.extend(lambda);
    Some(Ball {
        support: support.to_vec(),
        weights,
        radius_sq,
    })
}

fn welzl(points: &[usize], boundary: &mut Vec<usize>, sq: &impl Fn(usize, usize) -> BigRational) -> Option<Option<Ball>> {
    let Some((&p, rest)) = points.split_last() else {
        return if boundary.is_empty() {
            Some(None)
        } else {
            circumball(boundary, sq).map(Some)
        };
    };
    if let Some(ball) = welzl(rest, boundary, sq)? {
        if ball.contains(p, sq) {
            return Some(Some(ball));
        }
    }
    boundary.push(p);
    let out = welzl(rest, boundary, sq);
    boundary.pop();
    out
}

/// Every subset's circumball, keeping the smallest that encloses all points.
pub fn miniball_exhaustive(points: &[usize], sq: &impl Fn(usize, usize) -> BigRational) -> Ball {
    let mut best: Option<Ball> = None;
    for mask in 1u64..(1u64 << points.len()) {
        let support: Vec<usize> = (0..points.len()).filter(|i| mask >> i & 1 == 1).map(|i| points[i]).collect();
        if let Some(ball) = circumball(&support, sq) {
            let smaller = best.as_ref().is_none_or(|b| ball.radius_sq < b.radius_sq);
            if smaller && !ball.radius_sq.is_negative() && points.iter().all(|&x| ball.contains(x, sq)) {
                best = Some(ball);
            }
        }
    }
    best.expect("a single point is always a ball")
}

/// Smallest enclosing ball of a nonempty point set (Welzl's recursion with
/// an exhaustive fallback for degenerate inputs).
pub fn miniball(points: &[usize], sq: &impl Fn(usize, usize) -> BigRational) -> Ball {
    assert!(!points.is_empty(), "miniball of an empty set");
    match welzl(points, &mut Vec::new(), sq) {
        Some(Some(ball)) => ball,
        _ => miniball_exhaustive(points, sq),
    }
}
