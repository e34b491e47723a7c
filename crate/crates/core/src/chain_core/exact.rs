//! Exact real numbers of the form `c_1 sqrt(n_1) + ... + c_k sqrt(n_k)` with
//! rational `c_i` and positive integer radicands.
//!
//! Filtration values of Čech and Rips complexes over rational points are square
//! roots of rationals, and bottleneck distances are differences of such values.
//! Comparisons first try a floating-point filter and fall back to an exact sign
//! computation in the multiquadratic field spanned by a coprime base of the
//! radicands, so every comparison is decided exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse exact number from {input:?}: {reason}")]
pub struct ParseExactError {
    pub input: String,
    pub reason: &'static str,
}

#[derive(Debug, Clone)]
struct Term {
    radicand: BigUint,
    coef: BigRational,
}

/// An exact real number in `Q(sqrt(n_1), sqrt(n_2), ...)`.
///
/// Equality and ordering are semantic (decided by the sign of the difference),
/// so `Exact` deliberately does not implement `Hash`.
#[derive(Clone)]
pub struct Exact {
    terms: Vec<Term>,
    approx: f64,
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn is_perfect_square(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Writes `n = k^2 m`, pulling out perfect squares and small square factors.
fn split_square(n: &BigUint) -> (BigUint, BigUint) {
    if let Some(r) = is_perfect_square(n) {
        return (r, BigUint::one());
    }
    let mut k = BigUint::one();
    let mut m = n.clone();
    for &p in SMALL_PRIMES.iter() {
        let sq = BigUint::from(p * p);
        while (&m % &sq).is_zero() {
            m /= &sq;
            k *= p;
        }
    }
    if let Some(r) = is_perfect_square(&m) {
        return (k * r, BigUint::one());
    }
    (k, m)
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn biguint_to_f64(n: &BigUint) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

fn normalize(raw: Vec<Term>) -> Vec<Term> {
    let mut merged: BTreeMap<BigUint, BigRational> = BTreeMap::new();
    for t in raw {
        if t.coef.is_zero() || t.radicand.is_zero() {
            continue;
        }
        let (k, m) = split_square(&t.radicand);
        let coef = t.coef * BigRational::from_integer(BigInt::from(k));
        let slot = merged.entry(m).or_insert_with(BigRational::zero);
        *slot += coef;
    }
    merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(radicand, coef)| Term { radicand, coef })
        .collect()
}

fn approximate(terms: &[Term]) -> f64 {
    terms
        .iter()
        .map(|t| ratio_to_f64(&t.coef) * biguint_to_f64(&t.radicand).sqrt())
        .sum()
}

impl Exact {
    fn from_terms(raw: Vec<Term>) -> Exact {
        let terms = normalize(raw);
        let approx = approximate(&terms);
        Exact { terms, approx }
    }

    pub fn zero() -> Exact {
        Exact {
            terms: Vec::new(),
            approx: 0.0,
        }
    }

    pub fn one() -> Exact {
        Exact::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Exact {
        Exact::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `num / den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Exact {
        Exact::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Exact {
        Exact::from_terms(vec![Term {
            radicand: BigUint::one(),
            coef: q,
        }])
    }

    /// The nonnegative square root of a nonnegative rational. Returns `None`
    /// for negative input.
    pub fn sqrt_of(q: &BigRational) -> Option<Exact> {
        if q.is_negative() {
            return None;
        }
        if q.is_zero() {
            return Some(Exact::zero());
        }
        // sqrt(a/b) = sqrt(a b) / b
        let a = q.numer().to_biguint()?;
        let b = q.denom().to_biguint()?;
        let radicand = &a * &b;
        let coef = BigRational::new(BigInt::one(), BigInt::from(b));
        Some(Exact::from_terms(vec![Term { radicand, coef }]))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a rational, when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [t] if t.radicand.is_one() => Some(t.coef.clone()),
            _ => None,
        }
    }

    /// `Some(q)` when the value is `sqrt(q)` for a nonnegative rational `q`
    /// (including rationals `c >= 0`, which are `sqrt(c^2)`).
    pub fn as_sqrt_of_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [t] if !t.coef.is_negative() => {
                Some(&t.coef * &t.coef * BigRational::from_integer(BigInt::from(t.radicand.clone())))
            }
            _ => None,
        }
    }

    /// Floating-point approximation.
    pub fn to_f64(&self) -> f64 {
        self.approx
    }

    pub fn mul_rational(&self, q: &BigRational) -> Exact {
        Exact::from_terms(
            self.terms
                .iter()
                .map(|t| Term {
                    radicand: t.radicand.clone(),
                    coef: &t.coef * q,
                })
                .collect(),
        )
    }

    pub fn half(&self) -> Exact {
        self.mul_rational(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    pub fn abs(&self) -> Exact {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn max(self, other: Exact) -> Exact {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Exact) -> Exact {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Sign of the value, decided exactly.
    pub fn signum(&self) -> Ordering {
        match self.terms.as_slice() {
            [] => Ordering::Equal,
            [t] => t.coef.cmp(&BigRational::zero()),
            _ => {
                let mag: f64 = self
                    .terms
                    .iter()
                    .map(|t| (ratio_to_f64(&t.coef) * biguint_to_f64(&t.radicand).sqrt()).abs())
                    .sum();
                if self.approx.is_finite() && mag.is_finite() && mag > 1e-200 && self.approx.abs() > mag * 1e-9 {
                    return self.approx.partial_cmp(&0.0).unwrap();
                }
                exact_sign(&self.terms)
            }
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if let Some(q) = self.as_rational() {
            if q.is_integer() {
                return q.numer().to_string();
            }
        }
        format!("{:.*}", digits, self.approx)
    }
}

fn coprime_base(nums: &[BigUint]) -> Vec<BigUint> {
    let mut set: Vec<BigUint> = nums.iter().filter(|n| !n.is_one()).cloned().collect();
    set.sort();
    set.dedup();
    loop {
        let mut split = None;
        'outer: for i in 0..set.len() {
            for j in (i + 1)..set.len() {
                let g = set[i].gcd(&set[j]);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else { break };
        let a = set[i].clone();
        let b = set[j].clone();
        set.remove(j);
        set.remove(i);
        for x in [&a / &g, &b / &g, g] {
            if !x.is_one() {
                set.push(x);
            }
        }
        set.sort();
        set.dedup();
    }
    set
}

type TowerElem = BTreeMap<u64, BigRational>;

fn tower_mul(a: &TowerElem, b: &TowerElem, base: &[BigRational]) -> TowerElem {
    let mut out: TowerElem = BTreeMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut c = ca * cb;
            let common = ma & mb;
            for (i, q) in base.iter().enumerate() {
                if common >> i & 1 == 1 {
                    c *= q;
                }
            }
            let slot = out.entry(ma ^ mb).or_insert_with(BigRational::zero);
            *slot += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn tower_sign(elem: &TowerElem, level: usize, base: &[BigRational]) -> Ordering {
    if elem.is_empty() {
        return Ordering::Equal;
    }
    if level == 0 {
        return elem
            .get(&0)
            .map(|c| c.cmp(&BigRational::zero()))
            .unwrap_or(Ordering::Equal);
    }
    let bit = 1u64 << (level - 1);
    let mut a: TowerElem = BTreeMap::new();
    let mut b: TowerElem = BTreeMap::new();
    for (m, c) in elem {
        if m & bit != 0 {
            b.insert(m ^ bit, c.clone());
        } else {
            a.insert(*m, c.clone());
        }
    }
    if b.is_empty() {
        return tower_sign(&a, level - 1, base);
    }
    let sa = tower_sign(&a, level - 1, base);
    let sb = tower_sign(&b, level - 1, base);
    if sa == Ordering::Equal {
        return sb;
    }
    if sb == Ordering::Equal || sa == sb {
        return sa;
    }
    // A and B sqrt(q) have opposite signs: compare A^2 with q B^2.
    let q = &base[level - 1];
    let mut d = tower_mul(&a, &a, base);
    for (m, c) in tower_mul(&b, &b, base) {
        let slot = d.entry(m).or_insert_with(BigRational::zero);
        *slot -= c * q;
    }
    d.retain(|_, c| !c.is_zero());
    match tower_sign(&d, level - 1, base) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

fn exact_sign(terms: &[Term]) -> Ordering {
    let radicands: Vec<BigUint> = terms.iter().map(|t| t.radicand.clone()).collect();
    let base = coprime_base(&radicands);
    assert!(base.len() < 64, "too many independent radicands");
    let base_q: Vec<BigRational> = base
        .iter()
        .map(|q| BigRational::from_integer(BigInt::from(q.clone())))
        .collect();
    let mut elem: TowerElem = BTreeMap::new();
    for t in terms {
        let mut rest = t.radicand.clone();
        let mut mask = 0u64;
        let mut coef = t.coef.clone();
        for (i, q) in base.iter().enumerate() {
            let mut e = 0u32;
            while (&rest % q).is_zero() {
                rest /= q;
                e += 1;
            }
            for _ in 0..e / 2 {
                coef *= &base_q[i];
            }
            if e % 2 == 1 {
                mask |= 1 << i;
            }
        }
        debug_assert!(rest.is_one());
        let slot = elem.entry(mask).or_insert_with(BigRational::zero);
        *slot += coef;
    }
    elem.retain(|_, c| !c.is_zero());
    tower_sign(&elem, base.len(), &base_q)
}

impl Default for Exact {
    fn default() -> Self {
        Exact::zero()
    }
}

impl PartialEq for Exact {
    fn eq(&self, other: &Exact) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Exact {}

impl PartialOrd for Exact {
    fn partial_cmp(&self, other: &Exact) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exact {
    fn cmp(&self, other: &Exact) -> Ordering {
        let (a, b) = (self.approx, other.approx);
        if a.is_finite() && b.is_finite() {
            let scale = a.abs().max(b.abs());
            if scale > 1e-200 && (a - b).abs() > scale * 1e-9 {
                return a.partial_cmp(&b).unwrap();
            }
        }
        if let ([x], [y]) = (self.terms.as_slice(), other.terms.as_slice()) {
            if x.radicand == y.radicand {
                return x.coef.cmp(&y.coef);
            }
        }
        (self - other).signum()
    }
}

impl Add for &Exact {
    type Output = Exact;
    fn add(self, rhs: &Exact) -> Exact {
        let mut raw = self.terms.clone();
        raw.extend(rhs.terms.iter().cloned());
        Exact::from_terms(raw)
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        &self + &rhs
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        -&self
    }
}

impl Neg for &Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    radicand: t.radicand.clone(),
                    coef: -t.coef.clone(),
                })
                .collect(),
            approx: -self.approx,
        }
    }
}

impl Sub for &Exact {
    type Output = Exact;
    fn sub(self, rhs: &Exact) -> Exact {
        self + &(-rhs)
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        &self - &rhs
    }
}

impl Mul for &Exact {
    type Output = Exact;
    fn mul(self, rhs: &Exact) -> Exact {
        let mut raw = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                raw.push(Term {
                    radicand: &a.radicand * &b.radicand,
                    coef: &a.coef * &b.coef,
                });
            }
        }
        Exact::from_terms(raw)
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        &self * &rhs
    }
}

impl From<i64> for Exact {
    fn from(v: i64) -> Exact {
        Exact::from_integer(v)
    }
}

impl From<BigRational> for Exact {
    fn from(q: BigRational) -> Exact {
        Exact::from_rational(q)
    }
}

fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>, leading: bool) -> fmt::Result {
    let negative = t.coef.is_negative();
    let mag = t.coef.abs();
    if leading {
        if negative {
            write!(f, "-")?;
        }
    } else if negative {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if t.radicand.is_one() {
        write!(f, "{}", mag)
    } else if mag.is_one() {
        write!(f, "sqrt({})", t.radicand)
    } else {
        write!(f, "{}*sqrt({})", mag, t.radicand)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            fmt_term(t, f, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exact({})", self)
    }
}

/// Parses a rational written as an integer, a fraction `a/b` or a decimal
/// with optional exponent (`-1.25e-3`). Decimals are converted exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseExactError> {
    let err = |reason| ParseExactError {
        input: s.to_string(),
        reason,
    };
    let s = s.trim();
    if s.is_empty() {
        return Err(err("empty"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| err("bad exponent"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err("invalid digit"));
    }
    let digits = format!("{}{}", int_part, frac_part);
    let numer = BigInt::parse_bytes(digits.as_bytes(), 10).unwrap_or_else(BigInt::zero);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(numer);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -q } else { q })
}

fn split_signed_terms(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut pieces = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 => {
                let prev = bytes[..i].iter().rev().find(|c| !c.is_ascii_whitespace());
                let after_operator = matches!(prev, Some(b'e' | b'E' | b'*' | b'/' | b'+' | b'-'));
                if !after_operator {
                    pieces.push(&s[start..i]);
                    start = i;
                }
            }
            _ => {}
        }
    }
    pieces.push(&s[start..]);
    pieces
}

impl FromStr for Exact {
    type Err = ParseExactError;

    /// Accepts rationals (`3`, `-1/2`, `0.125`, `1e-3`) and sums of terms
    /// `c*sqrt(q)`, as produced by `Display`.
    fn from_str(s: &str) -> Result<Exact, ParseExactError> {
        let err = |reason| ParseExactError {
            input: s.to_string(),
            reason,
        };
        let mut total = Exact::zero();
        for piece in split_signed_terms(s.trim()) {
            let piece: String = piece.chars().filter(|c| !c.is_whitespace()).collect();
            if piece.is_empty() {
                return Err(err("empty term"));
            }
            let term = match piece.find("sqrt(") {
                None => Exact::from_rational(parse_rational(&piece)?),
                Some(at) => {
                    if !piece.ends_with(')') {
                        return Err(err("unclosed sqrt"));
                    }
                    let inner = parse_rational(&piece[at + 5..piece.len() - 1])?;
                    let root = Exact::sqrt_of(&inner).ok_or_else(|| err("negative radicand"))?;
                    let prefix = piece[..at].trim_end_matches('*');
                    let coef = match prefix {
                        "" | "+" => BigRational::one(),
                        "-" => -BigRational::one(),
                        other => parse_rational(other)?,
                    };
                    root.mul_rational(&coef)
                }
            };
            total = total + term;
        }
        Ok(total)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

struct ExactVisitor;

impl Visitor<'_> for ExactVisitor {
    type Value = Exact;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "an exact number as a string or a JSON number")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
        Ok(Exact::from_integer(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
        Ok(Exact::from_rational(BigRational::from_integer(BigInt::from(v))))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exact, E> {
        // Snap through the shortest decimal representation.
        if !v.is_finite() {
            return Err(E::custom("non-finite number"));
        }
        format!("{:e}", v).parse().map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Exact, D::Error> {
        deserializer.deserialize_any(ExactVisitor)
    }
}

/// Helper for rationals built from small integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
