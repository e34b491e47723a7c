//! Barcodes: multisets of half-open intervals with exact endpoints.

use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain_core::Exact;

/// A point of the extended real line.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Extended {
    NegInf,
    Finite(Exact),
    PosInf,
}

impl Extended {
    pub fn finite(&self) -> Option<&Exact> {
        match self {
            Extended::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::NegInf => f64::NEG_INFINITY,
            Extended::Finite(x) => x.to_f64(),
            Extended::PosInf => f64::INFINITY,
        }
    }
}

impl From<Exact> for Extended {
    fn from(x: Exact) -> Extended {
        Extended::Finite(x)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-inf"),
            Extended::Finite(x) => write!(f, "{}", x),
            Extended::PosInf => write!(f, "inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct ExtendedVisitor;

impl Visitor<'_> for ExtendedVisitor {
    type Value = Extended;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a number, an exact number string, \"inf\" or \"-inf\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Extended, E> {
        match v.trim() {
            "inf" | "+inf" | "Infinity" => Ok(Extended::PosInf),
            "-inf" | "-Infinity" => Ok(Extended::NegInf),
            other => other.parse().map(Extended::Finite).map_err(E::custom),
        }
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Extended, E> {
        Ok(Extended::Finite(Exact::from_integer(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Extended, E> {
        self.visit_str(&v.to_string())
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Extended, E> {
        if v == f64::INFINITY {
            return Ok(Extended::PosInf);
        }
        if v == f64::NEG_INFINITY {
            return Ok(Extended::NegInf);
        }
        self.visit_str(&format!("{:e}", v))
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Extended, D::Error> {
        d.deserialize_any(ExtendedVisitor)
    }
}

/// A half-open interval `[birth, death)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Interval {
    pub birth: Extended,
    pub death: Extended,
}

impl Interval {
    pub fn new(birth: Extended, death: Extended) -> Interval {
        Interval { birth, death }
    }

    pub fn finite(birth: Exact, death: Exact) -> Interval {
        Interval::new(Extended::Finite(birth), Extended::Finite(death))
    }

    pub fn infinite(birth: Exact) -> Interval {
        Interval::new(Extended::Finite(birth), Extended::PosInf)
    }

    /// Whether `t` lies in `[birth, death)`.
    pub fn contains(&self, t: &Exact) -> bool {
        let t = Extended::Finite(t.clone());
        self.birth <= t && t < self.death
    }

    /// Length, when both ends are finite.
    pub fn length(&self) -> Option<Exact> {
        Some(self.death.finite()? - self.birth.finite()?)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.birth, self.death)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.birth)?;
        t.serialize_element(&self.death)?;
        t.end()
    }
}

struct IntervalVisitor;

impl<'de> Visitor<'de> for IntervalVisitor {
    type Value = Interval;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a pair [birth, death]")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Interval, A::Error> {
        let birth: Extended = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let death: Extended = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if seq.next_element::<de::IgnoredAny>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        if birth >= death {
            return Err(de::Error::custom(format!("empty interval [{}, {})", birth, death)));
        }
        Ok(Interval { birth, death })
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Interval, D::Error> {
        d.deserialize_seq(IntervalVisitor)
    }
}

fn default_field() -> u32 {
    2
}

/// A multiset of intervals in one homology degree.
///
/// The optional `n` and `top_n_verified` fields are set for barcodes of
/// kernels of higher operations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Barcode {
    #[serde(default = "default_field")]
    pub field: u32,
    #[serde(default)]
    pub degree: usize,
    #[serde(default)]
    pub reduced: bool,
    pub intervals: Vec<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_n_verified: Option<bool>,
}

impl PartialEq for Barcode {
    fn eq(&self, other: &Barcode) -> bool {
        self.field == other.field
            && self.degree == other.degree
            && self.reduced == other.reduced
            && self.n == other.n
            && self.top_n_verified == other.top_n_verified
            && self.same_intervals(other)
    }
}

impl Barcode {
    pub fn new(field: u32, degree: usize, reduced: bool, mut intervals: Vec<Interval>) -> Barcode {
        intervals.sort();
        Barcode {
            field,
            degree,
            reduced,
            intervals,
            n: None,
            top_n_verified: None,
        }
    }

    pub fn from_intervals(intervals: Vec<Interval>) -> Barcode {
        Barcode::new(2, 0, false, intervals)
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Multiset equality of the intervals.
    pub fn same_intervals(&self, other: &Barcode) -> bool {
        let mut a = self.intervals.clone();
        let mut b = other.intervals.clone();
        a.sort();
        b.sort();
        a == b
    }

    /// Number of intervals containing `t`.
    pub fn rank_at(&self, t: &Exact) -> usize {
        self.intervals.iter().filter(|i| i.contains(t)).count()
    }

    /// All finite endpoints, sorted and deduplicated.
    pub fn endpoints(&self) -> Vec<Exact> {
        let mut out: Vec<Exact> = self
            .intervals
            .iter()
            .flat_map(|i| [i.birth.finite().cloned(), i.death.finite().cloned()])
            .flatten()
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("barcode serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Barcode, serde_json::Error> {
        let mut b: Barcode = serde_json::from_str(s)?;
        b.intervals.sort();
        Ok(b)
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.intervals.iter().map(Interval::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
