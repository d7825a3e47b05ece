//! Points with exact rational coordinates and finite labelled point sets.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A point of rational n-space. Ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExactPoint(pub Vec<Rational>);

impl ExactPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        ExactPoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        ExactPoint(coords.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        ExactPoint(vec![Rational::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }

    pub fn add(&self, other: &ExactPoint) -> ExactPoint {
        debug_assert_eq!(self.dim(), other.dim());
        ExactPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExactPoint) -> ExactPoint {
        debug_assert_eq!(self.dim(), other.dim());
        ExactPoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> ExactPoint {
        ExactPoint(self.0.iter().map(|a| a * s).collect())
    }

    /// Inner product with a coefficient vector of the same length.
    pub fn dot(&self, v: &[Rational]) -> Rational {
        dot(&self.0, v)
    }
}

impl fmt::Debug for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// A finite, duplicate-free set of points carrying a label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Support {
    pub label: usize,
    points: Vec<ExactPoint>,
}

impl Support {
    pub fn new(label: usize, points: Vec<ExactPoint>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Empty("support"));
        };
        let n = first.dim();
        let mut seen = BTreeSet::new();
        for p in &points {
            if p.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.dim() });
            }
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
        }
        Ok(Support { label, points })
    }

    /// Builds a support from points that may contain repeats; the result is sorted.
    pub fn from_unsorted(label: usize, points: impl IntoIterator<Item = ExactPoint>) -> Result<Self> {
        let set: BTreeSet<ExactPoint> = points.into_iter().collect();
        Support::new(label, set.into_iter().collect())
    }

    pub fn from_ints(label: usize, pts: &[&[i64]]) -> Result<Self> {
        Support::new(label, pts.iter().map(|c| ExactPoint::from_ints(c)).collect())
    }

    pub fn points(&self) -> &[ExactPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ambient(&self) -> usize {
        self.points[0].dim()
    }

    pub fn contains(&self, p: &ExactPoint) -> bool {
        self.points.contains(p)
    }

    pub fn is_integral(&self) -> bool {
        self.points.iter().all(ExactPoint::is_integral)
    }
}

/// All coordinate-wise sums, one summand from each set, without repeats.
///
/// The result is sorted lexicographically and labelled 0.
pub fn minkowski_sum(sets: &[&Support]) -> Result<Support> {
    let Some(first) = sets.first() else {
        return Err(Error::Empty("minkowski_sum operands"));
    };
    let n = first.ambient();
    for s in sets {
        if s.ambient() != n {
            return Err(Error::DimensionMismatch { expected: n, got: s.ambient() });
        }
    }
    let mut acc: BTreeSet<ExactPoint> = first.points().iter().cloned().collect();
    for s in &sets[1..] {
        let mut next = BTreeSet::new();
        for a in &acc {
            for b in s.points() {
                next.insert(a.add(b));
            }
        }
        acc = next;
    }
    Support::new(0, acc.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_plus_segment() {
        let w1 = Support::from_ints(1, &[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]).unwrap();
        let w2 = Support::from_ints(2, &[&[0, 0], &[2, 0]]).unwrap();
        let s = minkowski_sum(&[&w1, &w2]).unwrap();
        assert_eq!(s.len(), 8);
        for p in [[3, 0], [3, 1], [2, 1], [2, 0]] {
            assert!(s.contains(&ExactPoint::from_ints(&p)));
        }
    }

    #[test]
    fn singleton_translates() {
        let w1 = Support::from_ints(1, &[&[0, 0], &[1, 3], &[2, 2]]).unwrap();
        let w2 = Support::from_ints(2, &[&[5, -1]]).unwrap();
        let s = minkowski_sum(&[&w1, &w2]).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.contains(&ExactPoint::from_ints(&[6, 2])));
    }

    #[test]
    fn one_dimensional() {
        let w1 = Support::from_ints(1, &[&[0], &[1]]).unwrap();
        let w2 = Support::from_ints(2, &[&[0], &[2]]).unwrap();
        let s = minkowski_sum(&[&w1, &w2]).unwrap();
        let want: Vec<_> = (0..4).map(|i| ExactPoint::from_ints(&[i])).collect();
        assert_eq!(s.points(), &want[..]);
    }

    #[test]
    fn validation() {
        assert!(Support::new(0, vec![]).is_err());
        assert!(matches!(
            Support::from_ints(0, &[&[0, 0], &[0, 0]]),
            Err(Error::DuplicatePoint(_))
        ));
        assert!(matches!(
            Support::from_ints(0, &[&[0, 0], &[1]]),
            Err(Error::DimensionMismatch { .. })
        ));
        let a = Support::from_ints(0, &[&[0, 0]]).unwrap();
        let b = Support::from_ints(0, &[&[0]]).unwrap();
        assert!(minkowski_sum(&[&a, &b]).is_err());
    }
}
