//! Quotients of rational space by spans of directions, and iterated lower parts.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::point::{dot, ExactPoint};
use crate::polytope::{fmt_vec, Polytope};
use crate::rational::Rational;

/// A linear map `Q^n -> Q^(n-k)` whose kernel is spanned by `k` directions.
///
/// Built one direction at a time: to kill `d` (already mapped into the current
/// quotient) pick the first coordinate `c` with `d_c != 0`, send
/// `x -> x - (x_c / d_c) d` and drop coordinate `c`. Lattice structure is not
/// preserved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    source: usize,
    rows: Matrix,
}

impl Quotient {
    pub fn identity(n: usize) -> Quotient {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Quotient { source: n, rows }
    }

    /// The quotient by the span of `dirs` (which must be linearly independent).
    pub fn by(n: usize, dirs: &[&[Rational]]) -> Result<Quotient> {
        let mut q = Quotient::identity(n);
        for d in dirs {
            q = q.then_kill(d)?;
        }
        Ok(q)
    }

    /// Composes with the elementary quotient killing the image of `d`.
    pub fn then_kill(&self, d: &[Rational]) -> Result<Quotient> {
        let dd = self.apply_vec(d);
        let Some(c) = dd.iter().position(|x| !x.is_zero()) else {
            return Err(Error::Invalid(format!("direction {} already in the kernel", fmt_vec(d))));
        };
        let mut rows = Vec::with_capacity(self.rows.len() - 1);
        for (i, row) in self.rows.iter().enumerate() {
            if i == c {
                continue;
            }
            let f = &dd[i] / &dd[c];
            let new: Vector = if f.is_zero() {
                row.clone()
            } else {
                row.iter().zip(&self.rows[c]).map(|(a, b)| a - &(&f * b)).collect()
            };
            rows.push(new);
        }
        Ok(Quotient { source: self.source, rows })
    }

    pub fn source_dim(&self) -> usize {
        self.source
    }

    pub fn target_dim(&self) -> usize {
        self.rows.len()
    }

    pub fn apply_vec(&self, v: &[Rational]) -> Vector {
        self.rows.iter().map(|row| dot(row, v)).collect()
    }

    pub fn apply(&self, p: &ExactPoint) -> ExactPoint {
        ExactPoint(self.apply_vec(&p.0))
    }

    /// Pulls a functional on the target back to the source.
    pub fn pull_back(&self, a: &[Rational]) -> Vector {
        (0..self.source)
            .map(|j| {
                let mut s = Rational::zero();
                for (ai, row) in a.iter().zip(&self.rows) {
                    if !ai.is_zero() && !row[j].is_zero() {
                        s += ai * &row[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn image(&self, p: &Polytope) -> Polytope {
        let pts: Vec<ExactPoint> = p.vertices().iter().map(|v| self.apply(v)).collect();
        Polytope::from_points(&pts).expect("image of a polytope")
    }
}

/// The iterated lower part of a polytope with respect to `delta_1, ..., delta_k`.
///
/// The images `Delta_j = Pi_j(P)` under the successive quotients are kept, and
/// membership is decided level by level: a point belongs to the k-th iterated
/// lower part when, for every `j < k`, its image in the j-th quotient lies on
/// the lower part of `Delta_j` with respect to the image of `delta_{j+1}`.
#[derive(Clone, Debug)]
pub struct IteratedLowerPart {
    poly: Polytope,
    quotients: Vec<Quotient>,
    deltas: Vec<Vector>,
    images: Vec<Polytope>,
}

impl IteratedLowerPart {
    /// Prepares levels `0..=k`; `deltas` must hold at least `k` directions.
    pub fn new(poly: &Polytope, deltas: &[Vector], k: usize) -> Result<Self> {
        let n = poly.ambient();
        let mut quotients = vec![Quotient::identity(n)];
        let mut images = vec![poly.clone()];
        for j in 0..k {
            let q = quotients[j].then_kill(&deltas[j])?;
            images.push(q.image(poly));
            quotients.push(q);
        }
        Ok(IteratedLowerPart { poly: poly.clone(), quotients, deltas: deltas[..k].to_vec(), images })
    }

    pub fn levels(&self) -> usize {
        self.deltas.len()
    }

    pub fn quotient(&self, j: usize) -> &Quotient {
        &self.quotients[j]
    }

    /// `Delta_j`, the image of the polytope in the j-th quotient.
    pub fn image(&self, j: usize) -> &Polytope {
        &self.images[j]
    }

    /// Image of `delta_{j+1}` in the j-th quotient.
    pub fn shifted_delta(&self, j: usize) -> Vector {
        self.quotients[j].apply_vec(&self.deltas[j])
    }

    /// Membership in the lower part iterated over the first `k` directions.
    pub fn contains(&self, x: &ExactPoint, k: usize) -> Result<bool> {
        if !self.poly.contains(x) {
            return Ok(false);
        }
        for j in 0..k {
            let y = self.quotients[j].apply(x);
            if !self.images[j].lower_part_contains(&y, &self.shifted_delta(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The vertex left after all `n` directions: the lexicographic minimum of
    /// the coordinates in the basis of directions, last coordinate first.
    pub fn terminal_vertex(poly: &Polytope, deltas: &[Vector]) -> Result<ExactPoint> {
        let n = poly.ambient();
        let cols: Matrix = (0..n).map(|i| deltas.iter().map(|d| d[i].clone()).collect()).collect();
        let inv = crate::linalg::inverse(&cols)
            .ok_or_else(|| Error::Invalid("directions are not linearly independent".into()))?;
        let key = |v: &ExactPoint| -> Vec<Rational> { inv.iter().rev().map(|row| dot(row, &v.0)).collect() };
        let best = poly.vertices().iter().min_by_key(|v| key(v)).expect("vertices").clone();
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn quotient_kills_directions() {
        let d1 = vec![qi(1), qi(2), qi(3)];
        let d2 = vec![q(1, 2), qi(0), qi(-1)];
        let qt = Quotient::by(3, &[&d1, &d2]).unwrap();
        assert_eq!(qt.target_dim(), 1);
        assert!(qt.apply_vec(&d1).iter().all(Rational::is_zero));
        assert!(qt.apply_vec(&d2).iter().all(Rational::is_zero));
        assert!(!qt.apply_vec(&[qi(0), qi(0), qi(1)])[0].is_zero());
        let a = vec![qi(3)];
        let x = vec![qi(2), qi(-1), qi(5)];
        assert_eq!(dot(&qt.pull_back(&a), &x), dot(&a, &qt.apply_vec(&x)));
        assert!(Quotient::by(2, &[&[qi(1), qi(1)], &[qi(2), qi(2)]]).is_err());
    }

    #[test]
    fn square_iterated_lower_part() {
        let sq = Polytope::from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let deltas = vec![vec![qi(-1), qi(-2)], vec![q(3, 5), q(1, 7)]];
        let ilp = IteratedLowerPart::new(&sq, &deltas, 2).unwrap();
        let pts: Vec<ExactPoint> = [[0, 0], [1, 0], [0, 1], [1, 1]].iter().map(|c| ExactPoint::from_ints(c)).collect();
        let lvl1: Vec<bool> = pts.iter().map(|p| ilp.contains(p, 1).unwrap()).collect();
        assert_eq!(lvl1, vec![false, true, true, true]);
        let lvl2: Vec<&ExactPoint> = pts.iter().filter(|p| ilp.contains(p, 2).unwrap()).collect();
        assert_eq!(lvl2.len(), 1);
        assert_eq!(lvl2[0], &IteratedLowerPart::terminal_vertex(&sq, &deltas).unwrap());
    }

    #[test]
    fn lower_dimensional_polytope_stays_whole() {
        let seg = Polytope::from_ints(&[&[0, 0], &[2, 1]]).unwrap();
        let deltas = vec![vec![q(2, 3), q(-5, 9)], vec![q(1, 4), q(11, 2)]];
        let ilp = IteratedLowerPart::new(&seg, &deltas, 2).unwrap();
        let mid = ExactPoint::from_ints(&[0, 0]);
        assert!(ilp.contains(&mid, 1).unwrap());
        assert!(ilp.contains(&ExactPoint::from_ints(&[2, 1]), 1).unwrap());
        let at_two: Vec<bool> = seg.vertices().iter().map(|v| ilp.contains(v, 2).unwrap()).collect();
        assert_eq!(at_two.iter().filter(|b| **b).count(), 1);
    }
}
