//! Convex polytopes in vertex and facet form.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hull::hull_facets;
use crate::linalg::{rank, AffineChart, Vector};
use crate::point::{dot, ExactPoint};
use crate::rational::Rational;

/// A facet `<normal, x> >= offset` within the affine hull of the polytope.
///
/// Normals of full-dimensional polytopes are primitive integer inner normals.
/// For lower-dimensional polytopes the normal is only meaningful modulo the
/// hull equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vector,
    pub offset: Rational,
    /// Indices into the polytope's vertex list.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    chart: AffineChart,
    vertices: Vec<ExactPoint>,
    facets: Vec<Facet>,
}

impl Polytope {
    /// Convex hull of a nonempty point set.
    pub fn from_points(points: &[ExactPoint]) -> Result<Polytope> {
        let Some(first) = points.first() else {
            return Err(Error::Empty("polytope points"));
        };
        let n = first.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: p.dim() });
        }
        let uniq: Vec<ExactPoint> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let chart = AffineChart::of_points(&uniq);
        let m = chart.dim();
        if m == 0 {
            return Ok(Polytope { chart, vertices: uniq, facets: vec![] });
        }
        let local: Vec<Vector> = uniq.iter().map(|p| chart.to_chart(p)).collect();
        let hf = hull_facets(&local)
            .ok_or_else(|| Error::Invariant("hull of spanning points failed".into()))?;
        let mut on: Vec<Vec<usize>> = vec![vec![]; uniq.len()];
        for (fi, f) in hf.iter().enumerate() {
            for &i in &f.incident {
                on[i].push(fi);
            }
        }
        let is_vertex: Vec<bool> = on
            .iter()
            .map(|fs| {
                fs.len() >= m && rank(&fs.iter().map(|&fi| hf[fi].normal.clone()).collect::<Vec<_>>()) == m
            })
            .collect();
        let mut new_index = vec![usize::MAX; uniq.len()];
        let mut vertices = Vec::new();
        for (i, p) in uniq.iter().enumerate() {
            if is_vertex[i] {
                new_index[i] = vertices.len();
                vertices.push(p.clone());
            }
        }
        let facets = hf
            .into_iter()
            .map(|f| {
                let normal = chart.lift_functional(&f.normal);
                let vs: Vec<usize> =
                    f.incident.iter().filter(|&&i| is_vertex[i]).map(|&i| new_index[i]).collect();
                let offset = vertices[vs[0]].dot(&normal);
                Facet { normal, offset, vertices: vs }
            })
            .collect();
        Ok(Polytope { chart, vertices, facets })
    }

    pub fn from_ints(points: &[&[i64]]) -> Result<Polytope> {
        let pts: Vec<ExactPoint> = points.iter().map(|p| ExactPoint::from_ints(p)).collect();
        Polytope::from_points(&pts)
    }

    pub fn ambient(&self) -> usize {
        self.chart.ambient
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn is_full_dim(&self) -> bool {
        self.dim() == self.ambient()
    }

    /// Extreme points, sorted lexicographically.
    pub fn vertices(&self) -> &[ExactPoint] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn chart(&self) -> &AffineChart {
        &self.chart
    }

    pub fn equations(&self) -> &[(Vector, Rational)] {
        &self.chart.equations
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().all(ExactPoint::is_integral)
    }

    pub fn contains(&self, p: &ExactPoint) -> bool {
        self.chart.contains(p) && self.facets.iter().all(|f| p.dot(&f.normal) >= f.offset)
    }

    /// Membership in the relative interior.
    pub fn relint_contains(&self, p: &ExactPoint) -> bool {
        self.chart.contains(p) && self.facets.iter().all(|f| p.dot(&f.normal) > f.offset)
    }

    /// Membership in the interior with respect to the ambient space.
    pub fn interior_contains(&self, p: &ExactPoint) -> bool {
        self.is_full_dim() && self.relint_contains(p)
    }

    /// Indices of the facets containing `p` (assumed to lie in the polytope).
    pub fn facets_through(&self, p: &ExactPoint) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| p.dot(&self.facets[i].normal) == self.facets[i].offset).collect()
    }

    pub fn facet_vertices(&self, i: usize) -> Vec<ExactPoint> {
        self.facets[i].vertices.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// The facet as a polytope of its own.
    pub fn facet_polytope(&self, i: usize) -> Polytope {
        Polytope::from_points(&self.facet_vertices(i)).expect("facet has vertices")
    }

    pub fn translate(&self, t: &ExactPoint) -> Polytope {
        let pts: Vec<ExactPoint> = self.vertices.iter().map(|v| v.add(t)).collect();
        Polytope::from_points(&pts).expect("translate of a polytope")
    }

    /// Euclidean volume in the ambient dimension (0 when not full-dimensional).
    pub fn volume(&self) -> Rational {
        let n = self.ambient();
        if !self.is_full_dim() {
            return Rational::zero();
        }
        if n == 0 {
            return Rational::one();
        }
        if n == 1 {
            return &self.vertices[self.vertices.len() - 1].0[0] - &self.vertices[0].0[0];
        }
        // Pyramids over the facets not containing the first vertex. Each facet's
        // (n-1)-volume divided by |a| equals the volume of its projection along a
        // coordinate c with a_c != 0, divided by |a_c|.
        let apex = &self.vertices[0];
        let mut total = Rational::zero();
        for f in &self.facets {
            let height = apex.dot(&f.normal) - &f.offset;
            if height.is_zero() {
                continue;
            }
            let c = f.normal.iter().position(|x| !x.is_zero()).expect("nonzero normal");
            let proj: Vec<ExactPoint> = f
                .vertices
                .iter()
                .map(|&v| {
                    let mut x = self.vertices[v].0.clone();
                    x.remove(c);
                    ExactPoint(x)
                })
                .collect();
            let base = Polytope::from_points(&proj).expect("facet projection").volume();
            total += height * base / f.normal[c].abs();
        }
        total / Rational::from(n)
    }

    /// Integer points of the polytope, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<ExactPoint> {
        let n = self.ambient();
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for c in 0..n {
            let vals = self.vertices.iter().map(|v| &v.0[c]);
            let mn = vals.clone().min().expect("vertices").ceil();
            let mx = vals.max().expect("vertices").floor();
            if mn > mx {
                return vec![];
            }
            lo.push(mn.to_i64().expect("coordinate range"));
            hi.push(mx.to_i64().expect("coordinate range"));
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let p = ExactPoint::from_ints(&cur);
            if self.contains(&p) {
                out.push(p);
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = lo[k];
            }
        }
    }

    /// Whether `p` lies in `delta + P` for all sufficiently small positive
    /// multiples of `delta`.
    ///
    /// A point of a full-dimensional polytope is shifted in exactly when every
    /// facet through it has `<a, delta> < 0`. Polytopes of lower dimension contain
    /// no shifted points. A zero inner product on a facet through `p` is a
    /// genericity failure.
    pub fn shifted_contains(&self, p: &ExactPoint, delta: &[Rational]) -> Result<bool> {
        if !self.contains(p) {
            return Ok(false);
        }
        if !self.is_full_dim() {
            if self.chart.equations.iter().all(|(e, _)| dot(e, delta).is_zero()) {
                return Err(Error::Genericity {
                    direction: fmt_vec(delta),
                    reason: "direction parallel to a lower-dimensional polytope".into(),
                });
            }
            return Ok(false);
        }
        let mut inside = true;
        for f in &self.facets {
            if p.dot(&f.normal) != f.offset {
                continue;
            }
            let s = dot(&f.normal, delta);
            if s.is_zero() {
                return Err(Error::Genericity {
                    direction: fmt_vec(delta),
                    reason: format!("orthogonal to facet normal {} through {p}", fmt_vec(&f.normal)),
                });
            }
            if s.is_positive() {
                inside = false;
            }
        }
        Ok(inside)
    }

    /// Membership in the lower part: the union of facets whose inner normal
    /// has positive inner product with `delta`, or the whole polytope when it
    /// is not full-dimensional.
    pub fn lower_part_contains(&self, p: &ExactPoint, delta: &[Rational]) -> Result<bool> {
        if !self.contains(p) {
            return Ok(false);
        }
        Ok(!self.shifted_contains(p, delta)?)
    }

    /// Indices of the facets forming the lower part with respect to `delta`.
    pub fn lower_facets(&self, delta: &[Rational]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, f) in self.facets.iter().enumerate() {
            let s = dot(&f.normal, delta);
            if s.is_zero() {
                return Err(Error::Genericity {
                    direction: fmt_vec(delta),
                    reason: format!("orthogonal to facet normal {}", fmt_vec(&f.normal)),
                });
            }
            if s.is_positive() {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Vertices minimising a linear functional.
    pub fn argmin_vertices(&self, l: &[Rational]) -> Vec<ExactPoint> {
        let vals: Vec<Rational> = self.vertices.iter().map(|v| v.dot(l)).collect();
        let m = vals.iter().min().expect("vertices").clone();
        self.vertices.iter().zip(&vals).filter(|(_, x)| **x == m).map(|(v, _)| v.clone()).collect()
    }
}

pub(crate) fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(Rational::to_string).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn pt(c: &[i64]) -> ExactPoint {
        ExactPoint::from_ints(c)
    }

    #[test]
    fn volumes() {
        assert_eq!(Polytope::from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap().volume(), qi(1));
        assert_eq!(Polytope::from_ints(&[&[0, 0], &[2, 1], &[1, 2], &[2, 2]]).unwrap().volume(), qi(2));
        assert_eq!(Polytope::from_ints(&[&[0, 0], &[2, 1]]).unwrap().volume(), qi(0));
        assert_eq!(Polytope::from_ints(&[&[0, 0], &[2, 1], &[1, 2]]).unwrap().volume(), q(3, 2));
        let simplex = Polytope::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(simplex.volume(), q(1, 6));
        let tilted = Polytope::from_ints(&[&[0, 0, 0], &[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]).unwrap();
        assert_eq!(tilted.volume(), qi(3));
    }

    #[test]
    fn vertices_are_extreme() {
        let p = Polytope::from_ints(&[&[0, 0], &[2, 0], &[1, 0], &[1, 1], &[0, 2], &[2, 2]]).unwrap();
        assert_eq!(p.vertices(), &[pt(&[0, 0]), pt(&[0, 2]), pt(&[2, 0]), pt(&[2, 2])]);
        assert_eq!(p.facets().len(), 4);
        let seg = Polytope::from_ints(&[&[0, 0], &[1, 1], &[3, 3]]).unwrap();
        assert_eq!(seg.dim(), 1);
        assert_eq!(seg.vertices(), &[pt(&[0, 0]), pt(&[3, 3])]);
        assert!(seg.contains(&pt(&[2, 2])));
        assert!(!seg.contains(&pt(&[2, 1])));
        assert!(seg.relint_contains(&pt(&[1, 1])));
        assert!(!seg.interior_contains(&pt(&[1, 1])));
    }

    #[test]
    fn lattice_points() {
        let rect = Polytope::from_ints(&[&[0, 0], &[3, 0], &[0, 1], &[3, 1]]).unwrap();
        assert_eq!(rect.lattice_points().len(), 8);
        let tri = Polytope::from_ints(&[&[0, 0], &[2, 1], &[1, 2]]).unwrap();
        assert_eq!(
            tri.lattice_points(),
            vec![pt(&[0, 0]), pt(&[1, 1]), pt(&[1, 2]), pt(&[2, 1])]
        );
        let single = Polytope::from_ints(&[&[4, -2]]).unwrap();
        assert_eq!(single.lattice_points(), vec![pt(&[4, -2])]);
        let half = Polytope::from_points(&[
            ExactPoint(vec![q(1, 2), q(1, 2)]),
            ExactPoint(vec![q(5, 2), q(1, 2)]),
        ])
        .unwrap();
        assert!(half.lattice_points().is_empty());
    }

    #[test]
    fn shifted_membership() {
        let d = vec![qi(1)];
        let seg = Polytope::from_ints(&[&[0], &[3]]).unwrap();
        assert!(!seg.shifted_contains(&pt(&[0]), &d).unwrap());
        assert!(seg.shifted_contains(&pt(&[3]), &d).unwrap());
        let cell = Polytope::from_ints(&[&[1], &[3]]).unwrap();
        assert!(cell.shifted_contains(&pt(&[2]), &d).unwrap());
        let sq = Polytope::from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let d2 = vec![q(2, 3), q(5, 7)];
        assert!(sq.shifted_contains(&ExactPoint(vec![q(1, 2), q(1, 3)]), &d2).unwrap());
        assert!(sq.shifted_contains(&pt(&[1, 1]), &d2).unwrap());
        assert!(!sq.shifted_contains(&pt(&[1, 0]), &d2).unwrap());
        assert!(sq.shifted_contains(&pt(&[0, 0]), &[qi(1), qi(0)]).is_err());
        assert!(sq.shifted_contains(&pt(&[1, 1]), &[qi(1), qi(0)]).is_err());
    }

    #[test]
    fn square_lower_part() {
        let sq = Polytope::from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let d = vec![qi(-1), qi(-2)];
        let lf = sq.lower_facets(&d).unwrap();
        assert_eq!(lf.len(), 2);
        for &i in &lf {
            assert!(sq.facet_vertices(i).contains(&pt(&[1, 1])));
        }
    }
}
