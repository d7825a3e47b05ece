//! Convex hulls by the double description method.
//!
//! The facets of a pointed full-dimensional cone `C = cone(g_1, ..., g_k)` are
//! the extreme rays of its dual `{y : <y, g_i> >= 0}`. The dual's rays are
//! computed incrementally, one generator constraint at a time, keeping for each
//! ray the set of constraints it makes tight.

use crate::linalg::{inverse, primitive_integer, Matrix, Vector};
use crate::point::dot;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, o: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, o: &BitSet) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }

    fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                let b = x.trailing_zeros() as usize;
                out.push(w * 64 + b);
                x &= x - 1;
            }
        }
        out
    }
}

struct Ray {
    v: Vector,
    zeros: BitSet,
}

/// A facet `<normal, y> >= 0` of a cone, with the generators lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFacet {
    pub normal: Vector,
    pub incident: Vec<usize>,
}

/// Indices of a maximal linearly independent subset of `rows`, greedily from the front.
fn independent_rows(rows: &[Vector]) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut basis: Vec<(usize, Vector)> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        for (p, b) in &basis {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[p].recip();
            for x in v.iter_mut() {
                *x *= &inv;
            }
            basis.push((p, v));
            chosen.push(i);
        }
    }
    chosen
}

/// Facets of the cone generated by `gens`, which must span the whole space and
/// generate a pointed cone. Returns `None` when the generators are rank deficient.
pub fn cone_facets(gens: &[Vector]) -> Option<Vec<ConeFacet>> {
    let d = gens.first()?.len();
    let k = gens.len();
    let init = independent_rows(gens);
    if init.len() != d {
        return None;
    }
    let m: Matrix = init.iter().map(|&i| gens[i].clone()).collect();
    let inv = inverse(&m)?;
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let col: Vector = inv.iter().map(|row| row[j].clone()).collect();
            let mut zeros = BitSet::new(k);
            for (t, &i) in init.iter().enumerate() {
                if t != j {
                    zeros.insert(i);
                }
            }
            Ray { v: primitive_integer(&col), zeros }
        })
        .collect();
    let mut done = vec![false; k];
    for &i in &init {
        done[i] = true;
    }
    for h in 0..k {
        if done[h] {
            continue;
        }
        done[h] = true;
        let s: Vec<Rational> = rays.iter().map(|r| dot(&r.v, &gens[h])).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| s[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, si) in rays.iter_mut().zip(&s) {
                if si.is_zero() {
                    r.zeros.insert(h);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| s[i].is_positive()).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if d >= 2 && common.count() < d - 2 {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(t, r)| t == p || t == n || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let v: Vector = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| &s[p] * a - &s[n] * b)
                    .collect();
                let mut zeros = common;
                zeros.insert(h);
                fresh.push(Ray { v: primitive_integer(&v), zeros });
            }
        }
        let mut kept = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, si) in rays.into_iter().zip(&s) {
            if si.is_zero() {
                r.zeros.insert(h);
                kept.push(r);
            } else if si.is_positive() {
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }
    let mut out: Vec<ConeFacet> = rays
        .into_iter()
        .map(|r| ConeFacet { incident: r.zeros.ones(), normal: r.v })
        .collect();
    out.sort_by(|a, b| a.normal.cmp(&b.normal));
    Some(out)
}

/// A facet `<normal, x> >= offset` of a polytope given by points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullFacet {
    pub normal: Vector,
    pub offset: Rational,
    pub incident: Vec<usize>,
}

/// Facets of the convex hull of points that affinely span their space.
///
/// Normals are primitive integer vectors. Returns `None` if the points are
/// not full-dimensional. A single point in dimension 0 has no facets.
pub fn hull_facets(points: &[Vector]) -> Option<Vec<HullFacet>> {
    let m = points.first()?.len();
    if m == 0 {
        return Some(vec![]);
    }
    let gens: Vec<Vector> = points
        .iter()
        .map(|p| {
            let mut g = Vec::with_capacity(m + 1);
            g.push(Rational::one());
            g.extend(p.iter().cloned());
            g
        })
        .collect();
    let cone = cone_facets(&gens)?;
    Some(
        cone.into_iter()
            .map(|f| {
                let a = primitive_integer(&f.normal[1..]);
                let offset = dot(&a, &points[f.incident[0]]);
                HullFacet { normal: a, offset, incident: f.incident }
            })
            .collect(),
    )
}

/// Lower facets of lifted points `(y_i, h_i)`: those whose inner normal has a
/// positive last coordinate. Returned as `(nu, c, incident)` meaning that
/// `<nu, y> + h >= c` with equality exactly on the incident points, where the
/// points `y_i` must affinely span their space.
pub fn lower_facets(points: &[Vector], heights: &[Rational]) -> Option<Vec<(Vector, Rational, Vec<usize>)>> {
    let m = points.first()?.len();
    let mut gens: Vec<Vector> = Vec::with_capacity(points.len() + 1);
    for (p, h) in points.iter().zip(heights) {
        let mut g = Vec::with_capacity(m + 2);
        g.push(Rational::one());
        g.extend(p.iter().cloned());
        g.push(h.clone());
        gens.push(g);
    }
    let mut vertical = vec![Rational::zero(); m + 2];
    vertical[m + 1] = Rational::one();
    gens.push(vertical);
    let vert_idx = points.len();
    let cone = cone_facets(&gens)?;
    let mut out = Vec::new();
    for f in cone {
        let last = &f.normal[m + 1];
        if !last.is_positive() {
            continue;
        }
        let nu: Vector = f.normal[1..=m].iter().map(|x| x / last).collect();
        let incident: Vec<usize> = f.incident.into_iter().filter(|&i| i != vert_idx).collect();
        let i0 = incident[0];
        let c = dot(&nu, &points[i0]) + &heights[i0];
        out.push((nu, c, incident));
    }
    Some(out)
}
