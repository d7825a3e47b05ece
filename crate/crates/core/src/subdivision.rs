//! Regular mixed subdivisions induced by lifting functions.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hull::lower_facets;
use crate::linalg::{AffineChart, Vector};
use crate::point::{dot, ExactPoint, Support};
use crate::polytope::{fmt_vec, Polytope};
use crate::rational::Rational;

/// Supports `W_1, ..., W_r` together with lifting values `mu_i(w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedSystem {
    supports: Vec<Support>,
    lifts: Vec<Vec<Rational>>,
}

impl LiftedSystem {
    /// `lifts[i][k]` is the lift of the k-th point of `supports[i]`.
    pub fn new(supports: Vec<Support>, lifts: Vec<Vec<Rational>>) -> Result<Self> {
        if supports.is_empty() {
            return Err(Error::Empty("lifted system"));
        }
        if lifts.len() != supports.len() {
            return Err(Error::Invalid(format!(
                "{} lift lists for {} supports",
                lifts.len(),
                supports.len()
            )));
        }
        let n = supports[0].ambient();
        for (i, (s, l)) in supports.iter().zip(&lifts).enumerate() {
            if s.ambient() != n {
                return Err(Error::DimensionMismatch { expected: n, got: s.ambient() });
            }
            if s.len() != l.len() {
                return Err(Error::Invalid(format!(
                    "support {i} has {} points but {} lift values",
                    s.len(),
                    l.len()
                )));
            }
        }
        Ok(LiftedSystem { supports, lifts })
    }

    /// All lifts zero.
    pub fn flat(supports: Vec<Support>) -> Result<Self> {
        let lifts = supports.iter().map(|s| vec![Rational::zero(); s.len()]).collect();
        LiftedSystem::new(supports, lifts)
    }

    /// Independent uniform integer lifts in `0..bound`.
    pub fn random<R: Rng>(supports: Vec<Support>, bound: i64, rng: &mut R) -> Result<Self> {
        let lifts = supports
            .iter()
            .map(|s| (0..s.len()).map(|_| Rational::from_int(rng.gen_range(0..bound))).collect())
            .collect();
        LiftedSystem::new(supports, lifts)
    }

    pub fn r(&self) -> usize {
        self.supports.len()
    }

    pub fn ambient(&self) -> usize {
        self.supports[0].ambient()
    }

    pub fn supports(&self) -> &[Support] {
        &self.supports
    }

    pub fn support(&self, i: usize) -> &Support {
        &self.supports[i]
    }

    pub fn lifts(&self, i: usize) -> &[Rational] {
        &self.lifts[i]
    }

    pub fn lift_of(&self, i: usize, p: &ExactPoint) -> Option<&Rational> {
        self.supports[i].points().iter().position(|q| q == p).map(|k| &self.lifts[i][k])
    }

    /// The subsystem on the given support indices, in that order.
    pub fn restrict(&self, idx: &[usize]) -> LiftedSystem {
        LiftedSystem {
            supports: idx.iter().map(|&i| self.supports[i].clone()).collect(),
            lifts: idx.iter().map(|&i| self.lifts[i].clone()).collect(),
        }
    }

    /// Values `<nu, w> + mu_i(w)` over `W_i`, their minimum and the argmin points.
    pub fn argmin(&self, i: usize, nu: &[Rational]) -> (Rational, Vec<ExactPoint>) {
        let vals: Vec<Rational> = self.supports[i]
            .points()
            .iter()
            .zip(&self.lifts[i])
            .map(|(w, m)| w.dot(nu) + m)
            .collect();
        let min = vals.iter().min().expect("nonempty support").clone();
        let pts = self.supports[i]
            .points()
            .iter()
            .zip(&vals)
            .filter(|(_, v)| **v == min)
            .map(|(w, _)| w.clone())
            .collect();
        (min, pts)
    }

    pub fn carrier_points(&self) -> Vec<ExactPoint> {
        let mut acc: BTreeSet<ExactPoint> = BTreeSet::new();
        acc.insert(ExactPoint::zero(self.ambient()));
        for s in &self.supports {
            let verts = Polytope::from_points(s.points()).expect("support hull");
            let mut next = BTreeSet::new();
            for a in &acc {
                for v in verts.vertices() {
                    next.insert(a.add(v));
                }
            }
            acc = next;
        }
        acc.into_iter().collect()
    }
}

/// A top-dimensional cell `Q = Q_1 + ... + Q_r` with its privileged writing.
#[derive(Clone, Debug)]
pub struct Cell {
    /// Witness `nu`: `Q_i` is exactly the argmin of `<nu, w> + mu_i(w)` over `W_i`.
    pub normal: Vector,
    pub summands: Vec<Vec<ExactPoint>>,
    pub minima: Vec<Rational>,
    pub dims: Vec<usize>,
    total: OnceLock<Polytope>,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.normal == other.normal && self.summands == other.summands
    }
}

impl Cell {
    pub fn total(&self) -> &Polytope {
        self.total.get_or_init(|| {
            let mut acc: BTreeSet<ExactPoint> = BTreeSet::new();
            acc.insert(ExactPoint::zero(self.normal.len()));
            for s in &self.summands {
                let verts = Polytope::from_points(s).expect("summand hull");
                let mut next = BTreeSet::new();
                for a in &acc {
                    for v in verts.vertices() {
                        next.insert(a.add(v));
                    }
                }
                acc = next;
            }
            Polytope::from_points(&acc.into_iter().collect::<Vec<_>>()).expect("cell hull")
        })
    }

    /// Mixed when every summand has positive dimension.
    pub fn is_mixed(&self) -> bool {
        self.dims.iter().all(|&d| d >= 1)
    }

    /// Indices of the point summands.
    pub fn point_summands(&self) -> Vec<usize> {
        (0..self.dims.len()).filter(|&i| self.dims[i] == 0).collect()
    }

    /// Height of the supporting lower plane at `x`.
    pub fn plane_value(&self, x: &ExactPoint) -> Rational {
        let c: Rational = self.minima.iter().sum();
        c - x.dot(&self.normal)
    }
}

/// The regular mixed subdivision of `P = P_1 + ... + P_r` induced by lifts.
#[derive(Clone, Debug)]
pub struct MixedSubdivision {
    system: LiftedSystem,
    carrier: Polytope,
    cells: Vec<Cell>,
    pure: bool,
}

impl MixedSubdivision {
    /// Builds the subdivision of a full-dimensional Minkowski sum.
    pub fn build(system: LiftedSystem) -> Result<Self> {
        let sub = MixedSubdivision::build_any(system)?;
        if !sub.carrier.is_full_dim() {
            return Err(Error::DimensionDeficient {
                dim: sub.carrier.dim(),
                ambient: sub.carrier.ambient(),
                hint: "project the supports onto the affine hull of their sum".into(),
            });
        }
        Ok(sub)
    }

    /// Builds the subdivision of a Minkowski sum of any dimension; cells then
    /// have the dimension of the sum.
    pub fn build_any(system: LiftedSystem) -> Result<Self> {
        let mut cur: BTreeMap<ExactPoint, Rational> = BTreeMap::new();
        cur.insert(ExactPoint::zero(system.ambient()), Rational::zero());
        for i in 0..system.r() {
            let mut next: BTreeMap<ExactPoint, Rational> = BTreeMap::new();
            for (a, ha) in &cur {
                for (w, mu) in system.support(i).points().iter().zip(system.lifts(i)) {
                    let p = a.add(w);
                    let h = ha + mu;
                    match next.get_mut(&p) {
                        Some(old) if *old <= h => {}
                        Some(old) => *old = h,
                        None => {
                            next.insert(p, h);
                        }
                    }
                }
            }
            cur = prune_to_lower_hull(next)?.0;
        }
        let pts: Vec<ExactPoint> = cur.keys().cloned().collect();
        let heights: Vec<Rational> = cur.values().cloned().collect();
        let chart = AffineChart::of_points(&pts);
        let carrier = Polytope::from_points(&pts)?;
        let m = chart.dim();
        let normals: Vec<Vector> = if m == 0 {
            vec![vec![Rational::zero(); system.ambient()]]
        } else {
            let local: Vec<Vector> = pts.iter().map(|p| chart.to_chart(p)).collect();
            let lf = lower_facets(&local, &heights)
                .ok_or_else(|| Error::Invariant("lower hull of spanning points failed".into()))?;
            lf.into_iter().map(|(nu, _, _)| chart.lift_functional(&nu)).collect()
        };
        let mut cells = Vec::with_capacity(normals.len());
        let mut pure = true;
        for nu in normals {
            let mut summands = Vec::with_capacity(system.r());
            let mut minima = Vec::with_capacity(system.r());
            let mut dims = Vec::with_capacity(system.r());
            for i in 0..system.r() {
                let (min, arg) = system.argmin(i, &nu);
                dims.push(AffineChart::of_points(&arg).dim());
                summands.push(arg);
                minima.push(min);
            }
            if dims.iter().sum::<usize>() != m {
                pure = false;
            }
            cells.push(Cell { normal: nu, summands, minima, dims, total: OnceLock::new() });
        }
        Ok(MixedSubdivision { system, carrier, cells, pure })
    }

    /// A pure subdivision from seeded random integer lifts, retrying up to
    /// `MAX_RETRIES` times. With `hereditary`, every restriction to a nonempty
    /// subset of the supports must be pure as well.
    pub fn generic<R: Rng>(supports: Vec<Support>, hereditary: bool, rng: &mut R) -> Result<Self> {
        for _ in 0..MAX_RETRIES {
            let sys = LiftedSystem::random(supports.clone(), LIFT_BOUND, rng)?;
            let sub = MixedSubdivision::build(sys)?;
            if !sub.pure {
                continue;
            }
            if hereditary && !sub.all_restrictions_pure()? {
                continue;
            }
            return Ok(sub);
        }
        Err(Error::RetryCap(MAX_RETRIES))
    }

    pub fn all_restrictions_pure(&self) -> Result<bool> {
        let r = self.system.r();
        for mask in 1..(1usize << r) - 1 {
            if !self.restrict(&mask_indices(mask, r))?.pure {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn system(&self) -> &LiftedSystem {
        &self.system
    }

    pub fn carrier(&self) -> &Polytope {
        &self.carrier
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn ambient(&self) -> usize {
        self.carrier.ambient()
    }

    pub fn require_pure(&self) -> Result<()> {
        match self.cells.iter().position(|c| c.dims.iter().sum::<usize>() != self.dim()) {
            None => Ok(()),
            Some(k) => Err(Error::Impure {
                cell: k,
                dim: self.dim(),
                summands: self.cells[k].dims.clone(),
            }),
        }
    }

    /// The subdivision of `sum_{i in idx} P_i` induced by the same lifts.
    pub fn restrict(&self, idx: &[usize]) -> Result<MixedSubdivision> {
        MixedSubdivision::build_any(self.system.restrict(idx))
    }

    /// Mixed cells.
    pub fn mixed_cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.is_mixed())
    }

    /// All vertices of all cells.
    pub fn vertices(&self) -> BTreeSet<ExactPoint> {
        self.cells.iter().flat_map(|c| c.total().vertices().iter().cloned()).collect()
    }

    /// Cell `Q` with `x` in `delta + Q`, or `None` when `x` is not in `delta + P`.
    ///
    /// Among the lower planes, the one that is highest just before `x` in
    /// direction `-delta` carries the cell.
    pub fn locate_shifted(&self, x: &ExactPoint, delta: &[Rational]) -> Result<Option<usize>> {
        if !self.carrier.shifted_contains(x, delta)? {
            return Ok(None);
        }
        let mut best: Option<(usize, Rational, Rational)> = None;
        let mut tie = false;
        for (k, c) in self.cells.iter().enumerate() {
            let v = c.plane_value(x);
            let s = dot(&c.normal, delta);
            match &best {
                None => best = Some((k, v, s)),
                Some((_, bv, bs)) => match (&v, &s).cmp(&(bv, bs)) {
                    std::cmp::Ordering::Greater => {
                        best = Some((k, v, s));
                        tie = false;
                    }
                    std::cmp::Ordering::Equal => tie = true,
                    std::cmp::Ordering::Less => {}
                },
            }
        }
        if tie {
            return Err(Error::Genericity {
                direction: fmt_vec(delta),
                reason: format!("parallel to a wall between cells at {x}"),
            });
        }
        Ok(best.map(|b| b.0))
    }

    /// The vertex `v` of the subdivision over the complement of `idx` completing
    /// the restricted cell with witness `nu` to a cell of this subdivision.
    pub fn key_vertex(&self, idx: &[usize], nu: &[Rational]) -> Result<ExactPoint> {
        let mut v = ExactPoint::zero(self.ambient());
        for j in 0..self.system.r() {
            if idx.contains(&j) {
                continue;
            }
            let (_, arg) = self.system.argmin(j, nu);
            if arg.len() != 1 {
                return Err(Error::Impure {
                    cell: usize::MAX,
                    dim: self.dim(),
                    summands: vec![arg.len() - 1],
                });
            }
            v = v.add(&arg[0]);
        }
        Ok(v)
    }

    /// The cell of this subdivision with witness normal `nu`, if any.
    pub fn cell_with_normal(&self, nu: &[Rational]) -> Option<usize> {
        let target: Vec<Vec<ExactPoint>> = (0..self.system.r()).map(|i| self.system.argmin(i, nu).1).collect();
        self.cells.iter().position(|c| c.summands == target)
    }
}

pub const MAX_RETRIES: usize = 64;
const LIFT_BOUND: i64 = 1 << 20;

/// Indices of the bits set in `mask`, below `r`.
pub fn mask_indices(mask: usize, r: usize) -> Vec<usize> {
    (0..r).filter(|i| mask & (1 << i) != 0).collect()
}

/// Keeps the lifted points lying on the lower hull.
fn prune_to_lower_hull(
    pts: BTreeMap<ExactPoint, Rational>,
) -> Result<(BTreeMap<ExactPoint, Rational>, AffineChart)> {
    let keys: Vec<ExactPoint> = pts.keys().cloned().collect();
    let chart = AffineChart::of_points(&keys);
    if chart.dim() == 0 {
        return Ok((pts, chart));
    }
    let local: Vec<Vector> = keys.iter().map(|p| chart.to_chart(p)).collect();
    let heights: Vec<Rational> = pts.values().cloned().collect();
    let lf = lower_facets(&local, &heights)
        .ok_or_else(|| Error::Invariant("lower hull of spanning points failed".into()))?;
    let mut keep = vec![false; keys.len()];
    for (_, _, inc) in &lf {
        for &i in inc {
            keep[i] = true;
        }
    }
    let out = pts.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect();
    Ok((out, chart))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sup(label: usize, pts: &[&[i64]]) -> Support {
        Support::from_ints(label, pts).unwrap()
    }

    fn exc_system() -> LiftedSystem {
        LiftedSystem::new(
            vec![sup(1, &[&[0], &[1]]), sup(2, &[&[0], &[2]])],
            vec![vec![qi(0), qi(0)], vec![qi(0), qi(1)]],
        )
        .unwrap()
    }

    #[test]
    fn two_segment_cells() {
        let s = MixedSubdivision::build(exc_system()).unwrap();
        assert!(s.is_pure());
        assert_eq!(s.cells().len(), 2);
        let mut totals: Vec<Vec<ExactPoint>> = s.cells().iter().map(|c| c.total().vertices().to_vec()).collect();
        totals.sort();
        assert_eq!(totals[0], vec![ExactPoint::from_ints(&[0]), ExactPoint::from_ints(&[1])]);
        assert_eq!(totals[1], vec![ExactPoint::from_ints(&[1]), ExactPoint::from_ints(&[3])]);
        let right = s.cells().iter().find(|c| c.dims == vec![0, 1]).unwrap();
        assert_eq!(right.normal, vec![q(-1, 2)]);
        assert_eq!(right.summands[0], vec![ExactPoint::from_ints(&[1])]);
        assert_eq!(s.mixed_cells().count(), 0);
    }

    #[test]
    fn key_vertices_of_two_segments() {
        let s = MixedSubdivision::build(exc_system()).unwrap();
        let s1 = s.restrict(&[0]).unwrap();
        assert_eq!(s1.cells().len(), 1);
        let v = s.key_vertex(&[0], &s1.cells()[0].normal).unwrap();
        assert_eq!(v, ExactPoint::from_ints(&[0]));
        let s2 = s.restrict(&[1]).unwrap();
        assert_eq!(s2.cells().len(), 1);
        let v = s.key_vertex(&[1], &s2.cells()[0].normal).unwrap();
        assert_eq!(v, ExactPoint::from_ints(&[1]));
    }

    #[test]
    fn flat_lift_gives_one_cell() {
        let sys = LiftedSystem::flat(vec![
            sup(1, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
            sup(2, &[&[0, 0], &[2, 0], &[1, 3]]),
        ])
        .unwrap();
        let s = MixedSubdivision::build(sys).unwrap();
        assert_eq!(s.cells().len(), 1);
        assert!(!s.is_pure());
        assert_eq!(s.cells()[0].dims, vec![2, 2]);
        assert!(s.require_pure().is_err());
    }

    #[test]
    fn lower_dimensional_sum_is_rejected_by_build() {
        let sys = LiftedSystem::flat(vec![sup(1, &[&[0, 0], &[1, 1]]), sup(2, &[&[0, 0], &[2, 2]])]).unwrap();
        assert!(matches!(MixedSubdivision::build(sys.clone()), Err(Error::DimensionDeficient { .. })));
        let s = MixedSubdivision::build_any(sys).unwrap();
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn square_and_segment_mixed_area() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = MixedSubdivision::generic(
            vec![sup(1, &[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]), sup(2, &[&[0, 0], &[2, 0]])],
            true,
            &mut rng,
        )
        .unwrap();
        let area: Rational = s.mixed_cells().map(|c| c.total().volume()).sum();
        assert_eq!(area, qi(2));
        let total: Rational = s.cells().iter().map(|c| c.total().volume()).sum();
        assert_eq!(total, s.carrier().volume());
    }

    #[test]
    fn shifted_location_matches_cell_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = MixedSubdivision::generic(
            vec![sup(1, &[&[0, 0], &[2, 1], &[1, 2], &[2, 2]]), sup(2, &[&[0, 0], &[2, 1], &[1, 2], &[1, 1]])],
            false,
            &mut rng,
        )
        .unwrap();
        let delta = vec![q(7, 3), q(-25, 11)];
        for x in s.carrier().lattice_points() {
            let loc = s.locate_shifted(&x, &delta).unwrap();
            let by_cells: Vec<usize> = (0..s.cells().len())
                .filter(|&k| s.cells()[k].total().shifted_contains(&x, &delta).unwrap())
                .collect();
            assert!(by_cells.len() <= 1);
            assert_eq!(loc, by_cells.first().copied());
        }
    }
}
