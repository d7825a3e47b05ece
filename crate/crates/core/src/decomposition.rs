//! Splitting the alternating sum `N(W)` along a regular mixed subdivision.
//!
//! For a shift direction `delta`, the points of `W` in `delta + P` fall into
//! the shifted cells. Mixed cells contribute `A`; points of non-mixed cells are
//! either images of the translation maps `phi_I : W_I -> W` (one per proper
//! subset `I`) or excessive. The remainder is `N_delta`, the same alternating
//! sum restricted to lower parts. Repeating the split on the pieces of the
//! iterated lower parts gives a non-increasing chain ending in a value read off
//! from terminal vertices.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::Serialize;

use crate::direction::{independent, Direction};
use crate::error::{Error, Result};
use crate::family::{sign, sum_carriers, FamilyKind, SubsetFamily};
use crate::linalg::Vector;
use crate::point::{ExactPoint, Support};
use crate::polytope::Polytope;
use crate::quotient::{IteratedLowerPart, Quotient};
use crate::rational::Rational;
use crate::subdivision::{mask_indices, LiftedSystem, MixedSubdivision, MAX_RETRIES};

/// Images of one translation map `phi_I`.
#[derive(Clone, Debug, Serialize)]
pub struct SubsetImage {
    pub mask: usize,
    /// `|W_I ∩ (delta + P_I)|`.
    pub domain: usize,
    pub image: Vec<ExactPoint>,
    /// Shifted non-mixed points whose cell has point summands outside `I`.
    pub codomain: usize,
    /// Codomain points outside the image.
    pub complement: Vec<ExactPoint>,
}

/// One split `N = A + Exc + N_delta`.
#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    #[serde(rename = "N")]
    pub n: i64,
    #[serde(rename = "A")]
    pub a: i64,
    /// `(cell index, |W ∩ (delta + Q)|)` for each mixed cell.
    pub mixed_counts: Vec<(usize, usize)>,
    pub shifted: usize,
    pub non_mixed: Vec<ExactPoint>,
    pub subsets: Vec<SubsetImage>,
    /// Shifted non-mixed points outside every image.
    pub excessive: Vec<ExactPoint>,
    /// Union of the per-subset complements.
    pub excessive_union: Vec<ExactPoint>,
    /// `sum over proper I of (-1)^(r-|I|+1) |complement_I|`.
    pub excessive_signed: i64,
    #[serde(rename = "N_delta")]
    pub n_delta: i64,
}

impl StepReport {
    /// `N = A + |Exc| + N_delta` with the set of excessive points.
    pub fn set_identity_holds(&self) -> bool {
        self.n == self.a + self.excessive.len() as i64 + self.n_delta
    }

    /// `N = A + E + N_delta` with the signed count `E` of complements.
    pub fn signed_identity_holds(&self) -> bool {
        self.n == self.a + self.excessive_signed + self.n_delta
    }
}

/// Splits `N(W)` along `sub` in direction `delta`.
///
/// `sub` must be pure and induced by lifts on point sets whose hulls are the
/// `P_i` of the family; the family must satisfy the translation property
/// (checked on the points actually mapped).
pub fn decompose(family: &SubsetFamily, sub: &MixedSubdivision, delta: &[Rational]) -> Result<StepReport> {
    sub.require_pure()?;
    let r = family.r();
    if sub.system().r() != r {
        return Err(Error::Invalid("family and subdivision disagree on r".into()));
    }
    let full = family.full_mask();
    if family.carrier(full).vertices() != sub.carrier().vertices() {
        return Err(Error::Invalid("family carrier differs from the subdivided polytope".into()));
    }
    let w = family.member(full);
    let mut cell_of: BTreeMap<ExactPoint, usize> = BTreeMap::new();
    for x in w {
        if let Some(k) = sub.locate_shifted(x, delta)? {
            cell_of.insert(x.clone(), k);
        }
    }
    let mut per_cell: BTreeMap<usize, usize> = BTreeMap::new();
    let mut non_mixed = Vec::new();
    for (x, &k) in &cell_of {
        if sub.cells()[k].is_mixed() {
            *per_cell.entry(k).or_default() += 1;
        } else {
            non_mixed.push(x.clone());
        }
    }
    let a = per_cell.values().sum::<usize>() as i64;

    let mut subsets = Vec::new();
    let mut all_images: BTreeSet<ExactPoint> = BTreeSet::new();
    let mut union: BTreeSet<ExactPoint> = BTreeSet::new();
    let mut signed = 0i64;
    for mask in 1..full {
        let idx = mask_indices(mask, r);
        let outside: Vec<usize> = (0..r).filter(|i| !idx.contains(i)).collect();
        let restricted = sub.restrict(&idx)?;
        restricted.require_pure()?;
        let mut domain = 0;
        let mut image = BTreeSet::new();
        if restricted.carrier().is_full_dim() {
            for x in family.member(mask) {
                let Some(k) = restricted.locate_shifted(x, delta)? else {
                    continue;
                };
                domain += 1;
                let v = sub.key_vertex(&idx, &restricted.cells()[k].normal)?;
                let y = x.add(&v);
                if !w.contains(&y) {
                    return Err(Error::PropertyS(format!(
                        "{x} + {v} = {y} is not in W (subset {mask:#b})"
                    )));
                }
                match cell_of.get(&y) {
                    Some(&kk) if outside.iter().all(|&j| sub.cells()[kk].dims[j] == 0) => {}
                    _ => {
                        return Err(Error::Invariant(format!(
                            "image {y} of {x} is not in a shifted cell with point summands outside {mask:#b}"
                        )))
                    }
                }
                image.insert(y);
            }
        }
        if image.len() != domain {
            return Err(Error::Invariant(format!("translation map for {mask:#b} is not injective")));
        }
        let codomain: Vec<&ExactPoint> = non_mixed
            .iter()
            .filter(|x| outside.iter().all(|&j| sub.cells()[cell_of[*x]].dims[j] == 0))
            .collect();
        let complement: Vec<ExactPoint> = codomain.iter().filter(|x| !image.contains(**x)).map(|x| (*x).clone()).collect();
        signed += -sign(r, idx.len()) * complement.len() as i64;
        union.extend(complement.iter().cloned());
        all_images.extend(image.iter().cloned());
        subsets.push(SubsetImage {
            mask,
            domain,
            image: image.into_iter().collect(),
            codomain: codomain.len(),
            complement,
        });
    }
    let excessive: Vec<ExactPoint> = non_mixed.iter().filter(|x| !all_images.contains(*x)).cloned().collect();

    let mut lower_counts = vec![0i64; full + 1];
    for (mask, count) in lower_counts.iter_mut().enumerate().skip(1) {
        let p = family.carrier(mask);
        for x in family.member(mask) {
            if p.lower_part_contains(x, delta)? {
                *count += 1;
            }
        }
    }
    Ok(StepReport {
        n: family.alternating_sum(),
        a,
        mixed_counts: per_cell.into_iter().collect(),
        shifted: cell_of.len(),
        non_mixed,
        subsets,
        excessive,
        excessive_union: union.into_iter().collect(),
        excessive_signed: signed,
        n_delta: family.alternating(|mask| lower_counts[mask]),
    })
}

/// Corrections between consecutive chain entries.
#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub pieces: usize,
    pub mixed: i64,
    pub excessive_signed: i64,
    pub excessive_set: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TerminalReport {
    /// `u_i` for each summand.
    pub vertices: Vec<ExactPoint>,
    /// `(mask, u_I, u_I in W_I)` for every nonempty subset.
    pub membership: Vec<(usize, ExactPoint, bool)>,
    pub value: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub deltas: Vec<Vector>,
    pub step: StepReport,
    /// `N, N_{d1}, N_{d1 d2}, ...` computed from iterated lower parts.
    pub chain: Vec<i64>,
    /// The same chain obtained by subtracting the per-level corrections.
    pub chain_recursive: Vec<i64>,
    pub levels: Vec<LevelReport>,
    pub terminal: TerminalReport,
}

impl ChainReport {
    pub fn non_increasing(&self) -> bool {
        self.chain.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn recursion_agrees(&self) -> bool {
        self.chain == self.chain_recursive
    }

    pub fn terminal_agrees(&self) -> bool {
        self.chain.last() == Some(&self.terminal.value)
    }
}

/// The full chain for `n` linearly independent directions.
pub fn full_chain(family: &SubsetFamily, sub: &MixedSubdivision, deltas: &[Direction]) -> Result<ChainReport> {
    let n = family.ambient();
    if deltas.len() != n || deltas.iter().any(|d| d.dim() != n) {
        return Err(Error::Invalid(format!("need {n} directions in dimension {n}")));
    }
    if !independent(deltas) {
        return Err(Error::Invalid("directions are not linearly independent".into()));
    }
    let dv: Vec<Vector> = deltas.iter().map(|d| d.as_slice().to_vec()).collect();
    let r = family.r();
    let full = family.full_mask();
    let step = decompose(family, sub, &dv[0])?;

    let ilps: Vec<Option<IteratedLowerPart>> = (0..=full)
        .map(|mask| (mask > 0).then(|| IteratedLowerPart::new(family.carrier(mask), &dv, n)).transpose())
        .collect::<Result<_>>()?;
    let mut chain = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut counts = vec![0i64; full + 1];
        for (mask, count) in counts.iter_mut().enumerate().skip(1) {
            let ilp = ilps[mask].as_ref().expect("nonempty mask");
            for x in family.member(mask) {
                if ilp.contains(x, k)? {
                    *count += 1;
                }
            }
        }
        chain.push(family.alternating(|mask| counts[mask]));
    }

    let mut levels = vec![LevelReport {
        level: 0,
        pieces: 1,
        mixed: step.a,
        excessive_signed: step.excessive_signed,
        excessive_set: step.excessive.len() as i64,
    }];
    let top = ilps[full].as_ref().expect("full mask");
    for k in 1..n {
        let mut level = LevelReport { level: k, pieces: 0, mixed: 0, excessive_signed: 0, excessive_set: 0 };
        let delta_k = top.image(k - 1);
        if delta_k.is_full_dim() {
            let lower = delta_k.lower_facets(&top.shifted_delta(k - 1))?;
            let proj = top.quotient(k);
            let shift = top.shifted_delta(k);
            for g in lower {
                let ell = top.quotient(k - 1).pull_back(&delta_k.facets()[g].normal);
                let (pfam, psub) = project_face(family, sub.system(), &ell, proj)?;
                let s = decompose(&pfam, &psub, &shift)?;
                level.pieces += 1;
                level.mixed += s.a;
                level.excessive_signed += s.excessive_signed;
                level.excessive_set += s.excessive.len() as i64;
            }
        }
        levels.push(level);
    }
    let mut chain_recursive = vec![chain[0]];
    for l in &levels {
        let last = *chain_recursive.last().expect("nonempty");
        chain_recursive.push(last - l.mixed - l.excessive_signed);
    }

    let mut vertices = Vec::with_capacity(r);
    for i in 0..r {
        vertices.push(IteratedLowerPart::terminal_vertex(family.carrier(1 << i), &dv)?);
    }
    let mut membership = Vec::new();
    let mut value = sign(r, 0);
    for mask in 1..=full {
        let u = mask_indices(mask, r)
            .into_iter()
            .fold(ExactPoint::zero(n), |acc, i| acc.add(&vertices[i]));
        let inside = family.member(mask).contains(&u);
        if inside {
            value += sign(r, mask.count_ones() as usize);
        }
        membership.push((mask, u, inside));
    }
    Ok(ChainReport {
        deltas: dv,
        step,
        chain,
        chain_recursive,
        levels,
        terminal: TerminalReport { vertices, membership, value },
    })
}

/// Draws directions from `rng` until the chain can be computed without a
/// genericity failure.
pub fn full_chain_seeded<R: Rng>(family: &SubsetFamily, sub: &MixedSubdivision, rng: &mut R) -> Result<ChainReport> {
    let n = family.ambient();
    let mut last = None;
    for _ in 0..MAX_RETRIES {
        let deltas = Direction::random_independent(n, n, rng);
        match full_chain(family, sub, &deltas) {
            Err(e @ Error::Genericity { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap_or(Error::RetryCap(MAX_RETRIES)))
}

/// Restricts the lifted system and the family to the face of `P` minimising
/// `ell`, then maps everything through `proj`.
fn project_face(
    family: &SubsetFamily,
    system: &LiftedSystem,
    ell: &[Rational],
    proj: &Quotient,
) -> Result<(SubsetFamily, MixedSubdivision)> {
    let r = system.r();
    let mut minima = Vec::with_capacity(r);
    let mut supports = Vec::with_capacity(r);
    let mut lifts = Vec::with_capacity(r);
    for i in 0..r {
        let s = system.support(i);
        let vals: Vec<Rational> = s.points().iter().map(|p| p.dot(ell)).collect();
        let m = vals.iter().min().expect("nonempty").clone();
        let mut pts = Vec::new();
        let mut ls = Vec::new();
        for ((p, v), mu) in s.points().iter().zip(&vals).zip(system.lifts(i)) {
            if *v == m {
                pts.push(proj.apply(p));
                ls.push(mu.clone());
            }
        }
        let support = Support::new(s.label, pts).map_err(|_| Error::Genericity {
            direction: "iterated".into(),
            reason: "quotient is not injective on a face".into(),
        })?;
        supports.push(support);
        lifts.push(ls);
        minima.push(m);
    }
    let psub = MixedSubdivision::build(LiftedSystem::new(supports.clone(), lifts)?)?;
    let hulls: Vec<Polytope> = supports.iter().map(|s| Polytope::from_points(s.points())).collect::<Result<_>>()?;
    let carriers = sum_carriers(&hulls)?;
    let mut members = vec![BTreeSet::new(); 1 << r];
    for (mask, set) in members.iter_mut().enumerate().skip(1) {
        let target: Rational = mask_indices(mask, r).iter().map(|&i| &minima[i]).sum();
        for x in family.member(mask) {
            if x.dot(ell) == target {
                set.insert(proj.apply(x));
            }
        }
        if set.len() != family.member(mask).iter().filter(|x| x.dot(ell) == target).count() {
            return Err(Error::Genericity {
                direction: "iterated".into(),
                reason: "quotient is not injective on a face".into(),
            });
        }
    }
    let pfam = SubsetFamily::from_parts(FamilyKind::Custom, r, members, carriers)?;
    Ok((pfam, psub))
}

/// Outcome of the translation-property check.
#[derive(Clone, Debug, Serialize)]
pub struct PropertySReport {
    pub pass: bool,
    /// Description of the first violation found.
    pub violation: Option<String>,
    /// Faces of `P` (as vertex lists) on which the check ran, the whole polytope included.
    pub faces_checked: usize,
    /// `W_I + v_J ⊆ W_{I ∪ J}` for all vertices `v_j` of the summand subdivisions.
    pub strong: bool,
}

/// Checks `(W_I ∩ Q_I) + v_{Q_I} ⊆ W` for every proper subset `I` and every
/// top-dimensional cell `Q_I`, on `P` itself and on the restriction of the
/// family to every proper face of `P`.
pub fn check_property_s(family: &SubsetFamily, sub: &MixedSubdivision) -> Result<PropertySReport> {
    sub.require_pure()?;
    let p = sub.carrier();
    let mut faces: Vec<Option<Vector>> = vec![None];
    for ell in face_functionals(p) {
        faces.push(Some(ell));
    }
    let mut violation = None;
    for ell in &faces {
        let (fam, fsub) = match ell {
            None => (family.clone(), sub.clone()),
            Some(l) => {
                let (fam, fsys) = restrict_to_face(family, sub.system(), l)?;
                (fam, MixedSubdivision::build_any(fsys)?)
            }
        };
        if let Some(v) = literal_violation(&fam, &fsub)? {
            let where_ = match ell {
                None => "P".to_string(),
                Some(_) => format!("face with vertices {:?}", fsub.carrier().vertices()),
            };
            violation = Some(format!("on {where_}: {v}"));
            break;
        }
    }
    let strong = strong_property(family, sub)?;
    Ok(PropertySReport { pass: violation.is_none(), violation, faces_checked: faces.len(), strong })
}

fn literal_violation(family: &SubsetFamily, sub: &MixedSubdivision) -> Result<Option<String>> {
    let r = family.r();
    let m = sub.dim();
    let w = family.member(family.full_mask());
    for mask in 1..family.full_mask() {
        let idx = mask_indices(mask, r);
        let restricted = sub.restrict(&idx)?;
        if restricted.dim() != m {
            continue;
        }
        for cell in restricted.cells() {
            let v = sub.key_vertex(&idx, &cell.normal)?;
            let q = cell.total();
            for x in family.member(mask) {
                if q.contains(x) && !w.contains(&x.add(&v)) {
                    return Ok(Some(format!(
                        "subset {mask:#b}, cell {:?}, point {x} + {v} not in W",
                        q.vertices()
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn strong_property(family: &SubsetFamily, sub: &MixedSubdivision) -> Result<bool> {
    let r = family.r();
    let full = family.full_mask();
    let vertex_sets: Vec<BTreeSet<ExactPoint>> =
        (0..r).map(|i| sub.restrict(&[i]).map(|s| s.vertices())).collect::<Result<_>>()?;
    for mask in 1..full {
        let rest = full & !mask;
        let mut j = rest;
        while j > 0 {
            let mut shifted: BTreeSet<ExactPoint> = family.member(mask).clone();
            for i in mask_indices(j, r) {
                let mut next = BTreeSet::new();
                for a in &shifted {
                    for v in &vertex_sets[i] {
                        next.insert(a.add(v));
                    }
                }
                shifted = next;
            }
            let target = family.member(mask | j);
            if !shifted.iter().all(|x| target.contains(x)) {
                return Ok(false);
            }
            j = (j - 1) & rest;
        }
    }
    Ok(true)
}

/// One minimising functional per proper face of a full-dimensional polytope.
fn face_functionals(p: &Polytope) -> Vec<Vector> {
    let mut seen: BTreeMap<BTreeSet<usize>, Vector> = BTreeMap::new();
    let mut frontier: Vec<BTreeSet<usize>> = Vec::new();
    for f in p.facets() {
        let s: BTreeSet<usize> = f.vertices.iter().copied().collect();
        if !seen.contains_key(&s) {
            seen.insert(s.clone(), Vec::new());
            frontier.push(s);
        }
    }
    while let Some(s) = frontier.pop() {
        for f in p.facets() {
            let t: BTreeSet<usize> = f.vertices.iter().copied().filter(|v| s.contains(v)).collect();
            if !t.is_empty() && !seen.contains_key(&t) {
                seen.insert(t.clone(), Vec::new());
                frontier.push(t);
            }
        }
    }
    let n = p.ambient();
    seen.into_keys()
        .map(|s| {
            let mut ell = vec![Rational::zero(); n];
            for f in p.facets() {
                if s.iter().all(|v| f.vertices.contains(v)) {
                    for (e, a) in ell.iter_mut().zip(&f.normal) {
                        *e += a;
                    }
                }
            }
            ell
        })
        .collect()
}

/// The family and lifted system restricted to the face of `P` minimising `ell`.
fn restrict_to_face(family: &SubsetFamily, system: &LiftedSystem, ell: &[Rational]) -> Result<(SubsetFamily, LiftedSystem)> {
    let r = system.r();
    let mut minima = Vec::with_capacity(r);
    let mut supports = Vec::with_capacity(r);
    let mut lifts = Vec::with_capacity(r);
    for i in 0..r {
        let s = system.support(i);
        let vals: Vec<Rational> = s.points().iter().map(|p| p.dot(ell)).collect();
        let m = vals.iter().min().expect("nonempty").clone();
        let mut pts = Vec::new();
        let mut ls = Vec::new();
        for ((p, v), mu) in s.points().iter().zip(&vals).zip(system.lifts(i)) {
            if *v == m {
                pts.push(p.clone());
                ls.push(mu.clone());
            }
        }
        supports.push(Support::new(s.label, pts)?);
        lifts.push(ls);
        minima.push(m);
    }
    let hulls: Vec<Polytope> = supports.iter().map(|s| Polytope::from_points(s.points())).collect::<Result<_>>()?;
    let carriers = sum_carriers(&hulls)?;
    let mut members = vec![BTreeSet::new(); 1 << r];
    for (mask, set) in members.iter_mut().enumerate().skip(1) {
        let target: Rational = mask_indices(mask, r).iter().map(|&i| &minima[i]).sum();
        set.extend(family.member(mask).iter().filter(|x| x.dot(ell) == target).cloned());
    }
    let fam = SubsetFamily::from_parts(FamilyKind::Custom, r, members, carriers)?;
    Ok((fam, LiftedSystem::new(supports, lifts)?))
}

/// `sum over I of (-1)^(n-|I|) |V_I|` against the number of mixed cells.
#[derive(Clone, Debug, Serialize)]
pub struct MixedCellIdentity {
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
}

pub fn mixed_cell_count_identity(sub: &MixedSubdivision) -> Result<MixedCellIdentity> {
    sub.require_pure()?;
    let r = sub.system().r();
    if r != sub.ambient() {
        return Err(Error::Invalid(format!("need as many summands as dimensions, got {r}")));
    }
    let fam = SubsetFamily::build(FamilyKind::Vertices, sub.system().supports(), Some(sub))?;
    let lhs = fam.alternating_sum();
    let rhs = sub.mixed_cells().count() as i64;
    Ok(MixedCellIdentity { lhs, rhs, pass: lhs == rhs })
}

/// One item of the nonnegativity theorem, evaluated directly and through the chain.
#[derive(Clone, Debug, Serialize)]
pub struct NonnegativityReport {
    pub kind: FamilyKind,
    /// The sum bounded below: the full alternating sum, or for interior kinds
    /// the sum over nonempty subsets.
    pub value: i64,
    /// The same bound re-derived from the chain: its last entry, shifted the same way.
    pub chain_bound: i64,
    pub chain: Vec<i64>,
    pub pass: bool,
}

/// Builds the family of `kind` over `supports`, draws a generic pure
/// subdivision and directions from `rng`, and checks `value >= chain_bound >= 0`.
pub fn verify_nonnegativity<R: Rng>(kind: FamilyKind, supports: &[Support], rng: &mut R) -> Result<NonnegativityReport> {
    let sub = MixedSubdivision::generic(supports.to_vec(), true, rng)?;
    let fam = SubsetFamily::build(kind, supports, Some(&sub))?;
    let report = full_chain_seeded(&fam, &sub, rng)?;
    let r = fam.r();
    let offset = if kind.is_interior() { sign(r, 0) } else { 0 };
    let value = fam.alternating_sum() - offset;
    let chain_bound = report.chain.last().copied().unwrap_or(0) - offset;
    let pass = value >= chain_bound && chain_bound >= 0 && report.non_increasing();
    Ok(NonnegativityReport { kind, value, chain_bound, chain: report.chain, pass })
}
