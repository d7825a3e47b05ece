//! Tropical polynomial systems, discrete mixed volume bounds and patchworking counts.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::family::{FamilyKind, SubsetFamily};
use crate::gen::sums_injective;
use crate::instance::Sign;
use crate::linalg::{self, Vector};
use crate::point::{minkowski_sum, ExactPoint, Support};
use crate::polytope::Polytope;
use crate::rational::Rational;
use crate::subdivision::{Cell, LiftedSystem, MixedSubdivision, MAX_RETRIES};

/// `max over w of <w, x> + a_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPolynomial {
    support: Support,
    coefficients: Vec<Rational>,
}

impl TropicalPolynomial {
    pub fn new(support: Support, coefficients: Vec<Rational>) -> Result<Self> {
        if support.len() != coefficients.len() {
            return Err(Error::Invalid(format!(
                "{} coefficients for {} monomials",
                coefficients.len(),
                support.len()
            )));
        }
        Ok(TropicalPolynomial { support, coefficients })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.support
            .points()
            .iter()
            .zip(&self.coefficients)
            .map(|(w, a)| w.dot(x) + a)
            .max()
            .expect("nonempty support")
    }

    /// Monomials attaining the maximum at `x`.
    pub fn argmax(&self, x: &[Rational]) -> Vec<ExactPoint> {
        let m = self.eval(x);
        self.support
            .points()
            .iter()
            .zip(&self.coefficients)
            .filter(|(w, a)| w.dot(x) + *a == m)
            .map(|(w, _)| w.clone())
            .collect()
    }

    /// The induced lift `w -> -a_w`.
    pub fn lifts(&self) -> Vec<Rational> {
        self.coefficients.iter().map(|a| -a).collect()
    }
}

pub fn lifted_system(polys: &[TropicalPolynomial]) -> Result<LiftedSystem> {
    LiftedSystem::new(
        polys.iter().map(|p| p.support.clone()).collect(),
        polys.iter().map(TropicalPolynomial::lifts).collect(),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct TropicalSolution {
    pub point: Vector,
    pub cell: usize,
    /// The segment `Q_i` of the dual cell, as its two endpoints.
    pub segments: Vec<(ExactPoint, ExactPoint)>,
    pub volume: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct TropicalSolutionSet {
    pub solutions: Vec<TropicalSolution>,
    pub count: usize,
    #[serde(rename = "D")]
    pub d: i64,
    pub bound_holds: bool,
}

/// Nondegenerate solutions of `n` tropical equations in `n` variables, one per
/// mixed cell of the dual subdivision.
pub fn solve(polys: &[TropicalPolynomial]) -> Result<TropicalSolutionSet> {
    let Some(first) = polys.first() else {
        return Err(Error::Empty("tropical system"));
    };
    let n = first.support.ambient();
    if polys.len() != n {
        return Err(Error::Invalid(format!("need {n} polynomials in {n} variables, got {}", polys.len())));
    }
    let sub = MixedSubdivision::build(lifted_system(polys)?)?;
    sub.require_pure()?;
    let mut solutions = Vec::new();
    for (k, cell) in sub.cells().iter().enumerate() {
        if !cell.is_mixed() {
            continue;
        }
        let segments = segment_endpoints(cell)?;
        let mut rows = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for (i, (w, w2)) in segments.iter().enumerate() {
            rows.push(w.sub(w2).0);
            rhs.push(coefficient(&polys[i], w2) - coefficient(&polys[i], w));
        }
        let x = linalg::solve(&rows, &rhs).ok_or_else(|| Error::Invariant(format!("singular edge system for mixed cell {k}")))?;
        let expected: Vector = cell.normal.iter().map(|c| -c).collect();
        if x != expected {
            return Err(Error::Invariant(format!("edge system and cell normal disagree for mixed cell {k}")));
        }
        for (i, p) in polys.iter().enumerate() {
            let arg = p.argmax(&x);
            if arg != cell.summands[i] {
                return Err(Error::Invariant(format!("maximum of polynomial {} not attained on the dual segment", i + 1)));
            }
        }
        solutions.push(TropicalSolution { point: x, cell: k, segments, volume: cell.total().volume() });
    }
    let supports: Vec<Support> = polys.iter().map(|p| p.support.clone()).collect();
    let d = discrete_mixed_volume(&supports)?;
    let count = solutions.len();
    Ok(TropicalSolutionSet { solutions, count, d, bound_holds: count as i64 <= d })
}

fn coefficient(p: &TropicalPolynomial, w: &ExactPoint) -> Rational {
    let k = p.support.points().iter().position(|v| v == w).expect("support point");
    p.coefficients[k].clone()
}

/// Endpoints of the segments `Q_i` of a mixed cell with `r = n`.
fn segment_endpoints(cell: &Cell) -> Result<Vec<(ExactPoint, ExactPoint)>> {
    cell.summands
        .iter()
        .map(|s| {
            let p = Polytope::from_points(s)?;
            match p.vertices() {
                [a, b] => Ok((a.clone(), b.clone())),
                _ => Err(Error::Invariant("summand of a mixed cell is not a segment".into())),
            }
        })
        .collect()
}

/// `D(W_1, ..., W_r)`, the alternating sum of sizes of subset sums.
pub fn discrete_mixed_volume(supports: &[Support]) -> Result<i64> {
    Ok(SubsetFamily::build(FamilyKind::Minkowski, supports, None)?.alternating_sum())
}

pub fn kouchnirenko(supports: &[Support]) -> i64 {
    supports.iter().map(|s| s.len() as i64 - 1).product()
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    #[serde(rename = "D")]
    pub d: i64,
    pub kouchnirenko: i64,
    pub below_kouchnirenko: bool,
    /// All subset sum maps are injective.
    pub general_position: bool,
    /// `D = Kouchnirenko`, checked when in general position.
    pub general_position_equality: Option<bool>,
    /// `(|W|-1)(|W|-2)/2` for two equal planar supports.
    pub same_support_bound: Option<i64>,
    pub same_support_holds: Option<bool>,
}

impl BoundsReport {
    pub fn pass(&self) -> bool {
        self.below_kouchnirenko
            && self.general_position_equality.unwrap_or(true)
            && self.same_support_holds.unwrap_or(true)
    }
}

pub fn bounds_report(supports: &[Support]) -> Result<BoundsReport> {
    let d = discrete_mixed_volume(supports)?;
    let k = kouchnirenko(supports);
    let gp = sums_injective(supports);
    let same = supports.len() == 2
        && supports[0].ambient() == 2
        && supports[0].points().iter().collect::<std::collections::BTreeSet<_>>()
            == supports[1].points().iter().collect();
    let w = supports[0].len() as i64;
    let ssb = same.then(|| (w - 1) * (w - 2) / 2);
    Ok(BoundsReport {
        d,
        kouchnirenko: k,
        below_kouchnirenko: d <= k,
        general_position: gp,
        general_position_equality: gp.then_some(d == k),
        same_support_bound: ssb,
        same_support_holds: ssb.map(|b| d <= b),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BrickDiscreteReport {
    #[serde(rename = "D")]
    pub d: i64,
    pub shifted_sum_points: usize,
    pub kouchnirenko: i64,
    pub pass: bool,
}

/// For supports on segments: `D = |(W_1 + ... + W_n) ∩ (delta + Q)| = prod (|W_i| - 1)`.
pub fn brick_discrete(supports: &[Support], delta: &Direction) -> Result<BrickDiscreteReport> {
    let n = supports.first().map(Support::ambient).ok_or(Error::Empty("segment supports"))?;
    if supports.len() != n {
        return Err(Error::Invalid(format!("need {n} supports in dimension {n}")));
    }
    let polys: Vec<Polytope> = supports.iter().map(|s| Polytope::from_points(s.points())).collect::<Result<_>>()?;
    if let Some(i) = polys.iter().position(|p| p.dim() != 1) {
        return Err(Error::Invalid(format!("support {} is not on a segment", i + 1)));
    }
    let all: Vec<&Support> = supports.iter().collect();
    let sum = minkowski_sum(&all)?;
    let q = Polytope::from_points(sum.points())?;
    if !q.is_full_dim() {
        return Err(Error::DimensionDeficient { dim: q.dim(), ambient: n, hint: "segment directions must be independent".into() });
    }
    let mut shifted = 0;
    for x in sum.points() {
        if q.shifted_contains(x, delta.as_slice())? {
            shifted += 1;
        }
    }
    let d = discrete_mixed_volume(supports)?;
    let k = kouchnirenko(supports);
    Ok(BrickDiscreteReport { d, shifted_sum_points: shifted, kouchnirenko: k, pass: d == shifted as i64 && d == k })
}

#[derive(Clone, Debug, Serialize)]
pub struct PatchworkReport {
    pub nonempty_mixed_cells: usize,
    pub mixed_cells: usize,
    #[serde(rename = "D")]
    pub d: i64,
    pub pass: bool,
}

/// Mixed cells whose every segment has endpoints of opposite signs.
pub fn patchwork_count(polys: &[TropicalPolynomial], signs: &[Vec<Sign>]) -> Result<PatchworkReport> {
    let sol = solve(polys)?;
    let mut nonempty = 0;
    for s in &sol.solutions {
        if nonempty_cell(polys, signs, &s.segments) {
            nonempty += 1;
        }
    }
    Ok(PatchworkReport {
        nonempty_mixed_cells: nonempty,
        mixed_cells: sol.count,
        d: sol.d,
        pass: nonempty <= sol.count && sol.count as i64 <= sol.d,
    })
}

fn sign_of(p: &TropicalPolynomial, signs: &[Sign], w: &ExactPoint) -> Sign {
    signs[p.support.points().iter().position(|v| v == w).expect("support point")]
}

fn nonempty_cell(polys: &[TropicalPolynomial], signs: &[Vec<Sign>], segments: &[(ExactPoint, ExactPoint)]) -> bool {
    segments
        .iter()
        .enumerate()
        .all(|(i, (a, b))| sign_of(&polys[i], &signs[i], a) != sign_of(&polys[i], &signs[i], b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignMode {
    Exhaustive,
    /// The given number of seeded random sign assignments per lift sample.
    Random(usize),
}

/// Largest exhaustive search, in total number of monomials.
pub const EXHAUSTIVE_SIGN_CAP: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct SearchWitness {
    pub sample: usize,
    pub lifts: Vec<Vec<Rational>>,
    pub signs: Vec<Vec<Sign>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub best_count: usize,
    pub witness: Option<SearchWitness>,
    pub upper_bound: i64,
    pub lift_samples: usize,
    pub pure_samples: usize,
    pub pass: bool,
}

/// A lower bound for the largest number of nonempty mixed cells over lifts and
/// signs, found by sampling lifts from `rng`; `D` is the matching upper bound.
pub fn search_t<R: Rng>(supports: &[Support], lift_samples: usize, mode: SignMode, rng: &mut R) -> Result<SearchReport> {
    let n = supports.first().map(Support::ambient).ok_or(Error::Empty("supports"))?;
    if supports.len() != n {
        return Err(Error::Invalid(format!("need {n} supports in dimension {n}")));
    }
    let total: usize = supports.iter().map(Support::len).sum();
    if mode == SignMode::Exhaustive && total > EXHAUSTIVE_SIGN_CAP {
        return Err(Error::SizeCap(format!(
            "exhaustive signs need at most {EXHAUSTIVE_SIGN_CAP} monomials, got {total}"
        )));
    }
    let d = discrete_mixed_volume(supports)?;
    let mut best: Option<(usize, SearchWitness)> = None;
    let mut pure_samples = 0;
    for sample in 0..lift_samples {
        let mut sub = None;
        for _ in 0..MAX_RETRIES {
            let s = MixedSubdivision::build(LiftedSystem::random(supports.to_vec(), 1 << 20, rng)?)?;
            if s.is_pure() {
                sub = Some(s);
                break;
            }
        }
        let Some(sub) = sub else { continue };
        pure_samples += 1;
        let lifts: Vec<Vec<Rational>> = (0..n).map(|i| sub.system().lifts(i).to_vec()).collect();
        let polys: Vec<TropicalPolynomial> = supports
            .iter()
            .zip(&lifts)
            .map(|(s, l)| TropicalPolynomial::new(s.clone(), l.iter().map(|x| -x).collect()))
            .collect::<Result<_>>()?;
        let cells: Vec<Vec<(ExactPoint, ExactPoint)>> =
            sub.mixed_cells().map(segment_endpoints).collect::<Result<_>>()?;
        let mut consider = |signs: Vec<Vec<Sign>>| {
            let count = cells.iter().filter(|c| nonempty_cell(&polys, &signs, c)).count();
            if best.as_ref().is_none_or(|(b, _)| count > *b) {
                best = Some((count, SearchWitness { sample, lifts: lifts.clone(), signs }));
            }
        };
        match mode {
            SignMode::Exhaustive => {
                for bits in 0..1u64 << total {
                    consider(signs_from_bits(supports, bits));
                }
            }
            SignMode::Random(k) => {
                for _ in 0..k {
                    consider(signs_from_bits(supports, rng.gen()));
                }
            }
        }
    }
    let best_count = best.as_ref().map_or(0, |b| b.0);
    Ok(SearchReport {
        best_count,
        witness: best.map(|b| b.1),
        upper_bound: d,
        lift_samples,
        pure_samples,
        pass: best_count as i64 <= d,
    })
}

fn signs_from_bits(supports: &[Support], bits: u64) -> Vec<Vec<Sign>> {
    let mut k = 0;
    supports
        .iter()
        .map(|s| {
            (0..s.len())
                .map(|_| {
                    let b = bits >> (k % 64) & 1;
                    k += 1;
                    if b == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect()
        })
        .collect()
}

impl fmt::Display for SignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignMode::Exhaustive => f.write_str("exhaustive"),
            SignMode::Random(k) => write!(f, "random({k})"),
        }
    }
}
