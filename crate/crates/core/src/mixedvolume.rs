//! Classical mixed volume by three independent formulas.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::family::{sign, sum_carriers};
use crate::point::Support;
use crate::polytope::Polytope;
use crate::rational::Rational;
use crate::subdivision::MixedSubdivision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MvMethod {
    /// Total volume of the mixed cells of a seeded pure subdivision.
    Cells,
    /// `sum over nonempty I of (-1)^(n-|I|) Vol(P_I)`.
    AlternatingVolume,
    /// `sum over I of (-1)^(n-|I|) |Z^n ∩ P_I|`, lattice polytopes only.
    LatticePoints,
}

impl MvMethod {
    pub const ALL: [MvMethod; 3] = [MvMethod::Cells, MvMethod::AlternatingVolume, MvMethod::LatticePoints];

    pub fn name(self) -> &'static str {
        match self {
            MvMethod::Cells => "cells",
            MvMethod::AlternatingVolume => "altvol",
            MvMethod::LatticePoints => "lattice",
        }
    }

    pub fn parse(s: &str) -> Option<MvMethod> {
        match s {
            "cells" => Some(MvMethod::Cells),
            "altvol" | "alternating-volume" => Some(MvMethod::AlternatingVolume),
            "lattice" | "lattice-points" => Some(MvMethod::LatticePoints),
            _ => None,
        }
    }
}

impl fmt::Display for MvMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `MV(P_1, ..., P_n)` with Euclidean volume. The cells method draws lifts from `rng`.
pub fn mixed_volume<R: Rng>(polys: &[Polytope], method: MvMethod, rng: &mut R) -> Result<Rational> {
    check_square(polys)?;
    match method {
        MvMethod::Cells => {
            let supports: Vec<Support> = polys
                .iter()
                .enumerate()
                .map(|(i, p)| Support::new(i + 1, p.vertices().to_vec()))
                .collect::<Result<_>>()?;
            if !Polytope::from_points(&sum_vertices(polys)?)?.is_full_dim() {
                return Ok(Rational::zero());
            }
            let sub = MixedSubdivision::generic(supports, false, rng)?;
            Ok(mixed_cell_volume(&sub))
        }
        MvMethod::AlternatingVolume => alternating_volume(polys),
        MvMethod::LatticePoints => lattice_formula(polys),
    }
}

/// `sum over nonempty I of (-1)^(n-|I|) Vol(P_I)`.
pub fn alternating_volume(polys: &[Polytope]) -> Result<Rational> {
    let n = check_square(polys)?;
    let carriers = sum_carriers(polys)?;
    let mut total = Rational::zero();
    for (mask, p) in carriers.iter().enumerate().skip(1) {
        let v = p.as_ref().expect("carrier").volume();
        if sign(n, mask.count_ones() as usize) > 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    Ok(total)
}

/// `sum over I of (-1)^(n-|I|) |Z^n ∩ P_I|` with the empty term 1.
pub fn lattice_formula(polys: &[Polytope]) -> Result<Rational> {
    let n = check_square(polys)?;
    if let Some(i) = polys.iter().position(|p| !p.is_lattice()) {
        return Err(Error::NonLattice(format!("polytope {} has non-integer vertices", i + 1)));
    }
    let carriers = sum_carriers(polys)?;
    let mut total = sign(n, 0);
    for (mask, p) in carriers.iter().enumerate().skip(1) {
        total += sign(n, mask.count_ones() as usize) * p.as_ref().expect("carrier").lattice_points().len() as i64;
    }
    Ok(Rational::from_int(total))
}

/// Total volume of the mixed cells of a pure subdivision.
pub fn mixed_cell_volume(sub: &MixedSubdivision) -> Rational {
    sub.mixed_cells().map(|c| c.total().volume()).sum()
}

fn check_square(polys: &[Polytope]) -> Result<usize> {
    let Some(first) = polys.first() else {
        return Err(Error::Empty("mixed volume operands"));
    };
    let n = first.ambient();
    if let Some(p) = polys.iter().find(|p| p.ambient() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: p.ambient() });
    }
    if polys.len() != n {
        return Err(Error::Invalid(format!("mixed volume needs {n} polytopes in dimension {n}, got {}", polys.len())));
    }
    Ok(n)
}

fn sum_vertices(polys: &[Polytope]) -> Result<Vec<crate::point::ExactPoint>> {
    let carriers = sum_carriers(polys)?;
    Ok(carriers.last().and_then(Option::as_ref).expect("full carrier").vertices().to_vec())
}

/// The three quantities that agree for a sum of segments.
#[derive(Clone, Debug, Serialize)]
pub struct BrickReport {
    #[serde(rename = "MV")]
    pub mv: Rational,
    pub volume: Rational,
    pub shifted_lattice_points: usize,
    pub pass: bool,
}

/// `MV(Q_1, ..., Q_n) = Vol(Q) = |Z^n ∩ (delta + Q)|` for lattice segments `Q_i`.
pub fn brick_identity(segments: &[Support], delta: &Direction) -> Result<BrickReport> {
    let polys: Vec<Polytope> = segments.iter().map(|s| Polytope::from_points(s.points())).collect::<Result<_>>()?;
    let n = check_square(&polys)?;
    if let Some(i) = polys.iter().position(|p| p.dim() != 1) {
        return Err(Error::Invalid(format!("support {} is not on a segment", i + 1)));
    }
    if let Some(i) = polys.iter().position(|p| !p.is_lattice()) {
        return Err(Error::NonLattice(format!("segment {} has non-integer endpoints", i + 1)));
    }
    let q = Polytope::from_points(&sum_vertices(&polys)?)?;
    if !q.is_full_dim() {
        return Err(Error::DimensionDeficient { dim: q.dim(), ambient: n, hint: "segment directions must be independent".into() });
    }
    let mv = alternating_volume(&polys)?;
    let mut shifted = 0;
    for x in q.lattice_points() {
        if q.shifted_contains(&x, delta.as_slice())? {
            shifted += 1;
        }
    }
    let volume = q.volume();
    let pass = mv == volume && volume == Rational::from_int(shifted as i64);
    Ok(BrickReport { mv, volume, shifted_lattice_points: shifted, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(pts: &[&[i64]]) -> Polytope {
        Polytope::from_ints(pts).unwrap()
    }

    fn all_methods(polys: &[Polytope]) -> Vec<Rational> {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        MvMethod::ALL.iter().map(|&m| mixed_volume(polys, m, &mut rng).unwrap()).collect()
    }

    #[test]
    fn square_and_segment() {
        let ps = [poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), poly(&[&[0, 0], &[2, 0]])];
        assert_eq!(all_methods(&ps), vec![qi(2); 3]);
    }

    #[test]
    fn unit_segments_and_quadrilaterals() {
        assert_eq!(all_methods(&[poly(&[&[0, 0], &[1, 0]]), poly(&[&[0, 0], &[0, 1]])]), vec![qi(1); 3]);
        let ps = [poly(&[&[0, 0], &[2, 1], &[1, 2], &[2, 2]]), poly(&[&[0, 0], &[2, 1], &[1, 2]])];
        assert_eq!(all_methods(&ps), vec![qi(4); 3]);
    }

    #[test]
    fn parallel_segments_give_zero() {
        let ps = [poly(&[&[0, 0], &[1, 0]]), poly(&[&[0, 0], &[3, 0]])];
        assert_eq!(all_methods(&ps), vec![qi(0); 3]);
    }

    #[test]
    fn bricks() {
        let cases: [(&[&[i64]], &[&[i64]], i64); 3] = [
            (&[&[0, 0], &[1, 0]], &[&[0, 0], &[0, 1]], 1),
            (&[&[0, 0], &[2, 0]], &[&[0, 0], &[0, 3]], 6),
            (&[&[0, 0], &[1, 1]], &[&[0, 0], &[1, -1]], 2),
        ];
        let delta = Direction::new(vec![crate::rational::q(3, 7), crate::rational::q(-2, 11)]).unwrap();
        for (a, b, want) in cases {
            let segs = [Support::from_ints(1, a).unwrap(), Support::from_ints(2, b).unwrap()];
            let rep = brick_identity(&segs, &delta).unwrap();
            assert!(rep.pass, "{rep:?}");
            assert_eq!(rep.volume, qi(want));
        }
    }
}
