//! Seeded random instances.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::instance::Instance;
use crate::linalg::rank;
use crate::point::{minkowski_sum, ExactPoint, Support};
use crate::polytope::Polytope;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// `n, r <= 3`, at most 5 points per support, coordinates in `0..=6`.
    LatticeSmall,
    /// Perturbed points whose subset sum maps are all injective.
    GeneralPosition,
    /// `n` supports on segments with independent directions.
    Segments,
    /// One planar support used twice.
    SameSupport,
    /// Planar pairs together with supersets `W'_i ⊇ W_i`.
    Nested,
}

impl Profile {
    pub const ALL: [Profile; 5] =
        [Profile::LatticeSmall, Profile::GeneralPosition, Profile::Segments, Profile::SameSupport, Profile::Nested];

    pub fn name(self) -> &'static str {
        match self {
            Profile::LatticeSmall => "lattice-small",
            Profile::GeneralPosition => "general-position",
            Profile::Segments => "segments",
            Profile::SameSupport => "same-support",
            Profile::Nested => "nested",
        }
    }

    pub fn parse(s: &str) -> Option<Profile> {
        Profile::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn gen(profile: Profile, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inst = match profile {
        Profile::LatticeSmall => {
            let n = rng.gen_range(1..=3);
            let r = rng.gen_range(1..=3);
            Instance::from_supports(&random_lattice(n, r, 5, 6, true, &mut rng))
        }
        Profile::GeneralPosition => {
            let n = rng.gen_range(1..=3);
            let r = rng.gen_range(1..=3);
            Instance::from_supports(&general_position(n, r, 4, &mut rng))
        }
        Profile::Segments => {
            let n = rng.gen_range(1..=3);
            Instance::from_supports(&segments(n, &mut rng))
        }
        Profile::SameSupport => {
            let k = rng.gen_range(4..=6);
            Instance::from_supports(&same_support(k, 8, &mut rng))
        }
        Profile::Nested => {
            let (small, big) = nested(&mut rng);
            let mut inst = Instance::from_supports(&small);
            inst.superset = Some(big.iter().map(|s| s.points().to_vec()).collect());
            inst
        }
    };
    inst.label = Some(format!("{profile}-{seed}"));
    inst.seed = Some(seed);
    inst
}

fn random_point<R: Rng>(n: usize, max_coord: i64, rng: &mut R) -> ExactPoint {
    ExactPoint((0..n).map(|_| Rational::from_int(rng.gen_range(0..=max_coord))).collect())
}

fn random_set<R: Rng>(n: usize, k: usize, max_coord: i64, rng: &mut R) -> Vec<ExactPoint> {
    let cap = (max_coord as usize + 1).pow(n as u32);
    let k = k.min(cap);
    let mut set = BTreeSet::new();
    while set.len() < k {
        set.insert(random_point(n, max_coord, rng));
    }
    let mut pts: Vec<ExactPoint> = set.into_iter().collect();
    pts.shuffle(rng);
    pts
}

/// `r` supports in `Z^n` with `1..=max_points` points each and coordinates in
/// `0..=max_coord`; with `full_dim`, redrawn until their sum spans `R^n`.
pub fn random_lattice<R: Rng>(
    n: usize,
    r: usize,
    max_points: usize,
    max_coord: i64,
    full_dim: bool,
    rng: &mut R,
) -> Vec<Support> {
    loop {
        let supports: Vec<Support> = (0..r)
            .map(|i| {
                let k = rng.gen_range(1..=max_points);
                Support::new(i + 1, random_set(n, k, max_coord, rng)).expect("distinct points")
            })
            .collect();
        if !full_dim || sum_is_full_dim(&supports) {
            return supports;
        }
    }
}

pub fn sum_is_full_dim(supports: &[Support]) -> bool {
    let n = supports[0].ambient();
    let mut dirs = Vec::new();
    for s in supports {
        let base = &s.points()[0];
        for p in &s.points()[1..] {
            dirs.push(p.sub(base).0);
        }
    }
    n == 0 || (!dirs.is_empty() && rank(&dirs) == n)
}

/// Integer points moved by small rational offsets until every subset sum map
/// `W_{i1} x ... x W_{ik} -> W_I` is injective.
pub fn general_position<R: Rng>(n: usize, r: usize, max_points: usize, rng: &mut R) -> Vec<Support> {
    loop {
        let supports: Vec<Support> = (0..r)
            .map(|i| {
                let k = rng.gen_range(1..=max_points);
                let pts = random_set(n, k, 6, rng)
                    .into_iter()
                    .map(|p| {
                        ExactPoint(
                            p.0.into_iter()
                                .map(|c| c + Rational::new(rng.gen_range(1..=97), 1000 + rng.gen_range(0..=9000)))
                                .collect(),
                        )
                    })
                    .collect();
                Support::new(i + 1, pts).expect("distinct points")
            })
            .collect();
        if sums_injective(&supports) {
            return supports;
        }
    }
}

/// Whether `|sum_{i in I} W_i| = prod_{i in I} |W_i|` for every nonempty `I`.
pub fn sums_injective(supports: &[Support]) -> bool {
    let r = supports.len();
    (1..1usize << r).all(|mask| {
        let parts: Vec<&Support> = (0..r).filter(|i| mask & (1 << i) != 0).map(|i| &supports[i]).collect();
        let expected: usize = parts.iter().map(|s| s.len()).product();
        minkowski_sum(&parts).expect("same dimension").len() == expected
    })
}

/// `n` supports, each on a segment `b + t d` with `t` in a subset of `0..=3`
/// containing both ends, the directions `d` linearly independent.
pub fn segments<R: Rng>(n: usize, rng: &mut R) -> Vec<Support> {
    loop {
        let dirs: Vec<Vec<Rational>> = (0..n)
            .map(|_| (0..n).map(|_| Rational::from_int(rng.gen_range(-2..=2))).collect())
            .collect();
        if rank(&dirs) < n {
            continue;
        }
        return dirs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let base = random_point(n, 3, rng);
                let len = rng.gen_range(1..=3);
                let mut ts: Vec<i64> = vec![0, len];
                ts.extend((1..len).filter(|_| rng.gen_bool(0.5)));
                ts.sort_unstable();
                let pts = ts
                    .into_iter()
                    .map(|t| {
                        let t = Rational::from_int(t);
                        ExactPoint(base.0.iter().zip(d).map(|(b, x)| b + &(x * &t)).collect())
                    })
                    .collect();
                Support::new(i + 1, pts).expect("distinct points")
            })
            .collect();
    }
}

/// `W` with `k` points in the plane spanning it, returned twice.
pub fn same_support<R: Rng>(k: usize, max_coord: i64, rng: &mut R) -> Vec<Support> {
    loop {
        let pts = random_set(2, k, max_coord, rng);
        let s = Support::new(1, pts.clone()).expect("distinct points");
        if Polytope::from_points(&pts).map(|p| p.is_full_dim()).unwrap_or(false) {
            return vec![s, Support::new(2, pts).expect("distinct points")];
        }
    }
}

/// Planar pairs `W_i ⊆ W'_i` with one or two extra points per support.
pub fn nested<R: Rng>(rng: &mut R) -> (Vec<Support>, Vec<Support>) {
    let small = random_lattice(2, 2, 4, 4, true, rng);
    let big = small
        .iter()
        .map(|s| {
            let mut pts = s.points().to_vec();
            let extra = rng.gen_range(1..=2);
            while pts.len() < s.len() + extra {
                let p = random_point(2, 4, rng);
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            Support::new(s.label, pts).expect("distinct points")
        })
        .collect();
    (small, big)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_are_deterministic_and_bounded() {
        for p in Profile::ALL {
            assert_eq!(gen(p, 11), gen(p, 11));
            assert_eq!(Profile::parse(p.name()), Some(p));
        }
        let inst = gen(Profile::LatticeSmall, 3);
        assert!(inst.supports.iter().all(|s| s.len() <= 5));
        assert!(inst.supports.iter().flatten().flat_map(|p| p.0.iter()).all(|c| c.is_integer()
            && *c >= Rational::zero()
            && *c <= Rational::from_int(6)));
        let seg = gen(Profile::Segments, 7);
        let supports = seg.to_supports().unwrap();
        assert_eq!(supports.len(), seg.dim);
        assert!(sum_is_full_dim(&supports));
        for s in &supports {
            assert_eq!(Polytope::from_points(s.points()).unwrap().dim(), 1);
        }
        assert!(sums_injective(&gen(Profile::GeneralPosition, 1).to_supports().unwrap()));
    }
}
