//! Families `(W_I)` of point sets indexed by subsets of the summands.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{ExactPoint, Support};
use crate::polytope::Polytope;
use crate::subdivision::{mask_indices, MixedSubdivision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `W_I = sum of W_i`.
    Minkowski,
    /// `W_I` = integer points of `P_I`.
    Lattice,
    /// Sums of the `W_i` inside the interior of `P_I`.
    InteriorMinkowski,
    /// Integer points in the interior of `P_I`.
    InteriorLattice,
    /// Vertices of the restricted subdivisions.
    Vertices,
    /// Integer points in the relative interior of `P_I`.
    RelativeInteriorLattice,
    /// Explicitly given members.
    Custom,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        FamilyKind::Minkowski,
        FamilyKind::Lattice,
        FamilyKind::InteriorMinkowski,
        FamilyKind::InteriorLattice,
        FamilyKind::Vertices,
        FamilyKind::RelativeInteriorLattice,
        FamilyKind::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Minkowski => "minkowski",
            FamilyKind::Lattice => "lattice",
            FamilyKind::InteriorMinkowski => "interior-minkowski",
            FamilyKind::InteriorLattice => "interior-lattice",
            FamilyKind::Vertices => "vertices",
            FamilyKind::RelativeInteriorLattice => "relint-lattice",
            FamilyKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyKind> {
        FamilyKind::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn needs_lattice(self) -> bool {
        matches!(
            self,
            FamilyKind::Lattice | FamilyKind::InteriorLattice | FamilyKind::RelativeInteriorLattice
        )
    }

    /// Whether the terminal vertices are interior-excluded, so the sum over
    /// nonempty subsets is the quantity bounded below.
    pub fn is_interior(self) -> bool {
        matches!(self, FamilyKind::InteriorMinkowski | FamilyKind::InteriorLattice)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Members `W_I` and carriers `P_I` for every nonempty `I`, indexed by bitmask.
#[derive(Clone, Debug)]
pub struct SubsetFamily {
    kind: FamilyKind,
    r: usize,
    members: Vec<BTreeSet<ExactPoint>>,
    carriers: Vec<Option<Polytope>>,
}

impl SubsetFamily {
    /// Builds a family of the given kind over the hulls `P_i` of the supports.
    ///
    /// The vertices kind reads `V_I` from `sub` (whose supports are used for the
    /// carriers); the other kinds ignore it.
    pub fn build(kind: FamilyKind, supports: &[Support], sub: Option<&MixedSubdivision>) -> Result<Self> {
        let r = supports.len();
        if r == 0 {
            return Err(Error::Empty("family generators"));
        }
        if kind.needs_lattice() {
            if let Some(s) = supports.iter().find(|s| !s.is_integral()) {
                return Err(Error::NonLattice(format!("support {} has non-integer points", s.label)));
            }
        }
        let hulls: Vec<Polytope> =
            supports.iter().map(|s| Polytope::from_points(s.points())).collect::<Result<_>>()?;
        let carriers = sum_carriers(&hulls)?;
        let mut sums: Vec<BTreeSet<ExactPoint>> = vec![BTreeSet::new(); 1 << r];
        if matches!(kind, FamilyKind::Minkowski | FamilyKind::InteriorMinkowski) {
            for mask in 1..1usize << r {
                let i = mask.trailing_zeros() as usize;
                let rest = mask & (mask - 1);
                sums[mask] = if rest == 0 {
                    supports[i].points().iter().cloned().collect()
                } else {
                    let mut acc = BTreeSet::new();
                    for a in &sums[rest] {
                        for b in supports[i].points() {
                            acc.insert(a.add(b));
                        }
                    }
                    acc
                };
            }
        }
        let mut members = vec![BTreeSet::new(); 1 << r];
        let restricted: Option<Vec<MixedSubdivision>> = if kind == FamilyKind::Vertices {
            let sub = sub.ok_or_else(|| Error::Invalid("the vertices family needs a subdivision".into()))?;
            if sub.system().r() != r {
                return Err(Error::Invalid("subdivision and supports disagree on r".into()));
            }
            Some(
                (1..1usize << r)
                    .map(|mask| sub.restrict(&mask_indices(mask, r)))
                    .collect::<Result<_>>()?,
            )
        } else {
            None
        };
        for mask in 1..1usize << r {
            let p = carriers[mask].as_ref().expect("carrier");
            members[mask] = match kind {
                FamilyKind::Minkowski => std::mem::take(&mut sums[mask]),
                FamilyKind::InteriorMinkowski => sums[mask].iter().filter(|w| p.interior_contains(w)).cloned().collect(),
                FamilyKind::Lattice => p.lattice_points().into_iter().collect(),
                FamilyKind::InteriorLattice => {
                    p.lattice_points().into_iter().filter(|w| p.interior_contains(w)).collect()
                }
                FamilyKind::RelativeInteriorLattice => {
                    p.lattice_points().into_iter().filter(|w| p.relint_contains(w)).collect()
                }
                FamilyKind::Vertices => restricted.as_ref().expect("restrictions")[mask - 1].vertices(),
                FamilyKind::Custom => {
                    return Err(Error::Invalid("custom families are built from explicit members".into()))
                }
            };
        }
        Ok(SubsetFamily { kind, r, members, carriers })
    }

    /// A family with explicit members; `members[mask]` and `carriers[mask]` for
    /// `mask` in `1..2^r` (entry 0 is ignored). Members must lie in their carriers.
    pub fn from_parts(
        kind: FamilyKind,
        r: usize,
        mut members: Vec<BTreeSet<ExactPoint>>,
        carriers: Vec<Option<Polytope>>,
    ) -> Result<Self> {
        if members.len() != 1 << r || carriers.len() != 1 << r {
            return Err(Error::Invalid(format!("expected {} entries per list", 1usize << r)));
        }
        members[0].clear();
        for mask in 1..1usize << r {
            let Some(p) = &carriers[mask] else {
                return Err(Error::Invalid(format!("missing carrier for subset {mask:#b}")));
            };
            if let Some(w) = members[mask].iter().find(|w| !p.contains(w)) {
                return Err(Error::Invalid(format!("point {w} of subset {mask:#b} outside its carrier")));
            }
        }
        Ok(SubsetFamily { kind, r, members, carriers })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn ambient(&self) -> usize {
        self.carrier(1).ambient()
    }

    pub fn full_mask(&self) -> usize {
        (1 << self.r) - 1
    }

    /// `W_I` for a nonempty mask.
    pub fn member(&self, mask: usize) -> &BTreeSet<ExactPoint> {
        &self.members[mask]
    }

    /// `P_I` for a nonempty mask.
    pub fn carrier(&self, mask: usize) -> &Polytope {
        self.carriers[mask].as_ref().expect("nonempty mask")
    }

    /// `N(W) = sum over all I of (-1)^(r-|I|) |W_I|`, with `|W_empty| = 1`.
    pub fn alternating_sum(&self) -> i64 {
        self.alternating(|mask| self.members[mask].len() as i64)
    }

    /// `sum over all I of (-1)^(r-|I|) f(I)` with the empty term equal to 1.
    pub fn alternating(&self, mut f: impl FnMut(usize) -> i64) -> i64 {
        let mut total = sign(self.r, 0);
        for mask in 1..1usize << self.r {
            total += sign(self.r, mask.count_ones() as usize) * f(mask);
        }
        total
    }
}

/// `P_I = sum of P_i` for every nonempty mask (entry 0 is `None`).
pub fn sum_carriers(hulls: &[Polytope]) -> Result<Vec<Option<Polytope>>> {
    let r = hulls.len();
    let mut carriers: Vec<Option<Polytope>> = vec![None; 1 << r];
    for mask in 1..1usize << r {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let verts: Vec<ExactPoint> = match &carriers[rest] {
            None => hulls[i].vertices().to_vec(),
            Some(prev) => {
                let mut acc = BTreeSet::new();
                for a in prev.vertices() {
                    for b in hulls[i].vertices() {
                        acc.insert(a.add(b));
                    }
                }
                acc.into_iter().collect()
            }
        };
        carriers[mask] = Some(Polytope::from_points(&verts)?);
    }
    Ok(carriers)
}

/// `(-1)^(r - k)`.
pub fn sign(r: usize, k: usize) -> i64 {
    if (r - k).is_multiple_of(2) {
        1
    } else {
        -1
    }
}
