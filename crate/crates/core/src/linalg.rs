//! Gaussian elimination over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::point::ExactPoint;
use crate::rational::Rational;

pub type Vector = Vec<Rational>;
pub type Matrix = Vec<Vector>;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vector]) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    if !m[r][j].is_zero() {
                        let t = &f * &m[r][j];
                        m[i][j] -= t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vector]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Matrix {
    let (m, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            v
        })
        .collect()
}

/// Solves the square system `A x = b`; `None` when `A` is singular.
pub fn solve(a: &[Vector], b: &[Rational]) -> Option<Vector> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(a: &[Vector]) -> Option<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (m, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Positive rescaling of `v` to a primitive integer vector (zero stays zero).
pub fn primitive_integer(v: &[Rational]) -> Vector {
    let mut l = BigInt::one();
    for x in v {
        if !x.is_zero() {
            l = l.lcm(&x.denom());
        }
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_bigint(x / &g))
        .collect()
}

pub fn determinant(a: &[Vector]) -> Rational {
    let n = a.len();
    let mut m: Matrix = a.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for j in c..n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    det
}

/// Coordinates for the affine hull of a point set.
///
/// The hull's direction space is parametrised by a subset of the ambient
/// coordinates (the pivots), so charting a point is just reading those
/// coordinates. Linear functionals on the chart extend to ambient functionals
/// by placing their coefficients on the pivot coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineChart {
    pub ambient: usize,
    pub base: ExactPoint,
    pub pivots: Vec<usize>,
    /// Direction basis, in reduced echelon form with identity on the pivots.
    pub basis: Matrix,
    /// Rows `(e, c)` with `<e, x> = c` cutting out the affine hull.
    pub equations: Vec<(Vector, Rational)>,
}

impl AffineChart {
    pub fn of_points(points: &[ExactPoint]) -> AffineChart {
        let base = points[0].clone();
        let n = base.dim();
        let diffs: Matrix = points[1..].iter().map(|p| p.sub(&base).0).collect();
        let (basis, pivots) = if diffs.is_empty() { (vec![], vec![]) } else { rref(&diffs) };
        let equations = nullspace(&basis, n)
            .into_iter()
            .map(|e| {
                let e = primitive_integer(&e);
                let c = base.dot(&e);
                (e, c)
            })
            .collect();
        AffineChart { ambient: n, base, pivots, basis, equations }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn contains(&self, p: &ExactPoint) -> bool {
        self.equations.iter().all(|(e, c)| &p.dot(e) == c)
    }

    /// Chart coordinates of a point assumed to lie on the hull.
    pub fn to_chart(&self, p: &ExactPoint) -> Vector {
        self.pivots.iter().map(|&c| &p.0[c] - &self.base.0[c]).collect()
    }

    pub fn from_chart(&self, y: &[Rational]) -> ExactPoint {
        let mut x = self.base.clone();
        for (yj, row) in y.iter().zip(&self.basis) {
            if !yj.is_zero() {
                for (xi, bi) in x.0.iter_mut().zip(row) {
                    *xi += yj * bi;
                }
            }
        }
        x
    }

    /// Ambient functional agreeing with the chart functional `a` on the hull
    /// (up to the constant `<a, base>` on pivot coordinates).
    pub fn lift_functional(&self, a: &[Rational]) -> Vector {
        let mut out = vec![Rational::zero(); self.ambient];
        for (aj, &c) in a.iter().zip(&self.pivots) {
            out[c] = aj.clone();
        }
        out
    }

    /// Chart representation of a direction vector lying in the direction space.
    pub fn direction_to_chart(&self, d: &[Rational]) -> Vector {
        self.pivots.iter().map(|&c| d[c].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let s: Rational = row.iter().zip(&ns[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[qi(3), qi(5)]).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0], vec![q(3, 5), q(-1, 5)]);
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
        assert_eq!(determinant(&a), qi(5));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), qi(-1));
    }

    #[test]
    fn primitive() {
        assert_eq!(primitive_integer(&[q(1, 2), q(-3, 4)]), vec![qi(2), qi(-3)]);
        assert_eq!(primitive_integer(&[qi(0), qi(-6)]), vec![qi(0), qi(-1)]);
    }

    #[test]
    fn chart_roundtrip() {
        let pts = vec![
            ExactPoint::from_ints(&[1, 1, 1]),
            ExactPoint::from_ints(&[2, 3, 1]),
            ExactPoint::from_ints(&[0, -1, 1]),
        ];
        let ch = AffineChart::of_points(&pts);
        assert_eq!(ch.dim(), 1);
        assert_eq!(ch.equations.len(), 2);
        for p in &pts {
            assert!(ch.contains(p));
            assert_eq!(&ch.from_chart(&ch.to_chart(p)), p);
        }
        assert!(!ch.contains(&ExactPoint::from_ints(&[1, 1, 2])));
    }
}
