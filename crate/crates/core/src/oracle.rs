//! Brute-force reference computations for small instances, sharing no geometry
//! code with the rest of the crate.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::point::Support;
use crate::rational::Rational;

pub const MAX_POINTS: usize = 12;
pub const MAX_DIM: usize = 3;

type P = Vec<Rational>;

fn check(sets: &[&[P]]) -> Result<usize> {
    let n = sets.first().and_then(|s| s.first()).map(Vec::len).ok_or(Error::Empty("oracle input"))?;
    if n > MAX_DIM {
        return Err(Error::SizeCap(format!("oracle handles dimension at most {MAX_DIM}, got {n}")));
    }
    for s in sets {
        if s.len() > MAX_POINTS {
            return Err(Error::SizeCap(format!("oracle handles at most {MAX_POINTS} points per set, got {}", s.len())));
        }
        if s.iter().any(|p| p.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: s.iter().find(|p| p.len() != n).unwrap().len() });
        }
    }
    Ok(n)
}

fn raw(supports: &[Support]) -> Vec<Vec<P>> {
    supports.iter().map(|s| s.points().iter().map(|p| p.0.clone()).collect()).collect()
}

fn subset_sum(sets: &[Vec<P>], mask: usize, n: usize) -> HashSet<P> {
    let mut acc: HashSet<P> = HashSet::from([vec![Rational::zero(); n]]);
    for (i, s) in sets.iter().enumerate() {
        if mask >> i & 1 == 1 {
            acc = acc.iter().flat_map(|a| s.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())).collect();
        }
    }
    acc
}

fn alt_sign(r: usize, k: usize) -> i64 {
    if (r - k).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `D(W_1, ..., W_r)` by literal subset enumeration.
pub fn dmv(supports: &[Support]) -> Result<i64> {
    let sets = raw(supports);
    let refs: Vec<&[P]> = sets.iter().map(Vec::as_slice).collect();
    let n = check(&refs)?;
    let r = sets.len();
    let mut total = alt_sign(r, 0);
    for mask in 1..1usize << r {
        total += alt_sign(r, mask.count_ones() as usize) * subset_sum(&sets, mask, n).len() as i64;
    }
    Ok(total)
}

/// `MV(conv W_1, ..., conv W_n)` as the alternating sum of volumes.
pub fn mv(supports: &[Support]) -> Result<Rational> {
    let sets = raw(supports);
    let refs: Vec<&[P]> = sets.iter().map(Vec::as_slice).collect();
    let n = check(&refs)?;
    if sets.len() != n {
        return Err(Error::Invalid(format!("need {n} sets in dimension {n}")));
    }
    let mut total = Rational::zero();
    for mask in 1..1usize << n {
        let pts: Vec<P> = subset_sum(&sets, mask, n).into_iter().collect();
        let v = volume(&pts);
        total += if alt_sign(n, mask.count_ones() as usize) > 0 { v } else { -v };
    }
    Ok(total)
}

/// `MV` by the lattice point formula, for integer inputs.
pub fn lattice_mv(supports: &[Support]) -> Result<i64> {
    let sets = raw(supports);
    let refs: Vec<&[P]> = sets.iter().map(Vec::as_slice).collect();
    let n = check(&refs)?;
    if sets.len() != n {
        return Err(Error::Invalid(format!("need {n} sets in dimension {n}")));
    }
    if sets.iter().flatten().flatten().any(|c| !c.is_integer()) {
        return Err(Error::NonLattice("lattice oracle needs integer points".into()));
    }
    let mut total = alt_sign(n, 0);
    for mask in 1..1usize << n {
        let pts: Vec<P> = subset_sum(&sets, mask, n).into_iter().collect();
        total += alt_sign(n, mask.count_ones() as usize) * lattice_count(&pts) as i64;
    }
    Ok(total)
}

fn sub(a: &P, b: &P) -> P {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dotp(a: &P, b: &P) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &P, b: &P) -> P {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn cross2(o: &P, a: &P, b: &P) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Counter-clockwise hull of planar points (monotone chain), collinear points dropped.
fn hull2(pts: &[P]) -> Vec<P> {
    let mut v: Vec<P> = pts.to_vec();
    v.sort();
    v.dedup();
    if v.len() < 3 {
        return v;
    }
    let mut lower: Vec<P> = Vec::new();
    for p in &v {
        while lower.len() >= 2 && !cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<P> = Vec::new();
    for p in v.iter().rev() {
        while upper.len() >= 2 && !cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn area2(h: &[P]) -> Rational {
    if h.len() < 3 {
        return Rational::zero();
    }
    let o = &h[0];
    (1..h.len() - 1).map(|i| cross2(o, &h[i], &h[i + 1])).sum::<Rational>() / Rational::from_int(2)
}

/// Facets of a 3-dimensional point set: `(normal, offset)` with `<normal, x> <= offset`.
fn facets3(pts: &[P]) -> Vec<(P, Rational)> {
    let mut out: Vec<(P, Rational)> = Vec::new();
    let k = pts.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let nrm = cross(&sub(&pts[b], &pts[a]), &sub(&pts[c], &pts[a]));
                if nrm.iter().all(Rational::is_zero) {
                    continue;
                }
                let off = dotp(&nrm, &pts[a]);
                let vals: Vec<Rational> = pts.iter().map(|p| dotp(&nrm, p) - &off).collect();
                let (nrm, off) = if vals.iter().all(|v| !v.is_positive()) {
                    (nrm, off)
                } else if vals.iter().all(|v| !v.is_negative()) {
                    (nrm.iter().map(|x| -x).collect(), -off)
                } else {
                    continue;
                };
                let g = nrm.iter().find(|x| !x.is_zero()).unwrap().abs();
                let nrm: P = nrm.iter().map(|x| x / &g).collect();
                let off = off / &g;
                if !out.iter().any(|(m, o)| *m == nrm && *o == off) {
                    out.push((nrm, off));
                }
            }
        }
    }
    out
}

fn affine_rank(pts: &[P]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    let mut rows: Vec<P> = pts[1..].iter().map(|p| sub(p, &pts[0])).collect();
    let n = pts[0].len();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &rows[rank][col];
                let pr = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Euclidean volume of the convex hull in its ambient space (0 when not full-dimensional).
pub fn volume(pts: &[P]) -> Rational {
    let n = pts[0].len();
    if affine_rank(pts) < n {
        return Rational::zero();
    }
    match n {
        1 => {
            let lo = pts.iter().map(|p| &p[0]).min().unwrap();
            let hi = pts.iter().map(|p| &p[0]).max().unwrap();
            hi - lo
        }
        2 => area2(&hull2(pts)),
        3 => {
            let centre: P = (0..3)
                .map(|j| pts.iter().map(|p| p[j].clone()).sum::<Rational>() / Rational::from_int(pts.len() as i64))
                .collect();
            let mut total = Rational::zero();
            for (nrm, off) in facets3(pts) {
                let on: Vec<&P> = pts.iter().filter(|p| dotp(&nrm, p) == off).collect();
                // Project the facet to the coordinate plane where the normal is largest.
                let drop = (0..3).max_by_key(|&j| nrm[j].abs()).unwrap();
                let keep: Vec<usize> = (0..3).filter(|&j| j != drop).collect();
                let flat: Vec<P> = on.iter().map(|p| vec![p[keep[0]].clone(), p[keep[1]].clone()]).collect();
                let area_proj = area2(&hull2(&flat)).abs();
                // Pyramid over the facet from the centre: area * height / 3, with
                // area = area_proj * |nrm| / |nrm_drop| and height = (off - <nrm, c>) / |nrm|.
                let h = &off - dotp(&nrm, &centre);
                total += area_proj * h / nrm[drop].abs() / Rational::from_int(3);
            }
            total
        }
        _ => unreachable!("dimension checked"),
    }
}

fn contains(pts: &[P], x: &P) -> bool {
    let n = x.len();
    let d = affine_rank(pts);
    if d == 0 {
        return pts[0] == *x;
    }
    let mut with_x = pts.to_vec();
    with_x.push(x.clone());
    if affine_rank(&with_x) > d {
        return false;
    }
    if d == 1 {
        let base = &pts[0];
        let dir = pts.iter().map(|p| sub(p, base)).find(|v| v.iter().any(|c| !c.is_zero())).unwrap();
        let t = |p: &P| dotp(&sub(p, base), &dir);
        let lo = pts.iter().map(t).min().unwrap();
        let hi = pts.iter().map(t).max().unwrap();
        let tx = t(x);
        return lo <= tx && tx <= hi;
    }
    if d == 2 {
        // Planar in R^2 or R^3: project along a coordinate the plane does not contain.
        let keep: Vec<usize> = if n == 2 {
            vec![0, 1]
        } else {
            let nrm = {
                let base = &pts[0];
                let vs: Vec<P> = pts.iter().map(|p| sub(p, base)).collect();
                let mut found = None;
                'outer: for a in &vs {
                    for b in &vs {
                        let c = cross(a, b);
                        if c.iter().any(|v| !v.is_zero()) {
                            found = Some(c);
                            break 'outer;
                        }
                    }
                }
                found.unwrap()
            };
            let drop = (0..3).find(|&j| !nrm[j].is_zero()).unwrap();
            (0..3).filter(|&j| j != drop).collect()
        };
        let flat: Vec<P> = pts.iter().map(|p| keep.iter().map(|&j| p[j].clone()).collect()).collect();
        let fx: P = keep.iter().map(|&j| x[j].clone()).collect();
        let h = hull2(&flat);
        return (0..h.len()).all(|i| !cross2(&h[i], &h[(i + 1) % h.len()], &fx).is_negative());
    }
    facets3(pts).iter().all(|(nrm, off)| dotp(nrm, x) <= *off)
}

/// `|Z^n ∩ conv(pts)|` by scanning the bounding box.
pub fn lattice_count(pts: &[P]) -> usize {
    let n = pts[0].len();
    let lo: Vec<i64> = (0..n).map(|j| pts.iter().map(|p| p[j].ceil().to_i64().unwrap()).min().unwrap()).collect();
    let hi: Vec<i64> = (0..n).map(|j| pts.iter().map(|p| p[j].floor().to_i64().unwrap()).max().unwrap()).collect();
    let mut count = 0;
    let mut cur = lo.clone();
    loop {
        let x: P = cur.iter().map(|&c| Rational::from_int(c)).collect();
        if contains(pts, &x) {
            count += 1;
        }
        let mut j = 0;
        loop {
            if j == n {
                return count;
            }
            cur[j] += 1;
            if cur[j] <= hi[j] {
                break;
            }
            cur[j] = lo[j];
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn sup(label: usize, pts: &[&[i64]]) -> Support {
        Support::from_ints(label, pts).unwrap()
    }

    #[test]
    fn small_values() {
        let square = sup(1, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let seg = sup(2, &[&[0, 0], &[2, 0]]);
        assert_eq!(dmv(&[square.clone(), seg.clone()]).unwrap(), 3);
        assert_eq!(mv(&[square.clone(), seg.clone()]).unwrap(), qi(2));
        assert_eq!(lattice_mv(&[square.clone(), seg]).unwrap(), 2);
        assert_eq!(dmv(&[square, sup(2, &[&[3, 3]])]).unwrap(), 0);
    }

    #[test]
    fn cube_volume_and_points() {
        let mut pts = Vec::new();
        for x in [0, 2] {
            for y in [0, 2] {
                for z in [0, 2] {
                    pts.push(vec![qi(x), qi(y), qi(z)]);
                }
            }
        }
        assert_eq!(volume(&pts), qi(8));
        assert_eq!(lattice_count(&pts), 27);
        let tri = vec![vec![qi(0), qi(0), qi(0)], vec![qi(2), qi(0), qi(0)], vec![qi(0), qi(2), qi(0)]];
        assert_eq!(lattice_count(&tri), 6);
        let seg = vec![vec![qi(0), qi(0), qi(0)], vec![qi(2), qi(2), qi(2)]];
        assert_eq!(lattice_count(&seg), 3);
    }

    #[test]
    fn size_cap() {
        let big: Vec<Vec<i64>> = (0..13).map(|i| vec![i]).collect();
        let refs: Vec<&[i64]> = big.iter().map(Vec::as_slice).collect();
        let s = Support::from_ints(1, &refs).unwrap();
        assert!(matches!(dmv(&[s]), Err(Error::SizeCap(_))));
    }
}
