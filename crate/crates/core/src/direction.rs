//! Infinitesimal shift directions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank, Vector};
use crate::rational::Rational;

const PRIMES: [i64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// A nonzero direction standing for an arbitrarily small shift.
///
/// Only the direction matters; all predicates use exact sign tests.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction(Vector);

impl Direction {
    pub fn new(v: Vector) -> Result<Self> {
        if v.iter().all(Rational::is_zero) {
            return Err(Error::Invalid("zero direction".into()));
        }
        Ok(Direction(v))
    }

    pub fn from_ints(v: &[i64]) -> Result<Self> {
        Direction::new(v.iter().map(|&x| Rational::from_int(x)).collect())
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Components `±p_j^e / m` with `p_j` the j-th prime, `e` in 1..=8 and
    /// `m` in 1..=1000, so zero inner products with small integer normals are
    /// rare.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Direction {
        let v = (0..n)
            .map(|j| {
                let p = PRIMES[j % PRIMES.len()];
                let e = rng.gen_range(1..=8u32);
                let m = rng.gen_range(1..=1000i64);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                Rational::new(sign * p.pow(e), m)
            })
            .collect();
        Direction(v)
    }

    /// `k` random linearly independent directions.
    pub fn random_independent<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<Direction> {
        loop {
            let ds: Vec<Direction> = (0..k).map(|_| Direction::random(n, rng)).collect();
            if independent(&ds) {
                return ds;
            }
        }
    }
}

pub fn independent(ds: &[Direction]) -> bool {
    let rows: Vec<Vector> = ds.iter().map(|d| d.0.clone()).collect();
    rows.is_empty() || rank(&rows) == rows.len()
}
