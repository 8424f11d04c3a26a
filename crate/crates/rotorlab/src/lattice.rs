//! Lattice points in `Z^d` and the fixed direction ordering.
//!
//! Directions are indexed by `j` in `Z_{2d}` with the convention
//! `e_{2i} = -u_{i+1}` and `e_{2i+1} = +u_{i+1}` where `u_k` is the k-th
//! unit vector. In particular for d=1: `e_0 = -1`, `e_1 = +1`, which makes
//! the one-dimensional closed forms for `T^1` hold with no index remapping.

use crate::{Result, RotorError};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A point (or offset) in `Z^d`. Serializes as a JSON array of integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn origin(d: usize) -> Self {
        LatticePoint(vec![0; d])
    }

    pub fn new(coords: Vec<i64>) -> Self {
        assert!(!coords.is_empty(), "lattice points need dimension >= 1");
        LatticePoint(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinate-sum parity: 0 or 1. `v <-> n` iff `parity(v) == n mod 2`.
    pub fn parity(&self) -> u8 {
        (self.0.iter().map(|c| c.rem_euclid(2)).sum::<i64>() % 2) as u8
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn l2_norm_sq(&self) -> u64 {
        self.0.iter().map(|c| (c * c) as u64).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.l2_norm_sq() as f64).sqrt()
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), other.dim());
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), other.dim());
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }

    /// Canonical representative under coordinate sign flips and permutations:
    /// absolute values sorted in decreasing order. `S_t` is invariant on orbits.
    pub fn canonical(&self) -> LatticePoint {
        let mut abs: Vec<i64> = self.0.iter().map(|c| c.abs()).collect();
        abs.sort_unstable_by(|a, b| b.cmp(a));
        LatticePoint(abs)
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", strs.join(","))
    }
}

/// Rotor state / direction index `j` in `Z_{2d}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DirectionIndex(pub usize);

impl DirectionIndex {
    pub fn checked(j: usize, d: usize) -> Result<Self> {
        if j < 2 * d {
            Ok(DirectionIndex(j))
        } else {
            Err(RotorError::BadDirection { j, d })
        }
    }

    /// All `2d` direction indices in order.
    pub fn all(d: usize) -> impl Iterator<Item = DirectionIndex> {
        (0..2 * d).map(DirectionIndex)
    }

    /// The paired opposite direction: 2i <-> 2i+1, so `e_j.opposite() == -e_j`.
    pub fn opposite(self) -> DirectionIndex {
        DirectionIndex(self.0 ^ 1)
    }
}

/// The unit step `e_j` under the fixed ordering.
pub fn direction_vector(j: DirectionIndex, d: usize) -> LatticePoint {
    assert!(j.0 < 2 * d, "direction index {} out of range for d={}", j.0, d);
    let mut coords = vec![0i64; d];
    coords[j.0 / 2] = if j.0 % 2 == 0 { -1 } else { 1 };
    LatticePoint(coords)
}
