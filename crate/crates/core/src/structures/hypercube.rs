//! Hypercube positions indexing the tensor factors of `B_n` and `A_n`.
//!
//! At level `n` the positions are weakly increasing tuples
//! `0 ≤ j_1 ≤ … ≤ j_d ≤ n+1`, ordered lexicographically. A position is on
//! the boundary when `j_1 = 0`, `j_d = n+1`, or two adjacent coordinates
//! agree; the remaining interior positions are strictly increasing tuples in
//! `1..=n` and correspond to the cells of `X_n`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::sphere::{binomial, monotone_tuples};

pub type Position = Vec<u8>;

/// `μ_i(v) = v` for `v ≤ i`, else `v − 1`: the collapse `{0..n+1} → {0..n}`
/// identifying `i` and `i+1`.
pub fn merge_map(n: usize, i: usize, v: usize) -> Result<usize> {
    if i > n || v > n + 1 {
        return Err(Error::argument(format!("μ_{i}({v}) undefined at level {n}")));
    }
    Ok(if v <= i { v } else { v - 1 })
}

/// `ν_i(v) = v` for `v ≤ i`, else `v + 1`: the injection `{0..n+1} → {0..n+2}`
/// skipping `i+1`.
pub fn insert_map(n: usize, i: usize, v: usize) -> Result<usize> {
    if i > n || v > n + 1 {
        return Err(Error::argument(format!("ν_{i}({v}) undefined at level {n}")));
    }
    Ok(if v <= i { v } else { v + 1 })
}

#[inline]
fn mu(i: usize, v: u8) -> u8 {
    if (v as usize) <= i {
        v
    } else {
        v - 1
    }
}

#[inline]
fn nu(i: usize, v: u8) -> u8 {
    if (v as usize) <= i {
        v
    } else {
        v + 1
    }
}

pub fn merge_position(i: usize, p: &[u8]) -> Position {
    p.iter().map(|&v| mu(i, v)).collect()
}

pub fn insert_position(i: usize, p: &[u8]) -> Position {
    p.iter().map(|&v| nu(i, v)).collect()
}

pub fn shift_position(p: &[u8]) -> Position {
    p.iter().map(|&v| v + 1).collect()
}

/// Positions with coordinates in `0..=top`, lexicographic.
fn positions_up_to(d: usize, top: usize) -> Vec<Position> {
    monotone_tuples(d, 0, top).into_iter().map(|t| t.into_iter().map(|x| x as u8).collect()).collect()
}

/// All positions at level `n`.
pub fn positions(d: usize, n: usize) -> Vec<Position> {
    positions_up_to(d, n + 1)
}

/// Whether `p` is a valid position at level `n`.
pub fn is_position(d: usize, n: usize, p: &[u8]) -> bool {
    p.len() == d && p.windows(2).all(|w| w[0] <= w[1]) && p.last().is_none_or(|&x| x as usize <= n + 1)
}

/// The three boundary clauses: `j_1 = 0`, `j_d = n+1`, or `j_s = j_{s+1}`.
pub fn is_boundary(n: usize, p: &[u8]) -> bool {
    p.first() == Some(&0) || p.last().map(|&x| x as usize) == Some(n + 1) || p.windows(2).any(|w| w[0] == w[1])
}

pub fn boundary_positions(d: usize, n: usize) -> Vec<Position> {
    positions(d, n).into_iter().filter(|p| is_boundary(n, p)).collect()
}

pub fn interior_positions(d: usize, n: usize) -> Vec<Position> {
    positions(d, n).into_iter().filter(|p| !is_boundary(n, p)).collect()
}

/// `C(n+d+1, d)`.
pub fn position_count(d: usize, n: usize) -> usize {
    binomial(n + d + 1, d)
}

/// `C(n+d+1, d) − C(n, d)`.
pub fn boundary_count(d: usize, n: usize) -> usize {
    position_count(d, n) - binomial(n, d)
}

/// How the cells of `X_n` are placed on interior positions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InteriorBijection {
    /// `(j_1, …, j_d) ↦ (j_1, j_2 + 1, …, j_d + d − 1)`.
    #[default]
    Natural,
    /// Cell `k` is placed where the natural bijection puts cell `k+1`
    /// (cyclically). Used only to show that the checks detect a wrong φ.
    Shifted,
}

/// Interior position of a classic monotone tuple.
pub fn interior_position(classic: &[usize]) -> Position {
    classic.iter().enumerate().map(|(s, &j)| (j + s) as u8).collect()
}

/// Inverse of [`interior_position`].
pub fn classic_tuple(interior: &[u8]) -> Vec<usize> {
    interior.iter().enumerate().map(|(s, &j)| j as usize - s).collect()
}

/// Cached position data for one level.
#[derive(Clone, Debug)]
pub struct LevelGeometry {
    d: usize,
    /// `n + 1`, the largest coordinate; 0 for the augmentation level `−1`.
    top: usize,
    positions: Vec<Position>,
    index: HashMap<Position, u32>,
    boundary: Vec<bool>,
    /// Position index of the interior slot `k` (slot order = cell order).
    slots: Vec<u32>,
}

impl LevelGeometry {
    /// Level `n ≥ 0`.
    pub fn new(d: usize, n: usize, bijection: InteriorBijection) -> Self {
        Self::with_top(d, n + 1, bijection)
    }

    /// The level `−1`, a single position `(0, …, 0)`.
    pub fn augmentation(d: usize) -> Self {
        Self::with_top(d, 0, InteriorBijection::Natural)
    }

    fn with_top(d: usize, top: usize, bijection: InteriorBijection) -> Self {
        let positions = positions_up_to(d, top);
        let index: HashMap<Position, u32> =
            positions.iter().enumerate().map(|(k, p)| (p.clone(), k as u32)).collect();
        let boundary: Vec<bool> = positions
            .iter()
            .map(|p| top == 0 || p.first() == Some(&0) || p.last().map(|&x| x as usize) == Some(top) || p.windows(2).any(|w| w[0] == w[1]))
            .collect();
        let mut slots: Vec<u32> = if top >= 1 {
            let n = top - 1;
            if n >= d {
                monotone_tuples(d, 1, n - d + 1).iter().map(|t| index[&interior_position(t)]).collect()
            } else {
                Vec::new()
            }
        } else {
            Vec::new()
        };
        if bijection == InteriorBijection::Shifted && slots.len() > 1 {
            slots.rotate_left(1);
        }
        LevelGeometry { d, top, positions, index, boundary, slots }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `n + 1`; 0 at the augmentation level.
    pub fn max_coordinate(&self) -> usize {
        self.top
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn position(&self, k: usize) -> &Position {
        &self.positions[k]
    }

    pub fn index_of(&self, p: &[u8]) -> Option<usize> {
        self.index.get(p).map(|&k| k as usize)
    }

    pub fn is_boundary(&self, k: usize) -> bool {
        self.boundary[k]
    }

    /// Interior position indices in slot order.
    pub fn slots(&self) -> &[u32] {
        &self.slots
    }

    /// For each position `k` at this level, the index of `μ_i` of it at the
    /// level below.
    pub fn merge_table(&self, i: usize, below: &LevelGeometry) -> Vec<u32> {
        self.positions.iter().map(|p| below.index[&merge_position(i, p)]).collect()
    }

    /// For each position at this level, the index of `ν_i` of it above.
    pub fn insert_table(&self, i: usize, above: &LevelGeometry) -> Vec<u32> {
        self.positions.iter().map(|p| above.index[&insert_position(i, p)]).collect()
    }

    /// For each position at this level, the index of `p + (1, …, 1)` above.
    pub fn shift_table(&self, above: &LevelGeometry) -> Vec<u32> {
        self.positions.iter().map(|p| above.index[&shift_position(p)]).collect()
    }
}
