use std::f64::consts::{PI, TAU};

use crate::{Error, Result};

/// Uniform grid `φ_j = −π + 2πj/M`, `j = 0..M`, with equal weights `2π/M`.
///
/// `−π` is a node and `+π` is not, so the periodic seam is sampled once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseGrid {
    points: usize,
}

impl PhaseGrid {
    pub fn new(points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::Domain("phase grid needs at least one node".into()));
        }
        Ok(PhaseGrid { points })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn weight(&self) -> f64 {
        TAU / self.points as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -PI + TAU * j as f64 / self.points as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|j| self.node(j))
    }

    /// Index of the node at `−φ_j` (the grid is symmetric under reflection
    /// modulo 2π: `−φ_j ≡ φ_{(M−j) mod M}`).
    pub fn mirror(&self, j: usize) -> usize {
        (self.points - j) % self.points
    }
}
