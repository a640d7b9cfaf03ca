//! First and second phase moments on the fixed window `[−π, π)`.
//!
//! A plain rectangle sum of `φ p(φ)` is only first-order accurate because
//! `φ` jumps at the seam. Instead the samples are treated as a band-limited
//! trigonometric polynomial (exact whenever the grid resolves the basis) and
//! `∫φ p` and `∫φ² p` are integrated analytically mode by mode. Folding that
//! into the samples gives fixed real weight vectors, so each moment is still a
//! single weighted sum in node order.

use std::f64::consts::PI;

use super::{PhaseDistribution, PhaseGrid};
use crate::{tol, Error, Result};

/// Weights `W₁`, `W₂` with `∫φ p = Σ_j W₁_j p_j` and `∫φ² p = Σ_j W₂_j p_j`
/// for any density band-limited to `|k| < M/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentWeights {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
}

impl MomentWeights {
    pub fn new(grid: &PhaseGrid) -> Self {
        let m = grid.points();
        let mf = m as f64;
        // sin/cos of 2πr/M; kφ_j = −kπ + 2πkj/M and the (−1)^k cancels
        let (sin_t, cos_t): (Vec<f64>, Vec<f64>) = (0..m)
            .map(|r| {
                let a = 2.0 * PI * r as f64 / mf;
                (a.sin(), a.cos())
            })
            .unzip();
        let kmax = (m - 1) / 2;
        let nyquist = m.is_multiple_of(2) && m >= 2;
        let mut first = Vec::with_capacity(m);
        let mut second = Vec::with_capacity(m);
        for j in 0..m {
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            let mut r = 0usize;
            for k in 1..=kmax {
                r += j;
                if r >= m {
                    r %= m;
                }
                let kf = k as f64;
                s1 += sin_t[r] / kf;
                s2 += cos_t[r] / (kf * kf);
            }
            let mut w2 = 2.0 * PI.powi(3) / 3.0 + 8.0 * PI * s2;
            if nyquist {
                let half = (m / 2) as f64;
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                w2 += sign * 4.0 * PI / (half * half);
            }
            first.push(-4.0 * PI * s1 / mf);
            second.push(w2 / mf);
        }
        MomentWeights { first, second }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseMoments {
    pub mean: f64,
    pub variance: f64,
}

/// Mean and variance of a normalized phase density on `[−π, π)` (no circular
/// re-centering).
pub fn phase_moments(dist: &PhaseDistribution) -> Result<PhaseMoments> {
    let norm = dist.normalization();
    if (norm - 1.0).abs() > tol::QUAD {
        return Err(Error::validation(
            "phase distribution",
            format!("normalization {norm} ≠ 1"),
        ));
    }
    let w = MomentWeights::new(&dist.grid());
    let p = dist.density();
    let mean: f64 = w.first.iter().zip(p).map(|(a, b)| a * b).sum();
    let second: f64 = w.second.iter().zip(p).map(|(a, b)| a * b).sum();
    Ok(PhaseMoments {
        mean,
        variance: second - mean * mean,
    })
}
