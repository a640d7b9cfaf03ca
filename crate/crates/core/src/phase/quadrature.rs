//! Quadrature construction of `Φ̂ = ∫ φ dφ |φ⟩⟨φ|`, independent of the closed
//! form matrix elements in [`crate::operators`].
//!
//! `φ e^{ikφ}` is smooth on the closed interval but not periodic, so the
//! uniform rule is only first-order accurate here. A composite Gauss–Legendre
//! rule integrates it to rounding error.

use std::f64::consts::PI;

use super::phase_state;
use crate::hilbert::EnergyBasis;
use crate::{CMatrix, C64};

/// Panels of the default oracle rule.
pub const ORACLE_PANELS: usize = 512;
/// Gauss–Legendre order per panel; `512 × 8 = 4096` nodes.
pub const ORACLE_ORDER: usize = 8;

/// Gauss–Legendre nodes and weights on `[−1, 1]`, ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order > 0, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        for _ in 0..100 {
            let (p, p_prev) = legendre_pair(order, x);
            let dx = p / (n * (x * p - p_prev) / (x * x - 1.0));
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, p_prev) = legendre_pair(order, x);
        let dp = n * (x * p - p_prev) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_{n−1}(x))`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Composite Gauss–Legendre nodes and weights on `[−π, π]`.
pub fn composite_rule(panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = 2.0 * PI / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let mid = -PI + h * (p as f64 + 0.5);
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + 0.5 * h * xi, 0.5 * h * wi));
        }
    }
    out
}

/// `Σ_j w_j φ_j |φ_j⟩⟨φ_j|` over the composite rule.
pub fn phase_operator_quadrature(basis: EnergyBasis, panels: usize, order: usize) -> CMatrix {
    let d = basis.dimension();
    let mut acc = CMatrix::zeros(d, d);
    for (phi, w) in composite_rule(panels, order) {
        let v = phase_state(phi, basis);
        let a = v.amplitudes();
        acc += (a * a.adjoint()) * C64::new(w * phi, 0.0);
    }
    acc
}

/// [`phase_operator_quadrature`] with the default 4096-node rule.
pub fn phase_operator_oracle(basis: EnergyBasis) -> CMatrix {
    phase_operator_quadrature(basis, ORACLE_PANELS, ORACLE_ORDER)
}
