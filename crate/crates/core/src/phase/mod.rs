//! Phase states, phase distributions, moments and uncertainty analysis.
//!
//! The phase states `|φ⟩ = (2π)^{−1/2} Σ_k e^{iφk} |ε_k⟩` resolve the identity
//! as a projection-valued measure over `φ ∈ [−π, π)`. On a truncated ladder
//! every phase density is a trigonometric polynomial of degree at most
//! `2N+1`, so a uniform grid with `M ≥ 2(N+1)` nodes integrates it exactly.

mod distribution;
mod grid;
mod moments;
pub mod quadrature;
mod uncertainty;

pub use distribution::{
    distribution_decomposed, distribution_decomposed_state, distribution_decomposed_with,
    distribution_direct, distribution_traced, interference_term, DistributionTerms,
    InterferencePrefactor, PhaseDistribution, Provenance, INTERFERENCE_PREFACTOR,
};
pub use grid::PhaseGrid;
pub use moments::{phase_moments, MomentWeights, PhaseMoments};
pub use uncertainty::{uncertainty_report, UncertaintyReport};

use std::f64::consts::{PI, TAU};

use crate::hilbert::{max_abs_diff, EnergyBasis, StateVector};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Reduces an angle into `[−π, π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let r = (phi + PI).rem_euclid(TAU) - PI;
    // rem_euclid can return TAU itself after rounding
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// `e^{iφk}` for consecutive labels `k = first, first+1, …` (length `len`),
/// by recurrence from `e^{iφ}`.
pub(crate) fn phase_ramp(phi: f64, first: i64, len: usize) -> CVector {
    let step = C64::cis(phi);
    let mut z = C64::cis(phi * first as f64);
    CVector::from_iterator(
        len,
        (0..len).map(|_| {
            let cur = z;
            z *= step;
            cur
        }),
    )
}

/// Truncated phase state `⟨ε_k|φ⟩ = (2π)^{−1/2} e^{iφk}`; not normalizable.
pub fn phase_state(phi: f64, basis: EnergyBasis) -> StateVector {
    let phi = wrap_phase(phi);
    let amps = phase_ramp(phi, basis.min_label(), basis.dimension()) / C64::new(TAU.sqrt(), 0.0);
    StateVector::unnormalized(basis, amps).expect("length matches basis")
}

/// Truncated single-mode London state `(2π)^{−1/2} Σ_{n=0}^{N} e^{inφ}|n⟩`.
pub fn london_state(phi: f64, cutoff: usize) -> CVector {
    let phi = wrap_phase(phi);
    phase_ramp(phi, 0, cutoff + 1) / C64::new(TAU.sqrt(), 0.0)
}

/// `w Σ_j |φ_j⟩⟨φ_j|` on the grid.
pub fn pvm_sum(basis: EnergyBasis, grid: &PhaseGrid) -> CMatrix {
    let d = basis.dimension();
    let w = C64::new(grid.weight(), 0.0);
    let mut acc = CMatrix::zeros(d, d);
    for phi in grid.nodes() {
        let v = phase_state(phi, basis);
        let a = v.amplitudes();
        acc += (a * a.adjoint()) * w;
    }
    acc
}

/// Max-abs deviation of `w Σ_j |φ_j⟩⟨φ_j|` from the identity.
///
/// Exact (up to rounding) whenever the grid has at least as many nodes as the
/// basis has labels; coarser grids alias and are rejected.
pub fn resolution_of_identity_check(basis: EnergyBasis, grid: &PhaseGrid) -> Result<f64> {
    if grid.points() < basis.dimension() {
        return Err(Error::UnderResolved {
            points: grid.points(),
            dimension: basis.dimension(),
        });
    }
    let d = basis.dimension();
    Ok(max_abs_diff(
        &pvm_sum(basis, grid),
        &CMatrix::identity(d, d),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(0.0), 0.0);
        assert_eq!(wrap_phase(PI), -PI);
        assert_eq!(wrap_phase(-PI), -PI);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        for x in [-100.0, -7.5, 3.2, 42.0] {
            let w = wrap_phase(x);
            assert!((-PI..PI).contains(&w));
            assert!(((x - w) / TAU - ((x - w) / TAU).round()).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_state_examples() {
        let b = EnergyBasis::new(5);
        let c = 1.0 / TAU.sqrt();
        let zero = phase_state(0.0, b);
        for a in zero.amplitudes().iter() {
            assert!((a - C64::new(c, 0.0)).norm() < 1e-15);
        }
        let quarter = phase_state(PI / 2.0, b);
        let a = quarter.amplitude(-1).unwrap();
        assert!((a - C64::cis(-PI / 2.0) * c).norm() < 1e-15);
    }

    #[test]
    fn phase_states_are_eigenvectors_of_shift_in_the_interior() {
        let b = EnergyBasis::new(6);
        let v = crate::operators::build_exp_phase_operator(b);
        let phi = 0.7;
        let s = phase_state(phi, b);
        let vs = v.apply(s.amplitudes()).unwrap();
        // ⟨ε_m|V̂|φ⟩ = ⟨ε_{m+1}|φ⟩ = e^{iφ}⟨ε_m|φ⟩ except at the top label
        for (i, k) in b.labels().enumerate() {
            if k < b.max_label() {
                assert!((vs[i] - s.amplitudes()[i] * C64::cis(phi)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn london_state_examples() {
        let l = london_state(0.3, 10);
        assert!((l[0] - C64::new(1.0 / TAU.sqrt(), 0.0)).norm() < 1e-15);
        for z in l.iter() {
            assert!((z.norm_sqr() - 1.0 / TAU).abs() < 1e-15);
        }
    }

    #[test]
    fn pvm_resolution_examples() {
        let b = EnergyBasis::new(40);
        let d = b.dimension();
        assert!(resolution_of_identity_check(b, &PhaseGrid::new(d).unwrap()).unwrap() <= 1e-12);
        assert!(resolution_of_identity_check(b, &PhaseGrid::new(4 * d).unwrap()).unwrap() <= 1e-12);
        assert_eq!(
            resolution_of_identity_check(b, &PhaseGrid::new(d - 1).unwrap()),
            Err(Error::UnderResolved {
                points: d - 1,
                dimension: d
            })
        );
    }

    #[test]
    fn grid_completeness_for_arbitrary_vector() {
        let b = EnergyBasis::new(4);
        let grid = PhaseGrid::new(b.dimension()).unwrap();
        let psi = CVector::from_iterator(
            b.dimension(),
            (0..b.dimension()).map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos())),
        );
        let total: f64 = grid
            .nodes()
            .map(|phi| phase_state(phi, b).amplitudes().dotc(&psi).norm_sqr() * grid.weight())
            .sum();
        assert!((total - psi.norm_squared()).abs() < 1e-12);
    }
}
