use super::{distribution_direct, phase_moments, PhaseGrid};
use crate::hilbert::CompositeState;
use crate::{tol, Error, Result};

/// Energy and time spreads of a state, reported next to the `ħ/2` reference.
///
/// The inequality is not enforced: energy eigenstates have `ΔE = 0` with a
/// finite phase spread, so their product sits below the bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UncertaintyReport {
    pub hbar: f64,
    pub omega: f64,
    pub mean_phase: f64,
    pub phase_variance: f64,
    pub mean_energy: f64,
    pub energy_variance: f64,
    pub delta_energy: f64,
    pub delta_time: f64,
    /// `ΔE·ΔT = √Var(E)·√Var(Φ)/ω`
    pub delta_e_delta_t: f64,
    /// `ħ/2`
    pub bound: f64,
    pub below_bound: bool,
}

pub fn uncertainty_report(
    state: &CompositeState,
    grid: &PhaseGrid,
    hbar: f64,
    omega: f64,
) -> Result<UncertaintyReport> {
    for (name, x) in [("hbar", hbar), ("omega", omega)] {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Domain(format!(
                "{name} must be finite and > 0, got {x}"
            )));
        }
    }
    let basis = state.basis();
    let rho = state.rho();
    let pops: Vec<(f64, f64)> = basis
        .labels()
        .enumerate()
        .map(|(i, k)| (k as f64, rho[(i, i)].re))
        .collect();
    let mean_n: f64 = pops.iter().map(|(k, p)| k * p).sum();
    let var_n: f64 = pops.iter().map(|(k, p)| (k - mean_n).powi(2) * p).sum();
    let quantum = hbar * omega;
    let mean_energy = quantum * (mean_n + 0.5);
    let energy_variance = quantum * quantum * var_n;

    let moments = phase_moments(&distribution_direct(state, grid)?)?;
    let delta_energy = clamped_sqrt(energy_variance);
    let delta_time = clamped_sqrt(moments.variance) / omega;
    let product = delta_energy * delta_time;
    let bound = hbar / 2.0;
    Ok(UncertaintyReport {
        hbar,
        omega,
        mean_phase: moments.mean,
        phase_variance: moments.variance,
        mean_energy,
        energy_variance,
        delta_energy,
        delta_time,
        delta_e_delta_t: product,
        bound,
        below_bound: product < bound,
    })
}

fn clamped_sqrt(v: f64) -> f64 {
    if v < 0.0 && v > -tol::ALG {
        0.0
    } else {
        v.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::tensor_embed;
    use crate::states::{coherent_state, fock_state, polarization_state, PolarizationKind};
    use crate::C64;
    use std::f64::consts::PI;

    fn embed(field: crate::FieldState, kind: PolarizationKind) -> CompositeState {
        tensor_embed(&field, &polarization_state(&kind).unwrap()).unwrap()
    }

    #[test]
    fn fock_state_sits_below_the_bound() {
        let grid = PhaseGrid::new(2048).unwrap();
        let s = embed(fock_state(5, 40).unwrap(), PolarizationKind::Circular);
        let r = uncertainty_report(&s, &grid, 1.0, 1.0).unwrap();
        assert_eq!(r.delta_energy, 0.0);
        assert!((r.delta_time - PI / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.delta_e_delta_t, 0.0);
        assert!(r.below_bound);
        assert_eq!(r.bound, 0.5);
        assert!((r.mean_energy - 5.5).abs() < 1e-15);
    }

    #[test]
    fn coherent_energy_spread_is_poissonian() {
        let grid = PhaseGrid::new(2048).unwrap();
        let s = embed(
            coherent_state(C64::new(1.0, 0.0), 40).unwrap(),
            PolarizationKind::Circular,
        );
        let r = uncertainty_report(&s, &grid, 1.0, 1.0).unwrap();
        assert!((r.delta_energy - 1.0).abs() < 1e-8);
        assert!(r.mean_phase.abs() < 1e-12);
        assert!(r.phase_variance > 0.0 && r.phase_variance < PI * PI / 3.0);
    }

    #[test]
    fn omega_scales_time_not_phase() {
        let grid = PhaseGrid::new(512).unwrap();
        let s = embed(
            coherent_state(C64::new(0.7, 0.2), 20).unwrap(),
            PolarizationKind::Horizontal,
        );
        let r1 = uncertainty_report(&s, &grid, 1.0, 1.0).unwrap();
        let r2 = uncertainty_report(&s, &grid, 1.0, 2.0).unwrap();
        assert_eq!(r1.phase_variance, r2.phase_variance);
        assert!((r2.delta_time - r1.delta_time / 2.0).abs() < 1e-15);
        assert!((r2.delta_energy - 2.0 * r1.delta_energy).abs() < 1e-14);
        assert!(uncertainty_report(&s, &grid, 1.0, 0.0).is_err());
    }

    #[test]
    fn vacuum_energy_spread_by_polarization() {
        let grid = PhaseGrid::new(256).unwrap();
        let report = |kind| {
            uncertainty_report(&embed(fock_state(0, 10).unwrap(), kind), &grid, 1.0, 1.0).unwrap()
        };
        assert_eq!(report(PolarizationKind::Circular).delta_energy, 0.0);
        assert_eq!(report(PolarizationKind::Anticircular).delta_energy, 0.0);
        // |0,σ+⟩ and |0,σ-⟩ sit at labels 0 and −1, so a coherent mix spreads by ħω/2
        assert!((report(PolarizationKind::Horizontal).delta_energy - 0.5).abs() < 1e-15);
    }
}
