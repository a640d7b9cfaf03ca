use std::f64::consts::TAU;

use super::{phase_ramp, wrap_phase, PhaseGrid};
use crate::hilbert::{partial_trace_polarization, tensor_embed, CompositeState};
use crate::states::{polarization_state, FieldState, PolarizationKind, PolarizationState};
use crate::{CMatrix, Error, Result, C64};

/// Which evaluation route produced a distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `⟨φ|ρ|φ⟩` on the full energy basis.
    Direct,
    /// Sum of the circular, anti-circular and interference terms of a product
    /// state.
    Decomposed,
}

/// The three contributions of a product state `ρ₊ ⊗ P`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionTerms {
    /// `₊⟨φ|ρ₊|φ⟩₊ P₊₊`
    pub circular: Vec<f64>,
    /// `₊⟨−φ|ρ₊|−φ⟩₊ P₋₋`
    pub anticircular: Vec<f64>,
    /// `2 Re(c(φ) ₊⟨φ|ρ₊|−φ⟩₊ P₊₋)`; signed.
    pub interference: Vec<f64>,
}

/// Sampled phase probability density on a [`PhaseGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseDistribution {
    grid: PhaseGrid,
    density: Vec<f64>,
    provenance: Provenance,
    terms: Option<DistributionTerms>,
}

impl PhaseDistribution {
    /// Wraps externally computed samples.
    pub fn from_samples(
        grid: PhaseGrid,
        density: Vec<f64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if density.len() != grid.points() {
            return Err(Error::Dimension {
                expected: grid.points(),
                found: density.len(),
            });
        }
        Ok(PhaseDistribution {
            grid,
            density,
            provenance,
            terms: None,
        })
    }

    pub fn grid(&self) -> PhaseGrid {
        self.grid
    }

    /// `p(φ_j)` in probability per radian.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Individual terms; present for decomposed distributions.
    pub fn terms(&self) -> Option<&DistributionTerms> {
        self.terms.as_ref()
    }

    /// `w Σ_j p(φ_j)`.
    pub fn normalization(&self) -> f64 {
        self.grid.weight() * self.density.iter().sum::<f64>()
    }

    /// Largest node-wise difference to another distribution on the same grid.
    pub fn max_abs_diff(&self, other: &PhaseDistribution) -> f64 {
        assert_eq!(
            self.grid, other.grid,
            "distributions live on different grids"
        );
        self.density
            .iter()
            .zip(&other.density)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// The density at `−φ_j` for every node `j`.
    pub fn reflected(&self) -> Vec<f64> {
        (0..self.grid.points())
            .map(|j| self.density[self.grid.mirror(j)])
            .collect()
    }
}

fn require_resolution(grid: &PhaseGrid, dimension: usize) -> Result<()> {
    if grid.points() < dimension {
        return Err(Error::UnderResolved {
            points: grid.points(),
            dimension,
        });
    }
    Ok(())
}

/// `p(φ) = ⟨φ|ρ|φ⟩` as a quadratic form on the energy basis.
pub fn distribution_direct(state: &CompositeState, grid: &PhaseGrid) -> Result<PhaseDistribution> {
    let d = state.basis().dimension();
    require_resolution(grid, d)?;
    let form = ToeplitzForm::new(state.rho());
    let density = grid
        .nodes()
        .map(|phi| form.at(wrap_phase(phi)).re / TAU)
        .collect();
    Ok(PhaseDistribution {
        grid: *grid,
        density,
        provenance: Provenance::Direct,
        terms: None,
    })
}

/// Phase factor multiplying `₊⟨φ|ρ₊|−φ⟩₊` in the interference term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InterferencePrefactor {
    /// `e^{−iφ}`
    NegativePhase,
    /// `e^{+iφ}`
    PositivePhase,
}

impl InterferencePrefactor {
    pub fn at(self, phi: f64) -> C64 {
        match self {
            InterferencePrefactor::NegativePhase => C64::cis(-phi),
            InterferencePrefactor::PositivePhase => C64::cis(phi),
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            InterferencePrefactor::NegativePhase => "exp(-i phi)",
            InterferencePrefactor::PositivePhase => "exp(+i phi)",
        }
    }
}

/// Prefactor that makes the decomposed route agree with [`distribution_direct`]:
/// the σ₋ half of `|φ⟩` is `e^{−iφ}|−φ⟩₊`.
pub const INTERFERENCE_PREFACTOR: InterferencePrefactor = InterferencePrefactor::NegativePhase;

/// `p(φ)` for `ρ₊ ⊗ P` as circular + anti-circular + interference terms.
pub fn distribution_decomposed(
    field: &FieldState,
    pol: &PolarizationState,
    grid: &PhaseGrid,
) -> Result<PhaseDistribution> {
    distribution_decomposed_with(field, pol, grid, INTERFERENCE_PREFACTOR)
}

/// [`distribution_decomposed`] with an explicit interference prefactor.
pub fn distribution_decomposed_with(
    field: &FieldState,
    pol: &PolarizationState,
    grid: &PhaseGrid,
    prefactor: InterferencePrefactor,
) -> Result<PhaseDistribution> {
    require_resolution(grid, 2 * (field.cutoff() + 1))?;
    let terms = decomposed_terms(field, pol, grid, prefactor);
    let density = terms
        .circular
        .iter()
        .zip(&terms.anticircular)
        .zip(&terms.interference)
        .map(|((c, a), i)| c + a + i)
        .collect();
    Ok(PhaseDistribution {
        grid: *grid,
        density,
        provenance: Provenance::Decomposed,
        terms: Some(terms),
    })
}

/// Decomposed route for a composite state; fails with
/// [`Error::NotProductState`] unless it factorizes.
pub fn distribution_decomposed_state(
    state: &CompositeState,
    grid: &PhaseGrid,
) -> Result<PhaseDistribution> {
    let (field, pol) = state.factorize()?;
    distribution_decomposed(&field, &pol, grid)
}

/// Only the signed polarization-interference term.
pub fn interference_term(
    field: &FieldState,
    pol: &PolarizationState,
    grid: &PhaseGrid,
) -> Result<Vec<f64>> {
    require_resolution(grid, 2 * (field.cutoff() + 1))?;
    Ok(decomposed_terms(field, pol, grid, INTERFERENCE_PREFACTOR).interference)
}

fn decomposed_terms(
    field: &FieldState,
    pol: &PolarizationState,
    grid: &PhaseGrid,
    prefactor: InterferencePrefactor,
) -> DistributionTerms {
    let rho = field.density();
    let p = pol.matrix();
    let (p_pp, p_mm, p_pm) = (p[(0, 0)].re, p[(1, 1)].re, p[(0, 1)]);
    // ₊⟨φ|ρ₊|φ⟩₊ = Σ ρ_nm e^{iφ(m−n)} and ₊⟨φ|ρ₊|−φ⟩₊ = Σ ρ_nm e^{−iφ(n+m)}
    let same = ToeplitzForm::new(&rho);
    let cross = anti_diagonal_sums(&rho);
    let n = grid.points();
    let mut terms = DistributionTerms {
        circular: Vec::with_capacity(n),
        anticircular: Vec::with_capacity(n),
        interference: Vec::with_capacity(n),
    };
    for phi in grid.nodes() {
        let phi = wrap_phase(phi);
        terms.circular.push(same.at(phi).re / TAU * p_pp);
        terms.anticircular.push(same.at(-phi).re / TAU * p_mm);
        let c = fourier_sum(&cross, 0, -phi) / TAU;
        terms
            .interference
            .push(2.0 * (prefactor.at(phi) * c * p_pm).re);
    }
    terms
}

/// Distribution with the polarization traced out, i.e. of
/// `Tr_pol(ρ) ⊗ ½·1`.
pub fn distribution_traced(state: &CompositeState, grid: &PhaseGrid) -> Result<PhaseDistribution> {
    let field = partial_trace_polarization(state);
    let unpolarized = polarization_state(&PolarizationKind::Unpolarized)?;
    distribution_direct(&tensor_embed(&field, &unpolarized)?, grid)
}

/// `v(φ)† M v(φ)` with `v_k = e^{iφk}`, evaluated through the diagonal sums
/// `c_Δ = Σ_k M_{k,k+Δ}` so each node costs `O(d)`.
struct ToeplitzForm {
    sums: Vec<C64>,
    first: i64,
}

impl ToeplitzForm {
    fn new(m: &CMatrix) -> Self {
        let d = m.nrows();
        let mut sums = vec![C64::new(0.0, 0.0); 2 * d - 1];
        for j in 0..d {
            for i in 0..d {
                sums[j + d - 1 - i] += m[(i, j)];
            }
        }
        ToeplitzForm {
            sums,
            first: 1 - d as i64,
        }
    }

    fn at(&self, phi: f64) -> C64 {
        fourier_sum(&self.sums, self.first, phi)
    }
}

/// `s_t = Σ_{n+m=t} M_nm`.
fn anti_diagonal_sums(m: &CMatrix) -> Vec<C64> {
    let d = m.nrows();
    let mut sums = vec![C64::new(0.0, 0.0); 2 * d - 1];
    for j in 0..d {
        for i in 0..d {
            sums[i + j] += m[(i, j)];
        }
    }
    sums
}

/// `Σ_t c_t e^{iφ(first+t)}`, phases by recurrence.
fn fourier_sum(coeffs: &[C64], first: i64, phi: f64) -> C64 {
    phase_ramp(phi, first, coeffs.len())
        .iter()
        .zip(coeffs)
        .map(|(z, c)| z * c)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{tensor_embed, EnergyBasis};
    use crate::states::{coherent_state, fock_state, thermal_state};
    use std::f64::consts::PI;

    fn pol(kind: PolarizationKind) -> PolarizationState {
        polarization_state(&kind).unwrap()
    }

    fn direct(field: &FieldState, p: &PolarizationState, grid: &PhaseGrid) -> PhaseDistribution {
        distribution_direct(&tensor_embed(field, p).unwrap(), grid).unwrap()
    }

    /// Brute-force London density `|Σ_n c_n e^{-inφ}|²/2π` for a pure state.
    fn london_oracle(amps: &[C64], phi: f64) -> f64 {
        let s: C64 = amps
            .iter()
            .enumerate()
            .map(|(n, c)| c * C64::new(0.0, -(n as f64) * phi).exp())
            .sum();
        s.norm_sqr() / TAU
    }

    #[test]
    fn circular_coherent_at_zero_phase() {
        let grid = PhaseGrid::new(2048).unwrap();
        let field = coherent_state(C64::new(1.0, 0.0), 40).unwrap();
        let d = direct(&field, &pol(PolarizationKind::Circular), &grid);
        let j0 = grid.points() / 2;
        assert_eq!(grid.node(j0), 0.0);
        // e^{-1}(Σ_{n≤40} 1/√n!)²/2π evaluated with 30-digit arithmetic
        assert!((d.density()[j0] - 0.704_792_078_572_019_3).abs() < 1e-14);
        let amps: Vec<C64> = field.amplitudes().unwrap().iter().copied().collect();
        for (j, phi) in grid.nodes().enumerate().step_by(97) {
            assert!((d.density()[j] - london_oracle(&amps, phi)).abs() < 1e-13);
        }
    }

    #[test]
    fn circular_fock_is_flat() {
        let grid = PhaseGrid::new(256).unwrap();
        for n in [0, 1, 7, 20] {
            let d = direct(
                &fock_state(n, 20).unwrap(),
                &pol(PolarizationKind::Circular),
                &grid,
            );
            for p in d.density() {
                assert!((p - 1.0 / TAU).abs() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn horizontal_vacuum_closed_form() {
        let grid = PhaseGrid::new(512).unwrap();
        let d = direct(
            &fock_state(0, 10).unwrap(),
            &pol(PolarizationKind::Horizontal),
            &grid,
        );
        for (j, phi) in grid.nodes().enumerate() {
            assert!((d.density()[j] - (1.0 + phi.cos()) / TAU).abs() < 1e-10);
        }
        assert!((d.density()[256] - 1.0 / PI).abs() < 1e-14);
        assert!(d.density()[0].abs() < 1e-14);
    }

    #[test]
    fn decomposed_special_cases() {
        let grid = PhaseGrid::new(512).unwrap();
        let field = coherent_state(C64::new(0.8, 0.5), 30).unwrap();
        let circ =
            distribution_decomposed(&field, &pol(PolarizationKind::Circular), &grid).unwrap();
        let t = circ.terms().unwrap();
        assert!(t
            .anticircular
            .iter()
            .chain(&t.interference)
            .all(|&x| x == 0.0));
        let london = t.circular.clone();

        let anti =
            distribution_decomposed(&field, &pol(PolarizationKind::Anticircular), &grid).unwrap();
        let mirrored: Vec<f64> = (0..grid.points()).map(|j| london[grid.mirror(j)]).collect();
        for (a, b) in anti.density().iter().zip(&mirrored) {
            assert!((a - b).abs() < 1e-13);
        }

        let unpol =
            distribution_decomposed(&field, &pol(PolarizationKind::Unpolarized), &grid).unwrap();
        assert!(unpol
            .terms()
            .unwrap()
            .interference
            .iter()
            .all(|&x| x == 0.0));
        for j in 0..grid.points() {
            let expect = 0.5 * london[j] + 0.5 * mirrored[j];
            assert!((unpol.density()[j] - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn single_photon_horizontal_interference_is_third_harmonic() {
        let grid = PhaseGrid::new(256).unwrap();
        let i = interference_term(
            &fock_state(1, 8).unwrap(),
            &pol(PolarizationKind::Horizontal),
            &grid,
        )
        .unwrap();
        for (j, phi) in grid.nodes().enumerate() {
            assert!((i[j] - (3.0 * phi).cos() / TAU).abs() < 1e-13, "{phi}");
        }
    }

    #[test]
    fn prefactor_choice_is_arbitrated_by_the_direct_route() {
        let grid = PhaseGrid::new(128).unwrap();
        let field = fock_state(1, 8).unwrap();
        let h = pol(PolarizationKind::Horizontal);
        let d = direct(&field, &h, &grid);
        let neg =
            distribution_decomposed_with(&field, &h, &grid, InterferencePrefactor::NegativePhase)
                .unwrap();
        let pos =
            distribution_decomposed_with(&field, &h, &grid, InterferencePrefactor::PositivePhase)
                .unwrap();
        assert!(neg.max_abs_diff(&d) < 1e-13);
        assert!(pos.max_abs_diff(&d) > 0.1);
        // the vacuum cannot tell the two apart
        let vac = fock_state(0, 8).unwrap();
        let dv = direct(&vac, &h, &grid);
        let pv =
            distribution_decomposed_with(&vac, &h, &grid, InterferencePrefactor::PositivePhase)
                .unwrap();
        assert!(pv.max_abs_diff(&dv) < 1e-13);
    }

    #[test]
    fn unpolarized_interference_vanishes() {
        let grid = PhaseGrid::new(64).unwrap();
        let i = interference_term(
            &thermal_state(1.0, 10).unwrap(),
            &pol(PolarizationKind::Unpolarized),
            &grid,
        )
        .unwrap();
        assert!(i.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn traced_examples() {
        let grid = PhaseGrid::new(256).unwrap();
        let field = coherent_state(C64::new(1.0, 0.0), 20).unwrap();
        let h = tensor_embed(&field, &pol(PolarizationKind::Horizontal)).unwrap();
        let u = direct(&field, &pol(PolarizationKind::Unpolarized), &grid);
        assert!(distribution_traced(&h, &grid).unwrap().max_abs_diff(&u) < 1e-13);

        let v = tensor_embed(
            &fock_state(0, 20).unwrap(),
            &pol(PolarizationKind::Vertical),
        )
        .unwrap();
        for p in distribution_traced(&v, &grid).unwrap().density() {
            assert!((p - 1.0 / TAU).abs() < 1e-13);
        }
    }

    #[test]
    fn decomposed_rejects_entangled_states() {
        let b = EnergyBasis::new(2);
        let mut amps = crate::CVector::zeros(b.dimension());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        amps[b.offset(1).unwrap()] = C64::new(s, 0.0);
        amps[b.offset(-1).unwrap()] = C64::new(s, 0.0);
        let rho = CompositeState::from_pure(&crate::StateVector::new(b, amps).unwrap()).unwrap();
        let grid = PhaseGrid::new(16).unwrap();
        assert_eq!(
            distribution_decomposed_state(&rho, &grid).unwrap_err(),
            Error::NotProductState
        );
        assert!(distribution_direct(&rho, &grid).is_ok());
    }

    #[test]
    fn coarse_grids_are_rejected() {
        let field = fock_state(0, 10).unwrap();
        let grid = PhaseGrid::new(21).unwrap();
        let circ = pol(PolarizationKind::Circular);
        assert!(matches!(
            distribution_decomposed(&field, &circ, &grid),
            Err(Error::UnderResolved { .. })
        ));
        let state = tensor_embed(&field, &circ).unwrap();
        assert!(matches!(
            distribution_direct(&state, &grid),
            Err(Error::UnderResolved { .. })
        ));
    }
}
