//! Field and polarization states.

mod spec;

pub use spec::{parse_state_spec, FieldSpec, ParsedSpec, SpecOverrides, StateSpec};

use crate::hilbert::check_density;
use crate::{tol, CMatrix, CVector, Error, Result, C64};

#[derive(Clone, Debug, PartialEq)]
enum FieldKind {
    Pure(CVector),
    Mixed(CMatrix),
}

/// Single-polarization field state on the Fock levels `0..=cutoff`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    cutoff: usize,
    kind: FieldKind,
    truncation_loss: Option<f64>,
}

impl FieldState {
    /// Pure state from Fock amplitudes; the norm must be 1 within
    /// [`tol::NORM`].
    pub fn pure(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::validation("field state", "no amplitudes"));
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > tol::NORM {
            return Err(Error::validation("field state", format!("norm {norm} ≠ 1")));
        }
        Ok(FieldState {
            cutoff: amplitudes.len() - 1,
            kind: FieldKind::Pure(amplitudes),
            truncation_loss: None,
        })
    }

    /// Mixed state; the matrix must be a valid density matrix.
    pub fn mixed(rho: CMatrix) -> Result<Self> {
        if rho.nrows() == 0 {
            return Err(Error::validation("field state", "empty density matrix"));
        }
        check_density("field density matrix", &rho)?;
        Ok(Self::from_density_unchecked(rho))
    }

    pub(crate) fn from_density_unchecked(rho: CMatrix) -> Self {
        FieldState {
            cutoff: rho.nrows() - 1,
            kind: FieldKind::Mixed(rho),
            truncation_loss: None,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.kind, FieldKind::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&CVector> {
        match &self.kind {
            FieldKind::Pure(a) => Some(a),
            FieldKind::Mixed(_) => None,
        }
    }

    /// Density matrix `ρ₊` (the outer product for pure states).
    pub fn density(&self) -> CMatrix {
        match &self.kind {
            FieldKind::Pure(a) => a * a.adjoint(),
            FieldKind::Mixed(rho) => rho.clone(),
        }
    }

    /// Photon-number distribution `⟨n|ρ₊|n⟩`.
    pub fn populations(&self) -> Vec<f64> {
        match &self.kind {
            FieldKind::Pure(a) => a.iter().map(|z| z.norm_sqr()).collect(),
            FieldKind::Mixed(rho) => rho.diagonal().iter().map(|z| z.re).collect(),
        }
    }

    /// Norm lost to the cutoff before renormalization, when known analytically.
    pub fn truncation_loss(&self) -> Option<f64> {
        self.truncation_loss
    }

    /// Population on the [`tol::K_EDGE`] highest Fock levels.
    pub fn tail_mass(&self) -> f64 {
        let pops = self.populations();
        let start = pops.len().saturating_sub(tol::K_EDGE);
        pops[start..].iter().sum()
    }

    pub fn is_interior_valid(&self) -> bool {
        self.tail_mass() < tol::EDGE_MASS
    }
}

/// Fock state `|n⟩`.
pub fn fock_state(n: usize, cutoff: usize) -> Result<FieldState> {
    if n > cutoff {
        return Err(Error::Range {
            what: "Fock number",
            value: n as i64,
            min: 0,
            max: cutoff as i64,
        });
    }
    let mut amps = CVector::zeros(cutoff + 1);
    amps[n] = C64::new(1.0, 0.0);
    FieldState::pure(amps)
}

/// Coherent state `|α⟩` truncated at `cutoff` and renormalized.
///
/// Amplitudes follow `c₀ = e^{−|α|²/2}`, `c_{n+1} = c_n α/√(n+1)`. The norm
/// lost to the cutoff is summed from the continued recurrence, not as
/// `1 − Σ|c_n|²`, so it stays meaningful far below machine epsilon.
pub fn coherent_state(alpha: C64, cutoff: usize) -> Result<FieldState> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::Domain(format!(
            "coherent amplitude {alpha} is not finite"
        )));
    }
    let mut amps = CVector::zeros(cutoff + 1);
    let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for (n, slot) in amps.iter_mut().enumerate() {
        *slot = c;
        c *= alpha / ((n + 1) as f64).sqrt();
    }

    // `c` now holds c_{N+1}; keep going until the Poisson tail is exhausted.
    let mean = alpha.norm_sqr();
    let mut loss = 0.0;
    let mut n = cutoff + 1;
    loop {
        let p = c.norm_sqr();
        loss += p;
        if (n as f64 > mean && p <= loss * 1e-17) || p == 0.0 || n > cutoff + 1_000_000 {
            break;
        }
        c *= alpha / ((n + 1) as f64).sqrt();
        n += 1;
    }

    let norm = amps.norm();
    if norm == 0.0 {
        return Err(Error::Domain(format!(
            "coherent amplitude {alpha} leaves no weight below cutoff {cutoff}"
        )));
    }
    amps /= C64::new(norm, 0.0);
    let mut state = FieldState::pure(amps)?;
    state.truncation_loss = Some(loss);
    Ok(state)
}

/// Thermal state with mean photon number `mean` (before truncation).
pub fn thermal_state(mean: f64, cutoff: usize) -> Result<FieldState> {
    if !(mean.is_finite() && mean >= 0.0) {
        return Err(Error::Domain(format!(
            "mean photon number must be finite and ≥ 0, got {mean}"
        )));
    }
    let ratio = mean / (1.0 + mean);
    let mut pops = Vec::with_capacity(cutoff + 1);
    let mut p = 1.0;
    for _ in 0..=cutoff {
        pops.push(p);
        p *= ratio;
    }
    let total: f64 = pops.iter().sum();
    let rho = CMatrix::from_diagonal(&CVector::from_iterator(
        cutoff + 1,
        pops.iter().map(|&p| C64::new(p / total, 0.0)),
    ));
    let mut state = FieldState::mixed(rho)?;
    // untruncated weight of levels > N is ratio^{N+1}
    state.truncation_loss = Some(ratio.powi(cutoff as i32 + 1));
    Ok(state)
}

/// Arbitrary superposition; the amplitudes are normalized here and padded
/// with zeros up to `cutoff`.
pub fn custom_amplitudes(amplitudes: &[C64], cutoff: usize) -> Result<FieldState> {
    if amplitudes.len() > cutoff + 1 {
        return Err(Error::Dimension {
            expected: cutoff + 1,
            found: amplitudes.len(),
        });
    }
    let mut amps = CVector::zeros(cutoff + 1);
    for (slot, a) in amps.iter_mut().zip(amplitudes) {
        *slot = *a;
    }
    let norm = amps.norm();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::validation(
            "field state",
            "amplitudes have zero or non-finite norm",
        ));
    }
    amps /= C64::new(norm, 0.0);
    FieldState::pure(amps)
}

/// Arbitrary density matrix, zero-padded up to `cutoff`.
pub fn custom_density(rho: &CMatrix, cutoff: usize) -> Result<FieldState> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::validation(
            "field density matrix",
            "matrix is not square",
        ));
    }
    if rho.nrows() > cutoff + 1 {
        return Err(Error::Dimension {
            expected: cutoff + 1,
            found: rho.nrows(),
        });
    }
    let mut full = CMatrix::zeros(cutoff + 1, cutoff + 1);
    full.view_mut((0, 0), (rho.nrows(), rho.ncols()))
        .copy_from(rho);
    FieldState::mixed(full)
}

/// 2×2 polarization density matrix in the ordered basis `(σ₊, σ₋)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizationState {
    matrix: CMatrix,
}

impl PolarizationState {
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != 2 || matrix.ncols() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        check_density("polarization state", &matrix)?;
        Ok(PolarizationState { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `⟨σ₊|P|σ₋⟩`, the polarization coherence driving interference.
    pub fn coherence(&self) -> C64 {
        self.matrix[(0, 1)]
    }

    /// The state with σ₊ and σ₋ exchanged.
    pub fn swapped(&self) -> Self {
        let m = &self.matrix;
        PolarizationState {
            matrix: CMatrix::from_row_slice(2, 2, &[m[(1, 1)], m[(1, 0)], m[(0, 1)], m[(0, 0)]]),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PolarizationKind {
    Circular,
    Anticircular,
    /// `(|σ₊⟩ + |σ₋⟩)/√2`
    Horizontal,
    /// `(|σ₊⟩ − |σ₋⟩)/√2`
    Vertical,
    Unpolarized,
    Custom(CMatrix),
}

impl PolarizationKind {
    pub fn name(&self) -> &'static str {
        match self {
            PolarizationKind::Circular => "circular",
            PolarizationKind::Anticircular => "anticircular",
            PolarizationKind::Horizontal => "horizontal",
            PolarizationKind::Vertical => "vertical",
            PolarizationKind::Unpolarized => "unpolarized",
            PolarizationKind::Custom(_) => "custom",
        }
    }
}

pub fn polarization_state(kind: &PolarizationKind) -> Result<PolarizationState> {
    let r = |x: f64| C64::new(x, 0.0);
    let entries = match kind {
        PolarizationKind::Circular => [r(1.0), r(0.0), r(0.0), r(0.0)],
        PolarizationKind::Anticircular => [r(0.0), r(0.0), r(0.0), r(1.0)],
        PolarizationKind::Horizontal => [r(0.5), r(0.5), r(0.5), r(0.5)],
        PolarizationKind::Vertical => [r(0.5), r(-0.5), r(-0.5), r(0.5)],
        PolarizationKind::Unpolarized => [r(0.5), r(0.0), r(0.0), r(0.5)],
        PolarizationKind::Custom(m) => return PolarizationState::from_matrix(m.clone()),
    };
    PolarizationState::from_matrix(CMatrix::from_row_slice(2, 2, &entries))
}
