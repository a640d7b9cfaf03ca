//! Truncated polarization-doubled Hilbert space.
//!
//! The pair `(n, σ)` of a Fock number and a circular polarization is mapped to
//! a single energy label `k`:
//!
//! ```text
//! (n, σ₊) ↦ k = n          (k ≥ 0)
//! (n, σ₋) ↦ k = −n − 1     (k < 0)
//! ```
//!
//! With a cutoff `N` per polarization the labels run over `[−(N+1), N]` and
//! are stored at array offset `k + N + 1`, so offsets increase with energy.

use std::fmt;

use nalgebra::SymmetricEigen;

use crate::states::{FieldState, PolarizationState};
use crate::{tol, CMatrix, CVector, Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarization {
    /// Circular, σ₊.
    Plus,
    /// Anti-circular, σ₋.
    Minus,
}

impl Polarization {
    /// Row/column index in the `(σ₊, σ₋)` ordered 2×2 basis.
    pub fn index(self) -> usize {
        match self {
            Polarization::Plus => 0,
            Polarization::Minus => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Polarization::Plus => Polarization::Minus,
            Polarization::Minus => Polarization::Plus,
        }
    }

    pub const BOTH: [Polarization; 2] = [Polarization::Plus, Polarization::Minus];
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::Plus => write!(f, "σ+"),
            Polarization::Minus => write!(f, "σ-"),
        }
    }
}

/// The truncated energy basis `{|ε_k⟩ : −(N+1) ≤ k ≤ N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnergyBasis {
    cutoff: usize,
}

impl EnergyBasis {
    pub fn new(cutoff: usize) -> Self {
        EnergyBasis { cutoff }
    }

    /// Maximal Fock number per polarization.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `2(N+1)`.
    pub fn dimension(&self) -> usize {
        2 * (self.cutoff + 1)
    }

    /// Number of Fock levels per polarization, `N+1`.
    pub fn fock_dimension(&self) -> usize {
        self.cutoff + 1
    }

    pub fn min_label(&self) -> i64 {
        -(self.cutoff as i64) - 1
    }

    pub fn max_label(&self) -> i64 {
        self.cutoff as i64
    }

    /// Labels in storage (and energy) order.
    pub fn labels(&self) -> impl Iterator<Item = i64> {
        self.min_label()..=self.max_label()
    }

    pub fn contains(&self, k: i64) -> bool {
        (self.min_label()..=self.max_label()).contains(&k)
    }

    /// Array offset of label `k`.
    pub fn offset(&self, k: i64) -> Result<usize> {
        if !self.contains(k) {
            return Err(self.label_range_error(k));
        }
        Ok((k - self.min_label()) as usize)
    }

    /// Label stored at array offset `i`.
    pub fn label(&self, i: usize) -> i64 {
        debug_assert!(i < self.dimension());
        i as i64 + self.min_label()
    }

    pub fn energy_index(&self, n: usize, sigma: Polarization) -> Result<i64> {
        if n > self.cutoff {
            return Err(Error::Range {
                what: "Fock number",
                value: n as i64,
                min: 0,
                max: self.cutoff as i64,
            });
        }
        Ok(match sigma {
            Polarization::Plus => n as i64,
            Polarization::Minus => -(n as i64) - 1,
        })
    }

    pub fn fock_label(&self, k: i64) -> Result<(usize, Polarization)> {
        if !self.contains(k) {
            return Err(self.label_range_error(k));
        }
        Ok(if k >= 0 {
            (k as usize, Polarization::Plus)
        } else {
            ((-k - 1) as usize, Polarization::Minus)
        })
    }

    /// Array offset of `|n, σ⟩`; `n` must already be within the cutoff.
    pub(crate) fn offset_of(&self, n: usize, sigma: Polarization) -> usize {
        let n1 = self.cutoff + 1;
        match sigma {
            Polarization::Plus => n1 + n,
            Polarization::Minus => n1 - 1 - n,
        }
    }

    /// Whether label `k` lies within [`tol::K_EDGE`] labels of either end.
    pub fn is_edge_label(&self, k: i64) -> bool {
        let edge = tol::K_EDGE as i64;
        k > self.max_label() - edge || k < self.min_label() + edge
    }

    fn label_range_error(&self, k: i64) -> Error {
        Error::Range {
            what: "energy label",
            value: k,
            min: self.min_label(),
            max: self.max_label(),
        }
    }
}

/// A vector in the energy basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: EnergyBasis,
    amplitudes: CVector,
}

impl StateVector {
    /// Normalized state; fails if the norm deviates from 1 by more than
    /// [`tol::NORM`].
    pub fn new(basis: EnergyBasis, amplitudes: CVector) -> Result<Self> {
        let v = Self::unnormalized(basis, amplitudes)?;
        let norm = v.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::validation(
                "state vector",
                format!("norm {norm} ≠ 1"),
            ));
        }
        Ok(v)
    }

    /// Vector without a norm requirement (phase states, test functions).
    pub fn unnormalized(basis: EnergyBasis, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != basis.dimension() {
            return Err(Error::Dimension {
                expected: basis.dimension(),
                found: amplitudes.len(),
            });
        }
        Ok(StateVector { basis, amplitudes })
    }

    pub fn basis_state(basis: EnergyBasis, k: i64) -> Result<Self> {
        let mut amps = CVector::zeros(basis.dimension());
        amps[basis.offset(k)?] = C64::new(1.0, 0.0);
        Ok(StateVector {
            basis,
            amplitudes: amps,
        })
    }

    pub fn basis(&self) -> EnergyBasis {
        self.basis
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Amplitude at energy label `k`.
    pub fn amplitude(&self, k: i64) -> Result<C64> {
        Ok(self.amplitudes[self.basis.offset(k)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Probability mass on the edge labels at both ends of the ladder.
    pub fn tail_mass(&self) -> f64 {
        self.basis
            .labels()
            .zip(self.amplitudes.iter())
            .filter(|(k, _)| self.basis.is_edge_label(*k))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn is_interior_valid(&self) -> bool {
        self.tail_mass() < tol::EDGE_MASS
    }
}

/// A density matrix on the energy basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeState {
    basis: EnergyBasis,
    rho: CMatrix,
}

impl CompositeState {
    pub fn new(basis: EnergyBasis, rho: CMatrix) -> Result<Self> {
        let d = basis.dimension();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::Dimension {
                expected: d,
                found: rho.nrows().max(rho.ncols()),
            });
        }
        check_density("composite state", &rho)?;
        Ok(CompositeState { basis, rho })
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let a = psi.amplitudes();
        Self::new(psi.basis(), a * a.adjoint())
    }

    pub fn basis(&self) -> EnergyBasis {
        self.basis
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    /// Mass on the edge labels (diagonal weight).
    pub fn tail_mass(&self) -> f64 {
        self.basis
            .labels()
            .enumerate()
            .filter(|(_, k)| self.basis.is_edge_label(*k))
            .map(|(i, _)| self.rho[(i, i)].re)
            .sum()
    }

    pub fn is_interior_valid(&self) -> bool {
        self.tail_mass() < tol::EDGE_MASS
    }

    /// Reduced polarization state `Tr_field ρ`.
    pub fn polarization_marginal(&self) -> CMatrix {
        let b = self.basis;
        let mut p = CMatrix::zeros(2, 2);
        for s in Polarization::BOTH {
            for t in Polarization::BOTH {
                let mut acc = C64::new(0.0, 0.0);
                for n in 0..=b.cutoff() {
                    acc += self.rho[(b.offset_of(n, s), b.offset_of(n, t))];
                }
                p[(s.index(), t.index())] = acc;
            }
        }
        p
    }

    /// Splits a product state into its field and polarization factors.
    ///
    /// Fails with [`Error::NotProductState`] when `ρ` differs from the product
    /// of its marginals by more than [`tol::ALG`] anywhere.
    pub fn factorize(&self) -> Result<(FieldState, PolarizationState)> {
        let field = partial_trace_polarization(self);
        let pol = PolarizationState::from_matrix(self.polarization_marginal())?;
        let rebuilt = tensor_embed(&field, &pol)?;
        if max_abs_diff(rebuilt.rho(), &self.rho) > tol::ALG {
            return Err(Error::NotProductState);
        }
        Ok((field, pol))
    }
}

/// `ρ₊ ⊗ P` re-indexed into the energy basis.
pub fn tensor_embed(field: &FieldState, pol: &PolarizationState) -> Result<CompositeState> {
    let basis = EnergyBasis::new(field.cutoff());
    let rho_f = field.density();
    let p = pol.matrix();
    let mut rho = CMatrix::zeros(basis.dimension(), basis.dimension());
    for s in Polarization::BOTH {
        for t in Polarization::BOTH {
            let pst = p[(s.index(), t.index())];
            if pst == C64::new(0.0, 0.0) {
                continue;
            }
            for n in 0..=basis.cutoff() {
                for m in 0..=basis.cutoff() {
                    rho[(basis.offset_of(n, s), basis.offset_of(m, t))] = rho_f[(n, m)] * pst;
                }
            }
        }
    }
    CompositeState::new(basis, rho)
}

/// Same as [`tensor_embed`] but checks the cutoff against an explicit basis.
pub fn tensor_embed_in(
    basis: EnergyBasis,
    field: &FieldState,
    pol: &PolarizationState,
) -> Result<CompositeState> {
    if field.cutoff() != basis.cutoff() {
        return Err(Error::Dimension {
            expected: basis.fock_dimension(),
            found: field.cutoff() + 1,
        });
    }
    tensor_embed(field, pol)
}

/// `Σ_σ ⟨σ|ρ|σ⟩`, the field density matrix with polarization traced out.
pub fn partial_trace_polarization(state: &CompositeState) -> FieldState {
    let b = state.basis();
    let n1 = b.fock_dimension();
    let rho = state.rho();
    let reduced = CMatrix::from_fn(n1, n1, |n, m| {
        Polarization::BOTH
            .iter()
            .map(|&s| rho[(b.offset_of(n, s), b.offset_of(m, s))])
            .sum()
    });
    FieldState::from_density_unchecked(reduced)
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise deviation of `m` from its conjugate transpose.
pub(crate) fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Hermitian, unit trace and positive semidefinite within tolerance.
pub(crate) fn check_density(what: &'static str, rho: &CMatrix) -> Result<()> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::validation(what, "matrix is not square"));
    }
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::validation(what, "non-finite entry"));
    }
    let herm = hermitian_defect(rho);
    if herm > tol::ALG {
        return Err(Error::validation(
            what,
            format!("not Hermitian (defect {herm:e})"),
        ));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol::NORM || tr.im.abs() > tol::NORM {
        return Err(Error::validation(what, format!("trace {tr} ≠ 1")));
    }
    let lowest = hermitian_eigenvalues(rho).first().copied().unwrap_or(0.0);
    if lowest < -tol::PSD {
        return Err(Error::validation(
            what,
            format!("not positive semidefinite (eigenvalue {lowest:e})"),
        ));
    }
    Ok(())
}
