//! Hermitian phase operator on the two-polarization field of a single
//! monochromatic mode.
//!
//! A circularly polarized (σ₊) and an anti-circularly polarized (σ₋) Fock
//! ladder are glued into one ℤ-indexed energy ladder `|ε_k⟩`, with σ₊ photons
//! on `k ≥ 0` and σ₋ photons on `k < 0`. On that ladder the unit shift is
//! unitary, so a proper phase observable `Φ̂ = ∫ φ dφ |φ⟩⟨φ|` exists. This crate
//! builds everything on a truncated ladder with dense complex matrices:
//!
//! - [`hilbert`]: the truncated energy basis, label maps and state containers.
//! - [`operators`]: number, Hamiltonian, shift, phase, time and annihilation
//!   operators together with their identity checks.
//! - [`states`]: Fock, coherent, thermal and custom field states, polarization
//!   states, and the JSON state-spec parser.
//! - [`phase`]: phase states, phase distributions (two independent routes),
//!   moments and energy-time uncertainty reports.

pub mod error;
pub mod hilbert;
pub mod operators;
pub mod phase;
pub mod states;
pub mod tol;

pub use error::{Error, Result};
pub use hilbert::{CompositeState, EnergyBasis, Polarization, StateVector};
pub use operators::{OperatorMatrix, OperatorSet};
pub use phase::{PhaseDistribution, PhaseGrid, UncertaintyReport};
pub use states::{FieldState, PolarizationKind, PolarizationState};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
