//! Numerical tolerances shared across the crate.

/// Entrywise algebraic identities (Hermiticity, commutators, route agreement).
pub const ALG: f64 = 1e-12;

/// Norms and traces of states.
pub const NORM: f64 = 1e-10;

/// Smallest eigenvalue accepted for a density matrix.
pub const PSD: f64 = 1e-10;

/// Normalization of a sampled phase density.
pub const QUAD: f64 = 1e-10;

/// Number of labels at each end of the truncated ladder regarded as "edge".
pub const K_EDGE: usize = 3;

/// Tail mass below which a state counts as interior-valid.
pub const EDGE_MASS: f64 = 1e-12;

/// Default Fock cutoff per polarization.
pub const DEFAULT_CUTOFF: usize = 40;

/// Default number of phase grid nodes.
pub const DEFAULT_GRID_POINTS: usize = 2048;
