//! Operators on the truncated energy ladder.
//!
//! All builders are plain truncations of the infinite-ladder operators; no
//! cyclic wrap-around is added. The shift `V̂` therefore loses unitarity at
//! exactly one label at each end, and those edge defects are reported rather
//! than hidden.

use crate::hilbert::{hermitian_defect, max_abs, max_abs_diff, EnergyBasis, Polarization};
use crate::{tol, CMatrix, CVector, Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OperatorFlags {
    pub hermitian: bool,
    /// Unitary away from the truncation edges.
    pub unitary_on_interior: bool,
}

/// Dense operator on an [`EnergyBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    basis: EnergyBasis,
    entries: CMatrix,
    flags: OperatorFlags,
    notes: Vec<String>,
}

impl OperatorMatrix {
    pub fn new(basis: EnergyBasis, entries: CMatrix) -> Result<Self> {
        let d = basis.dimension();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::Dimension {
                expected: d,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(OperatorMatrix {
            basis,
            entries,
            flags: OperatorFlags::default(),
            notes: Vec::new(),
        })
    }

    fn with_flags(mut self, flags: OperatorFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn basis(&self) -> EnergyBasis {
        self.basis
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn flags(&self) -> OperatorFlags {
        self.flags
    }

    /// Construction warnings (e.g. forced symmetrization).
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// `⟨ε_m|A|ε_n⟩`.
    pub fn element(&self, m: i64, n: i64) -> Result<C64> {
        Ok(self.entries[(self.basis.offset(m)?, self.basis.offset(n)?)])
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            basis: self.basis,
            entries: self.entries.adjoint(),
            flags: self.flags,
            notes: Vec::new(),
        }
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.basis.dimension() {
            return Err(Error::Dimension {
                expected: self.basis.dimension(),
                found: v.len(),
            });
        }
        Ok(&self.entries * v)
    }

    /// `Tr(ρA)`.
    pub fn expectation(&self, rho: &CMatrix) -> C64 {
        (rho * &self.entries).trace()
    }

    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.entries)
    }
}

/// Diagonal `n̂` with entry `k` at label `k`.
pub fn build_number_operator(basis: EnergyBasis) -> OperatorMatrix {
    let diag = CVector::from_iterator(
        basis.dimension(),
        basis.labels().map(|k| C64::new(k as f64, 0.0)),
    );
    OperatorMatrix::new(basis, CMatrix::from_diagonal(&diag))
        .expect("square by construction")
        .with_flags(OperatorFlags {
            hermitian: true,
            unitary_on_interior: false,
        })
}

/// `Ĥ = ħω(n̂ + ½)`.
pub fn build_hamiltonian(basis: EnergyBasis, hbar: f64, omega: f64) -> Result<OperatorMatrix> {
    check_positive("hbar", hbar)?;
    check_positive("omega", omega)?;
    let e = hbar * omega;
    let diag = CVector::from_iterator(
        basis.dimension(),
        basis.labels().map(|k| C64::new(e * (k as f64 + 0.5), 0.0)),
    );
    Ok(
        OperatorMatrix::new(basis, CMatrix::from_diagonal(&diag))?.with_flags(OperatorFlags {
            hermitian: true,
            unitary_on_interior: false,
        }),
    )
}

/// Exponential phase operator `V̂ = Σ |ε_m⟩⟨ε_{m+1}|` (superdiagonal of ones).
pub fn build_exp_phase_operator(basis: EnergyBasis) -> OperatorMatrix {
    let d = basis.dimension();
    let v = CMatrix::from_fn(d, d, |i, j| if j == i + 1 { ONE } else { ZERO });
    OperatorMatrix::new(basis, v)
        .expect("square by construction")
        .with_flags(OperatorFlags {
            hermitian: false,
            unitary_on_interior: true,
        })
}

/// Single-mode truncated shift `Σ_{n<N} |n⟩⟨n+1|` on `N+1` levels.
pub fn single_mode_shift(levels: usize) -> CMatrix {
    CMatrix::from_fn(levels, levels, |i, j| if j == i + 1 { ONE } else { ZERO })
}

/// Single-mode truncated lowering operator with entries `√n`.
pub fn single_mode_lowering(levels: usize) -> CMatrix {
    CMatrix::from_fn(levels, levels, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// Places `(N+1)`-square blocks `B_{στ}` as `Σ B_{στ} ⊗ |σ⟩⟨τ|` in the energy
/// basis. `blocks[σ][τ]` is indexed by [`Polarization::index`].
pub fn embed_polarization_blocks(
    basis: EnergyBasis,
    blocks: [[Option<&CMatrix>; 2]; 2],
) -> CMatrix {
    let d = basis.dimension();
    let mut out = CMatrix::zeros(d, d);
    for s in Polarization::BOTH {
        for t in Polarization::BOTH {
            let Some(b) = blocks[s.index()][t.index()] else {
                continue;
            };
            for n in 0..=basis.cutoff() {
                for m in 0..=basis.cutoff() {
                    out[(basis.offset_of(n, s), basis.offset_of(m, t))] += b[(n, m)];
                }
            }
        }
    }
    out
}

/// Susskind–Glogower `V̂₊` acting on the σ₊ Fock block only.
pub fn sg_exponential_operator(basis: EnergyBasis) -> OperatorMatrix {
    let shift = single_mode_shift(basis.fock_dimension());
    let entries = embed_polarization_blocks(basis, [[Some(&shift), None], [None, None]]);
    OperatorMatrix::new(basis, entries).expect("square by construction")
}

/// The bridge `|0⟩⟨0| ⊗ |σ₋⟩⟨σ₊|` linking the two ladders.
pub fn vacuum_bridge(basis: EnergyBasis) -> CMatrix {
    let mut vac = CMatrix::zeros(basis.fock_dimension(), basis.fock_dimension());
    vac[(0, 0)] = ONE;
    embed_polarization_blocks(basis, [[None, None], [Some(&vac), None]])
}

/// `V̂₊ ⊗ |σ₊⟩⟨σ₊| + |0⟩⟨0| ⊗ |σ₋⟩⟨σ₊| + V̂₊† ⊗ |σ₋⟩⟨σ₋|`.
pub fn exp_phase_from_blocks(basis: EnergyBasis) -> CMatrix {
    let shift = single_mode_shift(basis.fock_dimension());
    let raise = shift.adjoint();
    let mut vac = CMatrix::zeros(basis.fock_dimension(), basis.fock_dimension());
    vac[(0, 0)] = ONE;
    embed_polarization_blocks(basis, [[Some(&shift), None], [Some(&vac), Some(&raise)]])
}

/// Max-abs difference between the block assembly and [`build_exp_phase_operator`].
pub fn block_decomposition_check(basis: EnergyBasis) -> f64 {
    max_abs_diff(
        &exp_phase_from_blocks(basis),
        build_exp_phase_operator(basis).entries(),
    )
}

/// Sign convention for the off-diagonal Fock-basis elements of `Φ̂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseSignConvention {
    /// `cos[π(m−n)] / (i(m−n))`, the value of `(1/2π)∫ φ e^{i(m−n)φ} dφ`.
    DirectIntegral,
    /// `cos[π(m−n)] / (i(n−m))`, the opposite sign.
    FlippedDenominator,
}

impl PhaseSignConvention {
    pub fn formula(self) -> &'static str {
        match self {
            PhaseSignConvention::DirectIntegral => "cos[π(m−n)]/(i(m−n))",
            PhaseSignConvention::FlippedDenominator => "cos[π(m−n)]/(i(n−m))",
        }
    }
}

/// Convention used by [`build_phase_operator`]; it is the one that agrees with
/// the quadrature construction of `∫ φ |φ⟩⟨φ| dφ`.
pub const PHASE_SIGN_CONVENTION: PhaseSignConvention = PhaseSignConvention::DirectIntegral;

/// `⟨ε_m|Φ̂|ε_n⟩` in closed form.
pub fn phase_matrix_element(m: i64, n: i64, convention: PhaseSignConvention) -> C64 {
    if m == n {
        return ZERO;
    }
    let k = m - n;
    let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
    // 1/(ik) = −i/k
    let direct = C64::new(0.0, -parity / k as f64);
    match convention {
        PhaseSignConvention::DirectIntegral => direct,
        PhaseSignConvention::FlippedDenominator => -direct,
    }
}

/// Hermitian phase operator `Φ̂` (radians) in the resolved sign convention.
pub fn build_phase_operator(basis: EnergyBasis) -> OperatorMatrix {
    build_phase_operator_with(basis, PHASE_SIGN_CONVENTION)
}

/// [`build_phase_operator`] with an explicit convention.
///
/// If the assembled matrix is not Hermitian within [`tol::ALG`] it is replaced
/// by `(Φ̂ + Φ̂†)/2` and a note is recorded.
pub fn build_phase_operator_with(
    basis: EnergyBasis,
    convention: PhaseSignConvention,
) -> OperatorMatrix {
    let d = basis.dimension();
    let entries = CMatrix::from_fn(d, d, |i, j| {
        phase_matrix_element(basis.label(i), basis.label(j), convention)
    });
    let mut op = OperatorMatrix::new(basis, entries)
        .expect("square by construction")
        .with_flags(OperatorFlags {
            hermitian: true,
            unitary_on_interior: false,
        });
    let defect = op.hermitian_defect();
    if defect > tol::ALG {
        let sym = (&op.entries + op.entries.adjoint()) * C64::new(0.5, 0.0);
        op.entries = sym;
        op.notes.push(format!(
            "phase operator symmetrized; Hermiticity defect was {defect:e}"
        ));
    }
    op
}

/// `T̂ = Φ̂/ω`.
pub fn build_time_operator(basis: EnergyBasis, omega: f64) -> Result<OperatorMatrix> {
    check_positive("omega", omega)?;
    let phi = build_phase_operator(basis);
    let scaled = phi.entries() / C64::new(omega, 0.0);
    let mut op = OperatorMatrix::new(basis, scaled)?.with_flags(phi.flags());
    op.notes = phi.notes;
    Ok(op)
}

/// `n̂^{1/2}` on the principal branch: `√k` for `k ≥ 0`, `i√|k|` for `k < 0`.
pub fn build_sqrt_number_operator(basis: EnergyBasis) -> OperatorMatrix {
    let diag = CVector::from_iterator(
        basis.dimension(),
        basis.labels().map(|k| {
            let r = (k.unsigned_abs() as f64).sqrt();
            if k >= 0 {
                C64::new(r, 0.0)
            } else {
                C64::new(0.0, r)
            }
        }),
    );
    OperatorMatrix::new(basis, CMatrix::from_diagonal(&diag)).expect("square by construction")
}

/// Compound annihilation operator `â = V̂ n̂^{1/2}`.
pub fn build_annihilation_operator(basis: EnergyBasis) -> OperatorMatrix {
    let v = build_exp_phase_operator(basis);
    let root = build_sqrt_number_operator(basis);
    OperatorMatrix::new(basis, v.entries() * root.entries()).expect("square by construction")
}

/// `â₊ ⊗ |σ₊⟩⟨σ₊| + c·â₊† ⊗ |σ₋⟩⟨σ₋|` with `c` the σ₋ prefactor (`i` for the
/// physical operator).
pub fn annihilation_from_blocks(basis: EnergyBasis, minus_prefactor: C64) -> CMatrix {
    let lower = single_mode_lowering(basis.fock_dimension());
    let raise = lower.adjoint() * minus_prefactor;
    embed_polarization_blocks(basis, [[Some(&lower), None], [None, Some(&raise)]])
}

/// Max-abs difference between the block form (prefactor `i`) and
/// [`build_annihilation_operator`].
pub fn annihilation_block_check(basis: EnergyBasis) -> f64 {
    max_abs_diff(
        &annihilation_from_blocks(basis, I),
        build_annihilation_operator(basis).entries(),
    )
}

/// `AB − BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    if a.basis != b.basis {
        return Err(Error::Dimension {
            expected: a.basis.dimension(),
            found: b.basis.dimension(),
        });
    }
    let c = &a.entries * &b.entries - &b.entries * &a.entries;
    OperatorMatrix::new(a.basis, c)
}

/// `(V̂†V̂ − 1, V̂V̂† − 1)`.
pub fn unitarity_defect(v: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    if v.nrows() != v.ncols() {
        return Err(Error::Dimension {
            expected: v.nrows(),
            found: v.ncols(),
        });
    }
    let id = CMatrix::identity(v.nrows(), v.ncols());
    Ok((v.adjoint() * v - &id, v * v.adjoint() - id))
}

/// `|ε_k⟩⟨ε_k|`.
pub fn label_projector(basis: EnergyBasis, k: i64) -> Result<CMatrix> {
    let i = basis.offset(k)?;
    let mut p = CMatrix::zeros(basis.dimension(), basis.dimension());
    p[(i, i)] = ONE;
    Ok(p)
}

/// Expected `[Φ̂, n̂]` entrywise: `−i(δ_{mn} − (−1)^{m−n})`.
pub fn phase_number_commutator_expected(basis: EnergyBasis) -> CMatrix {
    let d = basis.dimension();
    CMatrix::from_fn(d, d, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        let parity = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        C64::new(0.0, -(delta - parity))
    })
}

/// `‖([Φ̂, n̂] + i)u‖ / ‖u‖`.
///
/// The commutator differs from `−i` only by the rank-one seam term
/// `i Σ (−1)^{m−n} |ε_m⟩⟨ε_n|`, so this vanishes as `N` grows for amplitudes
/// of a smooth periodic function with negligible weight at `φ = ±π`.
pub fn phase_number_commutator_residual(basis: EnergyBasis, u: &CVector) -> Result<f64> {
    let c = commutator(&build_phase_operator(basis), &build_number_operator(basis))?;
    let r = c.apply(u)? + u * I;
    Ok(r.norm() / u.norm())
}

/// Largest absolute entry.
pub fn max_abs_entry(m: &CMatrix) -> f64 {
    max_abs(m)
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!(
            "{name} must be finite and > 0, got {x}"
        )));
    }
    Ok(())
}

/// Every operator of the construction on one basis.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    pub basis: EnergyBasis,
    pub hbar: f64,
    pub omega: f64,
    pub number: OperatorMatrix,
    pub hamiltonian: OperatorMatrix,
    pub exp_phase: OperatorMatrix,
    pub phase: OperatorMatrix,
    pub time: OperatorMatrix,
    pub annihilation: OperatorMatrix,
    pub sg_plus: OperatorMatrix,
}

impl OperatorSet {
    pub fn new(basis: EnergyBasis, hbar: f64, omega: f64) -> Result<Self> {
        Ok(OperatorSet {
            basis,
            hbar,
            omega,
            number: build_number_operator(basis),
            hamiltonian: build_hamiltonian(basis, hbar, omega)?,
            exp_phase: build_exp_phase_operator(basis),
            phase: build_phase_operator(basis),
            time: build_time_operator(basis, omega)?,
            annihilation: build_annihilation_operator(basis),
            sg_plus: sg_exponential_operator(basis),
        })
    }
}

/// Periodic Gaussian test amplitudes `exp(−k²σ²/2)` on every label.
pub fn gaussian_test_amplitudes(basis: EnergyBasis, width: f64) -> CVector {
    CVector::from_iterator(
        basis.dimension(),
        basis
            .labels()
            .map(|k| C64::new((-0.5 * (k as f64 * width).powi(2)).exp(), 0.0)),
    )
}

/// Spectrum of `Φ̂` lies inside `[−π, π]`; returns the extreme eigenvalues.
pub fn phase_spectrum_bounds(basis: EnergyBasis) -> (f64, f64) {
    let ev = crate::hilbert::hermitian_eigenvalues(build_phase_operator(basis).entries());
    (ev[0], ev[ev.len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn unit(basis: EnergyBasis, k: i64) -> CVector {
        let mut v = CVector::zeros(basis.dimension());
        v[basis.offset(k).unwrap()] = ONE;
        v
    }

    #[test]
    fn number_operator_entries() {
        let b = EnergyBasis::new(4);
        let n = build_number_operator(b);
        assert_eq!(n.element(2, 2).unwrap(), C64::new(2.0, 0.0));
        assert_eq!(n.element(-1, -1).unwrap(), C64::new(-1.0, 0.0));
        assert_eq!(n.element(0, 0).unwrap(), ZERO);
        assert_eq!(n.element(1, 2).unwrap(), ZERO);
    }

    #[test]
    fn hamiltonian_is_shifted_number() {
        let b = EnergyBasis::new(3);
        let h = build_hamiltonian(b, 1.0, 1.0).unwrap();
        let n = build_number_operator(b);
        let expect = n.entries() + CMatrix::identity(8, 8) * C64::new(0.5, 0.0);
        assert_eq!(h.entries(), &expect);
        // the lowest σ- state carries negative energy
        assert_eq!(h.element(-1, -1).unwrap(), C64::new(-0.5, 0.0));
        assert!(build_hamiltonian(b, 1.0, 0.0).is_err());
    }

    #[test]
    fn exp_phase_entries_and_action() {
        let b = EnergyBasis::new(3);
        let v = build_exp_phase_operator(b);
        for m in -4..3 {
            assert_eq!(v.element(m, m + 1).unwrap(), ONE);
        }
        assert_eq!(v.element(0, -1).unwrap(), ZERO);
        assert_eq!(v.apply(&unit(b, 1)).unwrap(), unit(b, 0));
    }

    #[test]
    fn sg_operator_support() {
        let b = EnergyBasis::new(3);
        let sg = sg_exponential_operator(b);
        assert_eq!(sg.element(0, 1).unwrap(), ONE);
        for m in b.labels() {
            for n in b.labels() {
                if m < 0 || n < 0 {
                    assert_eq!(sg.element(m, n).unwrap(), ZERO);
                }
            }
        }
    }

    #[test]
    fn sg_commutator_is_vacuum_minus_edge() {
        for cutoff in [0, 1, 5] {
            let b = EnergyBasis::new(cutoff);
            let sg = sg_exponential_operator(b);
            let c = commutator(&sg, &sg.adjoint()).unwrap();
            let expect =
                label_projector(b, 0).unwrap() - label_projector(b, cutoff as i64).unwrap();
            assert_eq!(c.entries(), &expect, "N = {cutoff}");
        }
    }

    #[test]
    fn block_decomposition_examples() {
        assert_eq!(block_decomposition_check(EnergyBasis::new(5)), 0.0);
        let b0 = EnergyBasis::new(0);
        assert_eq!(block_decomposition_check(b0), 0.0);
        // N = 0: V̂ = |ε_{-1}⟩⟨ε_0|
        let v0 = build_exp_phase_operator(b0);
        assert_eq!(
            v0.entries(),
            &CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
        );
        let b = EnergyBasis::new(3);
        assert_eq!(vacuum_bridge(b) * unit(b, 0), unit(b, -1));
    }

    #[test]
    fn phase_operator_elements() {
        let b = EnergyBasis::new(6);
        let phi = build_phase_operator(b);
        assert!(phi.notes().is_empty());
        assert_eq!(phi.hermitian_defect(), 0.0);
        for m in b.labels() {
            assert_eq!(phi.element(m, m).unwrap(), ZERO);
            for n in b.labels() {
                if m != n {
                    let z = phi.element(m, n).unwrap();
                    assert!((z.norm() - 1.0 / (m - n).abs() as f64).abs() < 1e-15);
                    assert_eq!(z.re, 0.0);
                }
            }
        }
        // (1/2π)∫φ e^{-iφ} dφ = −i
        assert_eq!(phi.element(0, 1).unwrap(), C64::new(0.0, -1.0));
        assert_eq!(phi.element(1, 0).unwrap(), C64::new(0.0, 1.0));
        assert_eq!(phi.element(0, 2).unwrap(), C64::new(0.0, 0.5));
    }

    #[test]
    fn flipped_convention_is_negated() {
        let b = EnergyBasis::new(2);
        let a = build_phase_operator_with(b, PhaseSignConvention::DirectIntegral);
        let f = build_phase_operator_with(b, PhaseSignConvention::FlippedDenominator);
        assert_eq!(a.entries(), &(-f.entries()));
    }

    #[test]
    fn time_operator_scaling() {
        let b = EnergyBasis::new(4);
        let phi = build_phase_operator(b);
        assert_eq!(
            build_time_operator(b, 1.0).unwrap().entries(),
            phi.entries()
        );
        let t2 = build_time_operator(b, 2.0).unwrap();
        assert_eq!(t2.element(0, 1).unwrap(), phi.element(0, 1).unwrap() * 0.5);
        assert_eq!(t2.element(3, 3).unwrap(), ZERO);
        assert!(matches!(build_time_operator(b, 0.0), Err(Error::Domain(_))));
        assert!(matches!(
            build_time_operator(b, -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn annihilation_actions() {
        let b = EnergyBasis::new(3);
        let a = build_annihilation_operator(b);
        assert_eq!(a.apply(&unit(b, 1)).unwrap(), unit(b, 0));
        assert_eq!(a.apply(&unit(b, 0)).unwrap(), CVector::zeros(8));
        assert_eq!(a.apply(&unit(b, -1)).unwrap(), unit(b, -2) * I);
    }

    #[test]
    fn annihilation_block_form() {
        assert_eq!(annihilation_block_check(EnergyBasis::new(3)), 0.0);
        assert_eq!(annihilation_block_check(EnergyBasis::new(0)), 0.0);
        let b = EnergyBasis::new(2);
        let wrong = annihilation_from_blocks(b, -I);
        let diff = &wrong - build_annihilation_operator(b).entries();
        let row = b
            .offset(b.energy_index(1, Polarization::Minus).unwrap())
            .unwrap();
        let col = b
            .offset(b.energy_index(0, Polarization::Minus).unwrap())
            .unwrap();
        assert!((diff[(row, col)].norm() - 2.0).abs() < 1e-15);
        assert!((max_abs(&diff) - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sqrt_number_squares_to_number() {
        let b = EnergyBasis::new(7);
        let r = build_sqrt_number_operator(b);
        let sq = r.entries() * r.entries();
        assert!(max_abs_diff(&sq, build_number_operator(b).entries()) < 1e-14);
    }

    #[test]
    fn self_commutator_vanishes() {
        let n = build_number_operator(EnergyBasis::new(3));
        assert_eq!(commutator(&n, &n).unwrap().entries(), &CMatrix::zeros(8, 8));
        let other = build_number_operator(EnergyBasis::new(4));
        assert!(matches!(
            commutator(&n, &other),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn exp_phase_number_commutator() {
        let b = EnergyBasis::new(5);
        let v = build_exp_phase_operator(b);
        let c = commutator(&v, &build_number_operator(b)).unwrap();
        assert_eq!(c.entries(), v.entries());
    }

    #[test]
    fn unitarity_defects_are_single_edge_projectors() {
        for cutoff in [0, 1, 8] {
            let b = EnergyBasis::new(cutoff);
            let v = build_exp_phase_operator(b);
            let (left, right) = unitarity_defect(v.entries()).unwrap();
            assert_eq!(left, -label_projector(b, b.min_label()).unwrap());
            assert_eq!(right, -label_projector(b, b.max_label()).unwrap());
        }
        let (l, r) = unitarity_defect(&CMatrix::identity(4, 4)).unwrap();
        assert_eq!(l, CMatrix::zeros(4, 4));
        assert_eq!(r, CMatrix::zeros(4, 4));
        assert!(unitarity_defect(&CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn phase_number_commutator_structure() {
        let b = EnergyBasis::new(6);
        let c = commutator(&build_phase_operator(b), &build_number_operator(b)).unwrap();
        assert!(max_abs_diff(c.entries(), &phase_number_commutator_expected(b)) < 1e-13);
    }

    #[test]
    fn commutator_residual_shrinks_with_cutoff() {
        let residual = |n| {
            let b = EnergyBasis::new(n);
            phase_number_commutator_residual(b, &gaussian_test_amplitudes(b, 0.5)).unwrap()
        };
        let r = [residual(2), residual(8), residual(16), residual(64)];
        // decays until the seam floor √dim·|Σ(−1)^k u_k|/‖u‖ takes over
        assert!(r[1] < r[0] && r[2] < r[1], "{r:?}");
        assert!(r[3] < 1e-3, "{r:?}");
    }

    #[test]
    fn phase_spectrum_inside_window() {
        for cutoff in [0, 3, 20] {
            let (lo, hi) = phase_spectrum_bounds(EnergyBasis::new(cutoff));
            assert!(
                lo > -PI - 1e-12 && hi < PI + 1e-12,
                "N={cutoff}: [{lo}, {hi}]"
            );
        }
    }

    #[test]
    fn builders_are_deterministic() {
        let b = EnergyBasis::new(9);
        let s1 = OperatorSet::new(b, 1.0, 1.3).unwrap();
        let s2 = OperatorSet::new(b, 1.0, 1.3).unwrap();
        for (x, y) in [
            (&s1.number, &s2.number),
            (&s1.hamiltonian, &s2.hamiltonian),
            (&s1.exp_phase, &s2.exp_phase),
            (&s1.phase, &s2.phase),
            (&s1.time, &s2.time),
            (&s1.annihilation, &s2.annihilation),
            (&s1.sg_plus, &s2.sg_plus),
        ] {
            let bits = |m: &OperatorMatrix| {
                m.entries()
                    .iter()
                    .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                    .collect::<Vec<_>>()
            };
            assert_eq!(bits(x), bits(y));
        }
    }

    proptest! {
        #[test]
        fn shift_identities_hold_for_any_cutoff(cutoff in 0usize..30) {
            let b = EnergyBasis::new(cutoff);
            prop_assert_eq!(block_decomposition_check(b), 0.0);
            prop_assert_eq!(annihilation_block_check(b), 0.0);
            let v = build_exp_phase_operator(b);
            let c = commutator(&v, &build_number_operator(b)).unwrap();
            prop_assert_eq!(c.entries(), v.entries());
        }
    }
}
