//! Entangling-map witnesses.
//!
//! For a population-preserving channel with coefficient matrix `𝓔`, the
//! expectation of an observable `Ŵ` on the output is `tr[𝓔 𝓦]` where
//! `𝓦_{(a'b'),(ab)} = ⟨a'b'|Ŵ|ab⟩ ⟨ab|ρ_in|a'b'⟩`. Taking
//! `𝓦 = (w w†)^{T_A}` for an eigenvector `w` of `𝓔^{T_A}` with negative
//! eigenvalue `ν` gives `tr[𝓔 𝓦] = ν < 0`, while every separable
//! (non-entangling) `𝓕` has `tr[𝓕 𝓦] = w† 𝓕^{T_A} w ≥ 0`. Dividing `𝓦`
//! entrywise by the initial state recovers `Ŵ`, which exists only when both
//! objects start with nonzero coherence.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::channels::{
    gravity_channel, is_separable_channel, CoefficientMatrix, DampingRates, ENTANGLING_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::linalg::{c, cr, inner, norm, partial_transpose_a, ComplexMatrix, C64};
use crate::phases::PhaseSet;
use crate::states::{initial_state, CoherencePair, DensityOperator};

/// Initial-state elements smaller than this are treated as zero in the
/// division that yields `Ŵ`.
pub const ZERO_ELEMENT_TOL: f64 = 1e-15;

/// Negative eigenvalue `ν` of `𝓔^{T_A}` and its unit eigenvector `w` in the
/// order (LL, LR, RL, RR).
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessEigenData {
    pub nu: f64,
    pub w: [C64; 4],
}

impl WitnessEigenData {
    /// Eigen-data with all phases set to zero in the eigenvector,
    /// `w = ½(−1, i, −i, 1)`.
    ///
    /// This is exactly the eigenvector of the gravity channel with
    /// `Φ_LL = Φ_RR = 0`, `Φ_LR = Φ_RL = π/2`, whose eigenvalue is `ν = −2`.
    pub fn zero_phase() -> Self {
        Self {
            nu: -2.0,
            w: [cr(-0.5), c(0.0, 0.5), c(0.0, -0.5), cr(0.5)],
        }
    }

    /// Eigen-data of the gravity channel written out analytically. Valid for
    /// `0 ≤ ΔΦ ≤ 2π`.
    pub fn gravity_closed_form(p: &PhaseSet) -> Result<Self> {
        let nu = -2.0 * (p.entangling_phase() / 2.0).sin();
        if nu >= ENTANGLING_THRESHOLD {
            return Err(Error::NotEntangling { min_eigenvalue: nu });
        }
        let half_cross = 0.5 * (p.phi_lr - p.phi_rl);
        let half_same = 0.5 * (p.phi_ll - p.phi_rr);
        let i = c(0.0, 1.0);
        let w = [
            -Complex64::from_polar(0.5, -half_cross),
            i * Complex64::from_polar(0.5, -half_same),
            -i * Complex64::from_polar(0.5, half_same),
            Complex64::from_polar(0.5, half_cross),
        ];
        Ok(Self { nu, w })
    }

    /// `|⟨self.w, other.w⟩|`; 1 when the vectors agree up to a global phase.
    pub fn overlap(&self, other: &WitnessEigenData) -> f64 {
        inner(&self.w, &other.w).norm()
    }
}

/// Most-negative eigenpair of `𝓔^{T_A}`, phase-fixed so that `w_RR` is real
/// and positive.
pub fn witness_eigendata(e: &CoefficientMatrix) -> Result<WitnessEigenData> {
    let verdict = is_separable_channel(e);
    if !verdict.entangling {
        return Err(Error::NotEntangling {
            min_eigenvalue: verdict.min_eigenvalue,
        });
    }
    let v = verdict.eigenvector;
    let scale = norm(&v);
    let pivot = if v[3].norm() > 1e-8 {
        v[3]
    } else {
        *v.iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap()
    };
    let fix = pivot.conj() / pivot.norm() / scale;
    Ok(WitnessEigenData {
        nu: verdict.min_eigenvalue,
        w: [v[0] * fix, v[1] * fix, v[2] * fix, v[3] * fix],
    })
}

/// `𝓦 = (w w†)^{T_A}`.
pub fn witness_matrix_w(ed: &WitnessEigenData) -> ComplexMatrix {
    partial_transpose_a(&ComplexMatrix::outer(&ed.w), 2, 2).expect("4-vector")
}

/// Divides `𝓦` by the initial state:
/// `⟨a'b'|Ŵ|ab⟩ = 𝓦_{(a'b'),(ab)} / ⟨ab|ρ_in|a'b'⟩`.
///
/// Positions where both numerator and denominator vanish are set to zero; a
/// nonzero numerator over a zero element is a [`Error::ZeroCoherence`].
pub fn witness_from_state(
    ed: &WitnessEigenData,
    rho_in: &DensityOperator,
) -> Result<ComplexMatrix> {
    let numerators = witness_matrix_w(ed);
    let rho = rho_in.matrix();
    let mut out = ComplexMatrix::zeros(4);
    for row in 0..4 {
        for col in 0..4 {
            let num = numerators[(row, col)];
            let den = rho[(col, row)];
            out[(row, col)] = if den.norm() > ZERO_ELEMENT_TOL {
                num / den
            } else if num.norm() <= ZERO_ELEMENT_TOL {
                cr(0.0)
            } else {
                return Err(Error::ZeroCoherence { row, col });
            };
        }
    }
    Ok(out)
}

/// Hermitian witness in the `out` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessOperator {
    matrix: ComplexMatrix,
    source: WitnessEigenData,
    coherence: CoherencePair,
}

impl WitnessOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &WitnessEigenData {
        &self.source
    }

    pub fn coherence(&self) -> CoherencePair {
        self.coherence
    }

    pub fn expectation(&self, rho_out: &DensityOperator) -> f64 {
        witness_expectation_trace(self, rho_out)
    }
}

/// Witness for the product initial state with coherences `c`.
pub fn witness_operator(ed: &WitnessEigenData, c: CoherencePair) -> Result<WitnessOperator> {
    let matrix = witness_from_state(ed, &initial_state(&c))?;
    Ok(WitnessOperator {
        matrix,
        source: ed.clone(),
        coherence: c,
    })
}

/// The zero-phase witness
/// `𝟙 − c₁⁻¹ Y⊗Z − c₂⁻¹ Z⊗Y − (c₁c₂)⁻¹ X⊗X`.
pub fn canonical_witness(c: CoherencePair) -> Result<WitnessOperator> {
    witness_operator(&WitnessEigenData::zero_phase(), c)
}

/// `Re Tr[Ŵ ρ_out]`.
pub fn witness_expectation_trace(w: &WitnessOperator, rho_out: &DensityOperator) -> f64 {
    let value = w.matrix.matmul(rho_out.matrix()).trace();
    debug_assert!(value.im.abs() <= 1e-9 * (1.0 + value.re.abs()));
    value.re
}

/// `tr[𝓔 𝓦]`.
pub fn coefficient_pairing(e: &CoefficientMatrix, wmat: &ComplexMatrix) -> f64 {
    e.matrix().matmul(wmat).trace().re
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpectationMode {
    /// Closed form obtained by expanding `Tr[Ŵ ρ_out]` for the zero-phase
    /// witness; agrees with the direct trace.
    #[default]
    TraceDerived,
    /// The sign arrangement of the published undamped and damped formulas,
    /// kept for comparison. Its first-order term in the phases cancels.
    PaperLiteral,
}

/// Expectation of the zero-phase witness on the (optionally damped) gravity
/// channel output. Independent of `c` apart from requiring both coherences to
/// be nonzero, since the `c⁻¹` weights of `Ŵ` cancel the state's coherences.
pub fn witness_expectation_closed_form(
    c: &CoherencePair,
    p: &PhaseSet,
    d: Option<&DampingRates>,
    mode: ExpectationMode,
) -> Result<f64> {
    if c.c1 == 0.0 {
        return Err(Error::ZeroCoherence { row: 0, col: 2 });
    }
    if c.c2 == 0.0 {
        return Err(Error::ZeroCoherence { row: 0, col: 1 });
    }
    let (fa, fb) = d.map_or((1.0, 1.0), |d| (d.factor_a(), d.factor_b()));
    let PhaseSet {
        phi_ll: ll,
        phi_lr: lr,
        phi_rl: rl,
        phi_rr: rr,
        ..
    } = *p;
    let cosines = 0.5 * fa * fb * ((ll - rr).cos() + (lr - rl).cos());
    let value = match mode {
        ExpectationMode::TraceDerived => {
            1.0 + 0.5
                * (fb * (ll - lr).sin()
                    + fa * (ll - rl).sin()
                    + fb * (rr - rl).sin()
                    + fa * (rr - lr).sin())
                - cosines
        }
        ExpectationMode::PaperLiteral => match d {
            None => {
                1.0 - 0.5 * ((ll - lr).sin() + (ll - rl).sin() - (rr - rl).sin() - (rr - lr).sin())
                    - cosines
            }
            Some(_) => {
                1.0 - 0.5 * (fb * (ll - lr).sin() + fa * (ll - rl).sin() - fb * (rr - rl).sin())
                    - 0.5 * fa * (rr - lr).sin()
                    - cosines
            }
        },
    };
    Ok(value)
}

/// Gravity channel whose witness eigenvector is the zero-phase vector.
pub fn zero_phase_reference_channel() -> CoefficientMatrix {
    gravity_channel(&PhaseSet::new(0.0, FRAC_PI_2, FRAC_PI_2, 0.0))
}
