//! Population-preserving CPTP maps on two path qubits.
//!
//! Such a map is fully described by a 4×4 positive semidefinite coefficient
//! matrix with unit diagonal, indexed by `(ab),(a'b')`. Since the Kraus-like
//! operators `|a;out⟩⟨a;in| ⊗ |b;out⟩⟨b;in|` only relabel basis vectors, the
//! channel acts entrywise:
//! `(ρ_out)_{(ab),(a'b')} = 𝓔_{(ab),(a'b')} · (ρ_in)_{(ab),(a'b')}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{cr, hermitian_eigen, kron, partial_transpose_a, ComplexMatrix, C64};
use crate::phases::PhaseSet;
use crate::states::{Basis, DensityOperator};

pub const CHANNEL_HERMITIAN_TOL: f64 = 1e-12;
pub const CHANNEL_PSD_TOL: f64 = 1e-10;
pub const CHANNEL_DIAGONAL_TOL: f64 = 1e-12;

/// Minimum eigenvalue of the partial transpose below which a coefficient
/// matrix is reported as entangling.
pub const ENTANGLING_THRESHOLD: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Gravity,
    DampedGravity,
    SeparableSample,
    Custom,
}

/// Outcome of [`validate_channel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub hermiticity_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    pub max_diagonal_deviation: f64,
    pub passes: bool,
}

impl std::fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "hermiticity deviation {:.3e}, min eigenvalue {:.3e}, diagonal deviation {:.3e}",
            self.hermiticity_deviation, self.min_eigenvalue, self.max_diagonal_deviation
        )
    }
}

/// Checks the coefficient-matrix conditions: Hermitian, positive
/// semidefinite, unit diagonal.
pub fn validate_channel(e: &ComplexMatrix) -> ValidityReport {
    if e.dim() != 4 {
        return ValidityReport {
            hermiticity_deviation: f64::NAN,
            min_eigenvalue: f64::NAN,
            max_diagonal_deviation: f64::NAN,
            passes: false,
        };
    }
    let hermiticity_deviation = e.hermiticity_deviation();
    let hermitian_part = (e + &e.adjoint()).scale(cr(0.5));
    let min_eigenvalue = hermitian_eigen(&hermitian_part)
        .map(|eig| eig.min_value())
        .unwrap_or(f64::NAN);
    let max_diagonal_deviation = e
        .diagonal()
        .iter()
        .map(|d| (d - cr(1.0)).norm())
        .fold(0.0, f64::max);
    let passes = hermiticity_deviation <= CHANNEL_HERMITIAN_TOL
        && min_eigenvalue >= -CHANNEL_PSD_TOL
        && max_diagonal_deviation <= CHANNEL_DIAGONAL_TOL;
    ValidityReport {
        hermiticity_deviation,
        min_eigenvalue,
        max_diagonal_deviation,
        passes,
    }
}

/// A validated coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    matrix: ComplexMatrix,
    kind: ChannelKind,
}

impl CoefficientMatrix {
    pub fn new(matrix: ComplexMatrix, kind: ChannelKind) -> Result<Self> {
        let report = validate_channel(&matrix);
        if !report.passes {
            return Err(Error::InvalidChannel(report.to_string()));
        }
        Ok(Self { matrix, kind })
    }

    /// The all-ones matrix, i.e. the channel that leaves every state unchanged.
    pub fn identity_channel() -> Self {
        Self {
            matrix: ComplexMatrix::from_fn(4, |_, _| cr(1.0)),
            kind: ChannelKind::Custom,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn partial_transpose(&self) -> ComplexMatrix {
        partial_transpose_a(&self.matrix, 2, 2).expect("coefficient matrices are 4x4")
    }
}

/// Dephasing rates of the two objects over the hold time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingRates {
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub hold_time: f64,
}

impl DampingRates {
    pub fn new(gamma_a: f64, gamma_b: f64, hold_time: f64) -> Result<Self> {
        for (name, v) in [("gamma_A", gamma_a), ("gamma_B", gamma_b), ("T", hold_time)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(Self {
            gamma_a,
            gamma_b,
            hold_time,
        })
    }

    pub fn none() -> Self {
        Self {
            gamma_a: 0.0,
            gamma_b: 0.0,
            hold_time: 0.0,
        }
    }

    /// `e^{−γ_A T}`
    pub fn factor_a(&self) -> f64 {
        (-self.gamma_a * self.hold_time).exp()
    }

    /// `e^{−γ_B T}`
    pub fn factor_b(&self) -> f64 {
        (-self.gamma_b * self.hold_time).exp()
    }
}

/// `[[1, e^{−γ_A T}], [e^{−γ_A T}, 1]] ⊗ [[1, e^{−γ_B T}], [e^{−γ_B T}, 1]]`,
/// built from the exponents without any sign check.
pub fn damping_matrix(exponent_a: f64, exponent_b: f64) -> ComplexMatrix {
    let factor = |x: f64| {
        let f = (-x).exp();
        ComplexMatrix::from_real_rows([[1.0, f], [f, 1.0]])
    };
    kron(&factor(exponent_a), &factor(exponent_b))
}

/// `(𝓔_G)_{(ab),(a'b')} = e^{i(Φ_ab − Φ_a'b')}`.
pub fn gravity_channel(p: &PhaseSet) -> CoefficientMatrix {
    let phi = p.as_array();
    let matrix = ComplexMatrix::from_fn(4, |i, j| Complex64::from_polar(1.0, phi[i] - phi[j]));
    CoefficientMatrix {
        matrix,
        kind: ChannelKind::Gravity,
    }
}

/// Gravity channel with both objects' path coherences damped during the hold.
pub fn damped_gravity_channel(p: &PhaseSet, d: &DampingRates) -> CoefficientMatrix {
    let damping = damping_matrix(d.gamma_a * d.hold_time, d.gamma_b * d.hold_time);
    CoefficientMatrix {
        matrix: gravity_channel(p).matrix.hadamard(&damping),
        kind: ChannelKind::DampedGravity,
    }
}

pub fn apply_channel(e: &CoefficientMatrix, rho_in: &DensityOperator) -> Result<DensityOperator> {
    if rho_in.basis() != Basis::In {
        return Err(Error::InvalidState(
            "channel input must be in the `in` basis".into(),
        ));
    }
    DensityOperator::new(e.matrix.hadamard(rho_in.matrix()), Basis::Out)
}

/// PPT verdict on a coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityVerdict {
    pub entangling: bool,
    pub min_eigenvalue: f64,
    /// Eigenvector of the partial transpose for `min_eigenvalue`.
    pub eigenvector: Vec<C64>,
}

pub fn is_separable_channel(e: &CoefficientMatrix) -> SeparabilityVerdict {
    let eig = hermitian_eigen(&e.partial_transpose())
        .expect("partial transpose of Hermitian is Hermitian");
    let min_eigenvalue = eig.min_value();
    SeparabilityVerdict {
        entangling: min_eigenvalue < ENTANGLING_THRESHOLD,
        min_eigenvalue,
        eigenvector: eig.vector(3),
    }
}

/// Random separable coefficient matrix: a convex mixture of products of
/// local-phase correlation matrices `(u u†) ⊗ (v v†)` with
/// `u = (e^{iφ_L}, e^{iφ_R})`, `v = (e^{iψ_L}, e^{iψ_R})`.
///
/// Uses ChaCha8 seeded from `seed`; the result depends only on
/// `(seed, mixtures)`.
pub fn sample_separable_channel(seed: u64, mixtures: usize) -> Result<CoefficientMatrix> {
    if mixtures == 0 {
        return Err(Error::InvalidParameter(
            "mixtures must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::with_capacity(mixtures);
    for _ in 0..mixtures {
        let mut phase = || Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
        let u = [phase(), phase()];
        let v = [phase(), phase()];
        let weight: f64 = 1.0 - rng.gen::<f64>();
        terms.push((
            weight,
            kron(&ComplexMatrix::outer(&u), &ComplexMatrix::outer(&v)),
        ));
    }
    let total: f64 = terms.iter().map(|(w, _)| w).sum();
    let mut matrix = ComplexMatrix::zeros(4);
    for (w, term) in &terms {
        matrix = &matrix + &term.scale(cr(w / total));
    }
    // each term has unit-modulus diagonal; pin it to 1 against rounding
    for i in 0..4 {
        matrix[(i, i)] = cr(1.0);
    }
    CoefficientMatrix::new(matrix, ChannelKind::SeparableSample)
}
