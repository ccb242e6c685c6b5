//! Negativity of two-path states, numerically and in closed form.

use crate::channels::DampingRates;
use crate::linalg::{hermitian_eigen, partial_transpose_a, ComplexMatrix};
use crate::phases::PhaseSet;
use crate::states::{CoherencePair, DensityOperator};

/// Partial-transpose eigenvalues in `[−NOISE_FLOOR, 0)` are treated as zero.
pub const NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegativityMethod {
    Numeric,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityResult {
    pub negativity: f64,
    /// Smallest eigenvalue of the partial transpose.
    pub min_eigenvalue: f64,
    pub method: NegativityMethod,
}

impl NegativityResult {
    pub fn is_entangled(&self) -> bool {
        self.negativity > 0.0
    }
}

/// Negativity of any 4×4 Hermitian matrix treated as a two-qubit operator.
pub fn negativity_of_matrix(m: &ComplexMatrix) -> NegativityResult {
    let pt = partial_transpose_a(m, 2, 2).expect("two-qubit operator");
    let eig = hermitian_eigen(&pt).expect("partial transpose of a Hermitian matrix");
    let negativity = eig
        .values
        .iter()
        .filter(|&&v| v < -NOISE_FLOOR)
        .fold(0.0, |acc, v| acc - v);
    NegativityResult {
        negativity,
        min_eigenvalue: eig.min_value(),
        method: NegativityMethod::Numeric,
    }
}

pub fn negativity_numeric(rho: &DensityOperator) -> NegativityResult {
    negativity_of_matrix(rho.matrix())
}

fn closed_form(lambda: f64) -> NegativityResult {
    NegativityResult {
        negativity: (-lambda).max(0.0),
        min_eigenvalue: lambda,
        method: NegativityMethod::ClosedForm,
    }
}

/// `λ = ¼[1 − |c₁||c₂| − √((|c₁|−|c₂|)² + 4|c₁||c₂| sin²(ΔΦ/2))]`.
pub fn negativity_closed_form(c: &CoherencePair, p: &PhaseSet) -> NegativityResult {
    negativity_damped_closed_form(c, p, &DampingRates::none())
}

/// Same with each coherence shrunk by its damping factor `e^{−γT}`.
pub fn negativity_damped_closed_form(
    c: &CoherencePair,
    p: &PhaseSet,
    d: &DampingRates,
) -> NegativityResult {
    let a = c.c1.abs() * d.factor_a();
    let b = c.c2.abs() * d.factor_b();
    let s = (p.entangling_phase() / 2.0).sin();
    let lambda = 0.25 * (1.0 - a * b - ((a - b).powi(2) + 4.0 * a * b * s * s).sqrt());
    closed_form(lambda)
}
