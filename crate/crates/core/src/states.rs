//! Two-object path states in the ordered basis (LL, LR, RL, RR), object A
//! being the slow index.

use crate::error::{Error, Result};
use crate::linalg::{cr, hermitian_eigen, kron, ComplexMatrix};

pub const STATE_HERMITIAN_TOL: f64 = 1e-12;
pub const STATE_TRACE_TOL: f64 = 1e-12;
pub const STATE_PSD_TOL: f64 = 1e-10;

/// Whether matrix elements refer to the paths before or after the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Real interference parameters of the two objects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherencePair {
    pub c1: f64,
    pub c2: f64,
}

impl CoherencePair {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        let ok = |c: f64| c.is_finite() && c.abs() <= 1.0;
        if ok(c1) && ok(c2) {
            Ok(Self { c1, c2 })
        } else {
            Err(Error::CoherenceOutOfRange { c1, c2 })
        }
    }

    pub fn symmetric(c: f64) -> Result<Self> {
        Self::new(c, c)
    }
}

/// A validated 4×4 density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    basis: Basis,
}

impl DensityOperator {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix, basis: Basis) -> Result<Self> {
        if matrix.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: matrix.dim(),
            });
        }
        let herm = matrix.hermiticity_deviation();
        if herm > STATE_HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - cr(1.0)).norm() > STATE_TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = hermitian_eigen(&matrix)?.min_value();
        if min < -STATE_PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { matrix, basis })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigen(&self.matrix)
            .expect("validated density operator is Hermitian")
            .min_value()
    }

    pub fn l1_coherence(&self) -> f64 {
        l1_coherence(&self.matrix)
    }
}

/// `½ [[1, c], [c, 1]]`
pub fn single_object_state(c: f64) -> ComplexMatrix {
    ComplexMatrix::from_real_rows([[0.5, 0.5 * c], [0.5 * c, 0.5]])
}

/// `ρ_A ⊗ ρ_B` with coherences `c1` and `c2`.
pub fn initial_state(c: &CoherencePair) -> DensityOperator {
    let matrix = kron(&single_object_state(c.c1), &single_object_state(c.c2));
    DensityOperator::new(matrix, Basis::In).expect("product of valid qubit states")
}

/// Sum of the moduli of all off-diagonal elements in the fixed basis.
pub fn l1_coherence(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    total
}

/// Partial trace of a two-qubit operator over the complementary subsystem.
pub fn reduced_state(rho: &DensityOperator, keep: Subsystem) -> ComplexMatrix {
    let m = rho.matrix();
    ComplexMatrix::from_fn(2, |i, j| match keep {
        Subsystem::A => (0..2).map(|b| m[(2 * i + b, 2 * j + b)]).sum(),
        Subsystem::B => (0..2).map(|a| m[(2 * a + i, 2 * a + j)]).sum(),
    })
}
