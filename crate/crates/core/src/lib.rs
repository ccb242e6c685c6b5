//! Gravitationally induced entanglement between two path-superposed masses.
//!
//! The pipeline runs from trajectory geometry to gravitational phases
//! ([`phases`]), through the population-preserving channel they define
//! ([`channels`]) acting on a product of partially coherent path states
//! ([`states`]), to entanglement negativity ([`entanglement`]) and the
//! entangling-map witness ([`witness`]). Everything rests on a small dense
//! complex kernel ([`linalg`]).

pub mod channels;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod phases;
pub mod states;
pub mod witness;

pub use channels::{
    apply_channel, damped_gravity_channel, gravity_channel, is_separable_channel,
    sample_separable_channel, validate_channel, ChannelKind, CoefficientMatrix, DampingRates,
    SeparabilityVerdict, ValidityReport,
};
pub use entanglement::{
    negativity_closed_form, negativity_damped_closed_form, negativity_numeric, NegativityMethod,
    NegativityResult,
};
pub use error::{Error, Result};
pub use linalg::{hermitian_eigen, kron, partial_transpose_a, ComplexMatrix, HermitianEigen, C64};
pub use phases::{
    from_dimensionless, phases_exact, phases_large_t, phases_quadrature, theta_from_panel_time,
    to_dimensionless, DimensionlessPoint, Geometry, Path, PhaseMethod, PhaseSet,
};
pub use states::{
    initial_state, l1_coherence, reduced_state, Basis, CoherencePair, DensityOperator, Subsystem,
};
pub use witness::{
    canonical_witness, witness_eigendata, witness_expectation_closed_form,
    witness_expectation_trace, witness_matrix_w, witness_operator, ExpectationMode,
    WitnessEigenData, WitnessOperator,
};
