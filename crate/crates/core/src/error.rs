use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m_ij - conj(m_ji)| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} exceeds the eigensolver limit of 16")]
    DimensionTooLarge(usize),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("degenerate geometry: separation D = {d} must exceed span L = {l}")]
    DegenerateGeometry { d: f64, l: f64 },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("ratio L/D = {0} outside (0, 1)")]
    RatioOutOfRange(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coherence out of range: c1 = {c1}, c2 = {c2} (need |c| <= 1)")]
    CoherenceOutOfRange { c1: f64, c2: f64 },

    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error(
        "channel is not entangling (min eigenvalue of partial transpose {min_eigenvalue:.3e})"
    )]
    NotEntangling { min_eigenvalue: f64 },

    #[error("witness undefined: zero initial-state element at ({row}, {col}) under a nonzero numerator; both coherences must be nonzero")]
    ZeroCoherence { row: usize, col: usize },
}
