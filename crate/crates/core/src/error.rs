use thiserror::Error;

/// Errors produced by operator construction and the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not Hermitian: adjoint residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("not a projector ({reason}, residual {residual:.3e})")]
    NotProjector { reason: &'static str, residual: f64 },

    #[error("not a density matrix ({reason}, residual {residual:.3e})")]
    NotDensity { reason: &'static str, residual: f64 },

    #[error("not unitary: residual {residual:.3e}")]
    NotUnitary { residual: f64 },

    #[error("rank {rank} out of range for dimension {dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    #[error("input vectors span only the zero subspace")]
    ZeroSpan,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("eigensolver residual {residual:.3e} exceeds {tolerance:.1e}")]
    EigenResidual { residual: f64, tolerance: f64 },

    #[error("meet iteration did not converge: gap {gap:.3e} after {squarings} squarings")]
    NonConvergence { gap: f64, squarings: usize },

    #[error("method {method} does not apply to {operation}")]
    MethodNotApplicable {
        method: &'static str,
        operation: &'static str,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),

    #[error("internal consistency failure: {what} off by {amount:.3e}")]
    InternalConsistency { what: &'static str, amount: f64 },

    #[error("invalid resolution of identity ({reason}, residual {residual:.3e})")]
    InvalidResolution { reason: &'static str, residual: f64 },

    #[error("sector basis failed to orthogonalize: residual {residual:.3e} exceeds {tolerance:.1e}")]
    SectorOrthogonality { residual: f64, tolerance: f64 },

    #[error("generic sector has odd dimension {dim}; upstream tolerance breach")]
    OddGenericSector { dim: usize },

    #[error("principal angle too close to a commuting sector: {value:.3e} below floor {floor:.1e}")]
    AngleFloor { value: f64, floor: f64 },

    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
