use thiserror::Error;

/// Errors raised by the analysis pipeline.
///
/// Cone, ray and wall numbers in messages are 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector is not contained in the subspace")]
    NotInSubspace,

    #[error("invalid input at {path}: {message}")]
    InvalidInput { path: String, message: String },

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("incompatible filtrations on cone {cone}: {detail}")]
    IncompatibleFiltrations { cone: usize, detail: String },

    #[error("filtration value of the zero vector is unbounded")]
    ZeroVector,

    #[error("negative jet order {0}")]
    NegativeJetOrder(i64),

    #[error("operation requires a two-dimensional fan, got dimension {0}")]
    NotPlanar(usize),

    #[error("cohomology region exceeded cap of {cap} shells")]
    RegionCapExceeded { cap: usize },

    #[error("internal consistency violation: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotInSubspace => "not_in_subspace",
            Error::InvalidInput { .. } => "invalid_input",
            Error::InvalidFan(_) => "invalid_fan",
            Error::IncompatibleFiltrations { .. } => "incompatible_filtrations",
            Error::ZeroVector => "zero_vector",
            Error::NegativeJetOrder(_) => "negative_jet_order",
            Error::NotPlanar(_) => "not_planar",
            Error::RegionCapExceeded { .. } => "region_cap_exceeded",
            Error::Internal(_) => "internal",
        }
    }

    /// Process exit status for the command-line tool.
    pub fn exit_status(&self) -> i32 {
        match self {
            Error::IncompatibleFiltrations { .. } => 2,
            Error::Internal(_) | Error::RegionCapExceeded { .. } => 3,
            _ => 1,
        }
    }

    pub(crate) fn input(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidInput { path: path.into(), message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
