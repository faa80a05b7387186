use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Both ZC half-sums vanished, so the phase is undefined.
    #[error("estimator undefined: {0}")]
    Undefined(&'static str),

    /// `p0 + p1 == 0` in the auxiliary ratio.
    #[error("degenerate auxiliary channel powers")]
    DegenerateChannels,

    /// `p_diff == 0` in the sum/difference ratio.
    #[error("sum/difference ratio evaluated on a null")]
    OnNull,

    #[error("every design candidate has an infinite objective")]
    OptimizationDegenerate,

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// Short stable tag used in machine-readable CLI errors and FFI codes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::Undefined(_) => "undefined",
            Error::DegenerateChannels => "degenerate_channels",
            Error::OnNull => "on_null",
            Error::OptimizationDegenerate => "optimization_degenerate",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
        }
    }
}
