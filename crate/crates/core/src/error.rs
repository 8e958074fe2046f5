use thiserror::Error;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("invalid alpha spec `{spec}`: {reason}")]
    AlphaSpec { spec: String, reason: String },

    #[error("dimension mismatch: distribution has d={dist}, alpha has d={alpha}")]
    DimensionMismatch { dist: usize, alpha: usize },

    #[error("predicted lattice support {predicted} exceeds cap {cap}")]
    SupportCap { predicted: u128, cap: u64 },

    #[error("oracle supports at most {cap} atoms, got {got}")]
    OracleCap { got: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, WalkError>;
