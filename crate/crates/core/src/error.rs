use thiserror::Error;

/// Crate-wide error type. Numeric payloads are reported as f64 regardless of
/// the working scalar type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("time {t} outside profile domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("initial frequency must be positive, got omega(t_i) = {omega}")]
    NonPositiveInitialFrequency { omega: f64 },

    #[error("integration tolerance {tol} outside [{lo}, {hi}]")]
    ToleranceOutOfRange { tol: f64, lo: f64, hi: f64 },

    #[error("step size underflow at t = {t} (last good state: eps = {eps_re}+{eps_im}i, deps = {deps_re}+{deps_im}i)")]
    StepSizeUnderflow {
        t: f64,
        eps_re: f64,
        eps_im: f64,
        deps_re: f64,
        deps_im: f64,
    },

    #[error("frequency vanishes at t = {t}; quantity undefined there")]
    SingularFrequency { t: f64 },

    #[error("extraction unreliable: adiabaticity parameter {mu} >= {limit}")]
    UnreliableExtraction { mu: f64, limit: f64 },

    #[error("malformed phase schedule: {0}")]
    MalformedPhases(String),

    #[error("distribution truncated at q_max = {q_max} before reaching tail tolerance")]
    TruncationCap { q_max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value produced while writing {context}")]
    NonFinite { context: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
