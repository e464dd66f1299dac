use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("band index {k} is outside the band range {lo}..={hi}")]
    BandOutOfRange { k: usize, lo: usize, hi: usize },

    #[error("binomial({n}, {k}) is not representable exactly")]
    BinomialOverflow { n: u64, k: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("all measurement weights vanished (total {total:.3e})")]
    LostNormalization { total: f64 },

    #[error("outcome `{0}` has vanishing probability at these parameters")]
    ImpossibleOutcome(&'static str),

    #[error("second-order expansion invalid: p_same = {p_same:.4}")]
    SecondOrderViolated { p_same: f64 },

    #[error("parameters (dt = {dt}, detuning = {detuning}) are a freezing point; no attractor exists")]
    NoAttractor { dt: f64, detuning: f64 },

    #[error("not a freezing point: dt = {dt}, detuning = {detuning}")]
    NotFreezingPoint { dt: f64, detuning: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
