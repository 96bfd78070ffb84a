use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("n must be a power of two (got {0})")]
    GridSize(usize),
    #[error("grid length must be positive and finite (got {0})")]
    GridLength(f64),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },
    #[error("zero mode present: {0}")]
    ZeroModePresent(String),
    #[error("symbol {name} is not finite at k = {k}")]
    NonFiniteSymbol { name: String, k: f64 },
    #[error("unsupported truncation order {order} for {name}")]
    TruncationOrder { name: String, order: u32 },
    #[error("unknown operator name `{0}`")]
    UnknownOperator(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("time {t} outside stored range [{start}, {end}]")]
    BackgroundGap { t: f64, start: f64, end: f64 },
    #[error("blow-up detected at t = {t}: {detail}")]
    BlowUp { t: f64, detail: String },
    #[error("step size violates stability bound: {0}")]
    StepSize(String),
    #[error("denominator 1 + L psi_z fell to {min} (< 1/2)")]
    Denominator { min: f64 },
    #[error("fixed-point iteration did not converge after {iterations} iterations (defect {defect:e})")]
    NoConvergence { iterations: usize, defect: f64 },
    #[error("time mismatch: {0}")]
    TimeMismatch(String),
    #[error("not enough samples for a fit: {0}")]
    FitSamples(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
