use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("slope bound violated at t = {t}: radicand {radicand} is negative")]
    InadmissibleSlope { t: f64, radicand: f64 },
    #[error("no sign change in [{lo}, {hi}] while {context}")]
    Bracket { lo: f64, hi: f64, context: String },
    #[error("degenerate Hessian at j = {j}, l = {l}, theta = {theta} (smallest |eigenvalue| {lambda_min:e})")]
    DegenerateHessian { j: u8, l: u8, theta: f64, lambda_min: f64 },
    #[error("degenerate stationary set: {0}")]
    DegenerateSet(String),
    #[error("probe grid too coarse: {got} points, need at least {required}")]
    GridTooCoarse { got: usize, required: usize },
    #[error("sign pattern violated: {0}")]
    SignPattern(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be finite, got {x}")))
    }
}
