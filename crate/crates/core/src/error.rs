use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("collision between bodies {i} and {j} at t = {time} (distance {distance:e})")]
    Collision {
        i: usize,
        j: usize,
        time: f64,
        distance: f64,
    },

    #[error("step size underflow at t = {time} (h = {step:e})")]
    StepUnderflow { time: f64, step: f64 },

    #[error("mode {j}: no kernel vector for lambda = {lambda} (relative residual {residual:e})")]
    DegenerateEigenvector {
        j: usize,
        lambda: num_complex::Complex64,
        residual: f64,
    },

    #[error("no growth window: deviation never entered [{lo:e}, {hi:e}] with enough samples")]
    WindowNotFound { lo: f64, hi: f64 },

    #[error("mass ratio {mu} is outside the physical regime (0, 1] covered by the closed-form bounds")]
    OutsideRegime { mu: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
