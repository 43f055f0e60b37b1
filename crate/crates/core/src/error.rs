use alloc::boxed::Box;

use crate::shorten::Loop;

pub type Result<T, E = NeckError> = core::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum NeckError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Swing parameter above the certified convexity threshold.
    #[error(
        "t = {t} exceeds t_max = {t_max}: e^(-1/t) * C = {forcing} > delta = {delta} \
         (convexity margin {margin})"
    )]
    ConvexityViolated {
        t: f64,
        t_max: f64,
        forcing: f64,
        delta: f64,
        margin: f64,
    },

    #[error(
        "conservation certificate failed: Clairaut drift {clairaut_drift:e}, \
         speed drift {speed_drift:e}, tolerance {tolerance:e}"
    )]
    NotCertified {
        clairaut_drift: f64,
        speed_drift: f64,
        tolerance: f64,
    },

    #[error("loop needs at least {min} points, got {n}")]
    TooFewPoints { n: usize, min: usize },

    #[error("degenerate loop: {0}")]
    DegenerateLoop(&'static str),

    #[error("no minimal closed geodesic detected on the scan window")]
    NoMinimizers,

    #[error("shortening did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        last: Box<Loop>,
    },
}
