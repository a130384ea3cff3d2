use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the kernel, root-finding and continuation routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("alpha must be a nonnegative integer, got {0}")]
    NonIntegerAlpha(f64),

    #[error("G is undefined for integer beta = {0} (Q is constant there)")]
    IntegerBeta(f64),

    #[error("singular input: {0}")]
    Singular(String),

    #[error("tail bound {achieved:e} could not be certified below {requested:e} within {max_order} terms")]
    TailNotCertified {
        requested: f64,
        achieved: f64,
        max_order: usize,
    },

    #[error("root finder did not converge after {iterations} sweeps")]
    RootsNotConverged {
        iterations: usize,
        best: Vec<Complex64>,
        residuals: Vec<f64>,
    },

    #[error("a root lies within {distance:e} of the contour |z - {center}| = {radius}")]
    RootOnContour {
        center: Complex64,
        radius: f64,
        distance: f64,
    },

    #[error("winding number did not stabilize (last estimate {last}) with {samples} samples")]
    WindingNotStabilized { last: f64, samples: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("eigenvalue iteration failed to converge for a {0}-node Jacobi matrix")]
    EigenNotConverged(usize),

    #[error("curve matching ambiguous near beta = {beta} (step fell below {min_step:e})")]
    MatchingAmbiguity { beta: f64, min_step: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ODE anomaly at beta = {beta}: |f(X)| = {value:e}")]
    OdeAnomaly { beta: f64, value: f64 },

    #[error("minimum lies at the grid boundary (beta = {beta})")]
    MinimumAtBoundary { beta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
