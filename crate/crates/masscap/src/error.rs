//! Error taxonomy shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("coordinate {coord} outside profile domain ({lo}, {hi})")]
    OutsideDomain { coord: f64, lo: f64, hi: f64 },

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("asymptotic extraction did not converge: {0}")]
    Asymptotics(String),

    #[error("capacity integral diverged or annulus degenerate: {0}")]
    Capacity(String),

    #[error("f(r) <= 0 at r = {r}; restrict the domain to outside the outermost zero of f")]
    HorizonCrossing { r: f64 },

    #[error("no two-ended harmonic function exists: {0}")]
    NoSuchHarmonic(String),

    #[error("expansion fit window invalid: {0}")]
    FitWindow(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
