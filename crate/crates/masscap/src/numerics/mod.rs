//! One-dimensional numerical kernels: quadrature, interpolation, root finding,
//! sequence extrapolation, and small least-squares fits.

pub mod extrapolate;
pub mod fit;
pub mod interp;
pub mod quadrature;
pub mod roots;

use std::sync::OnceLock;

/// Default relative tolerance for adaptive quadrature.
///
/// Overridable through the `MASSCAP_QUAD_TOL` environment variable (read once).
pub fn quad_tol() -> f64 {
    static TOL: OnceLock<f64> = OnceLock::new();
    *TOL.get_or_init(|| {
        std::env::var("MASSCAP_QUAD_TOL")
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .filter(|t| *t > 0.0 && *t < 1.0)
            .unwrap_or(1e-10)
    })
}

/// Tighter tolerance for paths feeding cancellation-prone combinations
/// (level-set energies near t -> 1).
pub fn tight_tol() -> f64 {
    (quad_tol() * 1e-3).max(1e-14)
}
