//! Capacities of slices: exterior, relative, the infimum over exhaustions,
//! and an independent variational upper-bound oracle.

use crate::error::{Error, Result};
use crate::numerics::extrapolate::aitken_limit;
use crate::numerics::quadrature::{gauss5, integrate, integrate_log, QuadResult};
use crate::numerics::quad_tol;
use crate::profile::Profile;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// How a capacity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    ClosedForm,
    Variational,
}

/// A capacity value with method tag and error estimate.
#[derive(Debug, Clone, Copy)]
pub struct CapacityResult {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
}

/// The weighted integrand a^{-2} dt expressed in the profile coordinate.
fn a2_integrand(profile: &Profile, x: f64) -> f64 {
    match profile.warp_at(x) {
        Ok(w) => {
            let v = w.arc / (w.a * w.a);
            if v.is_finite() {
                v
            } else {
                // integrable endpoint blow-ups (horizon slices) are never hit
                // at quadrature nodes, but guard against overflow anyway
                f64::MAX.sqrt()
            }
        }
        Err(_) => 0.0,
    }
}

/// int_from^to a^{-2} dt with substitutions for steep inner edges and the
/// improper AF tail.
pub fn integral_a2(profile: &Profile, from: f64, to: f64, rel_tol: f64) -> Result<QuadResult> {
    let (lo, _hi) = profile.domain();
    if to.is_finite() {
        return Ok(segment_a2(profile, from, to, lo, rel_tol));
    }
    if !profile.is_af() {
        return Err(Error::Capacity("profile has no declared AF end".into()));
    }
    let split = from + 7.0 * from.abs().max(1.0);
    let head = segment_a2(profile, from, split, lo, rel_tol);
    // tail via t -> 1/t
    let g = |s: f64| a2_integrand(profile, 1.0 / s) / (s * s);
    let tail = integrate(g, 0.0, 1.0 / split, rel_tol, 0.0);
    let mut out = head;
    out.value += tail.value;
    out.abs_err += tail.abs_err;
    out.evals += tail.evals;
    out.converged &= tail.converged;
    Ok(out)
}

fn segment_a2(profile: &Profile, from: f64, to: f64, lo: f64, rel_tol: f64) -> QuadResult {
    let f = |x: f64| a2_integrand(profile, x);
    if lo.is_finite() && from > lo && (to - lo) > 100.0 * (from - lo) {
        // steep power-law edge: integrate in ln(x - lo)
        integrate_log(f, from, to, lo, rel_tol, 0.0)
    } else {
        integrate(f, from, to, rel_tol, 0.0)
    }
}

/// Capacity of the slice at `slice_coord` in the exterior region toward the
/// AF end: (|Sigma|_sigma / 4 pi) (int_x0^inf a^{-2} dt)^{-1}.
pub fn capacity_exterior(profile: &Profile, slice_coord: f64) -> Result<CapacityResult> {
    capacity_exterior_tol(profile, slice_coord, quad_tol())
}

pub fn capacity_exterior_tol(
    profile: &Profile,
    slice_coord: f64,
    rel_tol: f64,
) -> Result<CapacityResult> {
    profile.check_slice_coord(slice_coord)?;
    let q = integral_a2(profile, slice_coord, f64::INFINITY, rel_tol)?;
    if !q.converged || !(q.value > 0.0) || !q.value.is_finite() {
        return Err(Error::Capacity(format!(
            "exterior integral did not converge (value {}, err {})",
            q.value, q.abs_err
        )));
    }
    let norm = profile.sigma_area() / FOUR_PI;
    let value = norm / q.value;
    Ok(CapacityResult {
        value,
        method: Method::Quadrature,
        error_estimate: value * (q.abs_err / q.value),
    })
}

/// Capacity of the inner slice relative to the outer one:
/// (|Sigma|_sigma / 4 pi) (int_inner^outer a^{-2} dt)^{-1}.
pub fn relative_capacity(profile: &Profile, inner: f64, outer: f64) -> Result<CapacityResult> {
    profile.check_slice_coord(inner)?;
    profile.check_slice_coord(outer)?;
    if inner > outer {
        return Err(Error::InvalidInput(format!(
            "relative capacity needs inner < outer, got {inner} >= {outer}"
        )));
    }
    if inner == outer {
        return Err(Error::Capacity("degenerate annulus: inner and outer slices coincide".into()));
    }
    let q = integral_a2(profile, inner, outer, quad_tol())?;
    if !(q.value > 0.0) {
        return Err(Error::Capacity("empty annulus integral".into()));
    }
    let norm = profile.sigma_area() / FOUR_PI;
    let value = norm / q.value;
    Ok(CapacityResult {
        value,
        method: Method::Quadrature,
        error_estimate: value * (q.abs_err / q.value),
    })
}

/// The infimum capacity over surfaces enclosing the AF point, computed as the
/// limit of an exhaustion x_k decreasing to the inner edge.
#[derive(Debug, Clone)]
pub struct LimitCapacity {
    pub result: CapacityResult,
    /// (coordinate, slice capacity) along the exhaustion.
    pub exhaustion: Vec<(f64, f64)>,
    pub monotone_nonincreasing: bool,
}

/// 0 is returned (not an error) when the inner integral diverges: a puncture,
/// horn, or cylinder end has zero capacity by the infimum definition.
pub fn limit_capacity(profile: &Profile) -> Result<LimitCapacity> {
    if !profile.is_af() {
        return Err(Error::Capacity("profile has no declared AF end".into()));
    }
    let (lo, hi) = profile.domain();
    let anchor = if lo.is_finite() { lo + (hi - lo).min(2.0) / 2.0 } else { 0.0 };
    let mut exhaustion = Vec::new();
    for k in 0..=42 {
        let x = if lo.is_finite() {
            let off = (anchor - lo) * 2f64.powi(-k);
            if off < 4.0 * f64::EPSILON * lo.abs().max(1.0) && k > 0 {
                break;
            }
            lo + off
        } else {
            anchor - 2f64.powi(k)
        };
        match capacity_exterior(profile, x) {
            Ok(c) => exhaustion.push((x, c.value)),
            Err(_) => break,
        }
    }
    if exhaustion.is_empty() {
        return Err(Error::Capacity("no exhaustion slice could be evaluated".into()));
    }
    let caps: Vec<f64> = exhaustion.iter().map(|p| p.1).collect();
    let monotone = caps.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-14);
    let first = caps[0];
    let tail = &caps[caps.len().saturating_sub(16)..];
    let lim = aitken_limit(tail, 1e-9);
    let mut value = lim.value.max(0.0);
    // divergent inner integral: the exhaustion decays to zero
    if value <= 1e-9 * first.max(1e-30) {
        value = 0.0;
    }
    Ok(LimitCapacity {
        result: CapacityResult {
            value,
            method: Method::Quadrature,
            error_estimate: lim.err.max(0.0),
        },
        exhaustion,
        monotone_nonincreasing: monotone,
    })
}

/// Variational oracle: minimal discrete Dirichlet energy over piecewise-linear
/// radial test functions on a grid compactified by u = 1/t near infinity.
///
/// Converges to the capacity from above as the grid refines; used in tests
/// and verification suites, never by the quadrature path it checks.
#[derive(Debug, Clone, Copy)]
pub struct OracleResult {
    pub result: CapacityResult,
    /// Set when the two-level refinement differs by more than 1e-3 relative:
    /// the grid is too coarse to bracket the capacity meaningfully.
    pub too_coarse: bool,
}

pub fn variational_capacity_oracle(
    profile: &Profile,
    slice_coord: f64,
    grid_size: usize,
) -> Result<OracleResult> {
    profile.check_slice_coord(slice_coord)?;
    if !profile.is_af() {
        return Err(Error::Capacity("profile has no declared AF end".into()));
    }
    if grid_size < 8 {
        return Err(Error::InvalidInput("oracle grid must have at least 8 cells".into()));
    }
    let coarse = pl_energy(profile, slice_coord, grid_size / 2);
    let fine = pl_energy(profile, slice_coord, grid_size);
    let diff = (fine - coarse).abs();
    Ok(OracleResult {
        result: CapacityResult {
            value: fine,
            method: Method::Variational,
            error_estimate: diff,
        },
        too_coarse: diff > 1e-3 * fine.abs().max(1e-30),
    })
}

fn pl_energy(profile: &Profile, x0: f64, n: usize) -> f64 {
    // map t = x0 + 1/u - 1/u_max, u in (0, u_max]; u_max normalized by the
    // slice area radius so flat exteriors are represented exactly
    let a0 = profile.warp_at(x0).map(|w| w.a).unwrap_or(1.0).max(1e-6);
    let u_max = 1.0 / a0.max(1.0);
    let du = u_max / n as f64;
    let t_of = |u: f64| x0 + 1.0 / u - 1.0 / u_max;
    // per-cell cost c_j = int u^2 a(t(u))^2 du via fixed Gauss panels
    let mut inv_sum = 0.0;
    for j in 0..n {
        let ua = j as f64 * du;
        let ub = ua + du;
        let f = |u: f64| {
            let w = profile.warp_at(t_of(u)).map(|w| w.a).unwrap_or(0.0);
            u * u * w * w
        };
        let c = gauss5(&f, ua, ub);
        if c > 0.0 {
            inv_sum += du * du / c;
        }
    }
    (profile.sigma_area() / FOUR_PI) / inv_sum
}

/// Capacity monotonicity along nested slices: enclosing slices have capacity
/// at least that of the slices they enclose.
#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub coords: Vec<f64>,
    pub capacities: Vec<f64>,
    pub pass: bool,
}

pub fn capacity_monotonicity_check(profile: &Profile, coords: &[f64]) -> Result<MonotonicityReport> {
    let mut capacities = Vec::with_capacity(coords.len());
    for &x in coords {
        capacities.push(capacity_exterior(profile, x)?.value);
    }
    let pass = coords.windows(2).all(|w| w[1] > w[0])
        && capacities
            .windows(2)
            .all(|w| w[1] >= w[0] * (1.0 - 1e-10) - 1e-14);
    Ok(MonotonicityReport { coords: coords.to_vec(), capacities, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    fn schw_cap(m: f64, r0: f64) -> f64 {
        m / (1.0 - (1.0 - 2.0 * m / r0).sqrt())
    }

    fn neg_cap(m: f64, r0: f64) -> f64 {
        m / ((1.0 + 2.0 * m / r0).sqrt() - 1.0)
    }

    #[test]
    fn flat_capacity_is_the_radius() {
        let p = Profile::flat();
        let c = capacity_exterior(&p, 1.0).unwrap();
        assert!((c.value - 1.0).abs() < 1e-10);
        let c = capacity_exterior(&p, 3.5).unwrap();
        assert!((c.value - 3.5).abs() < 1e-9);
    }

    #[test]
    fn schwarzschild_horizon_capacity_equals_mass() {
        let p = Profile::schwarzschild(1.0);
        let c = capacity_exterior(&p, 2.0).unwrap();
        assert!((c.value - 1.0).abs() < 1e-8, "horizon capacity {}", c.value);
        let c = capacity_exterior(&p, 3.0).unwrap();
        assert!((c.value - schw_cap(1.0, 3.0)).abs() < 1e-9);
    }

    #[test]
    fn negative_mass_closed_form() {
        let p = Profile::neg_schwarzschild(1.0);
        let c = capacity_exterior(&p, 2.0).unwrap();
        let expect = neg_cap(1.0, 2.0);
        assert!((c.value - expect).abs() < 1e-9 * expect);
        assert!((expect - (1.0 + std::f64::consts::SQRT_2)).abs() < 1e-12);
    }

    #[test]
    fn relative_capacity_flat_and_horn() {
        let p = Profile::flat();
        let c = relative_capacity(&p, 1.0, 2.0).unwrap();
        assert!((c.value - 2.0).abs() < 1e-10);
        // warped horn a = x^{2/3} on [0.1, 1]: (3(10^{1/3}-1))^{-1}
        let q = crate::singularity::HornSpec::power(2.0 / 3.0, 1.0).unwrap();
        let cbar = q.relative_capacity_bar(0.1).unwrap();
        assert!((cbar - 0.2887416119868394).abs() < 1e-10);
        assert!(matches!(
            relative_capacity(&p, 2.0, 2.0),
            Err(Error::Capacity(_))
        ));
        assert!(relative_capacity(&p, 3.0, 2.0).is_err());
    }

    #[test]
    fn exhaustion_of_two_ended_schwarzschild() {
        let p = Profile::isotropic_schwarzschild(1.0).unwrap();
        let l = limit_capacity(&p).unwrap();
        assert!(l.monotone_nonincreasing);
        assert!((l.result.value - 0.5).abs() < 1e-9, "{}", l.result.value);
    }

    #[test]
    fn zero_capacity_ends() {
        // puncture
        let l = limit_capacity(&Profile::flat()).unwrap();
        assert_eq!(l.result.value, 0.0);
        assert!(l.monotone_nonincreasing);
        // cylinder
        let l = limit_capacity(&Profile::cylinder(1.0).unwrap()).unwrap();
        assert_eq!(l.result.value, 0.0);
        // horn
        let l = limit_capacity(&Profile::horn_capped(0.8).unwrap()).unwrap();
        assert_eq!(l.result.value, 0.0);
    }

    #[test]
    fn truncated_profile_limit_is_boundary_capacity() {
        let p = Profile::tanh_mass(1.0, 1.0, 2.5).unwrap();
        let l = limit_capacity(&p).unwrap();
        let boundary = capacity_exterior(&p, 2.5).unwrap();
        assert!((l.result.value - boundary.value).abs() < 1e-8 * boundary.value);
    }

    #[test]
    fn oracle_dominates_and_converges() {
        let p = Profile::flat();
        let o = variational_capacity_oracle(&p, 1.0, 10_000).unwrap();
        assert!(o.result.value >= 1.0 - 1e-12);
        assert!((o.result.value - 1.0).abs() < 1e-6);
        assert!(!o.too_coarse);

        let p = Profile::schwarzschild(1.0);
        let exact = schw_cap(1.0, 3.0);
        let o = variational_capacity_oracle(&p, 3.0, 100_000).unwrap();
        assert!(o.result.value >= exact - 1e-12);
        assert!((o.result.value - exact).abs() < 1e-5 * exact, "{} vs {exact}", o.result.value);
    }

    #[test]
    fn monotonicity_along_slices() {
        let p = Profile::schwarzschild(1.0);
        let rep = capacity_monotonicity_check(&p, &[2.0, 3.0, 4.0]).unwrap();
        assert!(rep.pass);
        assert!((rep.capacities[1] - 2.3660254037844386).abs() < 1e-9);
        assert!((rep.capacities[2] - 3.414213562373095).abs() < 1e-9);
        let single = capacity_monotonicity_check(&p, &[2.5]).unwrap();
        assert!(single.pass);
    }

    #[test]
    fn capacity_scaling_is_linear() {
        let p = Profile::tanh_mass(1.0, 1.0, 2.5).unwrap();
        let c1 = capacity_exterior(&p, 4.0).unwrap().value;
        let c2 = capacity_exterior(&p.scaled(2.0), 8.0).unwrap().value;
        assert!((c2 - 2.0 * c1).abs() < 1e-8 * c1);
    }
}
