//! Scalar curvature: closed forms per representation, a finite-difference
//! Christoffel oracle, and sampled nonnegativity certification.

use crate::error::{Error, Result};
use crate::profile::{InnerEnd, Profile};

/// Scalar curvature at coordinate x.
///
/// Warped gauge over a round cross-section: R = (2/a^2)(1 - a'^2) - 4 a''/a.
/// A general cross-section replaces 2/a^2 by 2 K_sigma / a^2; only the lower
/// bound on K_sigma is carried, so the returned value is a lower bound there.
/// Radial gauge: R = 4 m'(r)/r^2. Conformal: R = -8 psi^{-5} Delta_flat psi.
pub fn scalar_curvature(profile: &Profile, x: f64) -> Result<f64> {
    match profile {
        Profile::Warped(w) => {
            profile.check_slice_coord(x)?;
            let a = w.warp.value(x);
            let a1 = w.warp.d1(x);
            let a2 = w.warp.d2(x);
            if !a.is_finite() || !a1.is_finite() || !a2.is_finite() {
                return Err(Error::Evaluation(format!("warp not twice differentiable at t = {x}")));
            }
            Ok((2.0 * w.sigma_min_gauss - 2.0 * a1 * a1) / (a * a) - 4.0 * a2 / a)
        }
        Profile::Radial(r) => {
            profile.check_slice_coord(x)?;
            Ok(4.0 * r.mass_fn.m1(x) / (x * x))
        }
        Profile::Conformal(c) => {
            let (lo, _) = c.domain;
            let psi = |s: f64| c.psi_fn.psi(s);
            if x < lo || (x == lo && c.inner_end != InnerEnd::SmoothCenter) {
                return Err(Error::OutsideDomain { coord: x, lo, hi: c.domain.1 });
            }
            let lap = if x < 1e-12 {
                // smooth center: psi'(0) = 0, so Delta psi -> 3 psi''(0)
                3.0 * c.psi_fn.d2(0.0)
            } else {
                c.psi_fn.d2(x) + 2.0 * c.psi_fn.d1(x) / x
            };
            Ok(-8.0 * psi(x).powi(-5) * lap)
        }
    }
}

/// Laplacian of the scalar curvature at the smooth center of a conformal
/// profile, from a 5-point even-extension stencil on the closed-form R(s).
pub fn laplacian_r_at_center(profile: &Profile) -> Result<f64> {
    let Profile::Conformal(c) = profile else {
        return Err(Error::InvalidInput("center Laplacian needs a conformal profile".into()));
    };
    if c.inner_end != InnerEnd::SmoothCenter {
        return Err(Error::InvalidInput("profile has no smooth center".into()));
    }
    let r_of = |s: f64| scalar_curvature(profile, s).unwrap_or(f64::NAN);
    let h = 1e-2;
    // R is even in s; R''(0) = (-2 R(2h) + 32 R(h) - 30 R(0)) / (12 h^2)
    let r2 = (-2.0 * r_of(2.0 * h) + 32.0 * r_of(h) - 30.0 * r_of(0.0)) / (12.0 * h * h);
    // Delta_g = psi^{-4} Delta_flat at the center; Delta_flat R(0) = 3 R''(0)
    Ok(c.psi_fn.psi(0.0).powi(-4) * 3.0 * r2)
}

/// Finite-difference curvature oracle.
///
/// Treats the metric purely through its diagonal components in the (x, theta,
/// phi) chart and differentiates Christoffel symbols numerically; shares no
/// derivative information with `scalar_curvature`. Round cross-sections only.
pub fn curvature_oracle(profile: &Profile, x: f64) -> Result<f64> {
    profile.check_slice_coord(x)?;
    let comps: Box<dyn Fn(usize, [f64; 2]) -> f64> = match profile {
        Profile::Warped(w) => {
            let warp = w.warp.clone();
            Box::new(move |i, p: [f64; 2]| {
                let a = warp.value(p[0]);
                match i {
                    0 => 1.0,
                    1 => a * a,
                    _ => a * a * p[1].sin().powi(2),
                }
            })
        }
        Profile::Radial(r) => {
            let rp = r.clone();
            Box::new(move |i, p: [f64; 2]| match i {
                0 => 1.0 / rp.f(p[0]),
                1 => p[0] * p[0],
                _ => p[0] * p[0] * p[1].sin().powi(2),
            })
        }
        Profile::Conformal(c) => {
            let psi = c.psi_fn.clone();
            Box::new(move |i, p: [f64; 2]| {
                let w = psi.psi(p[0]).powi(4);
                match i {
                    0 => w,
                    1 => w * p[0] * p[0],
                    _ => w * p[0] * p[0] * p[1].sin().powi(2),
                }
            })
        }
    };
    let scale = x.abs().max(1.0);
    let h_outer = 1e-4 * scale;
    let (lo, _) = profile.domain();
    if x - 2.0 * h_outer - 2e-3 * scale <= lo {
        return Err(Error::Evaluation(format!(
            "oracle stencil at x = {x} would leave the domain"
        )));
    }
    Ok(fd_scalar_curvature(&comps, [x, 1.0]))
}

/// Christoffel symbol Gamma^k_{ij} of a diagonal metric from centered
/// differences of the components.
fn christoffel(g: &dyn Fn(usize, [f64; 2]) -> f64, p: [f64; 2], k: usize, i: usize, j: usize) -> f64 {
    // Gamma^k_ij = (1/2) g^{kk} (d_i g_jk + d_j g_ik - d_k g_ij)
    let dg = |comp: usize, dir: usize| -> f64 {
        if dir == 2 {
            return 0.0; // phi symmetry
        }
        let scale = p[dir].abs().max(1.0);
        let h = 7.4e-4 * scale; // ~eps^{1/5}, 5-point stencil
        let mut q = p;
        let eval = |q: [f64; 2]| g(comp, q);
        q[dir] = p[dir] + h;
        let f1 = eval(q);
        q[dir] = p[dir] - h;
        let fm1 = eval(q);
        q[dir] = p[dir] + 2.0 * h;
        let f2 = eval(q);
        q[dir] = p[dir] - 2.0 * h;
        let fm2 = eval(q);
        (8.0 * (f1 - fm1) - (f2 - fm2)) / (12.0 * h)
    };
    let gkk = g(k, p);
    let term = |a: usize, b: usize, c: usize| if a == b { dg(a, c) } else { 0.0 };
    0.5 / gkk * (term(j, k, i) + term(i, k, j) - term(i, j, k))
}

fn fd_scalar_curvature(g: &dyn Fn(usize, [f64; 2]) -> f64, p: [f64; 2]) -> f64 {
    let gamma = |q: [f64; 2], k: usize, i: usize, j: usize| christoffel(g, q, k, i, j);
    // d_c Gamma^k_ij by centered differences of the FD Christoffels
    let dgamma = |c: usize, k: usize, i: usize, j: usize| -> f64 {
        if c == 2 {
            return 0.0;
        }
        let h = 1e-4 * p[c].abs().max(1.0);
        let mut qp = p;
        qp[c] += h;
        let mut qm = p;
        qm[c] -= h;
        (gamma(qp, k, i, j) - gamma(qm, k, i, j)) / (2.0 * h)
    };
    let mut ricci = [0.0f64; 3]; // diagonal components R_ii
    for i in 0..3 {
        let mut r = 0.0;
        for k in 0..3 {
            r += dgamma(k, k, i, i) - dgamma(i, k, k, i);
            for l in 0..3 {
                r += gamma(p, k, k, l) * gamma(p, l, i, i) - gamma(p, k, i, l) * gamma(p, l, k, i);
            }
        }
        ricci[i] = r;
    }
    (0..3).map(|i| ricci[i] / g(i, p)).sum()
}

/// Outcome of sampling a pointwise bound over a profile.
#[derive(Debug, Clone, Copy)]
pub struct Certificate {
    pub ok: bool,
    pub min_value: f64,
    pub at: f64,
}

/// Samples R over the domain (geometrically refined toward both ends) and
/// certifies R >= -1e-12 at every sample.
pub fn certify_nonneg_scalar(profile: &Profile) -> Certificate {
    certify_nonneg_scalar_from(profile, None)
}

/// Same certification restricted to the exterior region [from, infinity).
pub fn certify_nonneg_scalar_from(profile: &Profile, from: Option<f64>) -> Certificate {
    let (lo_full, hi) = profile.domain();
    let lo = from.unwrap_or(lo_full);
    let anchor = match from {
        Some(x) => x + 1.0f64.min((hi - x) / 4.0),
        None => sample_anchor(profile),
    };
    let mut xs: Vec<f64> = Vec::with_capacity(120);
    // toward the inner end
    for j in 0..40 {
        let d = 2f64.powi(-j);
        let x = if lo.is_finite() { lo + (anchor - lo) * d } else { anchor - 2f64.powi(j) };
        if x > lo {
            xs.push(x);
        }
    }
    // toward the AF end
    let cap = profile.extraction_cap().min(anchor.abs().max(1.0) * 2f64.powi(30));
    for j in 0..40 {
        let x = anchor.abs().max(1.0) * 2f64.powi(j) + anchor;
        if x < hi && x <= cap {
            xs.push(x);
        }
    }
    let mut min_value = f64::INFINITY;
    let mut at = f64::NAN;
    for &x in &xs {
        if let Ok(r) = scalar_curvature(profile, x) {
            if r < min_value {
                min_value = r;
                at = x;
            }
        }
    }
    Certificate { ok: min_value >= -1e-12, min_value, at }
}

fn sample_anchor(profile: &Profile) -> f64 {
    let (lo, hi) = profile.domain();
    if lo.is_finite() {
        lo + 1.0f64.min((hi - lo) / 4.0)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    #[test]
    fn flat_curvature_vanishes() {
        let p = Profile::flat();
        assert!(scalar_curvature(&p, 1.7).unwrap().abs() < 1e-15);
        assert!(curvature_oracle(&p, 1.7).unwrap().abs() < 1e-8);
    }

    #[test]
    fn schwarzschild_is_scalar_flat() {
        let p = Profile::schwarzschild(1.0);
        assert!(scalar_curvature(&p, 3.0).unwrap().abs() < 1e-14);
        assert!(curvature_oracle(&p, 5.0).unwrap().abs() < 1e-6);
        let n = Profile::neg_schwarzschild(1.0);
        assert!(scalar_curvature(&n, 0.5).unwrap().abs() < 1e-12);
    }

    #[test]
    fn tanh_profile_matches_closed_form() {
        let p = Profile::tanh_mass(1.0, 1.0, 0.5).unwrap();
        let r = 1.0f64;
        let sech2 = 1.0 / r.cosh().powi(2);
        let expect = 4.0 * sech2 / (r * r);
        assert!((scalar_curvature(&p, r).unwrap() - expect).abs() < 1e-14);
        assert!((expect - 1.6798973664561043).abs() < 1e-12);
        let oracle = curvature_oracle(&p, r).unwrap();
        assert!(
            (oracle - expect).abs() < 1e-6 * expect.abs().max(1.0),
            "oracle {oracle} vs {expect}"
        );
    }

    #[test]
    fn oracle_agrees_on_conformal_profiles() {
        let p = Profile::conformal_gaussian(0.1).unwrap();
        for s in [0.4, 1.1, 2.5] {
            let cf = scalar_curvature(&p, s).unwrap();
            let fd = curvature_oracle(&p, s).unwrap();
            let scale = cf.abs().max(1e-3);
            assert!((cf - fd).abs() < 1e-6 * scale, "s={s}: {cf} vs {fd}");
        }
    }

    #[test]
    fn conformal_center_values() {
        // R(p) = 48 eps (1+eps)^{-5}; Delta_g R(p) = 480 eps (2 eps - 1)(1+eps)^{-10}
        for eps in [0.01, 0.1] {
            let p = Profile::conformal_gaussian(eps).unwrap();
            let rp = scalar_curvature(&p, 0.0).unwrap();
            let expect = 48.0 * eps * (1.0 + eps).powi(-5);
            assert!((rp - expect).abs() < 1e-12 * expect);
            let lap = laplacian_r_at_center(&p).unwrap();
            let expect_lap = 480.0 * eps * (2.0 * eps - 1.0) * (1.0 + eps).powi(-10);
            assert!(
                (lap - expect_lap).abs() < 1e-5 * expect_lap.abs(),
                "eps={eps}: {lap} vs {expect_lap}"
            );
        }
    }

    #[test]
    fn mass_profile_certification() {
        let good = Profile::tanh_mass(1.0, 1.0, 2.2).unwrap();
        assert!(certify_nonneg_scalar(&good).ok);
        let gauss = Profile::conformal_gaussian(0.1).unwrap();
        // gaussian bump has negative R beyond s = sqrt(3/2)
        assert!(!certify_nonneg_scalar(&gauss).ok);
        let sup = Profile::conformal_superharmonic(1.0, vec![(0.3, 1.0)]).unwrap();
        assert!(certify_nonneg_scalar(&sup).ok);
    }
}
