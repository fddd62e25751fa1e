//! Radial harmonic functions, their level-set energies, the monotone quantity
//! B(t), and the gradient-ratio diagnostic.
//!
//! A radial harmonic function on dt^2 + a(t)^2 sigma has a(t)^2 u'(t) constant;
//! normalizing u to 0 at the inner boundary (or inner end) and 1 at the AF end
//! fixes the flux kappa = (int a^{-2} dt)^{-1} over the range.

use crate::capacity::{integral_a2, limit_capacity};
use crate::error::{Error, Result};
use crate::numerics::extrapolate::{aitken_limit, looks_divergent, LimitEstimate};
use crate::numerics::roots::{bracket_monotone, brent};
use crate::numerics::{quad_tol, tight_tol};
use crate::profile::{InnerEnd, Profile};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// A normalized radial harmonic function on a profile.
#[derive(Debug, Clone)]
pub struct HarmonicProfile {
    pub profile: Profile,
    /// Inner boundary coordinate; None when u is anchored at the open inner end.
    pub from: Option<f64>,
    /// Flux coefficient: u'(t) = kappa / a(t)^2 in arc-length gauge.
    pub kappa: f64,
    /// Expansion coefficient of u = 1 - C/|x| + o(1/|x|), equal to
    /// (|Sigma|_sigma / 4 pi) kappa.
    pub cee: f64,
}

/// Harmonic function with u = 0 at the slice and u -> 1 at infinity.
pub fn exterior_harmonic(profile: &Profile, slice_coord: f64) -> Result<HarmonicProfile> {
    profile.check_slice_coord(slice_coord)?;
    let total = integral_a2(profile, slice_coord, f64::INFINITY, quad_tol())?;
    if !total.converged || !(total.value > 0.0) || !total.value.is_finite() {
        return Err(Error::Capacity("normalizing integral diverged".into()));
    }
    let kappa = 1.0 / total.value;
    Ok(HarmonicProfile {
        profile: profile.clone(),
        from: Some(slice_coord),
        kappa,
        cee: profile.sigma_area() / FOUR_PI * kappa,
    })
}

/// Harmonic function with 0 < u < 1, u -> 0 at the inner end and u -> 1 at the
/// AF end. Exists iff the total integral converges, i.e. the infimum capacity
/// is positive; a divergent integral is reported as `NoSuchHarmonic`.
pub fn two_ended_harmonic(profile: &Profile) -> Result<HarmonicProfile> {
    let (lo, _) = profile.domain();
    if profile.inner_end() == InnerEnd::Boundary {
        // interior of a manifold with boundary: u restricts the exterior one
        return exterior_harmonic(profile, lo);
    }
    let lc = limit_capacity(profile)?;
    if lc.result.value <= 0.0 {
        return Err(Error::NoSuchHarmonic(
            "inner integral of a^{-2} diverges; the infimum capacity is zero".into(),
        ));
    }
    let kappa = lc.result.value * FOUR_PI / profile.sigma_area();
    Ok(HarmonicProfile { profile: profile.clone(), from: None, kappa, cee: lc.result.value })
}

impl HarmonicProfile {
    fn inner_coord(&self) -> f64 {
        self.from.unwrap_or(self.profile.domain().0)
    }

    /// Tail integral T(x) = int_x^inf a^{-2} dt; 1 - u = kappa T.
    fn tail(&self, x: f64) -> Result<f64> {
        Ok(integral_a2(&self.profile, x, f64::INFINITY, tight_tol())?.value)
    }

    /// Head integral I(x) from the inner anchor; u = kappa I.
    fn head(&self, x: f64) -> Result<f64> {
        let lo = self.inner_coord();
        if let Some(from) = self.from {
            return Ok(integral_a2(&self.profile, from, x, tight_tol())?.value);
        }
        // improper at the open inner end; the integrand is integrable there
        // whenever the two-ended harmonic exists
        let q = integral_a2(&self.profile, lo, x, tight_tol())?;
        if !q.converged {
            return Err(Error::Evaluation(format!("inner integral stalled at x = {x}")));
        }
        Ok(q.value)
    }

    /// u(x), computed from whichever side keeps full relative precision.
    pub fn u(&self, x: f64) -> Result<f64> {
        self.profile.check_slice_coord(x)?;
        let t = self.kappa * self.tail(x)?;
        if t <= 0.5 {
            Ok(1.0 - t)
        } else {
            Ok((self.kappa * self.head(x)?).min(1.0))
        }
    }

    /// |grad u| on the slice at x: kappa / a^2.
    pub fn grad_norm(&self, x: f64) -> Result<f64> {
        let w = self.profile.warp_at(x)?;
        Ok(self.kappa / (w.a * w.a))
    }

    /// Boundary Dirichlet energy int_Sigma |grad u|^2 = |Sigma| kappa^2 / a0^2.
    pub fn boundary_energy(&self) -> Result<f64> {
        let x0 = self
            .from
            .ok_or_else(|| Error::InvalidInput("two-ended harmonic has no boundary slice".into()))?;
        let w = self.profile.warp_at(x0)?;
        Ok(self.profile.sigma_area() * self.kappa * self.kappa / (w.a * w.a))
    }

    /// Coordinate of the level set u^{-1}(t) by monotone bracketing and Brent.
    pub fn level_coord(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidInput(format!("level value {t} outside (0, 1)")));
        }
        self.level_coord_tol(t, 1e-12)
    }

    fn level_coord_tol(&self, t: f64, rtol: f64) -> Result<f64> {
        let (lo, hi) = self.profile.domain();
        let anchor = match self.from {
            Some(f) => f + 1.0f64.min((hi - f) / 2.0).max(1e-6),
            None => {
                if lo.is_finite() {
                    lo + 1.0
                } else {
                    0.0
                }
            }
        };
        let g = |x: f64| self.u(x).unwrap_or(f64::NAN) - t;
        let lo_lim = self.from.unwrap_or(lo);
        let (a, b) = bracket_monotone(&g, anchor, lo_lim, hi)
            .ok_or_else(|| Error::OutsideDomain { coord: t, lo: 0.0, hi: 1.0 })?;
        brent(&g, a, b, 1e-300, rtol)
            .ok_or_else(|| Error::Evaluation(format!("level {t} not bracketed")))
    }

    /// Level-set energy E(t) = int_{u^{-1}(t)} |grad u|^2 = |Sigma| kappa^2 / a^2.
    pub fn level_energy(&self, t: f64) -> Result<f64> {
        let x = self.level_coord(t)?;
        let w = self.profile.warp_at(x)?;
        Ok(self.profile.sigma_area() * self.kappa * self.kappa / (w.a * w.a))
    }

    /// B(t) = (1-t)^{-1} [4 pi - (1-t)^{-2} E(t)].
    pub fn b_of_t(&self, t: f64) -> Result<f64> {
        Ok(self.level_point_at_coord(self.level_coord(t)?)?.b)
    }

    /// Level data evaluated at a coordinate, avoiding root-finding error:
    /// t = u(x) and B are formed from the same tail integral, in the
    /// cancellation-free combination B = (kappa T)^{-1} [4 pi - |Sigma|/(a T)^2].
    pub fn level_point_at_coord(&self, x: f64) -> Result<LevelPoint> {
        let w = self.profile.warp_at(x)?;
        let tail = self.tail(x)?;
        let one_minus_t = self.kappa * tail;
        let sigma = self.profile.sigma_area();
        let energy = sigma * self.kappa * self.kappa / (w.a * w.a);
        let b = (FOUR_PI - sigma / (w.a * tail * w.a * tail)) / one_minus_t;
        Ok(LevelPoint { t: 1.0 - one_minus_t, coord: x, energy, b })
    }

    /// Level points on a t-grid, placed by coarse root finds and then
    /// evaluated consistently at the found coordinates.
    pub fn level_grid(&self, t_lo: f64, t_hi: f64, n: usize) -> Result<Vec<LevelPoint>> {
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let t = t_lo + (t_hi - t_lo) * i as f64 / (n - 1).max(1) as f64;
            let x = self.level_coord_tol(t, 1e-5)?;
            out.push(self.level_point_at_coord(x)?);
        }
        Ok(out)
    }

    /// The t -> 0 limit of E(t) on the grid t_j = 2^{-j}, with a finiteness
    /// flag mirroring "exists (finite or infinity)".
    pub fn energy_limit_at_zero(&self) -> Result<EnergyLimit> {
        let mut es = Vec::new();
        for j in 1..=26 {
            let t = 2f64.powi(-j);
            match self.level_energy(t) {
                Ok(e) => es.push(e),
                Err(_) => break,
            }
        }
        if es.len() < 6 {
            return Err(Error::Evaluation("too few resolvable levels near t = 0".into()));
        }
        if looks_divergent(&es) {
            return Ok(EnergyLimit { value: f64::INFINITY, finite: false, estimate_err: f64::INFINITY });
        }
        let lim = aitken_limit(&es, 1e-7);
        Ok(EnergyLimit {
            value: lim.value.max(0.0),
            finite: lim.converged,
            estimate_err: lim.err,
        })
    }

    /// Expansion coefficient extracted from the asymptotics a(x)(1 - u(x)) on a
    /// geometric grid; an independent check of Prop-style identities.
    pub fn expansion_coefficient_asymptotic(&self) -> Result<LimitEstimate> {
        let base = {
            let (lo, _) = self.profile.domain();
            let f = self.from.unwrap_or(if lo.is_finite() { lo } else { 0.0 });
            f.abs().max(1.0) * 4.0
        };
        let cap = self.profile.extraction_cap();
        let mut seq = Vec::new();
        let mut x = base;
        while seq.len() < 34 && x < cap {
            let w = self.profile.warp_at(x)?;
            seq.push(w.a * self.kappa * self.tail(x)?);
            x *= 2.0;
        }
        Ok(aitken_limit(&seq, 1e-8))
    }

    /// Sup of u^{-1} |grad u| over levels t = 2^{-j}, with a boundedness flag
    /// and, when bounded, the energy bound E(t) <= 4 pi C Lambda t checked on
    /// the same grid.
    pub fn gradient_ratio(&self) -> Result<GradientRatio> {
        let mut ts = Vec::new();
        let mut ratios = Vec::new();
        let mut energies = Vec::new();
        for j in 1..=40 {
            let t = 2f64.powi(-j);
            let x = match self.level_coord(t) {
                Ok(x) => x,
                Err(_) => break,
            };
            let w = self.profile.warp_at(x)?;
            let grad = self.kappa / (w.a * w.a);
            ts.push(t);
            ratios.push(grad / t);
            energies.push(self.profile.sigma_area() * self.kappa * grad);
        }
        if ts.len() < 8 {
            return Err(Error::Evaluation("too few levels for the gradient ratio".into()));
        }
        let n = ratios.len();
        let tail_growing = ratios[n - 1] > 1.5 * ratios[n - 5] && ratios[n - 1] > 4.0 * ratios[0];
        let bounded = !tail_growing;
        let lambda = ratios.iter().cloned().fold(0.0f64, f64::max);
        let mut energy_bound_ok = None;
        if bounded {
            let c = self.cee;
            energy_bound_ok = Some(ts.iter().zip(&energies).all(|(&t, &e)| {
                e <= FOUR_PI * c * lambda * t * (1.0 + 1e-9) + 1e-12
            }));
        }
        Ok(GradientRatio { lambda_est: lambda, bounded, energy_bound_ok, levels: ts, ratios })
    }
}

/// One level set of u, with its energy and B value.
#[derive(Debug, Clone, Copy)]
pub struct LevelPoint {
    pub t: f64,
    pub coord: f64,
    pub energy: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct EnergyLimit {
    pub value: f64,
    pub finite: bool,
    pub estimate_err: f64,
}

#[derive(Debug, Clone)]
pub struct GradientRatio {
    pub lambda_est: f64,
    /// False signals an unbounded ratio (reported, not an error): the
    /// completeness or curvature hypotheses fail.
    pub bounded: bool,
    /// When bounded: whether E(t) <= 4 pi C Lambda t held on the level grid.
    pub energy_bound_ok: Option<bool>,
    pub levels: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// Pointwise harmonicity residual: max over samples of the relative variation
/// of a(t)^2 u'(t), which is constant for an exact solution.
pub fn harmonicity_residual(h: &HarmonicProfile, samples: usize) -> Result<f64> {
    // u' = kappa / a^2 exactly by construction, so the meaningful check is
    // that a^2 * (numerical du/dx) / (dt/dx) stays at kappa.
    let (lo, hi) = h.profile.domain();
    let x0 = h.from.unwrap_or(if lo.is_finite() { lo + 0.25 } else { -4.0 });
    let span = if hi.is_finite() { hi - x0 } else { 32.0 };
    let mut worst = 0.0f64;
    for i in 1..samples {
        let x = x0 + span * i as f64 / samples as f64;
        let w = match h.profile.warp_at(x) {
            Ok(w) => w,
            Err(_) => continue,
        };
        let dx = 1e-5 * x.abs().max(1.0);
        if x - dx <= x0 {
            continue;
        }
        let (Ok(up), Ok(um)) = (h.u(x + dx), h.u(x - dx)) else { continue };
        let du_dt = (up - um) / (2.0 * dx) / w.arc;
        let flux = w.a * w.a * du_dt;
        worst = worst.max((flux - h.kappa).abs() / h.kappa.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn flat_exterior_harmonic() {
        let p = Profile::flat();
        let h = exterior_harmonic(&p, 1.0).unwrap();
        assert!((h.kappa - 1.0).abs() < 1e-10);
        assert!((h.cee - 1.0).abs() < 1e-10);
        // u = 1 - 1/t
        for t in [1.5, 3.0, 10.0] {
            assert!((h.u(t).unwrap() - (1.0 - 1.0 / t)).abs() < 1e-10);
        }
        assert!((h.boundary_energy().unwrap() - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn schwarzschild_boundary_energy() {
        // (1/4pi) int |grad u|^2 = c^2 / r0^2
        let p = Profile::schwarzschild(1.0);
        let h = exterior_harmonic(&p, 3.0).unwrap();
        let c = 1.0 / (1.0 - (1.0f64 / 3.0).sqrt());
        let expect = c * c / 9.0;
        let got = h.boundary_energy().unwrap() / (4.0 * PI);
        assert!((got - expect).abs() < 1e-9, "{got} vs {expect}");
        assert!((expect - 0.6220084679281462).abs() < 1e-12);
    }

    #[test]
    fn two_ended_schwarzschild_closed_forms() {
        let p = Profile::isotropic_schwarzschild(1.0).unwrap();
        let h = two_ended_harmonic(&p).unwrap();
        assert!((h.cee - 0.5).abs() < 1e-9);
        // u(s) = s / (s + 1/2)
        for s in [0.3, 1.0, 5.0] {
            assert!((h.u(s).unwrap() - s / (s + 0.5)).abs() < 1e-9, "s = {s}");
        }
        // level at t = 3/4 sits at area radius r = 8/3
        let x = h.level_coord(0.75).unwrap();
        let w = p.warp_at(x).unwrap();
        assert!((w.a - 8.0 / 3.0).abs() < 1e-8);
        // E(t) = 4 pi t^2 (1-t)^2
        for t in [0.25, 0.5, 0.75] {
            let e = h.level_energy(t).unwrap();
            let expect = 4.0 * PI * t * t * (1.0 - t) * (1.0 - t);
            assert!((e - expect).abs() < 1e-8, "t = {t}: {e} vs {expect}");
        }
        // B(t) = 4 pi (1 + t)
        for t in [0.25, 0.5, 0.9] {
            let b = h.b_of_t(t).unwrap();
            assert!((b - 4.0 * PI * (1.0 + t)).abs() < 1e-7, "t = {t}");
        }
        // E -> 0 at the far end
        let lim = h.energy_limit_at_zero().unwrap();
        assert!(lim.finite && lim.value.abs() < 1e-8);
    }

    #[test]
    fn truncated_flat_reduces_to_exterior() {
        let p = crate::profile::restrict_domain(Profile::flat(), 1.0, f64::INFINITY).unwrap();
        let h = two_ended_harmonic(&p).unwrap();
        assert!(h.from.is_some());
        assert!((h.cee - 1.0).abs() < 1e-10);
        // E(t) = 4 pi (1-t)^2; the t -> 0 limit is the boundary energy 4 pi
        let lim = h.energy_limit_at_zero().unwrap();
        assert!(lim.finite);
        assert!((lim.value - 4.0 * PI).abs() < 1e-6);
        // B vanishes identically
        for t in [0.1, 0.5, 0.9] {
            assert!(h.b_of_t(t).unwrap().abs() < 1e-7);
        }
    }

    #[test]
    fn cylinder_has_no_two_ended_harmonic() {
        let p = Profile::cylinder(1.0).unwrap();
        assert!(matches!(two_ended_harmonic(&p), Err(Error::NoSuchHarmonic(_))));
    }

    #[test]
    fn gradient_ratio_two_ended_vs_boundary() {
        let p = Profile::isotropic_schwarzschild(1.0).unwrap();
        let h = two_ended_harmonic(&p).unwrap();
        let g = h.gradient_ratio().unwrap();
        assert!(g.bounded);
        assert_eq!(g.energy_bound_ok, Some(true));
        // ratio at t = 1/2 is 1/(4m) = 0.25
        let x = h.level_coord(0.5).unwrap();
        let r = h.grad_norm(x).unwrap() / 0.5;
        assert!((r - 0.25).abs() < 1e-8);

        // truncated flat: |grad u| -> 1 while u -> 0 at the boundary
        let p = crate::profile::restrict_domain(Profile::flat(), 1.0, f64::INFINITY).unwrap();
        let h = two_ended_harmonic(&p).unwrap();
        let g = h.gradient_ratio().unwrap();
        assert!(!g.bounded);
    }

    #[test]
    fn harmonicity_residual_small() {
        let p = Profile::tanh_mass(1.0, 1.0, 2.5).unwrap();
        let h = exterior_harmonic(&p, 2.5).unwrap();
        let res = harmonicity_residual(&h, 40).unwrap();
        assert!(res < 1e-8, "residual {res}");
    }

    #[test]
    fn horn_with_small_exponent_has_infinite_energy_limit() {
        // a ~ t^{0.3}: int a^{-2} converges at 0 but a -> 0, so E -> infinity
        let p = Profile::horn_capped(0.3).unwrap();
        let h = two_ended_harmonic(&p).unwrap();
        let lim = h.energy_limit_at_zero().unwrap();
        assert!(!lim.finite || lim.value > 1e6);
    }
}
