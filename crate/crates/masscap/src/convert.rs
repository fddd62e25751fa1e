//! Arc-length reparameterization of radial and conformal profiles into the
//! warped form, with the inverse map provided by monotone root finding.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::quadrature::integrate;
use crate::numerics::roots::{bracket_monotone, brent};
use crate::profile::{
    ConformalProfile, Profile, RadialProfile, WarpFn, WarpedProfile,
};

const TOL: f64 = 1e-12;

/// Warp backed by a radial profile: t(r) = int_anchor^r f^{-1/2}, a(t) = r.
struct RadialArcWarp {
    radial: RadialProfile,
    anchor: f64,
}

impl RadialArcWarp {
    fn t_of_r(&self, r: f64) -> f64 {
        let f = |x: f64| 1.0 / self.radial.f(x).max(0.0).sqrt();
        integrate(f, self.anchor, r, TOL, 0.0).value
    }

    fn r_of_t(&self, t: f64) -> f64 {
        let g = |r: f64| self.t_of_r(r) - t;
        let (lo, hi) = self.radial.domain;
        let (a, b) = bracket_monotone(g, self.anchor, lo, hi)
            .unwrap_or((self.anchor, self.anchor));
        brent(g, a, b, 1e-13, 1e-13).unwrap_or(self.anchor)
    }
}

impl WarpFn for RadialArcWarp {
    fn value(&self, t: f64) -> f64 {
        self.r_of_t(t)
    }
    fn d1(&self, t: f64) -> f64 {
        self.radial.f(self.r_of_t(t)).max(0.0).sqrt()
    }
    fn d2(&self, t: f64) -> f64 {
        0.5 * self.radial.f1(self.r_of_t(t))
    }
}

/// Warp backed by a conformal profile: t(s) = int_anchor^s psi^2, a = s psi^2.
struct ConformalArcWarp {
    conf: ConformalProfile,
    anchor: f64,
}

impl ConformalArcWarp {
    fn t_of_s(&self, s: f64) -> f64 {
        let psi = &self.conf.psi_fn;
        integrate(|x: f64| psi.psi(x).powi(2), self.anchor, s, TOL, 0.0).value
    }

    fn s_of_t(&self, t: f64) -> f64 {
        let g = |s: f64| self.t_of_s(s) - t;
        let (lo, hi) = self.conf.domain;
        let (a, b) = bracket_monotone(g, self.anchor, lo, hi)
            .unwrap_or((self.anchor, self.anchor));
        brent(g, a, b, 1e-13, 1e-13).unwrap_or(self.anchor)
    }

    fn data_at_s(&self, s: f64) -> (f64, f64, f64) {
        let p = self.conf.psi_fn.psi(s);
        let p1 = self.conf.psi_fn.d1(s);
        let p2 = self.conf.psi_fn.d2(s);
        let a = s * p * p;
        let a1 = 1.0 + 2.0 * s * p1 / p;
        let q = p1 / p;
        let a2 = (2.0 * q + 2.0 * s * p2 / p - 2.0 * s * q * q) / (p * p);
        (a, a1, a2)
    }
}

impl WarpFn for ConformalArcWarp {
    fn value(&self, t: f64) -> f64 {
        self.data_at_s(self.s_of_t(t)).0
    }
    fn d1(&self, t: f64) -> f64 {
        self.data_at_s(self.s_of_t(t)).1
    }
    fn d2(&self, t: f64) -> f64 {
        self.data_at_s(self.s_of_t(t)).2
    }
}

/// Converts any profile to the warped representation, anchoring t = 0 at an
/// interior reference coordinate. Functional agreement across representations
/// is exact up to quadrature and root-finding tolerance.
pub fn convert(profile: &Profile) -> Result<WarpedProfile> {
    match profile {
        Profile::Warped(w) => Ok(w.clone()),
        Profile::Radial(r) => {
            let (lo, hi) = r.domain;
            if !hi.is_infinite() {
                return Err(Error::InvalidProfile("conversion expects an unbounded AF end".into()));
            }
            let anchor = if lo > 0.0 { lo.max(1e-8) } else { 1.0 };
            let warp = RadialArcWarp { radial: r.clone(), anchor };
            // arc length down to the inner edge; may diverge for complete ends
            let t_lo = inner_arc_limit(|x| warp.t_of_r(x), lo, anchor);
            Ok(WarpedProfile {
                warp: Arc::new(warp),
                domain: (t_lo, f64::INFINITY),
                sigma_area: 4.0 * std::f64::consts::PI,
                sigma_min_gauss: 1.0,
                af_end: true,
                decay_order: r.decay_order,
                inner_end: r.inner_end,
            })
        }
        Profile::Conformal(c) => {
            let (lo, _) = c.domain;
            let anchor = if lo > 0.0 { lo * 2.0 } else { 1.0 };
            let warp = ConformalArcWarp { conf: c.clone(), anchor };
            let t_lo = inner_arc_limit(|x| warp.t_of_s(x), lo, anchor);
            Ok(WarpedProfile {
                warp: Arc::new(warp),
                domain: (t_lo, f64::INFINITY),
                sigma_area: 4.0 * std::f64::consts::PI,
                sigma_min_gauss: 1.0,
                af_end: true,
                decay_order: c.decay_order,
                inner_end: c.inner_end,
            })
        }
    }
}

/// Arc-length coordinate of the inner edge: the limit of t(x) as x decreases
/// to `lo`, or -infinity when the length diverges.
fn inner_arc_limit<F: Fn(f64) -> f64>(t_of: F, lo: f64, anchor: f64) -> f64 {
    if !lo.is_finite() {
        return f64::NEG_INFINITY;
    }
    let mut prev = t_of(lo + (anchor - lo) * 2f64.powi(-18));
    let cur = t_of(lo + (anchor - lo) * 2f64.powi(-26));
    if (cur - prev).abs() > 1e-3 * (prev.abs().max(1.0)) {
        // still moving: treat the end as infinitely far
        prev = f64::NEG_INFINITY;
    }
    if prev.is_finite() {
        cur
    } else {
        f64::NEG_INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    #[test]
    fn flat_radial_converts_to_linear_warp() {
        let p = Profile::flat();
        let w = convert(&p).unwrap();
        // a(t) = t + const with slope one
        let a0 = w.warp.value(0.0);
        let a3 = w.warp.value(3.0);
        assert!((a3 - a0 - 3.0).abs() < 1e-10);
        assert!((w.warp.d1(1.5) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn schwarzschild_conversion_satisfies_warp_ode() {
        // a'(t) = sqrt(1 - 2/a), a(0) = 2 when anchored at the horizon
        let p = Profile::schwarzschild(1.0);
        let w = convert(&p).unwrap();
        assert!((w.warp.value(0.0) - 2.0).abs() < 1e-9);
        for t in [0.5, 2.0, 7.0] {
            let a = w.warp.value(t);
            let want = (1.0 - 2.0 / a).sqrt();
            assert!((w.warp.d1(t) - want).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn unit_psi_converts_to_identity_warp() {
        let p = Profile::conformal_gaussian(0.0).unwrap();
        let w = convert(&p).unwrap();
        for t in [-0.5, 0.0, 2.0] {
            // anchor s = 1 maps to t = 0, so a(t) = t + 1
            assert!((w.warp.value(t) - (t + 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn neg_schwarzschild_is_a_two_thirds_horn_in_arc_length() {
        let p = Profile::neg_schwarzschild(1.0);
        let w = convert(&p).unwrap();
        // t(r) ~ (2/3) r^{3/2} / sqrt(2m) near 0 means a ~ (9 m t^2 / 2)^{1/3}
        assert!(w.domain.0.abs() < 2.0, "horn tip at finite arc length");
        let tip = w.domain.0;
        let mut slopes = Vec::new();
        for j in 6..12 {
            let t1 = tip + 2f64.powi(-j);
            let t2 = tip + 2f64.powi(-j - 1);
            let s = (w.warp.value(t1).ln() - w.warp.value(t2).ln())
                / ((t1 - tip).ln() - (t2 - tip).ln());
            slopes.push(s);
        }
        let last = slopes.last().unwrap();
        assert!((last - 2.0 / 3.0).abs() < 0.01, "slope {last}");
    }
}
