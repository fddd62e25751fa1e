//! Metric profiles for rotationally symmetric asymptotically flat 3-manifolds.
//!
//! Three representations of the same geometry:
//!
//! * [`WarpedProfile`]: dt^2 + a(t)^2 sigma with t arc length -- the universal
//!   form; every functional is written against it.
//! * [`RadialProfile`]: f(r)^{-1} dr^2 + r^2 sigma_0 in area-radius gauge,
//!   generated by a quasi-local mass function through f = 1 - 2m(r)/r.
//! * [`ConformalProfile`]: psi(s)^4 delta, conformally flat.
//!
//! All types are immutable after construction and cheap to clone.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::interp::MonotoneCubic;

/// Warped-gauge data of a slice: warp value, first and second derivatives with
/// respect to arc length, and the arc-length element dt/dx of the profile's
/// own coordinate x.
#[derive(Debug, Clone, Copy)]
pub struct WarpData {
    pub a: f64,
    pub a1: f64,
    pub a2: f64,
    pub arc: f64,
}

/// Twice-differentiable warp a(t) in arc-length gauge.
pub trait WarpFn: Send + Sync {
    fn value(&self, t: f64) -> f64;
    fn d1(&self, t: f64) -> f64;
    fn d2(&self, t: f64) -> f64;
}

/// Quasi-local mass function m(r) with derivative; induces f = 1 - 2m(r)/r.
pub trait MassFn: Send + Sync {
    fn m(&self, r: f64) -> f64;
    fn m1(&self, r: f64) -> f64;
}

/// Conformal factor psi(s) with two derivatives.
pub trait PsiFn: Send + Sync {
    fn psi(&self, s: f64) -> f64;
    fn d1(&self, s: f64) -> f64;
    fn d2(&self, s: f64) -> f64;
}

/// Character of the inner (non-asymptotically-flat) end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerEnd {
    /// Regular center point; the coordinate value itself is excluded.
    SmoothCenter,
    /// Finite boundary slice; the inner coordinate is attained.
    Boundary,
    /// Complete end at infinite distance.
    End,
    /// Singular tip at finite distance (horn-type).
    Singular,
}

// ---------------------------------------------------------------------------
// warped profiles
// ---------------------------------------------------------------------------

/// Metric dt^2 + a(t)^2 sigma over an interval (t_minus, t_plus).
#[derive(Clone)]
pub struct WarpedProfile {
    pub warp: Arc<dyn WarpFn>,
    pub domain: (f64, f64),
    pub sigma_area: f64,
    pub sigma_min_gauss: f64,
    pub af_end: bool,
    pub decay_order: f64,
    pub inner_end: InnerEnd,
}

impl WarpedProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_area > 0.0) {
            return Err(Error::InvalidProfile("sigma_area must be positive".into()));
        }
        if self.domain.0 >= self.domain.1 {
            return Err(Error::InvalidProfile("empty coordinate domain".into()));
        }
        let (lo, hi) = self.domain;
        let base = if lo.is_finite() { lo } else { 0.0 };
        for k in 1..=24 {
            let x = base + (hi.min(base + 16.0) - base) * k as f64 / 25.0;
            if x > lo && x < hi && !(self.warp.value(x) > 0.0) {
                return Err(Error::InvalidProfile(format!("warp not positive at t = {x}")));
            }
        }
        if self.af_end {
            if self.decay_order <= 0.5 {
                return Err(Error::InvalidProfile("declared decay order must exceed 1/2".into()));
            }
            let t_chk = if hi.is_finite() { hi } else { 1.0e6 };
            let ratio = self.warp.value(t_chk) / t_chk;
            if (ratio - 1.0).abs() > 0.2 {
                return Err(Error::InvalidProfile(format!(
                    "af_end declared but a(t)/t = {ratio} at t = {t_chk}"
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// radial profiles
// ---------------------------------------------------------------------------

/// Area-radius gauge profile f(r)^{-1} dr^2 + r^2 sigma_0, round cross-section.
#[derive(Clone)]
pub struct RadialProfile {
    pub mass_fn: Arc<dyn MassFn>,
    pub domain: (f64, f64),
    pub decay_order: f64,
    pub inner_end: InnerEnd,
}

impl RadialProfile {
    pub fn f(&self, r: f64) -> f64 {
        1.0 - 2.0 * self.mass_fn.m(r) / r
    }

    pub fn f1(&self, r: f64) -> f64 {
        2.0 * self.mass_fn.m(r) / (r * r) - 2.0 * self.mass_fn.m1(r) / r
    }

    /// Quasi-local mass m(r) = (r/2)(1 - f(r)).
    pub fn quasi_local_mass(&self, r: f64) -> f64 {
        self.mass_fn.m(r)
    }

    /// Rejects domains on which f has a zero (horizon crossing).
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.domain;
        if !(lo >= 0.0) || lo >= hi {
            return Err(Error::InvalidProfile("radial domain must satisfy 0 <= lo < hi".into()));
        }
        let lo_eff = if lo > 0.0 { lo } else { 1e-8 };
        let cap = if hi.is_finite() { hi } else { lo_eff * 2f64.powi(24) };
        let n = 240;
        let ratio = (cap / lo_eff).powf(1.0 / n as f64);
        let mut r = lo_eff;
        for _ in 0..=n {
            let f = self.f(r);
            if !(f > 0.0) {
                return Err(Error::HorizonCrossing { r });
            }
            r *= ratio;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// conformal profiles
// ---------------------------------------------------------------------------

/// Conformally flat profile psi(s)^4 delta on (s_lo, infinity).
#[derive(Clone)]
pub struct ConformalProfile {
    pub psi_fn: Arc<dyn PsiFn>,
    pub domain: (f64, f64),
    pub decay_order: f64,
    pub inner_end: InnerEnd,
}

impl ConformalProfile {
    /// Area radius a(s) = s psi(s)^2.
    pub fn area_radius(&self, s: f64) -> f64 {
        let p = self.psi_fn.psi(s);
        s * p * p
    }

    pub fn validate(&self) -> Result<()> {
        if self.domain.0 < 0.0 || self.domain.0 >= self.domain.1 {
            return Err(Error::InvalidProfile("conformal domain must satisfy 0 <= lo < hi".into()));
        }
        for k in 1..=40 {
            let s = 0.05 * k as f64;
            if s > self.domain.0 && !(self.psi_fn.psi(s) > 0.0) {
                return Err(Error::InvalidProfile(format!("psi not positive at s = {s}")));
            }
        }
        if self.inner_end == InnerEnd::SmoothCenter {
            let d0 = self.psi_fn.d1(1e-9);
            if d0.abs() > 1e-6 {
                return Err(Error::InvalidProfile(
                    "smooth center requires psi'(0) = 0".into(),
                ));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// the unified profile
// ---------------------------------------------------------------------------

/// Any of the three metric representations, with uniform slice access.
#[derive(Clone)]
pub enum Profile {
    Warped(WarpedProfile),
    Radial(RadialProfile),
    Conformal(ConformalProfile),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self {
            Profile::Warped(_) => "Warped",
            Profile::Radial(_) => "Radial",
            Profile::Conformal(_) => "Conformal",
        };
        write!(f, "Profile::{kind}{:?}", self.domain())
    }
}

impl Profile {
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Profile::Warped(w) => w.domain,
            Profile::Radial(r) => r.domain,
            Profile::Conformal(c) => c.domain,
        }
    }

    /// Cross-section area |Sigma|_sigma (4 pi for round profiles).
    pub fn sigma_area(&self) -> f64 {
        match self {
            Profile::Warped(w) => w.sigma_area,
            _ => 4.0 * std::f64::consts::PI,
        }
    }

    /// Lower bound on the Gauss curvature of the cross-section.
    pub fn sigma_min_gauss(&self) -> f64 {
        match self {
            Profile::Warped(w) => w.sigma_min_gauss,
            _ => 1.0,
        }
    }

    pub fn is_af(&self) -> bool {
        match self {
            Profile::Warped(w) => w.af_end,
            Profile::Radial(_) | Profile::Conformal(_) => true,
        }
    }

    /// Declared decay order tau of the AF end.
    pub fn decay_order(&self) -> f64 {
        match self {
            Profile::Warped(w) => w.decay_order,
            Profile::Radial(r) => r.decay_order,
            Profile::Conformal(c) => c.decay_order,
        }
    }

    pub fn inner_end(&self) -> InnerEnd {
        match self {
            Profile::Warped(w) => w.inner_end,
            Profile::Radial(r) => r.inner_end,
            Profile::Conformal(c) => c.inner_end,
        }
    }

    /// Completeness is declared by the inner-end kind: smooth centers and
    /// infinite-distance ends are complete, boundaries and singular tips not.
    pub fn is_complete(&self) -> bool {
        matches!(self.inner_end(), InnerEnd::SmoothCenter | InnerEnd::End)
    }

    /// Upper coordinate cap for asymptotic extraction; finite only for
    /// sampled data whose tail should not be extrapolated.
    pub fn extraction_cap(&self) -> f64 {
        match self {
            Profile::Warped(w) => {
                if w.domain.1.is_finite() {
                    w.domain.1
                } else {
                    f64::INFINITY
                }
            }
            _ => f64::INFINITY,
        }
    }

    /// Checks that a slice may be placed at coordinate x. Finite boundary
    /// coordinates are attained; asymptotic ends, centers, and singular tips
    /// are not.
    pub fn check_slice_coord(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        let ok_low = match self.inner_end() {
            InnerEnd::Boundary => x >= lo,
            _ => x > lo,
        };
        if !x.is_finite() || !ok_low || x >= hi {
            return Err(Error::OutsideDomain { coord: x, lo, hi });
        }
        Ok(())
    }

    /// Warped-gauge data at coordinate x.
    pub fn warp_at(&self, x: f64) -> Result<WarpData> {
        self.check_slice_coord(x)?;
        match self {
            Profile::Warped(w) => Ok(WarpData {
                a: w.warp.value(x),
                a1: w.warp.d1(x),
                a2: w.warp.d2(x),
                arc: 1.0,
            }),
            Profile::Radial(rp) => {
                let f = rp.f(x);
                if f < 0.0 {
                    return Err(Error::Evaluation(format!("f(r) = {f} < 0 at r = {x}")));
                }
                // dt = f^{-1/2} dr, a = r, a' = sqrt(f), a'' = f'/2; at a
                // horizon slice f = 0 the arc element is infinite but H = 0
                // and the surface functionals stay finite.
                let arc = if f > 0.0 { 1.0 / f.sqrt() } else { f64::INFINITY };
                Ok(WarpData { a: x, a1: f.sqrt(), a2: 0.5 * rp.f1(x), arc })
            }
            Profile::Conformal(cp) => {
                let p = cp.psi_fn.psi(x);
                let p1 = cp.psi_fn.d1(x);
                let p2 = cp.psi_fn.d2(x);
                let a = x * p * p;
                let a1 = 1.0 + 2.0 * x * p1 / p;
                let q = p1 / p;
                let a2 = (2.0 * q + 2.0 * x * p2 / p - 2.0 * x * q * q) / (p * p);
                Ok(WarpData { a, a1, a2, arc: p * p })
            }
        }
    }

    /// The metric rescaling g -> lambda^2 g.
    pub fn scaled(&self, lambda: f64) -> Profile {
        assert!(lambda > 0.0);
        match self {
            Profile::Warped(w) => Profile::Warped(WarpedProfile {
                warp: Arc::new(ScaledWarp { inner: w.warp.clone(), lambda }),
                domain: (w.domain.0 * lambda, w.domain.1 * lambda),
                ..w.clone()
            }),
            Profile::Radial(r) => Profile::Radial(RadialProfile {
                mass_fn: Arc::new(ScaledMass { inner: r.mass_fn.clone(), lambda }),
                domain: (r.domain.0 * lambda, r.domain.1 * lambda),
                decay_order: r.decay_order,
                inner_end: r.inner_end,
            }),
            Profile::Conformal(c) => Profile::Conformal(ConformalProfile {
                psi_fn: Arc::new(ScaledPsi { inner: c.psi_fn.clone(), lambda }),
                domain: (c.domain.0 * lambda, c.domain.1 * lambda),
                decay_order: c.decay_order,
                inner_end: c.inner_end,
            }),
        }
    }
}

struct ScaledWarp {
    inner: Arc<dyn WarpFn>,
    lambda: f64,
}

impl WarpFn for ScaledWarp {
    fn value(&self, t: f64) -> f64 {
        self.lambda * self.inner.value(t / self.lambda)
    }
    fn d1(&self, t: f64) -> f64 {
        self.inner.d1(t / self.lambda)
    }
    fn d2(&self, t: f64) -> f64 {
        self.inner.d2(t / self.lambda) / self.lambda
    }
}

struct ScaledMass {
    inner: Arc<dyn MassFn>,
    lambda: f64,
}

impl MassFn for ScaledMass {
    fn m(&self, r: f64) -> f64 {
        self.lambda * self.inner.m(r / self.lambda)
    }
    fn m1(&self, r: f64) -> f64 {
        self.inner.m1(r / self.lambda)
    }
}

struct ScaledPsi {
    inner: Arc<dyn PsiFn>,
    lambda: f64,
}

impl PsiFn for ScaledPsi {
    fn psi(&self, s: f64) -> f64 {
        self.inner.psi(s / self.lambda)
    }
    fn d1(&self, s: f64) -> f64 {
        self.inner.d1(s / self.lambda) / self.lambda
    }
    fn d2(&self, s: f64) -> f64 {
        self.inner.d2(s / self.lambda) / (self.lambda * self.lambda)
    }
}

// ---------------------------------------------------------------------------
// built-in families
// ---------------------------------------------------------------------------

/// Constant quasi-local mass: Schwarzschild of mass m (flat when m = 0,
/// negative-mass for m < 0).
pub struct ConstMass(pub f64);

impl MassFn for ConstMass {
    fn m(&self, _r: f64) -> f64 {
        self.0
    }
    fn m1(&self, _r: f64) -> f64 {
        0.0
    }
}

/// m(r) = mass * tanh(r / scale): nondecreasing, so R = 4 m'/r^2 >= 0.
pub struct TanhMass {
    pub mass: f64,
    pub scale: f64,
}

impl MassFn for TanhMass {
    fn m(&self, r: f64) -> f64 {
        self.mass * (r / self.scale).tanh()
    }
    fn m1(&self, r: f64) -> f64 {
        let c = (r / self.scale).cosh();
        self.mass / (self.scale * c * c)
    }
}

/// Monotone spline mass function; constant beyond the last knot.
pub struct SplineMass(pub MonotoneCubic);

impl MassFn for SplineMass {
    fn m(&self, r: f64) -> f64 {
        let (lo, hi) = self.0.domain();
        self.0.value(r.clamp(lo, hi))
    }
    fn m1(&self, r: f64) -> f64 {
        let (lo, hi) = self.0.domain();
        if r <= lo || r >= hi {
            0.0
        } else {
            self.0.deriv(r)
        }
    }
}

/// psi identically one: flat space.
pub struct UnitPsi;

impl PsiFn for UnitPsi {
    fn psi(&self, _s: f64) -> f64 {
        1.0
    }
    fn d1(&self, _s: f64) -> f64 {
        0.0
    }
    fn d2(&self, _s: f64) -> f64 {
        0.0
    }
}

/// psi = 1 + m/(2s) + sum q_i / sqrt(s^2 + w_i^2).
///
/// Superharmonic for m, q_i >= 0, hence nonnegative scalar curvature; with
/// m > 0 this is a complete two-ended manifold (isotropic Schwarzschild plus
/// bumps), with m = 0 a smooth-centered one.
pub struct SuperharmonicPsi {
    pub m: f64,
    pub bumps: Vec<(f64, f64)>,
}

impl PsiFn for SuperharmonicPsi {
    fn psi(&self, s: f64) -> f64 {
        let mut v = 1.0 + self.m / (2.0 * s);
        for &(q, w) in &self.bumps {
            v += q / (s * s + w * w).sqrt();
        }
        v
    }
    fn d1(&self, s: f64) -> f64 {
        let mut v = -self.m / (2.0 * s * s);
        for &(q, w) in &self.bumps {
            v += -q * s * (s * s + w * w).powf(-1.5);
        }
        v
    }
    fn d2(&self, s: f64) -> f64 {
        let mut v = self.m / (s * s * s);
        for &(q, w) in &self.bumps {
            let u = s * s + w * w;
            v += q * (3.0 * s * s * u.powf(-2.5) - u.powf(-1.5));
        }
        v
    }
}

/// psi = 1 + eps * exp(-s^2): a localized curvature bump with smooth center.
pub struct GaussianPsi(pub f64);

impl PsiFn for GaussianPsi {
    fn psi(&self, s: f64) -> f64 {
        1.0 + self.0 * (-s * s).exp()
    }
    fn d1(&self, s: f64) -> f64 {
        -2.0 * s * self.0 * (-s * s).exp()
    }
    fn d2(&self, s: f64) -> f64 {
        self.0 * (-s * s).exp() * (4.0 * s * s - 2.0)
    }
}

/// Pure power warp a = t^b.
pub struct PowerWarp(pub f64);

impl WarpFn for PowerWarp {
    fn value(&self, t: f64) -> f64 {
        t.powf(self.0)
    }
    fn d1(&self, t: f64) -> f64 {
        self.0 * t.powf(self.0 - 1.0)
    }
    fn d2(&self, t: f64) -> f64 {
        self.0 * (self.0 - 1.0) * t.powf(self.0 - 2.0)
    }
}

/// Horn tip a = t^b on (0, t1], C^2 quintic blend on [t1, t2], then a = t + c0
/// exactly (so the end is flat with zero mass).
pub struct HornBlendWarp {
    b: f64,
    t1: f64,
    t2: f64,
    c0: f64,
    coeff: [f64; 6],
}

impl HornBlendWarp {
    pub fn new(b: f64, t1: f64, t2: f64, c0: f64) -> Result<Self> {
        if !(b > 0.0 && t1 > 0.0 && t2 > t1) {
            return Err(Error::InvalidInput("horn blend needs b > 0, 0 < t1 < t2".into()));
        }
        let h = t2 - t1;
        // quintic in tau = (t - t1)/h matching value/d1/d2 at both ends
        let (v1, d1, s1) = (t1.powf(b), b * t1.powf(b - 1.0) * h, b * (b - 1.0) * t1.powf(b - 2.0) * h * h);
        let (v2, d2, s2) = (t2 + c0, h, 0.0);
        let c0_ = v1;
        let c1 = d1;
        let c2 = 0.5 * s1;
        // remaining three from the right-end conditions
        let r0 = v2 - (c0_ + c1 + c2);
        let r1 = d2 - (c1 + 2.0 * c2);
        let r2 = s2 - 2.0 * c2;
        let c3 = 10.0 * r0 - 4.0 * r1 + 0.5 * r2;
        let c4 = -15.0 * r0 + 7.0 * r1 - r2;
        let c5 = 6.0 * r0 - 3.0 * r1 + 0.5 * r2;
        let w = HornBlendWarp { b, t1, t2, c0, coeff: [c0_, c1, c2, c3, c4, c5] };
        for k in 0..=64 {
            let t = t1 + (t2 - t1) * k as f64 / 64.0;
            if !(w.value(t) > 0.0) {
                return Err(Error::InvalidProfile("horn blend not positive".into()));
            }
        }
        Ok(w)
    }
}

impl WarpFn for HornBlendWarp {
    fn value(&self, t: f64) -> f64 {
        if t <= self.t1 {
            t.powf(self.b)
        } else if t >= self.t2 {
            t + self.c0
        } else {
            let h = self.t2 - self.t1;
            let tau = (t - self.t1) / h;
            self.coeff.iter().rev().fold(0.0, |acc, c| acc * tau + c)
        }
    }
    fn d1(&self, t: f64) -> f64 {
        if t <= self.t1 {
            self.b * t.powf(self.b - 1.0)
        } else if t >= self.t2 {
            1.0
        } else {
            let h = self.t2 - self.t1;
            let tau = (t - self.t1) / h;
            let c = &self.coeff;
            (c[1] + tau * (2.0 * c[2] + tau * (3.0 * c[3] + tau * (4.0 * c[4] + tau * 5.0 * c[5])))) / h
        }
    }
    fn d2(&self, t: f64) -> f64 {
        if t <= self.t1 {
            self.b * (self.b - 1.0) * t.powf(self.b - 2.0)
        } else if t >= self.t2 {
            0.0
        } else {
            let h = self.t2 - self.t1;
            let tau = (t - self.t1) / h;
            let c = &self.coeff;
            (2.0 * c[2] + tau * (6.0 * c[3] + tau * (12.0 * c[4] + tau * 20.0 * c[5]))) / (h * h)
        }
    }
}

/// a = sqrt(rho^2 + softplus(t)^2): cylinder of radius rho as t -> -infinity,
/// asymptotically flat as t -> +infinity.
pub struct CylinderWarp(pub f64);

impl CylinderWarp {
    fn sp(t: f64) -> (f64, f64, f64) {
        // softplus with stable branches; returns (s, s', s'')
        let (s, sig) = if t > 30.0 {
            (t + (-t).exp(), 1.0 / (1.0 + (-t).exp()))
        } else {
            ((1.0 + t.exp()).ln(), t.exp() / (1.0 + t.exp()))
        };
        (s, sig, sig * (1.0 - sig))
    }
}

impl WarpFn for CylinderWarp {
    fn value(&self, t: f64) -> f64 {
        let (s, _, _) = Self::sp(t);
        (self.0 * self.0 + s * s).sqrt()
    }
    fn d1(&self, t: f64) -> f64 {
        let (s, s1, _) = Self::sp(t);
        s * s1 / self.value(t)
    }
    fn d2(&self, t: f64) -> f64 {
        let (s, s1, s2) = Self::sp(t);
        let a = self.value(t);
        (s1 * s1 + s * s2) / a - (s * s1) * (s * s1) / (a * a * a)
    }
}

/// Sampled warp: monotone cubic through (t_i, a_i), linear beyond the data.
pub struct SampledWarp(pub MonotoneCubic);

impl WarpFn for SampledWarp {
    fn value(&self, t: f64) -> f64 {
        self.0.value(t)
    }
    fn d1(&self, t: f64) -> f64 {
        self.0.deriv(t)
    }
    fn d2(&self, t: f64) -> f64 {
        self.0.deriv2(t)
    }
}

// ---------------------------------------------------------------------------
// constructors
// ---------------------------------------------------------------------------

const ROUND: f64 = 4.0 * std::f64::consts::PI;

impl Profile {
    /// Flat R^3 in area-radius gauge (punctured at the origin coordinate).
    pub fn flat() -> Profile {
        Profile::Radial(RadialProfile {
            mass_fn: Arc::new(ConstMass(0.0)),
            domain: (0.0, f64::INFINITY),
            decay_order: 1.0,
            inner_end: InnerEnd::SmoothCenter,
        })
    }

    /// Spatial Schwarzschild exterior of mass m > 0, boundary at the horizon.
    pub fn schwarzschild(m: f64) -> Profile {
        assert!(m > 0.0);
        Profile::Radial(RadialProfile {
            mass_fn: Arc::new(ConstMass(m)),
            domain: (2.0 * m, f64::INFINITY),
            decay_order: 1.0,
            inner_end: InnerEnd::Boundary,
        })
    }

    /// Negative-mass Schwarzschild with ADM mass -m (m > 0): f = 1 + 2m/r on
    /// (0, infinity), an r^{2/3}-horn at the origin.
    pub fn neg_schwarzschild(m: f64) -> Profile {
        assert!(m > 0.0);
        Profile::Radial(RadialProfile {
            mass_fn: Arc::new(ConstMass(-m)),
            domain: (0.0, f64::INFINITY),
            decay_order: 1.0,
            inner_end: InnerEnd::Singular,
        })
    }

    /// Profile generated by a nondecreasing quasi-local mass function;
    /// guarantees nonnegative scalar curvature through R = 4 m'(r)/r^2.
    pub fn from_mass_profile(mass_fn: Arc<dyn MassFn>, domain: (f64, f64)) -> Result<Profile> {
        let p = RadialProfile {
            mass_fn,
            domain,
            decay_order: 1.0,
            inner_end: if domain.0 > 0.0 { InnerEnd::Boundary } else { InnerEnd::SmoothCenter },
        };
        p.validate()?;
        // monotone mass: sampled check
        let lo = if domain.0 > 0.0 { domain.0 } else { 1e-6 };
        let cap = if domain.1.is_finite() { domain.1 } else { lo * 2f64.powi(20) };
        let ratio = (cap / lo).powf(1.0 / 160.0);
        let mut r = lo;
        for _ in 0..=160 {
            if p.mass_fn.m1(r) < -1e-12 {
                return Err(Error::InvalidProfile(format!("mass function decreasing at r = {r}")));
            }
            r *= ratio;
        }
        Ok(Profile::Radial(p))
    }

    pub fn tanh_mass(mass: f64, scale: f64, r_lo: f64) -> Result<Profile> {
        Profile::from_mass_profile(Arc::new(TanhMass { mass, scale }), (r_lo, f64::INFINITY))
    }

    /// Monotone spline through sorted (r, m) knots, constant beyond the last.
    pub fn spline_mass(knots_r: Vec<f64>, knots_m: Vec<f64>, r_lo: f64) -> Result<Profile> {
        let spline = MonotoneCubic::new(knots_r, knots_m)?;
        Profile::from_mass_profile(Arc::new(SplineMass(spline)), (r_lo, f64::INFINITY))
    }

    /// r^b-horn tip glued to an exactly flat asymptotic end; ADM mass zero.
    pub fn horn_capped(b: f64) -> Result<Profile> {
        let warp = HornBlendWarp::new(b, 0.5, 2.0, 0.0)?;
        let p = WarpedProfile {
            warp: Arc::new(warp),
            domain: (0.0, f64::INFINITY),
            sigma_area: ROUND,
            sigma_min_gauss: 1.0,
            af_end: true,
            decay_order: 2.0,
            inner_end: InnerEnd::Singular,
        };
        p.validate()?;
        Ok(Profile::Warped(p))
    }

    /// Cylinder of radius rho capped by an asymptotically flat end.
    pub fn cylinder(rho: f64) -> Result<Profile> {
        let p = WarpedProfile {
            warp: Arc::new(CylinderWarp(rho)),
            domain: (f64::NEG_INFINITY, f64::INFINITY),
            sigma_area: ROUND,
            sigma_min_gauss: 1.0,
            af_end: true,
            decay_order: 2.0,
            inner_end: InnerEnd::End,
        };
        p.validate()?;
        Ok(Profile::Warped(p))
    }

    /// Conformal gaussian bump psi = 1 + eps e^{-s^2} with smooth center.
    pub fn conformal_gaussian(eps: f64) -> Result<Profile> {
        let p = ConformalProfile {
            psi_fn: Arc::new(GaussianPsi(eps)),
            domain: (0.0, f64::INFINITY),
            decay_order: 2.0,
            inner_end: InnerEnd::SmoothCenter,
        };
        p.validate()?;
        Ok(Profile::Conformal(p))
    }

    /// Two-ended Schwarzschild of mass m in isotropic gauge, psi = 1 + m/(2s).
    pub fn isotropic_schwarzschild(m: f64) -> Result<Profile> {
        Profile::conformal_superharmonic(m, vec![])
    }

    /// psi = 1 + m/(2s) + sum q/sqrt(s^2+w^2); R >= 0 by superharmonicity.
    pub fn conformal_superharmonic(m: f64, bumps: Vec<(f64, f64)>) -> Result<Profile> {
        if m < 0.0 || bumps.iter().any(|&(q, w)| q < 0.0 || w <= 0.0) {
            return Err(Error::InvalidProfile(
                "superharmonic family needs m >= 0, q >= 0, w > 0".into(),
            ));
        }
        let inner = if m > 0.0 { InnerEnd::End } else { InnerEnd::SmoothCenter };
        let p = ConformalProfile {
            psi_fn: Arc::new(SuperharmonicPsi { m, bumps }),
            domain: (0.0, f64::INFINITY),
            decay_order: 1.0,
            inner_end: inner,
        };
        p.validate()?;
        Ok(Profile::Conformal(p))
    }

    /// Warp sampled on a strictly increasing grid; linear beyond the data.
    pub fn sampled_warp(t: Vec<f64>, a: Vec<f64>, af_end: bool) -> Result<Profile> {
        let lo = *t.first().ok_or_else(|| Error::InvalidInput("empty sample arrays".into()))?;
        let hi = *t.last().unwrap();
        let interp = MonotoneCubic::new(t, a)?;
        let p = WarpedProfile {
            warp: Arc::new(SampledWarp(interp)),
            domain: (lo, if af_end { f64::INFINITY } else { hi }),
            sigma_area: ROUND,
            sigma_min_gauss: 1.0,
            af_end,
            decay_order: 1.0,
            inner_end: InnerEnd::Boundary,
        };
        p.validate()?;
        Ok(Profile::Warped(p))
    }
}

// ---------------------------------------------------------------------------
// JSON ingestion
// ---------------------------------------------------------------------------

/// On-disk profile description.
///
/// `{ "family": ..., "params": {...}, "domain": [lo, hi], "sigma_area": x }`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub family: String,
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(default)]
    pub domain: Option<[f64; 2]>,
    #[serde(default)]
    pub sigma_area: Option<f64>,
}

fn num(v: &serde_json::Value, key: &str) -> Option<f64> {
    v.get(key).and_then(|x| x.as_f64())
}

impl ProfileSpec {
    pub fn parse(text: &str) -> Result<ProfileSpec> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("profile JSON: {e}")))
    }

    pub fn build(&self) -> Result<Profile> {
        let p = &self.params;
        let mut profile = match self.family.as_str() {
            "flat" => Profile::flat(),
            "schwarzschild" => {
                let m = num(p, "mass").unwrap_or(1.0);
                if !(m > 0.0) {
                    return Err(Error::InvalidInput("schwarzschild needs mass > 0".into()));
                }
                Profile::schwarzschild(m)
            }
            "neg-schwarzschild" => {
                let m = num(p, "mass").unwrap_or(1.0);
                if !(m > 0.0) {
                    return Err(Error::InvalidInput("neg-schwarzschild needs mass > 0".into()));
                }
                Profile::neg_schwarzschild(m)
            }
            "mass-profile" => {
                let r_lo = self.domain.map(|d| d[0]).unwrap_or(2.5);
                if let Some(knots) = p.get("knots").and_then(|k| k.as_array()) {
                    let mut rs = Vec::new();
                    let mut ms = Vec::new();
                    for kv in knots {
                        let pair = kv.as_array().ok_or_else(|| {
                            Error::InvalidInput("mass-profile knots must be [r, m] pairs".into())
                        })?;
                        rs.push(pair[0].as_f64().unwrap_or(f64::NAN));
                        ms.push(pair[1].as_f64().unwrap_or(f64::NAN));
                    }
                    Profile::spline_mass(rs, ms, r_lo)?
                } else {
                    let mass = num(p, "mass").unwrap_or(1.0);
                    let scale = num(p, "scale").unwrap_or(1.0);
                    Profile::tanh_mass(mass, scale, r_lo)?
                }
            }
            "horn" => {
                let b = num(p, "b").unwrap_or(0.8);
                Profile::horn_capped(b)?
            }
            "cylinder" => Profile::cylinder(num(p, "radius").unwrap_or(1.0))?,
            "conformal" => match p.get("kind").and_then(|k| k.as_str()).unwrap_or("gaussian") {
                "gaussian" => Profile::conformal_gaussian(num(p, "eps").unwrap_or(0.1))?,
                "isotropic" => Profile::isotropic_schwarzschild(num(p, "mass").unwrap_or(1.0))?,
                "superharmonic" => {
                    let m = num(p, "mass").unwrap_or(0.0);
                    let bumps = p
                        .get("bumps")
                        .and_then(|b| b.as_array())
                        .map(|arr| {
                            arr.iter()
                                .filter_map(|qv| {
                                    let pr = qv.as_array()?;
                                    Some((pr.first()?.as_f64()?, pr.get(1)?.as_f64()?))
                                })
                                .collect()
                        })
                        .unwrap_or_default();
                    Profile::conformal_superharmonic(m, bumps)?
                }
                other => return Err(Error::InvalidInput(format!("unknown conformal kind {other}"))),
            },
            "sampled" => {
                let t: Vec<f64> = serde_json::from_value(
                    p.get("t").cloned().unwrap_or(serde_json::Value::Null),
                )
                .map_err(|e| Error::InvalidInput(format!("sampled t array: {e}")))?;
                let a: Vec<f64> = serde_json::from_value(
                    p.get("a").cloned().unwrap_or(serde_json::Value::Null),
                )
                .map_err(|e| Error::InvalidInput(format!("sampled a array: {e}")))?;
                let af = p.get("af_end").and_then(|v| v.as_bool()).unwrap_or(true);
                Profile::sampled_warp(t, a, af)?
            }
            other => return Err(Error::InvalidInput(format!("unknown profile family {other}"))),
        };
        if let Some([lo, hi]) = self.domain {
            profile = restrict_domain(profile, lo, hi)?;
        }
        if let Some(area) = self.sigma_area {
            match &mut profile {
                Profile::Warped(w) => {
                    if !(area > 0.0) {
                        return Err(Error::InvalidProfile("sigma_area must be positive".into()));
                    }
                    w.sigma_area = area;
                }
                _ => {
                    if (area - ROUND).abs() > 1e-9 * ROUND {
                        return Err(Error::InvalidProfile(
                            "radial/conformal profiles have the round cross-section 4*pi".into(),
                        ));
                    }
                }
            }
        }
        Ok(profile)
    }
}

/// Restricts a profile to a sub-domain; the new inner end is a boundary.
pub fn restrict_domain(p: Profile, lo: f64, hi: f64) -> Result<Profile> {
    let (cur_lo, cur_hi) = p.domain();
    if lo < cur_lo || hi > cur_hi || lo >= hi {
        return Err(Error::InvalidInput(format!(
            "domain [{lo}, {hi}] not inside ({cur_lo}, {cur_hi})"
        )));
    }
    Ok(match p {
        Profile::Warped(mut w) => {
            w.domain = (lo, hi);
            if lo > cur_lo {
                w.inner_end = InnerEnd::Boundary;
            }
            Profile::Warped(w)
        }
        Profile::Radial(mut r) => {
            r.domain = (lo, hi);
            if lo > cur_lo {
                r.inner_end = InnerEnd::Boundary;
            }
            Profile::Radial(r)
        }
        Profile::Conformal(mut c) => {
            c.domain = (lo, hi);
            if lo > cur_lo {
                c.inner_end = InnerEnd::Boundary;
            }
            Profile::Conformal(c)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_slice_data() {
        let p = Profile::flat();
        let w = p.warp_at(1.0).unwrap();
        assert_eq!(w.a, 1.0);
        assert_eq!(w.a1, 1.0);
        assert_eq!(w.a2, 0.0);
        assert_eq!(w.arc, 1.0);
    }

    #[test]
    fn schwarzschild_allows_horizon_slice() {
        let p = Profile::schwarzschild(1.0);
        assert!(p.check_slice_coord(2.0).is_ok());
        assert!(p.check_slice_coord(1.9).is_err());
        let w = p.warp_at(4.0).unwrap();
        assert!((w.a1 - (0.5f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn from_mass_profile_rejects_horizon_crossing() {
        // m = 1 constant on [1, inf): f(1) = -1 < 0
        let err = Profile::from_mass_profile(Arc::new(ConstMass(1.0)), (1.0, f64::INFINITY));
        assert!(matches!(err, Err(Error::HorizonCrossing { .. })));
    }

    #[test]
    fn from_mass_profile_rejects_decreasing_mass() {
        struct Dec;
        impl MassFn for Dec {
            fn m(&self, r: f64) -> f64 {
                1.0 / r
            }
            fn m1(&self, r: f64) -> f64 {
                -1.0 / (r * r)
            }
        }
        assert!(Profile::from_mass_profile(Arc::new(Dec), (10.0, f64::INFINITY)).is_err());
    }

    #[test]
    fn tanh_example_from_r_2_2_is_valid() {
        let p = Profile::tanh_mass(1.0, 1.0, 2.2).unwrap();
        let w = p.warp_at(2.2).unwrap();
        assert!(w.a1 > 0.0);
    }

    #[test]
    fn conformal_isotropic_matches_schwarzschild_area_radius() {
        // a(s) = s (1 + 1/(2s))^2, a'(t) = sqrt(1 - 2/a)
        let p = Profile::isotropic_schwarzschild(1.0).unwrap();
        for s in [0.7, 1.3, 4.0] {
            let w = p.warp_at(s).unwrap();
            let expect = (1.0 - 2.0 / w.a).abs().sqrt() * (s - 0.5).signum();
            assert!((w.a1 - expect).abs() < 1e-12, "s={s}: {} vs {expect}", w.a1);
        }
    }

    #[test]
    fn scaling_scales_warp_linearly() {
        let p = Profile::schwarzschild(1.0).scaled(2.0);
        assert_eq!(p.domain().0, 4.0);
        let w = p.warp_at(8.0).unwrap();
        assert_eq!(w.a, 8.0);
        // f_lambda(r) = f(r/lambda): same a1 as unscaled at r/lambda
        let w0 = Profile::schwarzschild(1.0).warp_at(4.0).unwrap();
        assert!((w.a1 - w0.a1).abs() < 1e-15);
    }

    #[test]
    fn horn_blend_is_c1_and_positive() {
        let p = Profile::horn_capped(0.8).unwrap();
        let mut prev_a = 0.0;
        for k in 1..=300 {
            let t = 3.0 * k as f64 / 300.0;
            let w = p.warp_at(t).unwrap();
            assert!(w.a > 0.0 && w.a >= prev_a);
            prev_a = w.a;
        }
        // derivative continuity at the joints
        for t0 in [0.5, 2.0] {
            let l = p.warp_at(t0 - 1e-9).unwrap();
            let r = p.warp_at(t0 + 1e-9).unwrap();
            assert!((l.a1 - r.a1).abs() < 1e-6);
        }
    }

    #[test]
    fn cylinder_tends_to_constant_radius() {
        let p = Profile::cylinder(1.5).unwrap();
        let w = p.warp_at(-40.0).unwrap();
        assert!((w.a - 1.5).abs() < 1e-10);
        let w = p.warp_at(1e6).unwrap();
        assert!((w.a / 1e6 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn json_round_trip_families() {
        for text in [
            r#"{"family":"flat"}"#,
            r#"{"family":"schwarzschild","params":{"mass":1.0}}"#,
            r#"{"family":"neg-schwarzschild","params":{"mass":0.5}}"#,
            r#"{"family":"mass-profile","params":{"mass":1.0,"scale":1.0},"domain":[2.5,1e308]}"#,
            r#"{"family":"mass-profile","params":{"knots":[[2.0,0.1],[4.0,0.5],[8.0,0.6]]},"domain":[2.0,1e308]}"#,
            r#"{"family":"horn","params":{"b":0.8}}"#,
            r#"{"family":"conformal","params":{"kind":"gaussian","eps":0.1}}"#,
            r#"{"family":"conformal","params":{"kind":"isotropic","mass":1.0}}"#,
            r#"{"family":"sampled","params":{"t":[1.0,2.0,3.0,4.0],"a":[1.0,2.0,3.0,4.0]}}"#,
        ] {
            let spec = ProfileSpec::parse(text).unwrap();
            spec.build().unwrap_or_else(|e| panic!("building {text}: {e}"));
        }
        assert!(ProfileSpec::parse("{not json").is_err());
        assert!(ProfileSpec::parse(r#"{"family":"nope"}"#).unwrap().build().is_err());
    }

    #[test]
    fn sampled_warp_requires_increasing_t() {
        assert!(Profile::sampled_warp(vec![1.0, 1.0, 2.0], vec![1.0, 2.0, 3.0], true).is_err());
    }
}
