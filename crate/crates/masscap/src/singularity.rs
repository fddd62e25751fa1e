//! Mass-nonnegativity criterion for singular ends: the decay functional Q(r),
//! the horn-exponent classifier, envelope bounds for perturbed warped metrics,
//! and the relative-capacity sandwich.

use std::sync::Arc;

use crate::capacity::{capacity_exterior, relative_capacity};
use crate::error::{Error, Result};
use crate::harmonic::exterior_harmonic;
use crate::numerics::fit::log_log_slope;
use crate::numerics::quad_tol;
use crate::numerics::quadrature::integrate_log;
use crate::profile::{Profile, PowerWarp, WarpFn};
use crate::surface::SurfaceSlice;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Upper bound for the perturbation gradient |grad h|(r).
#[derive(Debug, Clone, Copy)]
pub enum GradHBound {
    Zero,
    /// coeff * r^exp
    Power { coeff: f64, exp: f64 },
}

impl GradHBound {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            GradHBound::Zero => 0.0,
            GradHBound::Power { coeff, exp } => coeff * r.powf(exp),
        }
    }
}

/// A singular end modeled on (0, delta] x Sigma with metric bar g + h,
/// bar g = dr^2 + a(r)^2 sigma, and the perturbation h known only through the
/// bi-Lipschitz envelope constant lambda and a gradient bound.
#[derive(Clone)]
pub struct HornSpec {
    pub warp: Arc<dyn WarpFn>,
    pub delta: f64,
    pub lambda: f64,
    pub grad_h_bound: GradHBound,
    pub sigma_area: f64,
}

/// Limit behavior of Q(r) as r decreases to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QLimit {
    Zero { rate: f64 },
    Positive(f64),
    Divergent { rate: f64 },
}

/// Classification outcome of a singular end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    MassNonnegCertified,
    Inconclusive,
}

impl HornSpec {
    /// Power-law horn a = r^b on (0, delta], unperturbed round cross-section.
    pub fn power(b: f64, delta: f64) -> Result<HornSpec> {
        if !(b > 0.0 && delta > 0.0) {
            return Err(Error::InvalidInput("horn needs b > 0 and delta > 0".into()));
        }
        Ok(HornSpec {
            warp: Arc::new(PowerWarp(b)),
            delta,
            lambda: 1.0,
            grad_h_bound: GradHBound::Zero,
            sigma_area: FOUR_PI,
        })
    }

    /// Custom warp given by samples (r_i, a_i); interpolated log-log so pure
    /// power laws are represented exactly.
    pub fn from_log_samples(r: Vec<f64>, a: Vec<f64>, delta: f64) -> Result<HornSpec> {
        if r.iter().any(|&x| x <= 0.0) || a.iter().any(|&x| x <= 0.0) {
            return Err(Error::InvalidInput("log-log samples must be positive".into()));
        }
        let lx: Vec<f64> = r.iter().map(|x| x.ln()).collect();
        let ly: Vec<f64> = a.iter().map(|x| x.ln()).collect();
        let interp = crate::numerics::interp::MonotoneCubic::new(lx, ly)?;
        Ok(HornSpec {
            warp: Arc::new(LogLogWarp(interp)),
            delta,
            lambda: 1.0,
            grad_h_bound: GradHBound::Zero,
            sigma_area: FOUR_PI,
        })
    }

    pub fn with_envelope(mut self, lambda: f64, grad_h_bound: GradHBound) -> Result<HornSpec> {
        if lambda < 1.0 {
            return Err(Error::InvalidInput("envelope constant lambda must be >= 1".into()));
        }
        self.lambda = lambda;
        self.grad_h_bound = grad_h_bound;
        Ok(self)
    }

    fn a2_integral(&self, from: f64, to: f64) -> f64 {
        let w = self.warp.clone();
        integrate_log(move |x: f64| w.value(x).powi(-2), from, to, 0.0, quad_tol(), 0.0).value
    }

    /// Q(r) = (int_r^delta a^{-2})^{-1} [ |a'(r)| + a(r) |grad h|(r) ].
    pub fn criterion_q(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r < self.delta) {
            return Err(Error::OutsideDomain { coord: r, lo: 0.0, hi: self.delta });
        }
        let i = self.a2_integral(r, self.delta);
        let num = self.warp.d1(r).abs() + self.warp.value(r) * self.grad_h_bound.eval(r);
        Ok(num / i)
    }

    /// Limit of Q along r_j = delta 2^{-j}, classified by the log-log rate of
    /// the last grid points (all model limits are power laws).
    pub fn q_limit(&self, max_j: i32) -> Result<QLimit> {
        let mut rs = Vec::new();
        let mut qs = Vec::new();
        for j in 4..=max_j.min(40) {
            let r = self.delta * 2f64.powi(-j);
            rs.push(r);
            qs.push(self.criterion_q(r)?);
        }
        let n = qs.len();
        let tail_r = &rs[n - 3..];
        let tail_q = &qs[n - 3..];
        let rate = log_log_slope(tail_r, tail_q)
            .ok_or_else(|| Error::Evaluation("degenerate Q sequence".into()))?;
        Ok(if rate > 0.02 {
            QLimit::Zero { rate }
        } else if rate < -0.02 {
            QLimit::Divergent { rate }
        } else {
            QLimit::Positive(*tail_q.last().unwrap())
        })
    }

    /// The criterion verdict: certified exactly when Q -> 0.
    pub fn classify(&self) -> Result<(Verdict, QLimit)> {
        let l = self.q_limit(40)?;
        let v = match l {
            QLimit::Zero { .. } => Verdict::MassNonnegCertified,
            _ => Verdict::Inconclusive,
        };
        Ok((v, l))
    }

    /// Background relative capacity bar c of Sigma_s against Sigma_delta.
    pub fn relative_capacity_bar(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s < self.delta) {
            return Err(Error::OutsideDomain { coord: s, lo: 0.0, hi: self.delta });
        }
        Ok(self.sigma_area / FOUR_PI / self.a2_integral(s, self.delta))
    }

    /// Envelope constant for Dirichlet-energy comparison under the
    /// lambda-bi-Lipschitz equivalence: volume factor lambda^{3/2} times
    /// inverse-metric factor lambda.
    pub fn envelope_constant(&self) -> f64 {
        self.lambda.powf(2.5)
    }

    /// Upper bound for the perturbed relative capacity: C(lambda) * bar c.
    pub fn envelope_capacity_bound(&self, s: f64) -> Result<f64> {
        Ok(self.envelope_constant() * self.relative_capacity_bar(s)?)
    }

    /// Upper bound for the perturbed Willmore energy
    /// W <= C |Sigma| [4 a'^2 (1 + |h|) + 4 a^2 |grad h|^2], with |h| <= lambda - 1;
    /// exact (= 4 a'^2 |Sigma|) for the unperturbed model.
    pub fn envelope_willmore_bound(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s < self.delta) {
            return Err(Error::OutsideDomain { coord: s, lo: 0.0, hi: self.delta });
        }
        let a = self.warp.value(s);
        let a1 = self.warp.d1(s);
        let gh = self.grad_h_bound.eval(s);
        let h_sup = self.lambda - 1.0;
        Ok(self.envelope_constant()
            * self.sigma_area
            * (4.0 * a1 * a1 * (1.0 + h_sup) + 4.0 * a * a * gh * gh))
    }

    /// Combined product bound on c_(Sigma_s, Sigma_delta) * W(Sigma_s)^{1/2},
    /// the capacity bound times the square root of the Willmore bound. For
    /// the unperturbed model it collapses to the exact product.
    pub fn product_bound(&self, s: f64) -> Result<f64> {
        Ok(self.envelope_capacity_bound(s)? * self.envelope_willmore_bound(s)?.sqrt())
    }

    /// Exact (background) product for cross-checking the bound at h = 0.
    pub fn exact_product(&self, s: f64) -> Result<f64> {
        let cbar = self.relative_capacity_bar(s)?;
        let a1 = self.warp.d1(s);
        Ok(cbar * (4.0 * a1 * a1 * self.sigma_area).sqrt())
    }
}

struct LogLogWarp(crate::numerics::interp::MonotoneCubic);

impl WarpFn for LogLogWarp {
    fn value(&self, t: f64) -> f64 {
        self.0.value(t.ln()).exp()
    }
    fn d1(&self, t: f64) -> f64 {
        let (g, g1, _) = self.0.eval(t.ln());
        g.exp() * g1 / t
    }
    fn d2(&self, t: f64) -> f64 {
        let (g, g1, g2) = self.0.eval(t.ln());
        g.exp() * (g1 * g1 - g1 + g2) / (t * t)
    }
}

/// Relative-capacity sandwich between a shrinking slice and a fixed one:
/// beta^{-1} c_Sigma >= c_rel >= c_Sigma with beta = u(t_tilde).
#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub beta: f64,
    pub capacity: f64,
    pub relative: f64,
    pub sandwich_ok: bool,
    /// Products c sqrt(W) and c_rel sqrt(W): the two smallness criteria are
    /// equivalent because their ratio sits in [1, 1/beta].
    pub product_exterior: f64,
    pub product_relative: f64,
}

pub fn sandwich_check(profile: &Profile, t_k: f64, t_tilde: f64) -> Result<SandwichReport> {
    if !(t_k < t_tilde) {
        return Err(Error::InvalidInput("sandwich needs t_k < t_tilde".into()));
    }
    let h = exterior_harmonic(profile, t_k)?;
    let beta = h.u(t_tilde)?;
    let cap = capacity_exterior(profile, t_k)?.value;
    let rel = relative_capacity(profile, t_k, t_tilde)?.value;
    let slack = 1e-10 * cap.max(rel);
    let sandwich_ok = cap / beta >= rel - slack && rel >= cap - slack;
    let w = SurfaceSlice::new(profile, t_k)?.willmore();
    Ok(SandwichReport {
        beta,
        capacity: cap,
        relative: rel,
        sandwich_ok,
        product_exterior: cap * w.sqrt(),
        product_relative: rel * w.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_closed_forms() {
        // b = 0.8, r = 1e-4, delta = 1: Q = b(2b-1) r^{3b-2} / (1 - (r/delta)^{2b-1})
        let spec = HornSpec::power(0.8, 1.0).unwrap();
        let q = spec.criterion_q(1e-4).unwrap();
        let expect = 0.0121052467264772709;
        assert!((q - expect).abs() < 1e-9 * expect, "{q}");

        // b = 2/3: Q -> b(2b-1) = 2/9
        let spec = HornSpec::power(2.0 / 3.0, 1.0).unwrap();
        let q = spec.criterion_q(1e-8).unwrap();
        assert!((q - 0.22270201917787959).abs() < 1e-8, "{q}");

        // b = 1/2: Q = 0.5 r^{-1/2} / ln(delta/r) -> infinity
        let spec = HornSpec::power(0.5, 1.0).unwrap();
        let q = spec.criterion_q(1e-6).unwrap();
        assert!((q - 36.191206825270986).abs() < 1e-6 * q, "{q}");
    }

    #[test]
    fn classify_matches_exponent_threshold() {
        for (b, certified) in [
            (0.51, false),
            (0.6, false),
            (2.0 / 3.0, false),
            (0.7, true),
            (0.8, true),
            (1.0, true),
        ] {
            let spec = HornSpec::power(b, 1.0).unwrap();
            let (v, l) = spec.classify().unwrap();
            assert_eq!(
                v == Verdict::MassNonnegCertified,
                certified,
                "b = {b}, limit {l:?}"
            );
        }
    }

    #[test]
    fn bounded_gradient_perturbation_keeps_certification() {
        // b = 0.9 with |grad h| = 1/r: r |grad h| = O(1), 3b - 2 = 0.7 > 0
        let spec = HornSpec::power(0.9, 1.0)
            .unwrap()
            .with_envelope(1.5, GradHBound::Power { coeff: 1.0, exp: -1.0 })
            .unwrap();
        let (v, _) = spec.classify().unwrap();
        assert_eq!(v, Verdict::MassNonnegCertified);
    }

    #[test]
    fn envelope_bounds_collapse_when_unperturbed() {
        let spec = HornSpec::power(2.0 / 3.0, 1.0).unwrap();
        let s = 0.1;
        assert_eq!(spec.envelope_constant(), 1.0);
        let w_bound = spec.envelope_willmore_bound(s).unwrap();
        let w_exact = 4.0 * spec.warp.d1(s).powi(2) * FOUR_PI;
        assert!((w_bound - w_exact).abs() < 1e-12 * w_exact);
        let prod = spec.product_bound(s).unwrap();
        let exact = spec.exact_product(s).unwrap();
        assert!((prod - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn willmore_bound_example() {
        // b = 2/3, s = 0.01, h = 0: W = 4 (2/3)^2 s^{-2/3} |Sigma|
        let spec = HornSpec::power(2.0 / 3.0, 1.0).unwrap();
        let w = spec.envelope_willmore_bound(0.01).unwrap();
        let expect = 4.0 * (2.0f64 / 3.0).powi(2) * 0.01f64.powf(-2.0 / 3.0) * FOUR_PI;
        assert!((w - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn sandwich_on_flat_and_schwarzschild() {
        let p = Profile::flat();
        let rep = sandwich_check(&p, 1.0, 2.0).unwrap();
        assert!(rep.sandwich_ok);
        assert!((rep.beta - 0.5).abs() < 1e-9);
        assert!((rep.capacity - 1.0).abs() < 1e-9);
        assert!((rep.relative - 2.0).abs() < 1e-9);

        let p = Profile::schwarzschild(1.0);
        let rep = sandwich_check(&p, 2.0, 4.0).unwrap();
        assert!(rep.sandwich_ok);
        // beta^{-1} c = c_rel exactly in the radial class
        assert!((rep.capacity / rep.beta - rep.relative).abs() < 1e-8 * rep.relative);
    }

    #[test]
    fn degenerate_sandwich_coordinates_rejected() {
        let p = Profile::flat();
        assert!(sandwich_check(&p, 2.0, 2.0).is_err());
    }
}
