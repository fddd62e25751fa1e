//! Signed-margin reports for the mass-capacity inequalities, with equality
//! (rigidity) detection and hypothesis certification.

use crate::capacity::{capacity_exterior, limit_capacity};
use crate::curvature::certify_nonneg_scalar_from;
use crate::error::{Error, Result};
use crate::harmonic::{exterior_harmonic, two_ended_harmonic};
use crate::mass::adm_mass;
use crate::numerics::fit::log_log_slope;
use crate::profile::Profile;
use crate::surface::SurfaceSlice;

const PI: f64 = std::f64::consts::PI;
const PI16: f64 = 16.0 * PI;

/// Equality is declared below this normalized margin.
pub const EQ_TOL: f64 = 1e-7;
/// Certified-hypothesis margins must not fall below -VIOL_TOL (normalized).
pub const VIOL_TOL: f64 = 1e-9;

/// Hypothesis certificates attached to a report.
#[derive(Debug, Clone, Copy)]
pub struct HypothesisFlags {
    /// Nonnegative scalar curvature on the exterior region (sampled), when
    /// the inequality requires it.
    pub nonneg_scalar: Option<bool>,
    pub af: bool,
    /// H >= 0 at the slice; tracked separately and never folded into the
    /// equality decision.
    pub mean_curv_nonneg: Option<bool>,
    /// Operation-specific precondition (e.g. W >= 16 pi for the Hawking chain).
    pub precondition: bool,
}

impl HypothesisFlags {
    pub fn ok(&self) -> bool {
        self.af && self.nonneg_scalar.unwrap_or(true) && self.precondition
    }
}

/// A named inequality evaluated on a profile.
///
/// `lhs`/`rhs` follow the inequality as written; `margin` is the slack in the
/// favorable direction (lhs - rhs for >=-type, rhs - lhs for <=-type), so a
/// valid certified report always has margin >= -VIOL_TOL.
#[derive(Debug, Clone, Copy)]
pub struct InequalityReport {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub normalized_margin: f64,
    pub equality: bool,
    /// Equality within tolerance and the profile sits in the model family
    /// (constant Hawking mass across slices).
    pub rigidity_model: bool,
    pub hypothesis: HypothesisFlags,
}

/// Normalization scale: max(1, |lhs|, |rhs|) for ratio-form inequalities,
/// max(|lhs|, |rhs|, capacity) for mass-form ones.
fn normalized(margin: f64, lhs: f64, rhs: f64, mass_form_cap: Option<f64>) -> f64 {
    let scale = match mass_form_cap {
        None => 1.0f64.max(lhs.abs()).max(rhs.abs()),
        Some(c) => lhs.abs().max(rhs.abs()).max(c.abs()).max(1e-300),
    };
    margin / scale
}

/// Shared per-slice data for the margin operations.
struct SliceContext {
    mass: f64,
    cap: f64,
    slice_willmore: f64,
    area_radius: f64,
    mean_curv: f64,
    boundary_energy: f64,
    nonneg_scalar: bool,
    rigidity_model: bool,
}

fn context(profile: &Profile, x: f64) -> Result<SliceContext> {
    let slice = SurfaceSlice::new(profile, x)?;
    let mass = adm_mass(profile)?.value;
    let cap = capacity_exterior(profile, x)?.value;
    let h = exterior_harmonic(profile, x)?;
    Ok(SliceContext {
        mass,
        cap,
        slice_willmore: slice.willmore(),
        area_radius: slice.area_radius(),
        mean_curv: slice.mean_curvature(),
        boundary_energy: h.boundary_energy()?,
        nonneg_scalar: certify_nonneg_scalar_from(profile, Some(x)).ok,
        rigidity_model: hawking_mass_constant(profile),
    })
}

/// Samples the Hawking mass across exterior slices; constancy characterizes
/// the Schwarzschild family (including flat space).
fn hawking_mass_constant(profile: &Profile) -> bool {
    let (lo, hi) = profile.domain();
    let base = if lo.is_finite() { lo.max(1e-3) } else { 1.0 };
    let cap = profile.extraction_cap().min(hi);
    let mut vals = Vec::new();
    for j in 0..6 {
        let x = base + base.abs().max(1.0) * (2f64.powi(j) - 1.0);
        if x >= cap {
            break;
        }
        if let Ok(s) = SurfaceSlice::new(profile, x) {
            vals.push(s.hawking_mass());
        }
    }
    if vals.len() < 3 {
        return false;
    }
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let mx = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mn = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    (mx - mn) / scale <= EQ_TOL
}

fn flags(ctx: &SliceContext, precondition: bool) -> HypothesisFlags {
    HypothesisFlags {
        nonneg_scalar: Some(ctx.nonneg_scalar),
        af: true,
        mean_curv_nonneg: Some(ctx.mean_curv >= 0.0),
        precondition,
    }
}

fn report_ge(
    name: &'static str,
    lhs: f64,
    rhs: f64,
    mass_form_cap: Option<f64>,
    ctx: &SliceContext,
    precondition: bool,
) -> InequalityReport {
    let margin = lhs - rhs;
    let nm = normalized(margin, lhs, rhs, mass_form_cap);
    InequalityReport {
        name,
        lhs,
        rhs,
        margin,
        normalized_margin: nm,
        equality: nm.abs() <= EQ_TOL,
        rigidity_model: nm.abs() <= EQ_TOL && ctx.rigidity_model,
        hypothesis: flags(ctx, precondition),
    }
}

fn report_le(
    name: &'static str,
    lhs: f64,
    rhs: f64,
    ctx: &SliceContext,
    precondition: bool,
) -> InequalityReport {
    let margin = rhs - lhs;
    let nm = normalized(margin, lhs, rhs, None);
    InequalityReport {
        name,
        lhs,
        rhs,
        margin,
        normalized_margin: nm,
        equality: nm.abs() <= EQ_TOL,
        rigidity_model: nm.abs() <= EQ_TOL && ctx.rigidity_model,
        hypothesis: flags(ctx, precondition),
    }
}

/// m / c_Sigma >= 1 - sqrt(W / 16 pi).
pub fn margin_mass_capacity(profile: &Profile, x: f64) -> Result<InequalityReport> {
    let ctx = context(profile, x)?;
    let lhs = ctx.mass / ctx.cap;
    let rhs = 1.0 - (ctx.slice_willmore / PI16).sqrt();
    Ok(report_ge("mass-capacity", lhs, rhs, None, &ctx, true))
}

/// sqrt((1/pi) int |grad u|^2) <= sqrt(W / 16 pi) + 1.
pub fn margin_energy_willmore(profile: &Profile, x: f64) -> Result<InequalityReport> {
    let ctx = context(profile, x)?;
    let lhs = (ctx.boundary_energy / PI).sqrt();
    let rhs = (ctx.slice_willmore / PI16).sqrt() + 1.0;
    Ok(report_le("energy-willmore", lhs, rhs, &ctx, true))
}

/// m / (2 c_Sigma) >= 1 - sqrt((1/4pi) int |grad u|^2).
pub fn margin_mass_energy(profile: &Profile, x: f64) -> Result<InequalityReport> {
    let ctx = context(profile, x)?;
    let lhs = ctx.mass / (2.0 * ctx.cap);
    let rhs = 1.0 - (ctx.boundary_energy / (4.0 * PI)).sqrt();
    Ok(report_ge("mass-energy", lhs, rhs, None, &ctx, true))
}

/// 2 c_Sigma / r_Sigma <= sqrt(W / 16 pi) + 1.
pub fn margin_capacity_radius(profile: &Profile, x: f64) -> Result<InequalityReport> {
    let ctx = context(profile, x)?;
    let lhs = 2.0 * ctx.cap / ctx.area_radius;
    let rhs = (ctx.slice_willmore / PI16).sqrt() + 1.0;
    Ok(report_le("capacity-radius", lhs, rhs, &ctx, true))
}

/// The chain m >= c [1 - sqrt(W/16pi)] >= m_H, valid when W >= 16 pi.
///
/// Returns the two links as separate reports. When W < 16 pi the reports carry
/// an unmet precondition flag and should not be asserted.
pub fn margin_hawking_chain(profile: &Profile, x: f64) -> Result<[InequalityReport; 2]> {
    let ctx = context(profile, x)?;
    let pre = ctx.slice_willmore >= PI16 * (1.0 - 1e-12);
    let middle = ctx.cap * (1.0 - (ctx.slice_willmore / PI16).sqrt());
    let mh = SurfaceSlice::new(profile, x)?.hawking_mass();
    let first = report_ge("hawking-chain-upper", ctx.mass, middle, Some(ctx.cap), &ctx, pre);
    let second = report_ge("hawking-chain-lower", middle, mh, Some(ctx.cap), &ctx, pre);
    Ok([first, second])
}

/// All slice inequalities applicable to a profile at one slice.
pub fn all_slice_reports(profile: &Profile, x: f64) -> Result<Vec<InequalityReport>> {
    let mut out = vec![
        margin_mass_capacity(profile, x)?,
        margin_energy_willmore(profile, x)?,
        margin_mass_energy(profile, x)?,
        margin_capacity_radius(profile, x)?,
    ];
    let chain = margin_hawking_chain(profile, x)?;
    if chain[0].hypothesis.precondition {
        out.extend_from_slice(&chain);
    }
    Ok(out)
}

/// Willmore lower bound in the negative-mass Schwarzschild family:
/// W(Sigma) >= 16 pi (1 + 2m / r_max), equality on slices, with the blow-up
/// sequence W(r_j) along r_j -> 0 and its fitted rate.
#[derive(Debug, Clone)]
pub struct NegMassWillmore {
    pub report: InequalityReport,
    pub shrink_radii: Vec<f64>,
    pub shrink_willmore: Vec<f64>,
    /// log-log slope of W against r along the shrinking sequence (-1 for the
    /// model family).
    pub blowup_rate: f64,
}

pub fn neg_schwarzschild_willmore(profile: &Profile, x: f64) -> Result<NegMassWillmore> {
    let ctx = context(profile, x)?;
    if !ctx.rigidity_model || ctx.mass >= 0.0 {
        return Err(Error::InvalidInput(
            "operation applies to the negative-mass Schwarzschild family".into(),
        ));
    }
    let m = -ctx.mass;
    let lhs = ctx.slice_willmore;
    let rhs = PI16 * (1.0 + 2.0 * m / x);
    let report = report_ge("neg-mass-willmore", lhs, rhs, None, &ctx, true);
    let mut radii = Vec::new();
    let mut ws = Vec::new();
    for j in 0..18 {
        let r = x * 2f64.powi(-j);
        radii.push(r);
        ws.push(SurfaceSlice::new(profile, r)?.willmore());
    }
    let rate = log_log_slope(&radii[8..], &ws[8..]).unwrap_or(f64::NAN);
    Ok(NegMassWillmore { report, shrink_radii: radii, shrink_willmore: ws, blowup_rate: rate })
}

/// Which product is driven to zero in the positive-mass witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessMode {
    /// c_{S_k} W(S_k)^{1/2}
    Capacity,
    /// r_{S_k} W(S_k)
    Radius,
}

/// Shrinking-surface witness for m >= 0: the product sequence, its fitted
/// decay rate, a converged-to-zero flag, and the directly computed mass.
#[derive(Debug, Clone)]
pub struct PmtWitness {
    pub coords: Vec<f64>,
    pub products: Vec<f64>,
    pub fitted_rate: Option<f64>,
    pub converged_to_zero: bool,
    pub monotone: bool,
    pub mass: f64,
    pub nonneg_scalar: bool,
}

pub fn pmt_witness(profile: &Profile, coords: &[f64], mode: WitnessMode) -> Result<PmtWitness> {
    if coords.len() < 3 {
        return Err(Error::InvalidInput("witness needs at least 3 shrinking coordinates".into()));
    }
    let mut products = Vec::with_capacity(coords.len());
    for &x in coords {
        let slice = SurfaceSlice::new(profile, x)?;
        let w = slice.willmore();
        let p = match mode {
            WitnessMode::Capacity => capacity_exterior(profile, x)?.value * w.sqrt(),
            WitnessMode::Radius => slice.area_radius() * w,
        };
        products.push(p);
    }
    let monotone = products.windows(2).all(|v| v[1] <= v[0] * (1.0 + 1e-10));
    let n = products.len();
    let fit_from = n / 2;
    let fitted_rate = log_log_slope(&coords[fit_from..], &products[fit_from..]);
    let shrinking = products[n - 1] < 0.5 * products[0];
    let converged_to_zero =
        products[n - 1] < 1e-9 || (fitted_rate.map_or(false, |r| r > 0.05) && shrinking);
    let mass = adm_mass(profile)?.value;
    Ok(PmtWitness {
        coords: coords.to_vec(),
        products,
        fitted_rate,
        converged_to_zero,
        monotone,
        mass,
        nonneg_scalar: certify_nonneg_scalar_from(profile, None).ok,
    })
}

/// Mass lower bound through the two-ended harmonic function:
/// m >= 2 c(M,g) [1 - lim_{t->0} sqrt(E(t) / 4 pi)].
#[derive(Debug, Clone)]
pub struct MassLowerBound {
    pub report: InequalityReport,
    pub infimum_capacity: f64,
    pub energy_limit: f64,
    pub energy_limit_finite: bool,
    /// Set when the gradient ratio is bounded on a complete profile: the
    /// energy limit vanishes and the bound strengthens to m >= 2 C (the
    /// weaker m >= C follows a fortiori).
    pub saturates_two_cee: bool,
}

pub fn mass_lower_bound_thm34(profile: &Profile) -> Result<MassLowerBound> {
    let h = two_ended_harmonic(profile)?;
    let mass = adm_mass(profile)?.value;
    let lc = limit_capacity(profile)?.result.value;
    let el = h.energy_limit_at_zero()?;
    let rhs = if el.value.is_finite() {
        2.0 * lc * (1.0 - (el.value / (4.0 * PI)).sqrt())
    } else {
        f64::NEG_INFINITY
    };
    let nonneg = certify_nonneg_scalar_from(profile, None).ok;
    let margin = mass - rhs;
    let scale = mass.abs().max(rhs.abs()).max(lc).max(1e-300);
    let nm = margin / scale;
    let mut saturates = false;
    if profile.is_complete() {
        if let Ok(g) = h.gradient_ratio() {
            if g.bounded {
                saturates = (rhs - 2.0 * h.cee).abs() <= 1e-6 * (2.0 * h.cee).abs().max(1e-12);
            }
        }
    }
    let ctxless = HypothesisFlags {
        nonneg_scalar: Some(nonneg),
        af: profile.is_af(),
        mean_curv_nonneg: None,
        precondition: true,
    };
    Ok(MassLowerBound {
        report: InequalityReport {
            name: "mass-lower-bound-two-ended",
            lhs: mass,
            rhs,
            margin,
            normalized_margin: nm,
            equality: nm.abs() <= EQ_TOL,
            rigidity_model: false,
            hypothesis: ctxless,
        },
        infimum_capacity: lc,
        energy_limit: el.value,
        energy_limit_finite: el.finite,
        saturates_two_cee: saturates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    fn assert_equality(r: &InequalityReport) {
        assert!(
            r.equality && r.normalized_margin.abs() <= EQ_TOL,
            "{}: margin {} (lhs {}, rhs {})",
            r.name,
            r.normalized_margin,
            r.lhs,
            r.rhs
        );
    }

    #[test]
    fn schwarzschild_rigidity_cases() {
        let p = Profile::schwarzschild(1.0);
        // r0 = 3: lhs = rhs = 1 - sqrt(1/3) for the mass-capacity ratio
        let r = margin_mass_capacity(&p, 3.0).unwrap();
        assert!((r.lhs - 0.42264973081037424).abs() < 1e-9);
        assert_equality(&r);
        assert!(r.rigidity_model);
        assert!(r.hypothesis.ok());

        // r0 = 2 (horizon): boundary energy gives lhs 1, rhs 1
        let r = margin_energy_willmore(&p, 2.0).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-7, "lhs {}", r.lhs);
        assert_equality(&r);

        // r0 = 4: both sides sqrt(1/2) + 1
        let r = margin_energy_willmore(&p, 4.0).unwrap();
        assert!((r.lhs - 1.7071067811865475).abs() < 1e-8);
        assert_equality(&r);
        let r = margin_capacity_radius(&p, 4.0).unwrap();
        assert!((r.rhs - 1.7071067811865475).abs() < 1e-12);
        assert_equality(&r);

        // r0 = 3 mass-energy: both sides (1 - sqrt(1/3))/2
        let r = margin_mass_energy(&p, 3.0).unwrap();
        assert!((r.lhs - 0.21132486540518712).abs() < 1e-9);
        assert_equality(&r);
    }

    #[test]
    fn flat_equalities() {
        let p = Profile::flat();
        for r in all_slice_reports(&p, 1.0).unwrap() {
            assert_equality(&r);
        }
    }

    #[test]
    fn tanh_profile_strict_margins() {
        let p = Profile::tanh_mass(1.0, 1.0, 2.5).unwrap();
        let r = margin_mass_capacity(&p, 2.5).unwrap();
        // value frozen from the quadrature pipeline (cross-checked externally)
        assert!((r.margin - 9.84211410e-3).abs() < 1e-8, "margin {}", r.margin);
        assert!(r.hypothesis.ok());
        assert!(!r.equality);
        let r = margin_mass_energy(&p, 2.5).unwrap();
        assert!(r.margin > 0.2 && r.margin < 0.25);
        let r = margin_capacity_radius(&p, 2.5).unwrap();
        assert!((r.margin - 6.62908192e-3).abs() < 1e-8);
    }

    #[test]
    fn hawking_chain_double_equality_on_negative_mass() {
        let p = Profile::neg_schwarzschild(1.0);
        let [a, b] = margin_hawking_chain(&p, 2.0).unwrap();
        assert!(a.hypothesis.precondition && b.hypothesis.precondition);
        assert!((a.lhs + 1.0).abs() < 1e-8);
        assert!((a.rhs + 1.0).abs() < 1e-8);
        assert_equality(&a);
        assert_equality(&b);
        let [a, b] = margin_hawking_chain(&p, 4.0).unwrap();
        assert_equality(&a);
        assert_equality(&b);
        // flat: W = 16 pi exactly, boundary case of the precondition
        let [a, b] = margin_hawking_chain(&Profile::flat(), 1.0).unwrap();
        assert!(a.hypothesis.precondition);
        assert_equality(&a);
        assert_equality(&b);
    }

    #[test]
    fn hawking_chain_precondition_gate() {
        // Schwarzschild exterior slices have W < 16 pi
        let p = Profile::schwarzschild(1.0);
        let [a, _] = margin_hawking_chain(&p, 3.0).unwrap();
        assert!(!a.hypothesis.precondition);
        assert!(!all_slice_reports(&p, 3.0)
            .unwrap()
            .iter()
            .any(|r| r.name.starts_with("hawking-chain")));
    }

    #[test]
    fn neg_mass_willmore_blowup() {
        let p = Profile::neg_schwarzschild(1.0);
        let rep = neg_schwarzschild_willmore(&p, 2.0).unwrap();
        assert_equality(&rep.report);
        assert!((rep.blowup_rate + 1.0).abs() < 0.02, "rate {}", rep.blowup_rate);
        let tiny = neg_schwarzschild_willmore(&p, 0.01).unwrap();
        assert_equality(&tiny.report);
        assert!(tiny.report.lhs > 16.0 * PI * 200.0);
        assert!(neg_schwarzschild_willmore(&Profile::schwarzschild(1.0), 3.0).is_err());
    }

    #[test]
    fn pmt_witness_flat_puncture() {
        let p = Profile::flat();
        let coords: Vec<f64> = (0..12).map(|j| 0.5 * 2f64.powi(-j)).collect();
        let w = pmt_witness(&p, &coords, WitnessMode::Capacity).unwrap();
        assert!(w.converged_to_zero);
        assert!(w.monotone);
        assert!(w.mass.abs() < 1e-10);
        // product = r sqrt(16 pi): rate 1 in r
        assert!((w.fitted_rate.unwrap() - 1.0).abs() < 1e-6);
        let w = pmt_witness(&p, &coords, WitnessMode::Radius).unwrap();
        assert!(w.converged_to_zero);
    }

    #[test]
    fn pmt_witness_horn_rates() {
        let coords: Vec<f64> = (0..14).map(|j| 0.25 * 2f64.powi(-j)).collect();
        let p = Profile::horn_capped(0.8).unwrap();
        let w = pmt_witness(&p, &coords, WitnessMode::Capacity).unwrap();
        assert!(w.converged_to_zero);
        assert!(w.mass >= -1e-9);
        let rate = w.fitted_rate.unwrap();
        assert!((rate - 0.4).abs() < 0.05, "rate {rate}");

        // b = 0.5: the product does not decay to zero
        let p = Profile::horn_capped(0.5).unwrap();
        let w = pmt_witness(&p, &coords, WitnessMode::Capacity).unwrap();
        assert!(!w.converged_to_zero);
    }

    #[test]
    fn thm34_two_ended_schwarzschild_saturates() {
        let p = Profile::isotropic_schwarzschild(1.0).unwrap();
        let b = mass_lower_bound_thm34(&p).unwrap();
        assert!(b.energy_limit_finite && b.energy_limit.abs() < 1e-7);
        assert!((b.report.lhs - 1.0).abs() < 1e-8);
        assert!((b.report.rhs - 1.0).abs() < 1e-7, "rhs {}", b.report.rhs);
        assert!(b.report.equality);
        assert!(b.saturates_two_cee);
    }

    #[test]
    fn thm34_truncated_flat_reduces_to_boundary_form() {
        let p = crate::profile::restrict_domain(Profile::flat(), 1.0, f64::INFINITY).unwrap();
        let b = mass_lower_bound_thm34(&p).unwrap();
        // E(0+) = 4 pi, so the bound degenerates to 0 = mass
        assert!((b.energy_limit - 4.0 * PI).abs() < 1e-6);
        assert!(b.report.lhs.abs() < 1e-9 && b.report.rhs.abs() < 2e-7);
        assert!(b.report.equality);
        assert!(!b.saturates_two_cee);
    }

    #[test]
    fn thm34_truncated_mass_profile_margin_nonneg() {
        let p = Profile::tanh_mass(1.0, 1.0, 2.5).unwrap();
        let b = mass_lower_bound_thm34(&p).unwrap();
        assert!(b.energy_limit_finite);
        assert!(b.report.margin >= -VIOL_TOL, "margin {}", b.report.margin);
        assert!(b.report.hypothesis.ok());
    }
}
