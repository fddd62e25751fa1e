//! Verification suites: every theorem-level claim the library makes, run at
//! pinned tolerances with one pass/fail line per check.

use std::time::Instant;

use crate::capacity::{
    capacity_exterior, limit_capacity, variational_capacity_oracle,
};
use crate::curvature::{curvature_oracle, scalar_curvature};
use crate::harmonic::{exterior_harmonic, two_ended_harmonic};
use crate::inequality::{
    self, all_slice_reports, mass_lower_bound_thm34, neg_schwarzschild_willmore, pmt_witness,
    WitnessMode, EQ_TOL, VIOL_TOL,
};
use crate::profile::Profile;
use crate::singularity::{HornSpec, Verdict};
use crate::smallsphere::{mass_capacity_expansion_check, willmore_expansion_fit};
use crate::surface::SurfaceSlice;
use crate::sweep::{random_mass_profile, slice_grid, sweep_rng};

const PI: f64 = std::f64::consts::PI;

/// One verified claim.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub label: String,
    pub passed: bool,
    /// Conditional checks downgrade failure to a warning.
    pub warned: bool,
    pub detail: String,
}

/// A named batch of checks with its wall-clock time.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub lines: Vec<CheckLine>,
    pub elapsed_s: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed || l.warned)
    }

    pub fn render(&self) -> String {
        let mut out = format!("suite {} ({:.2}s)\n", self.name, self.elapsed_s);
        for l in &self.lines {
            let status = if l.passed {
                "pass"
            } else if l.warned {
                "warn"
            } else {
                "FAIL"
            };
            out.push_str(&format!("  [{status}] {} ({})\n", l.label, l.detail));
        }
        out
    }
}

struct Suite {
    name: &'static str,
    lines: Vec<CheckLine>,
    start: Instant,
}

impl Suite {
    fn new(name: &'static str) -> Suite {
        Suite { name, lines: Vec::new(), start: Instant::now() }
    }

    fn check(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.lines.push(CheckLine { label: label.into(), passed, warned: false, detail: detail.into() });
    }

    fn conditional(&mut self, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.lines.push(CheckLine {
            label: label.into(),
            passed,
            warned: !passed,
            detail: detail.into(),
        });
    }

    fn finish(self) -> SuiteReport {
        SuiteReport { name: self.name, lines: self.lines, elapsed_s: self.start.elapsed().as_secs_f64() }
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

fn schw_cap(m: f64, r0: f64) -> f64 {
    m / (1.0 - (1.0 - 2.0 * m / r0).max(0.0).sqrt())
}

fn neg_cap(m: f64, r0: f64) -> f64 {
    m / ((1.0 + 2.0 * m / r0).sqrt() - 1.0)
}

/// Capacity quadrature against closed forms plus the variational oracle,
/// and the rigidity (equality) cases of the four slice inequalities.
pub fn suite_equality() -> SuiteReport {
    let mut s = Suite::new("equality");

    // quadrature vs closed forms on a 15-point grid
    let mut worst = 0.0f64;
    for &r0 in &[0.5, 1.0, 2.0, 5.0, 10.0] {
        let c = capacity_exterior(&Profile::flat(), r0).unwrap();
        worst = worst.max(rel_err(c.value, r0));
    }
    for &(m, r0) in &[(0.5, 1.0), (0.5, 2.0), (1.0, 2.0), (1.0, 3.0), (2.0, 4.0)] {
        let c = capacity_exterior(&Profile::schwarzschild(m), r0).unwrap();
        worst = worst.max(rel_err(c.value, schw_cap(m, r0)));
    }
    for &(m, r0) in &[(0.5, 0.5), (1.0, 1.0), (1.0, 2.0), (2.0, 5.0), (2.0, 10.0)] {
        let c = capacity_exterior(&Profile::neg_schwarzschild(m), r0).unwrap();
        worst = worst.max(rel_err(c.value, neg_cap(m, r0)));
    }
    s.check(
        "capacity quadrature vs closed forms (15-point grid) <= 1e-8",
        worst <= 1e-8,
        format!("worst rel err {worst:.2e}"),
    );

    // horizon capacity equals the mass
    let mut worst_h = 0.0f64;
    for &m in &[0.5, 1.0, 2.0] {
        let c = capacity_exterior(&Profile::schwarzschild(m), 2.0 * m).unwrap();
        worst_h = worst_h.max(rel_err(c.value, m));
    }
    s.check(
        "horizon capacity equals mass <= 1e-8",
        worst_h <= 1e-8,
        format!("worst rel err {worst_h:.2e}"),
    );

    // variational oracle: above the infimum, within 1e-5 at grid 1e5
    let cases: [(Profile, f64, f64); 3] = [
        (Profile::flat(), 1.0, 1.0),
        (Profile::schwarzschild(1.0), 3.0, schw_cap(1.0, 3.0)),
        (Profile::neg_schwarzschild(1.0), 2.0, neg_cap(1.0, 2.0)),
    ];
    let mut dominates = true;
    let mut worst_o = 0.0f64;
    for (p, r0, exact) in &cases {
        let o = variational_capacity_oracle(p, *r0, 100_000).unwrap();
        dominates &= o.result.value >= exact - 1e-12;
        worst_o = worst_o.max((o.result.value - exact) / exact);
    }
    s.check(
        "variational oracle >= capacity and within 1e-5 from above",
        dominates && worst_o <= 1e-5 && worst_o >= -1e-12,
        format!("worst excess {worst_o:.2e}"),
    );

    // rigidity margins on Schwarzschild slices
    let mut worst_m = 0.0f64;
    for &m in &[0.5, 1.0, 2.0] {
        let p = Profile::schwarzschild(m);
        for k in 0..10 {
            let r0 = 2.0 * m * (1.0 + 0.35 * k as f64);
            for rep in [
                inequality::margin_mass_capacity(&p, r0).unwrap(),
                inequality::margin_energy_willmore(&p, r0).unwrap(),
                inequality::margin_mass_energy(&p, r0).unwrap(),
                inequality::margin_capacity_radius(&p, r0).unwrap(),
            ] {
                worst_m = worst_m.max(rep.normalized_margin.abs());
            }
        }
    }
    s.check(
        "Schwarzschild rigidity: four margins |nm| <= 1e-7 on 30 slices",
        worst_m <= EQ_TOL,
        format!("worst |nm| {worst_m:.2e}"),
    );

    // Hawking chain double equality on negative-mass slices
    let mut worst_c = 0.0f64;
    for &m in &[0.5, 1.0, 2.0] {
        let p = Profile::neg_schwarzschild(m);
        for &r0 in &[0.5, 2.0, 8.0] {
            let [a, b] = inequality::margin_hawking_chain(&p, r0).unwrap();
            worst_c = worst_c.max(a.normalized_margin.abs()).max(b.normalized_margin.abs());
        }
    }
    s.check(
        "negative-mass Hawking chain double equality <= 1e-7",
        worst_c <= EQ_TOL,
        format!("worst |nm| {worst_c:.2e}"),
    );

    s.finish()
}

/// Randomized inequality sweep with scale covariance, plus the curvature
/// oracle agreement on random profiles.
pub fn suite_sweep(count: usize, seed: u64) -> SuiteReport {
    let mut s = Suite::new("sweep");
    let mut rng = sweep_rng(seed);

    let mut worst_neg = f64::INFINITY;
    let mut uncertified = 0usize;
    let mut reports = 0usize;
    for i in 0..count {
        let p = random_mass_profile(&mut rng, i);
        for x in slice_grid(&p, 10) {
            for rep in all_slice_reports(&p, x).unwrap() {
                reports += 1;
                if rep.hypothesis.ok() {
                    worst_neg = worst_neg.min(rep.normalized_margin);
                } else {
                    uncertified += 1;
                }
            }
        }
    }
    s.check(
        format!("{count} random profiles x 10 slices: certified margins >= -1e-9"),
        worst_neg >= -VIOL_TOL && uncertified == 0,
        format!("min normalized margin {worst_neg:.3e} over {reports} reports"),
    );

    // scale covariance at lambda = 3 on a subsample
    let mut rng = sweep_rng(seed);
    let mut worst_scale = 0.0f64;
    for i in 0..count.min(8) {
        let p = random_mass_profile(&mut rng, i);
        let q = p.scaled(3.0);
        for x in slice_grid(&p, 4) {
            let a = all_slice_reports(&p, x).unwrap();
            let b = all_slice_reports(&q, 3.0 * x).unwrap();
            for (ra, rb) in a.iter().zip(&b) {
                worst_scale = worst_scale.max((ra.normalized_margin - rb.normalized_margin).abs());
            }
        }
    }
    s.check(
        "scale covariance under g -> 9 g: normalized margins invariant <= 1e-9",
        worst_scale <= 1e-9,
        format!("worst drift {worst_scale:.2e}"),
    );

    // curvature oracle agreement on 50 random profiles
    let mut rng = sweep_rng(seed ^ 0x5eed);
    let mut worst_r = 0.0f64;
    for i in 0..50 {
        let p = random_mass_profile(&mut rng, i);
        let (lo, _) = p.domain();
        for &off in &[0.7, 2.3] {
            let x = lo + off;
            let cf = scalar_curvature(&p, x).unwrap();
            let fd = curvature_oracle(&p, x).unwrap();
            // scale by the curvature magnitudes entering the formula
            let w = p.warp_at(x).unwrap();
            let scale = cf
                .abs()
                .max(2.0 * (1.0 + w.a1 * w.a1) / (w.a * w.a))
                .max((4.0 * w.a2 / w.a).abs());
            worst_r = worst_r.max((cf - fd).abs() / scale);
        }
    }
    s.check(
        "curvature oracle vs closed form on 50 random profiles <= 1e-6",
        worst_r <= 1e-6,
        format!("worst rel dev {worst_r:.2e}"),
    );

    s.finish()
}

/// The monotone quantity B(t), the two-ended closed forms, the mass lower
/// bound saturation, and the exhaustion/expansion-coefficient identities.
pub fn suite_harmonic() -> SuiteReport {
    let mut s = Suite::new("harmonic");

    // B(t) nondecreasing on 20 certified profiles
    let mut profiles: Vec<Profile> = vec![
        Profile::isotropic_schwarzschild(0.5).unwrap(),
        Profile::isotropic_schwarzschild(1.0).unwrap(),
        Profile::isotropic_schwarzschild(2.0).unwrap(),
    ];
    let mut rng = sweep_rng(2024);
    use rand::Rng;
    for _ in 0..5 {
        let m = 0.3 + rng.gen::<f64>();
        let q = 0.2 * rng.gen::<f64>();
        let w = 0.5 + rng.gen::<f64>();
        profiles.push(Profile::conformal_superharmonic(m, vec![(q, w)]).unwrap());
    }
    for i in 0..12 {
        profiles.push(random_mass_profile(&mut rng, i));
    }
    let mut worst_drop = 0.0f64;
    for p in &profiles {
        let h = two_ended_harmonic(p).unwrap();
        let grid = h.level_grid(0.005, 0.995, 200).unwrap();
        for w in grid.windows(2) {
            worst_drop = worst_drop.max(w[0].b - w[1].b);
        }
    }
    s.check(
        "B(t) nondecreasing on 20 certified profiles (200-point grids), slack 1e-8",
        worst_drop <= 1e-8,
        format!("worst decrease {worst_drop:.2e}"),
    );

    // two-ended Schwarzschild closed forms, all masses (E is scale invariant)
    let mut worst_e = 0.0f64;
    let mut worst_b = 0.0f64;
    for &m in &[0.5, 1.0, 2.0] {
        let p = Profile::isotropic_schwarzschild(m).unwrap();
        let h = two_ended_harmonic(&p).unwrap();
        for k in 1..=19 {
            let t = 0.05 * k as f64;
            let e = h.level_energy(t).unwrap();
            worst_e = worst_e.max((e - 4.0 * PI * t * t * (1.0 - t) * (1.0 - t)).abs());
            let b = h.b_of_t(t).unwrap();
            worst_b = worst_b.max((b - 4.0 * PI * (1.0 + t)).abs());
        }
    }
    s.check(
        "two-ended Schwarzschild: E(t) = 4 pi t^2 (1-t)^2 and B(t) = 4 pi (1+t) <= 1e-6",
        worst_e <= 1e-6 && worst_b <= 1e-6,
        format!("worst |dE| {worst_e:.2e}, |dB| {worst_b:.2e}"),
    );

    // mass lower bound saturates m = 2C on two-ended Schwarzschild
    let mut worst_sat = 0.0f64;
    let mut saturated = true;
    for &m in &[0.5, 1.0, 2.0] {
        let p = Profile::isotropic_schwarzschild(m).unwrap();
        let b = mass_lower_bound_thm34(&p).unwrap();
        worst_sat = worst_sat.max(b.report.normalized_margin.abs());
        saturated &= b.saturates_two_cee && b.report.equality;
    }
    s.check(
        "mass lower bound saturation m = 2C on two-ended Schwarzschild <= 1e-7",
        saturated && worst_sat <= EQ_TOL,
        format!("worst |nm| {worst_sat:.2e}"),
    );

    // infimum capacity equals the expansion coefficient (two-ended identity)
    let mut worst_cee = 0.0f64;
    for p in [
        Profile::isotropic_schwarzschild(1.0).unwrap(),
        Profile::conformal_superharmonic(1.0, vec![(0.3, 1.0)]).unwrap(),
    ] {
        let h = two_ended_harmonic(&p).unwrap();
        let lc = limit_capacity(&p).unwrap();
        let cee = h.expansion_coefficient_asymptotic().unwrap();
        worst_cee = worst_cee.max((cee.value - lc.result.value).abs());
    }
    s.check(
        "expansion coefficient equals infimum capacity <= 1e-8",
        worst_cee <= 1e-8,
        format!("worst |dC| {worst_cee:.2e}"),
    );

    // exhaustion: capacities non-increasing, exterior harmonics increase to
    // the two-ended one on a compact window
    let p = Profile::isotropic_schwarzschild(1.0).unwrap();
    let lc = limit_capacity(&p).unwrap();
    let h = two_ended_harmonic(&p).unwrap();
    let window = [1.0, 2.0, 4.0];
    let mut monotone_u = true;
    let mut last_gap = 0.0f64;
    let mut prev: Option<Vec<f64>> = None;
    for &(x_k, c_k) in lc.exhaustion.iter().take(26) {
        let hk = exterior_harmonic(&p, x_k).unwrap();
        let us: Vec<f64> = window.iter().map(|&x| hk.u(x).unwrap()).collect();
        if let Some(pv) = &prev {
            monotone_u &= us.iter().zip(pv).all(|(a, b)| *a >= b - 1e-12);
        }
        prev = Some(us.clone());
        if (c_k - lc.result.value).abs() <= 1e-7 {
            last_gap = window
                .iter()
                .zip(&us)
                .map(|(&x, &u)| (u - h.u(x).unwrap()).abs())
                .fold(0.0f64, f64::max);
        }
    }
    s.check(
        "exhaustion capacities non-increasing; exterior harmonics converge <= 1e-7",
        lc.monotone_nonincreasing && monotone_u && last_gap <= 1e-7 && last_gap > 0.0,
        format!("final window gap {last_gap:.2e}"),
    );

    s.finish()
}

/// Horn-exponent classification, the numeric criterion against its closed
/// form, the positive-mass witness, and the negative-mass Willmore blow-up.
pub fn suite_horn() -> SuiteReport {
    let mut s = Suite::new("horn");

    let mut classify_ok = true;
    let mut detail = String::new();
    for (b, want) in [
        (0.51, false),
        (0.6, false),
        (2.0 / 3.0, false),
        (0.7, true),
        (0.8, true),
        (1.0, true),
    ] {
        let spec = HornSpec::power(b, 1.0).unwrap();
        let (v, _) = spec.classify().unwrap();
        let got = v == Verdict::MassNonnegCertified;
        if got != want {
            classify_ok = false;
            detail.push_str(&format!("b={b} wrong; "));
        }
    }
    s.check(
        "horn classification matches sign(3b-2) for six exponents",
        classify_ok,
        if detail.is_empty() { "all verdicts correct".to_string() } else { detail },
    );

    // numeric Q vs closed form at r = 1e-6 delta
    let mut worst_q = 0.0f64;
    for &b in &[0.55, 0.8] {
        let spec = HornSpec::power(b, 1.0).unwrap();
        let r = 1e-6;
        let q = spec.criterion_q(r).unwrap();
        let closed = b * (2.0 * b - 1.0) * r.powf(3.0 * b - 2.0) / (1.0 - r.powf(2.0 * b - 1.0));
        worst_q = worst_q.max(rel_err(q, closed));
        if b > 0.75 {
            // the uncorrected power law is already within 1% here
            worst_q = worst_q.max(rel_err(q, b * (2.0 * b - 1.0) * r.powf(3.0 * b - 2.0)));
        }
    }
    s.check(
        "criterion Q at r = 1e-6 matches b(2b-1) r^{3b-2} within 1 percent",
        worst_q <= 0.01,
        format!("worst rel dev {worst_q:.2e}"),
    );

    // positive-mass witness on the 0.8-horn
    let coords: Vec<f64> = (0..14).map(|j| 0.25 * 2f64.powi(-j)).collect();
    let p = Profile::horn_capped(0.8).unwrap();
    let w = pmt_witness(&p, &coords, WitnessMode::Capacity).unwrap();
    s.check(
        "pmt witness on the r^0.8 horn: product -> 0 and mass >= -1e-9",
        w.converged_to_zero && w.mass >= -1e-9,
        format!(
            "rate {:.3}, mass {:.2e}",
            w.fitted_rate.unwrap_or(f64::NAN),
            w.mass
        ),
    );

    // negative-mass Willmore blow-up
    let p = Profile::neg_schwarzschild(1.0);
    let mut worst_w = 0.0f64;
    for &r in &[0.01, 0.5, 2.0, 10.0] {
        let got = SurfaceSlice::new(&p, r).unwrap().willmore();
        worst_w = worst_w.max(rel_err(got, 16.0 * PI * (1.0 + 2.0 / r)));
    }
    let rep = neg_schwarzschild_willmore(&p, 2.0).unwrap();
    s.check(
        "negative-mass Willmore equality and blow-up rate -1",
        worst_w <= 1e-12 && (rep.blowup_rate + 1.0).abs() <= 0.02,
        format!("worst rel dev {worst_w:.2e}, rate {:.4}", rep.blowup_rate),
    );

    s.finish()
}

/// Small-sphere expansion coefficients and the mass-capacity bound at small
/// radius; the fourth-order check is conditional.
pub fn suite_smallsphere() -> SuiteReport {
    let mut s = Suite::new("smallsphere");
    let grid = crate::smallsphere::default_r_grid();

    let p0 = Profile::conformal_gaussian(0.0).unwrap();
    let fit = willmore_expansion_fit(&p0, &grid).unwrap();
    s.check(
        "flat center: c0 = 16 pi to 1e-6 relative, c2 = c4 = 0",
        rel_err(fit.c0, 16.0 * PI) <= 1e-6 && fit.c2.abs() < 1e-7 && fit.c4.abs() < 1e-4,
        format!("c0 rel {:.2e}", rel_err(fit.c0, 16.0 * PI)),
    );

    let mut worst_c0 = 0.0f64;
    let mut worst_c2 = 0.0f64;
    let mut c4_ok = true;
    for &eps in &[0.01, 0.1] {
        let p = Profile::conformal_gaussian(eps).unwrap();
        let fit = willmore_expansion_fit(&p, &grid).unwrap();
        worst_c0 = worst_c0.max(rel_err(fit.c0, 16.0 * PI));
        worst_c2 = worst_c2.max(rel_err(fit.c2, fit.c2_predicted));
        c4_ok &= fit.c4_within_tol;
    }
    s.check(
        "c0 = 16 pi to 1e-6 and c2 = -(8 pi/3) R(p) to 1 percent (eps 0.01, 0.1)",
        worst_c0 <= 1e-6 && worst_c2 <= 0.01,
        format!("c0 rel {worst_c0:.2e}, c2 rel {worst_c2:.2e}"),
    );
    s.conditional(
        "conditional: c4 matches the symmetric-case prediction to 5 percent",
        c4_ok,
        if c4_ok { "fourth order agrees" } else { "fourth order deviates" },
    );

    let mut worst_r2 = 0.0f64;
    for &eps in &[0.01, 0.1] {
        let p = Profile::conformal_gaussian(eps).unwrap();
        let chk = mass_capacity_expansion_check(&p, &grid).unwrap();
        worst_r2 = worst_r2.max(rel_err(chk.r2_coeff_fit, chk.r2_coeff_predicted));
    }
    s.check(
        "r^2 coefficient of the mass-capacity bound = R(p)/12 to 1 percent",
        worst_r2 <= 0.01,
        format!("worst rel dev {worst_r2:.2e}"),
    );

    // m >= 0 recovery mechanism on a certified profile
    let p = Profile::conformal_superharmonic(0.0, vec![(0.05, 1.0)]).unwrap();
    let chk = mass_capacity_expansion_check(&p, &grid).unwrap();
    let mut shrink_ok = true;
    for &r in &[0.02, 0.01, 0.005] {
        let scoord = r; // geodesic radius ~ coordinate for psi near 1
        let cap = capacity_exterior(&p, scoord).unwrap().value;
        let w = SurfaceSlice::new(&p, scoord).unwrap().willmore();
        let val = cap * (1.0 - (w / (16.0 * PI)).sqrt());
        shrink_ok &= val >= -1e-9;
    }
    s.check(
        "certified center: direction holds and the shrinking bound stays >= -1e-9",
        chk.direction_ok == Some(true) && shrink_ok,
        format!("mass {:.4e}", chk.mass),
    );

    s.finish()
}

/// All suites in the order they appear in the verification table.
pub fn run_suite(name: &str, count: usize, seed: u64) -> Option<SuiteReport> {
    match name {
        "equality" => Some(suite_equality()),
        "sweep" => Some(suite_sweep(count, seed)),
        "horn" => Some(suite_horn()),
        "smallsphere" => Some(suite_smallsphere()),
        "harmonic" => Some(suite_harmonic()),
        _ => None,
    }
}

pub const SUITES: [&str; 5] = ["equality", "sweep", "horn", "smallsphere", "harmonic"];
