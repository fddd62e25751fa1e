//! Deterministic report serialization: JSON and CSV with all numeric output
//! at 17 significant digits (round-trip exact for doubles).

use crate::error::Result;
use crate::inequality::InequalityReport;
use crate::profile::{Profile, ProfileSpec};
use crate::surface::SurfaceSlice;
use crate::{capacity, mass};

/// 17-significant-digit fixed formatting; parses back to the identical double.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "null".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "1e999".into() } else { "-1e999".into() };
    }
    format!("{x:.16e}")
}

/// Per-slice quantity block of a profile report.
#[derive(Debug, Clone)]
pub struct SliceQuantities {
    pub slice: f64,
    pub capacity: f64,
    pub capacity_err: f64,
    pub willmore: f64,
    pub hawking_mass: f64,
    pub area_radius: f64,
}

/// Everything `report` emits for one profile.
#[derive(Debug, Clone)]
pub struct ProfileReport {
    pub spec: ProfileSpec,
    pub mass: f64,
    pub quantities: Vec<SliceQuantities>,
    pub reports: Vec<InequalityReport>,
}

pub fn build_report(spec: &ProfileSpec, profile: &Profile, slices: &[f64]) -> Result<ProfileReport> {
    let mass = mass::adm_mass(profile)?.value;
    let mut quantities = Vec::with_capacity(slices.len());
    let mut reports = Vec::new();
    for &x in slices {
        let s = SurfaceSlice::new(profile, x)?;
        let c = capacity::capacity_exterior(profile, x)?;
        quantities.push(SliceQuantities {
            slice: x,
            capacity: c.value,
            capacity_err: c.error_estimate,
            willmore: s.willmore(),
            hawking_mass: s.hawking_mass(),
            area_radius: s.area_radius(),
        });
        reports.extend(crate::inequality::all_slice_reports(profile, x)?);
    }
    Ok(ProfileReport { spec: spec.clone(), mass, quantities, reports })
}

fn push_ineq_json(out: &mut String, r: &InequalityReport) {
    out.push_str(&format!(
        "{{\"name\":\"{}\",\"lhs\":{},\"rhs\":{},\"margin\":{},\"normalized_margin\":{},\"equality\":{},\"hypothesis_ok\":{}}}",
        r.name,
        fmt_f64(r.lhs),
        fmt_f64(r.rhs),
        fmt_f64(r.margin),
        fmt_f64(r.normalized_margin),
        r.equality,
        r.hypothesis.ok(),
    ));
}

impl ProfileReport {
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\"profile\":");
        out.push_str(&serde_json::to_string(&self.spec).unwrap_or_else(|_| "null".into()));
        out.push_str(",\"mass\":");
        out.push_str(&fmt_f64(self.mass));
        out.push_str(",\"quantities\":[");
        for (i, q) in self.quantities.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "{{\"slice\":{},\"capacity\":{},\"capacity_err\":{},\"willmore\":{},\"hawking_mass\":{},\"area_radius\":{}}}",
                fmt_f64(q.slice),
                fmt_f64(q.capacity),
                fmt_f64(q.capacity_err),
                fmt_f64(q.willmore),
                fmt_f64(q.hawking_mass),
                fmt_f64(q.area_radius),
            ));
        }
        out.push_str("],\"reports\":[");
        for (i, r) in self.reports.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            push_ineq_json(&mut out, r);
        }
        out.push_str("]}");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("slice,name,lhs,rhs,margin,normalized_margin,equality,hypothesis_ok\n");
        let mut per_slice = self.reports.iter();
        for q in &self.quantities {
            // reports were generated slice by slice in order
            let count = self.reports.len() / self.quantities.len().max(1);
            for r in per_slice.by_ref().take(count) {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    fmt_f64(q.slice),
                    r.name,
                    fmt_f64(r.lhs),
                    fmt_f64(r.rhs),
                    fmt_f64(r.margin),
                    fmt_f64(r.normalized_margin),
                    r.equality,
                    r.hypothesis.ok(),
                ));
            }
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("mass: {:.12}\n", self.mass));
        for q in &self.quantities {
            out.push_str(&format!(
                "slice {:>10.6}: capacity {:.12} (err {:.2e}), W {:.12}, m_H {:.12}, r_Sigma {:.12}\n",
                q.slice, q.capacity, q.capacity_err, q.willmore, q.hawking_mass, q.area_radius
            ));
        }
        out.push_str(&format!(
            "{:<24} {:>22} {:>22} {:>13} {:>9} {:>6}\n",
            "inequality", "lhs", "rhs", "margin", "equality", "hyp"
        ));
        for r in &self.reports {
            out.push_str(&format!(
                "{:<24} {:>22.15e} {:>22.15e} {:>13.3e} {:>9} {:>6}\n",
                r.name,
                r.lhs,
                r.rhs,
                r.normalized_margin,
                r.equality,
                r.hypothesis.ok()
            ));
        }
        out
    }
}

/// A plottable x-y series with a name, exported as two-column CSV.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{}\n", self.x_label, self.y_label);
        for (x, y) in &self.points {
            out.push_str(&fmt_f64(*x));
            out.push(',');
            out.push_str(&fmt_f64(*y));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_formatting_round_trips() {
        for x in [1.0, -0.333333333333333314829616256247, 1e-300, 2.5e17, std::f64::consts::PI] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn report_json_is_valid_and_schema_shaped() {
        let spec = ProfileSpec::parse(r#"{"family":"schwarzschild","params":{"mass":1.0}}"#).unwrap();
        let p = spec.build().unwrap();
        let rep = build_report(&spec, &p, &[3.0]).unwrap();
        let json = rep.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v.get("profile").is_some());
        assert!((v["mass"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        let reports = v["reports"].as_array().unwrap();
        assert!(!reports.is_empty());
        for r in reports {
            for key in ["name", "lhs", "rhs", "margin", "normalized_margin", "equality", "hypothesis_ok"] {
                assert!(r.get(key).is_some(), "missing {key}");
            }
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let spec = ProfileSpec::parse(r#"{"family":"flat"}"#).unwrap();
        let p = spec.build().unwrap();
        let rep = build_report(&spec, &p, &[1.0, 2.0]).unwrap();
        let csv = rep.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("slice,name"));
        assert!(lines.len() > 4);
    }
}
