//! Browser bindings for the masscap laboratory: JSON-in/JSON-out wrappers
//! around the report, margin-curve, and level-set operations so a static page
//! can explore profiles interactively.
//!
//! Build with `wasm-pack build --target web` and serve `www/`.

use wasm_bindgen::prelude::*;

use masscap::error::Result;
use masscap::harmonic::two_ended_harmonic;
use masscap::profile::ProfileSpec;
use masscap::report::{build_report, fmt_f64};
use masscap::sweep::slice_grid;

fn err_json(e: impl std::fmt::Display) -> String {
    format!("{{\"error\":{}}}", serde_json::Value::String(e.to_string()))
}

/// Full inequality report for one profile and slice, as the same JSON schema
/// the CLI emits.
#[wasm_bindgen]
pub fn inequality_report(profile_json: &str, slice: f64) -> String {
    match report_impl(profile_json, slice) {
        Ok(s) => s,
        Err(e) => err_json(e),
    }
}

fn report_impl(profile_json: &str, slice: f64) -> Result<String> {
    let spec = ProfileSpec::parse(profile_json)?;
    let p = spec.build()?;
    Ok(build_report(&spec, &p, &[slice])?.to_json())
}

/// Normalized margins of every slice inequality over a slice grid:
/// `{"slices":[...],"curves":[{"name":...,"margins":[...]},...]}`.
#[wasm_bindgen]
pub fn margin_curves(profile_json: &str, n_slices: usize) -> String {
    match margin_impl(profile_json, n_slices.clamp(4, 200)) {
        Ok(s) => s,
        Err(e) => err_json(e),
    }
}

fn margin_impl(profile_json: &str, n: usize) -> Result<String> {
    let p = ProfileSpec::parse(profile_json)?.build()?;
    let slices = slice_grid(&p, n);
    let mut names: Vec<&'static str> = Vec::new();
    let mut table: Vec<Vec<Option<f64>>> = Vec::new();
    for &x in &slices {
        let reports = masscap::inequality::all_slice_reports(&p, x)?;
        for r in &reports {
            if !names.contains(&r.name) {
                names.push(r.name);
                table.push(vec![None; slices.len()]);
            }
        }
        for r in &reports {
            let row = names.iter().position(|n| *n == r.name).unwrap();
            let col = slices.iter().position(|s| *s == x).unwrap();
            table[row][col] = Some(r.normalized_margin);
        }
    }
    let mut out = String::from("{\"slices\":[");
    for (i, x) in slices.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_f64(*x));
    }
    out.push_str("],\"curves\":[");
    for (row, name) in names.iter().enumerate() {
        if row > 0 {
            out.push(',');
        }
        out.push_str(&format!("{{\"name\":\"{name}\",\"margins\":["));
        for (col, v) in table[row].iter().enumerate() {
            if col > 0 {
                out.push(',');
            }
            match v {
                Some(x) => out.push_str(&fmt_f64(*x)),
                None => out.push_str("null"),
            }
        }
        out.push_str("]}");
    }
    out.push_str("]}");
    Ok(out)
}

/// Level-set data of the two-ended (or boundary) harmonic function:
/// `{"t":[...],"energy":[...],"b":[...]}` for the B(t) monotonicity plot.
#[wasm_bindgen]
pub fn level_set_curves(profile_json: &str, n_points: usize) -> String {
    match level_impl(profile_json, n_points.clamp(8, 400)) {
        Ok(s) => s,
        Err(e) => err_json(e),
    }
}

fn level_impl(profile_json: &str, n: usize) -> Result<String> {
    let p = ProfileSpec::parse(profile_json)?.build()?;
    let h = two_ended_harmonic(&p)?;
    let grid = h.level_grid(0.01, 0.99, n)?;
    let mut t = String::new();
    let mut e = String::new();
    let mut b = String::new();
    for (i, lp) in grid.iter().enumerate() {
        if i > 0 {
            t.push(',');
            e.push(',');
            b.push(',');
        }
        t.push_str(&fmt_f64(lp.t));
        e.push_str(&fmt_f64(lp.energy));
        b.push_str(&fmt_f64(lp.b));
    }
    Ok(format!("{{\"t\":[{t}],\"energy\":[{e}],\"b\":[{b}]}}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_wrapper_round_trips() {
        let json = inequality_report(r#"{"family":"schwarzschild","params":{"mass":1.0}}"#, 3.0);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!((v["mass"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        assert!(v["reports"].as_array().unwrap().len() >= 4);
    }

    #[test]
    fn margin_curves_shape() {
        let json = margin_curves(r#"{"family":"mass-profile","params":{"mass":0.8}}"#, 6);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["slices"].as_array().unwrap().len(), 6);
        assert!(!v["curves"].as_array().unwrap().is_empty());
    }

    #[test]
    fn level_curves_shape_and_errors() {
        let json = level_set_curves(r#"{"family":"conformal","params":{"kind":"isotropic","mass":1.0}}"#, 12);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["t"].as_array().unwrap().len(), 12);
        let bad = level_set_curves(r#"{"family":"cylinder"}"#, 12);
        let v: serde_json::Value = serde_json::from_str(&bad).unwrap();
        assert!(v.get("error").is_some());
    }
}
