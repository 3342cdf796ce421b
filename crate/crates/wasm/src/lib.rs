//! Browser bindings: the three interactive operations of the demo page
//! (check an algebra, recover an equation, run the bundled corpus), all as
//! string-in / JSON-string-out functions so the page needs no framework.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use liesym::scalar::Rat;
use liesym::{corpus, monge, parse};

fn parse_assignments(src: &str) -> Result<BTreeMap<String, Rat>, String> {
    let mut out = BTreeMap::new();
    for item in src.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| format!("expected NAME=VALUE, got '{item}'"))?;
        let rat = parse::parse_poly(value.trim())
            .map_err(|e| e.to_string())?
            .as_constant()
            .ok_or_else(|| format!("'{value}' is not a rational value"))?;
        out.insert(name.trim().to_string(), rat);
    }
    Ok(out)
}

fn err_json(msg: impl std::fmt::Display) -> String {
    json!({ "ok": false, "error": msg.to_string() }).to_string()
}

fn report_json(report: &liesym::Report) -> Value {
    serde_json::to_value(report).expect("serializable report")
}

/// Full structural check of an `.alg` source; `assignments` is a
/// comma-separated list like `l = 2, n1 = 0`.
#[wasm_bindgen]
pub fn check_algebra(source: &str, assignments: &str) -> String {
    let file = match parse::parse_algebra(source) {
        Ok(f) => f,
        Err(e) => return err_json(e),
    };
    let sample = match parse_assignments(assignments) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    match corpus::check_algebra(&file, &sample) {
        Ok(report) => json!({
            "ok": true,
            "pass": report.pass(),
            "report": report_json(&report),
        })
        .to_string(),
        Err(e) => err_json(e),
    }
}

/// Run the recovery pipeline on an `.alg` source with a frame line and a
/// `.map` chart source; returns every stage plus the normalized equation.
#[wasm_bindgen]
pub fn recover_equation(algebra: &str, chart: &str) -> String {
    let file = match parse::parse_algebra(algebra) {
        Ok(f) => f,
        Err(e) => return err_json(e),
    };
    let chart = match parse::parse_chart(chart) {
        Ok(c) => c,
        Err(e) => return err_json(e),
    };
    let out = match monge::recover(&file, &chart) {
        Ok(o) => o,
        Err(e) => return err_json(e),
    };
    let frame: Vec<Value> = out
        .roles()
        .iter()
        .map(|(role, idx)| json!({ "role": role, "field": out.frame.field_string(*idx) }))
        .collect();
    let coframe: Vec<Value> = out
        .roles()
        .iter()
        .map(|(role, idx)| {
            json!({ "role": format!("{role}*"), "form": out.coframe[*idx as usize - 1].to_string() })
        })
        .collect();
    json!({
        "ok": true,
        "pass": true,
        "class": out.frame.class,
        "admissibility": report_json(&out.admissibility),
        "frame": frame,
        "coframe": coframe,
        "omega_coordinates": out.omega_coord.to_string(),
        "theta_coordinates": out.theta_coord.to_string(),
        "omega_chart": out.omega_chart.to_string(),
        "theta_chart": out.theta_chart.to_string(),
        "equation": out.pde.display(),
    })
    .to_string()
}

/// Verify every bundled corpus entry at its documented parameter samples.
#[wasm_bindgen]
pub fn corpus_report() -> String {
    let mut records = Vec::new();
    let mut pass = true;
    for entry in corpus::bundled() {
        for sample in corpus::entry_samples(&entry.file) {
            match corpus::verify_entry(&entry.file, &sample) {
                Ok(report) => {
                    pass &= report.pass();
                    records.push(json!({
                        "subject": report.subject,
                        "pass": report.pass(),
                        "checks": report.checks,
                    }));
                }
                Err(e) => return err_json(e),
            }
        }
    }
    json!({ "ok": true, "pass": pass, "records": records }).to_string()
}

/// Preloadable sources for the demo page.
#[wasm_bindgen]
pub fn bundled_examples() -> String {
    let nilp_alg = include_str!("../../../data/nilpotent4.alg");
    let nilp_map = include_str!("../../../data/nilpotent4.map");
    let t3_entries: Vec<Value> = corpus::CORPUS_SOURCES
        .iter()
        .map(|(name, src)| json!({ "name": name, "source": src }))
        .collect();
    json!({
        "recover_algebra": nilp_alg,
        "recover_chart": nilp_map,
        "corpus": t3_entries,
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_round_trip() {
        let out = check_algebra("format 1\nname h3\ndim 3\n[e2, e3] = e1\n", "");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["ok"], true);
        assert_eq!(v["pass"], true);
        let checks = v["report"]["checks"].as_array().unwrap();
        assert!(checks.iter().any(|c| c["name"] == "contact"));
    }

    #[test]
    fn check_with_parameters() {
        let src = "format 1\ndim 4\nparam l != 0, 1\nd e1* = l e1*^e4*\nd e2* = (1-l) e2*^e4*\nd e3* = e1*^e2* + e3*^e4*\nd e4* = 0\n";
        let out = check_algebra(src, "l = 2");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["ok"], true, "{out}");
        assert_eq!(v["pass"], true);
    }

    #[test]
    fn parse_errors_are_reported() {
        let out = check_algebra("dim 3\n", "");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["ok"], false);
        assert!(v["error"].as_str().unwrap().contains("format"));
    }

    #[test]
    fn recovery_equation_matches() {
        let ex: Value = serde_json::from_str(&bundled_examples()).unwrap();
        let out = recover_equation(
            ex["recover_algebra"].as_str().unwrap(),
            ex["recover_chart"].as_str().unwrap(),
        );
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["ok"], true, "{out}");
        assert_eq!(v["equation"], "u11 + u22 - u2 = 0");
        assert_eq!(v["omega_chart"], "dp1^dq1 + dp2^dq2");
    }

    #[test]
    fn corpus_flags_the_documented_defect() {
        let v: Value = serde_json::from_str(&corpus_report()).unwrap();
        assert_eq!(v["ok"], true);
        assert_eq!(v["pass"], false);
        let failing: Vec<&str> = v["records"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|r| r["pass"] == false)
            .map(|r| r["subject"].as_str().unwrap())
            .collect();
        assert_eq!(failing, vec!["T3-1d-neg", "T3-1d-pos"]);
    }
}
