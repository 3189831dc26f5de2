//! Runs the reference maps end to end and compares with their expected
//! verdicts.

use std::path::Path;

use anyhow::{bail, Context};
use dxm_core::weightforge::{
    check_construction, construct_endomorphism_weights, construct_refuting_weights, expanding_point,
};
use dxm_core::{full_verdict, DomainSpec, VerdictOptions, WeightSequence};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::mapspec::parse_map;

pub const BUILTIN: &str = include_str!("../fixtures/reference_maps.json");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub schema_version: String,
    pub fixtures: Vec<Fixture>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub name: String,
    pub map: String,
    #[serde(default = "default_weight")]
    pub weight: String,
    pub expect: Expect,
    #[serde(default)]
    pub construct: Option<Construct>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_weight() -> String {
    "n!^2".into()
}

fn default_tolerance() -> f64 {
    1e-6
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    pub result: String,
    pub rule: Option<String>,
    pub label: Option<String>,
    pub q: Option<f64>,
    pub b: Option<[f64; 2]>,
    pub abs_derivative: Option<f64>,
    pub n1: Option<usize>,
    pub family_value: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Construct {
    /// `thm3` (endomorphism) or `thm5` (refutation).
    pub kind: String,
    pub nmax: usize,
}

#[derive(Debug, Serialize)]
pub struct Row {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub rule: Option<String>,
    pub ok: bool,
    pub mismatches: Vec<String>,
    pub detail: String,
}

pub fn load(path: Option<&Path>) -> anyhow::Result<FixtureFile> {
    let (text, origin) = match path {
        Some(p) => (
            std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            p.display().to_string(),
        ),
        None => (BUILTIN.to_string(), "built-in fixtures".into()),
    };
    let file: FixtureFile = serde_json::from_str(&text).with_context(|| format!("parsing {origin}"))?;
    if file.schema_version != dxm_core::SCHEMA_VERSION {
        bail!(
            "{origin}: schema version {} is not {}",
            file.schema_version,
            dxm_core::SCHEMA_VERSION
        );
    }
    if file.fixtures.is_empty() {
        bail!("{origin}: no fixtures");
    }
    Ok(file)
}

fn num(v: &Value) -> Option<f64> {
    v.as_f64()
}

pub fn run_fixture(f: &Fixture, domain: DomainSpec) -> anyhow::Result<Row> {
    let phi = parse_map(&f.map, domain).with_context(|| format!("fixture {}", f.name))?;
    let w = WeightSequence::from_name(&f.weight)?;
    let verdict = full_verdict(&phi, &w, &VerdictOptions::default())?;
    let v = serde_json::to_value(&verdict)?;
    let got = v["result"].as_str().unwrap_or_default().to_string();
    let rule = v["rule"].as_str().map(str::to_string);
    let e = &f.expect;
    let tol = f.tolerance;
    let mut mismatches = Vec::new();
    let mut close = |what: &str, want: Option<f64>, have: Option<f64>| {
        if let Some(want) = want {
            if !have.is_some_and(|h| (h - want).abs() <= tol) {
                mismatches.push(format!("{what}: expected {want}, got {have:?}"));
            }
        }
    };
    let cert = &v["certificate"];
    close("q", e.q, num(&cert["q"]));
    close("abs_derivative", e.abs_derivative, num(&cert["abs_derivative"]));
    close("family value", e.family_value, num(&v["family"]["value"]));
    if let Some([re, im]) = e.b {
        close("Re b", Some(re), num(&cert["b"][0]));
        close("Im b", Some(im), num(&cert["b"][1]));
    }
    if got != e.result {
        mismatches.push(format!("result: expected {}, got {got}", e.result));
    }
    if e.rule.is_some() && e.rule != rule {
        mismatches.push(format!("rule: expected {:?}, got {rule:?}", e.rule));
    }
    if e.label.is_some() && e.label != verdict.label {
        mismatches.push(format!("label: expected {:?}, got {:?}", e.label, verdict.label));
    }
    let n1 = verdict.family.as_ref().and_then(|fam| fam.n1);
    if e.n1.is_some() && e.n1 != n1 {
        mismatches.push(format!("N1: expected {:?}, got {n1:?}", e.n1));
    }

    let mut detail = Vec::new();
    if let Some(label) = &verdict.label {
        detail.push(format!("label {label}"));
    }
    if let Some(n1) = n1 {
        detail.push(format!("N1 = {n1}"));
    }
    if let Some(c) = &f.construct {
        let cw = match c.kind.as_str() {
            "thm3" => construct_endomorphism_weights(&phi, c.nmax),
            "thm5" => match expanding_point(&phi)? {
                Some(b) => construct_refuting_weights(&phi, b, c.nmax),
                None => bail!("fixture {}: no expanding boundary point for a refutation", f.name),
            },
            other => bail!("fixture {}: unknown construction `{other}`", f.name),
        };
        match cw.and_then(|cw| check_construction(&cw, &phi)) {
            Ok(report) if report.ok => detail.push(format!("{} construction verified to n = {}", c.kind, c.nmax)),
            Ok(report) => mismatches.push(format!("{} construction: {} failed checks", c.kind, report.failures)),
            Err(err) => mismatches.push(format!("{} construction: {err}", c.kind)),
        }
    }

    Ok(Row {
        name: f.name.clone(),
        expected: e.result.clone(),
        got,
        rule,
        ok: mismatches.is_empty(),
        mismatches,
        detail: detail.join("; "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_fixtures_parse() {
        let file = load(None).unwrap();
        assert_eq!(file.fixtures.len(), 7);
        for f in &file.fixtures {
            parse_map(&f.map, DomainSpec::disc()).unwrap();
        }
    }
}
