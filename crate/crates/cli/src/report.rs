//! JSON envelopes and the `weights.json` file format.

use std::path::Path;

use anyhow::Context;
use dxm_core::numeric::round_significant;
use dxm_core::weightforge::ConstructedWeights;
use dxm_core::{DomainSpec, WeightSequence, SCHEMA_VERSION};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Significant digits of every float in a report.
pub const DIGITS: usize = 15;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: &'static str,
    report: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampling: Option<&'a DomainSpec>,
    seed: Option<u64>,
    #[serde(flatten)]
    payload: &'a T,
}

/// Rounds every float inside `v` to [`DIGITS`] significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if let Some(r) = serde_json::Number::from_f64(round_significant(x, DIGITS)) {
                *n = r;
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_floats),
        Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// `payload` wrapped with the schema version, report kind, sampling
/// resolution and seed.
pub fn envelope<T: Serialize>(
    report: &str,
    sampling: Option<&DomainSpec>,
    seed: Option<u64>,
    payload: &T,
) -> anyhow::Result<Value> {
    let mut v = serde_json::to_value(Envelope {
        schema_version: SCHEMA_VERSION,
        report,
        sampling,
        seed,
        payload,
    })?;
    round_floats(&mut v);
    Ok(v)
}

pub fn print_json(v: &Value) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Contents of `weights.json`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsFile {
    pub name: String,
    pub log_m: Vec<f64>,
    #[serde(default)]
    pub provenance: Value,
}

impl WeightsFile {
    pub fn from_construction(cw: &ConstructedWeights) -> anyhow::Result<Self> {
        Ok(WeightsFile {
            name: cw.name.clone(),
            log_m: cw.log_m.clone(),
            provenance: serde_json::to_value(&cw.provenance)?,
        })
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing weight file {}", path.display()))
    }

    /// Written at full precision so a reread weight verifies exactly as built.
    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }

    pub fn to_weight(&self) -> anyhow::Result<WeightSequence> {
        Ok(WeightSequence::table(self.name.clone(), self.log_m.clone())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_reaches_nested_values() {
        let mut v = serde_json::json!({"a": [0.1 + 0.2, {"b": 1.0 / 3.0}], "n": 3});
        round_floats(&mut v);
        assert_eq!(v["a"][0], serde_json::json!(0.3));
        assert_eq!(v["a"][1]["b"], serde_json::json!(0.333333333333333));
        assert_eq!(v["n"], serde_json::json!(3));
    }

    #[test]
    fn envelope_carries_version() {
        let v = envelope("x", Some(&DomainSpec::disc()), Some(7), &serde_json::json!({"k": 1})).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["sampling"]["boundary_samples"], 2048);
        assert_eq!(v["seed"], 7);
        assert_eq!(v["k"], 1);
    }
}
