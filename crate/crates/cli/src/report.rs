//! Report assembly: every JSON report is `{manifest, result}` with sorted keys,
//! floats rounded to 12 significant digits and histograms in value order.

use std::collections::BTreeMap;

use adelic_core::EmpiricalDist;
use serde_json::{json, Map, Value};

use crate::input::PolyFile;

pub struct Manifest {
    pub command: &'static str,
    pub flags: BTreeMap<&'static str, Value>,
    pub seed: Option<u64>,
    pub inputs: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(command: &'static str, input: &PolyFile) -> Self {
        Manifest {
            command,
            flags: BTreeMap::new(),
            seed: None,
            inputs: vec![(input.path.clone(), input.sha256.clone())],
        }
    }

    pub fn flag(mut self, name: &'static str, value: impl Into<Value>) -> Self {
        self.flags.insert(name, value.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let flags: Map<String, Value> = self
            .flags
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        let inputs: Vec<Value> = self
            .inputs
            .iter()
            .map(|(path, sha)| json!({ "path": path, "sha256": sha }))
            .collect();
        json!({
            "command": self.command,
            "flags": flags,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
            "timestamp": timestamp(),
            "inputs": inputs,
        })
    }
}

/// Seconds since the epoch, taken from `SOURCE_DATE_EPOCH` when set.
fn timestamp() -> Value {
    if let Ok(v) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(t) = v.trim().parse::<u64>() {
            return json!(t);
        }
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| json!(d.as_secs()))
        .unwrap_or(Value::Null)
}

/// Rounds to 12 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    json!(round12(x))
}

pub fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn render(manifest: &Manifest, result: Value) -> String {
    let report = json!({ "manifest": manifest.to_json(), "result": result });
    let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
    out.push('\n');
    out
}

/// Exact-value histogram as `[[value, count], ..]`.
pub fn histogram(dist: &EmpiricalDist) -> Vec<(String, u64)> {
    dist.counts
        .iter()
        .map(|(v, &c)| (v.to_string(), c))
        .collect()
}

/// Histogram of real samples, binned by their 12-digit rendering.
pub fn float_histogram(samples: &[f64]) -> Vec<(String, u64)> {
    let mut sorted: Vec<f64> = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<(String, u64)> = Vec::new();
    for x in sorted {
        let key = if x.is_finite() {
            round12(x).to_string()
        } else {
            x.to_string()
        };
        match out.last_mut() {
            Some((k, c)) if *k == key => *c += 1,
            _ => out.push((key, 1)),
        }
    }
    out
}

pub fn histogram_json(h: &[(String, u64)]) -> Value {
    Value::Array(h.iter().map(|(v, c)| json!([v, c])).collect())
}

/// CSV body preceded by a single `#` line holding the manifest.
pub fn render_csv(manifest: &Manifest, header: &str, rows: &[Vec<String>]) -> String {
    let mut out = format!("# {}\n{header}\n", manifest.to_json());
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
