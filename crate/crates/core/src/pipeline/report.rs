use serde::{Deserialize, Serialize};

use super::{CoincidenceReport, PipelineConfig};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub decompose_s: f64,
    pub teleport_s: f64,
    pub reconstruct_s: f64,
    pub write_s: f64,
}

/// Single JSON document describing one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportReport {
    pub schema: u32,
    pub engine_version: String,
    pub config: PipelineConfig,
    pub width: usize,
    pub height: usize,
    /// Scored bits (equals `coincidence.total_bits`).
    pub bits_teleported: u64,
    /// Bit pairs handed to the two parallel teleport instances.
    pub pairs_teleported: u64,
    /// Padding qubits teleported but never scored.
    pub ancillas: u64,
    pub min_fidelity: f64,
    pub coincidence: CoincidenceReport,
    pub output_identical: bool,
    pub wall_time_s: f64,
    pub stage_timings: StageTimings,
}

impl TeleportReport {
    /// Copy with every timing field zeroed, for run-to-run comparison.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_time_s: 0.0,
            stage_timings: StageTimings::default(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Field paths whose values differ, ignoring timing.
    pub fn diff(&self, other: &TeleportReport) -> Vec<String> {
        let a = serde_json::to_value(self.without_timing()).expect("report serializes");
        let b = serde_json::to_value(other.without_timing()).expect("report serializes");
        let mut out = Vec::new();
        diff_values("", &a, &b, &mut out);
        out
    }
}

fn diff_values(path: &str, a: &serde_json::Value, b: &serde_json::Value, out: &mut Vec<String>) {
    use serde_json::Value;
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let mut keys: Vec<_> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                let p = format!("{path}/{k}");
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) => diff_values(&p, u, v, out),
                    _ => out.push(p),
                }
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                diff_values(&format!("{path}/{i}"), u, v, out);
            }
        }
        _ if a != b => out.push(if path.is_empty() {
            "/".into()
        } else {
            path.into()
        }),
        _ => {}
    }
}
