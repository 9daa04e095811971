use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Seed and tolerance context for floating-point results.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
}

/// Everything one invocation produced. Contains no timestamps or paths beyond
/// the echoed arguments, so identical inputs give byte-identical reports.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub pass: bool,
    pub summary: String,
    pub provenance: Provenance,
    pub results: Value,
}

/// SHA-256 over the arguments (NUL-separated) followed by the config bytes.
pub fn inputs_digest(args: &[String], config: &[u8]) -> String {
    let mut h = Sha256::new();
    for a in args {
        h.update(a.as_bytes());
        h.update([0u8]);
    }
    h.update(config);
    hex::encode(h.finalize())
}
