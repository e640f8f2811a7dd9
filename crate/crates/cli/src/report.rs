//! Report envelope: command echo, config hash, verdicts, witnesses, and
//! deterministic work counters. Reports are byte-identical for identical
//! (config, seed) regardless of thread count; wall time goes to stderr only.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub fn config_hash(config: &Value) -> String {
    let bytes = serde_json::to_vec(config).expect("config serializes");
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(16);
    for b in digest.iter().take(8) {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

pub fn build_report(
    command: &str,
    config: Value,
    verdicts: Value,
    witnesses: Value,
    counters: Value,
) -> Value {
    let hash = config_hash(&config);
    let mut obj = Map::new();
    obj.insert("command".into(), json!(command));
    obj.insert("config".into(), config);
    obj.insert("config_hash".into(), json!(hash));
    obj.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    obj.insert("verdicts".into(), verdicts);
    obj.insert("witnesses".into(), witnesses);
    // Deterministic work counters; wall-clock time is reported on stderr so
    // reports stay byte-reproducible.
    obj.insert("timings".into(), counters);
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_sensitive() {
        let c1 = json!({"a": 1, "b": "x"});
        let c2 = json!({"a": 2, "b": "x"});
        assert_eq!(config_hash(&c1), config_hash(&c1));
        assert_ne!(config_hash(&c1), config_hash(&c2));
    }

    #[test]
    fn report_shape() {
        let r = build_report("spectrum", json!({"l": 3}), json!("ok"), json!([]), json!({}));
        assert_eq!(r["command"], "spectrum");
        assert!(r["config_hash"].as_str().unwrap().len() == 16);
        assert!(r.get("timings").is_some());
    }
}
