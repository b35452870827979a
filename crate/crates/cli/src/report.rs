//! Machine-readable result records.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub quantity: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Report {
    pub fn new(quantity: &str, value: f64, config: Value) -> Self {
        Self {
            quantity: quantity.to_string(),
            value,
            oracle: None,
            abs_error: None,
            iterations: None,
            residual: None,
            config,
            timestamp: None,
        }
    }

    pub fn with_oracle(mut self, oracle: f64) -> Self {
        self.abs_error = Some((self.value - oracle).abs());
        self.oracle = Some(oracle);
        self
    }

    /// Divides every reported value by `ln 2`.
    pub fn in_bits(mut self) -> Self {
        let ln2 = std::f64::consts::LN_2;
        self.value /= ln2;
        self.oracle = self.oracle.map(|v| v / ln2);
        self.abs_error = self.abs_error.map(|v| v / ln2);
        self
    }

    pub fn stamped(mut self, enabled: bool) -> Self {
        self.timestamp = enabled.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn oracle_sets_abs_error() {
        let r = Report::new("kl", 1.0, json!({})).with_oracle(0.75);
        assert_eq!(r.abs_error, Some(0.25));
    }

    #[test]
    fn bits_scale_values() {
        let r = Report::new("x", std::f64::consts::LN_2, json!({}))
            .with_oracle(0.0)
            .in_bits();
        assert!((r.value - 1.0).abs() < 1e-15);
        assert!((r.abs_error.unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn optional_fields_omitted() {
        let text = Report::new("x", 0.5, json!({"a": 1})).stamped(false).to_json();
        assert!(!text.contains("oracle"));
        assert!(!text.contains("timestamp"));
        assert!(text.contains("\"config\""));
    }
}
