//! Deterministic serialization: CSV with 12 significant digits and a fixed
//! column order, JSON through serde's shortest-round-trip float encoding.

use serde::Serialize;

/// 12 significant digits; identical inputs yield byte-identical text.
pub fn csv_float(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v }; // fold -0.0
    format!("{v:.11e}")
}

pub fn csv_cell(v: Option<f64>) -> String {
    v.map(csv_float).unwrap_or_default()
}

pub fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub validate: f64,
    pub engine_equivalence: f64,
    pub excess_noise_identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            validate: gwalk_core::DEFAULT_VALIDATION_TOL,
            engine_equivalence: 1e-9,
            excess_noise_identity: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct Metadata {
    pub engine: String,
    pub tolerances: Tolerances,
    pub version: String,
}

impl Metadata {
    pub fn new(engine: &str) -> Self {
        Self {
            engine: engine.to_string(),
            tolerances: Tolerances::default(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Document<C: Serialize, R: Serialize> {
    pub config: C,
    pub metadata: Metadata,
    pub rows: Vec<R>,
}

pub fn json_document<C: Serialize, R: Serialize>(doc: &Document<C, R>) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("serializable document");
    text.push('\n');
    text
}
