//! Machine-readable output schema.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FactorReport {
    pub input: String,
    pub unit: String,
    pub factors: Vec<String>,
    pub complete: bool,
    pub diagnostics: DiagnosticsReport,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DiagnosticsReport {
    pub precision_bits: u64,
    #[serde(rename = "L")]
    pub l: u64,
    pub residuals: Vec<f64>,
    pub seed: u64,
    pub time_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchTrialReport {
    pub trial: u64,
    pub success: bool,
    pub verified_exact: bool,
    pub complete: bool,
    pub factors_found: usize,
    pub factors_expected: usize,
    pub time_ms: u64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub trials: Vec<BenchTrialReport>,
    pub success_rate: f64,
    pub median_time_ms: u64,
}
