//! Residual reports: the JSON output unit of every verification run.

use serde::{Deserialize, Serialize};

/// Schema version of the report format.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRecord {
    /// Sample parameters (μ coefficients, rotation angle, or case index).
    pub params: Vec<f64>,
    pub residual: f64,
    /// Identity-specific component norms (empty when not applicable).
    pub components: Vec<f64>,
    pub passed: bool,
}

/// Per-identity verification report. Runs with identical seed and
/// configuration serialize to byte-identical JSON apart from `runtime_ms`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub schema: u32,
    pub identity: String,
    pub algebra: String,
    pub seed: u64,
    /// Which norm the residuals use (flagged because indefinite pairings
    /// have no canonical Euclidean norm on blades).
    pub norm: String,
    pub samples: Vec<SampleRecord>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub verdict: String,
    pub runtime_ms: u64,
}

impl ResidualReport {
    pub fn new(
        identity: impl Into<String>,
        algebra: impl Into<String>,
        seed: u64,
        norm: impl Into<String>,
        tolerance: f64,
    ) -> Self {
        ResidualReport {
            schema: REPORT_SCHEMA,
            identity: identity.into(),
            algebra: algebra.into(),
            seed,
            norm: norm.into(),
            samples: Vec::new(),
            max_residual: 0.0,
            tolerance,
            verdict: "pass".to_string(),
            runtime_ms: 0,
        }
    }

    pub fn push(&mut self, params: Vec<f64>, residual: f64, components: Vec<f64>) {
        let passed = residual <= self.tolerance;
        self.samples.push(SampleRecord {
            params,
            residual,
            components,
            passed,
        });
        if residual > self.max_residual {
            self.max_residual = residual;
        }
        if !passed {
            self.verdict = "fail".to_string();
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// One-line summary for console output.
    pub fn summary(&self) -> String {
        format!(
            "{:<14} {:<14} samples={:<3} max_residual={:.3e} tol={:.1e} ... {}",
            self.identity,
            self.algebra,
            self.samples.len(),
            self.max_residual,
            self.tolerance,
            if self.passed() { "pass" } else { "FAIL" }
        )
    }
}
