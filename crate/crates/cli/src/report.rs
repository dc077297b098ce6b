//! The JSON run report and the histogram CSV format.

use std::collections::BTreeMap;

use qimseg::cost::CostReport;
use qimseg::oracle::Mse;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct ImageMeta {
    pub n: usize,
    pub q: usize,
    pub side: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageCost {
    pub name: String,
    pub not: u64,
    pub h: u64,
    pub cnot: u64,
    pub toffoli: u64,
    pub cswap: u64,
    pub reset: u64,
    /// MCX counts keyed by control count.
    pub mcx: BTreeMap<String, u64>,
    pub total_cost: u64,
}

impl StageCost {
    pub fn from_report(name: &str, r: &CostReport) -> Self {
        StageCost {
            name: name.to_string(),
            not: r.not,
            h: r.h,
            cnot: r.cnot,
            toffoli: r.toffoli,
            cswap: r.cswap,
            reset: r.reset,
            mcx: r.mcx.iter().map(|(&k, &v)| (k.to_string(), v)).collect(),
            total_cost: r.total_cost,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CostSection {
    pub stages: Vec<StageCost>,
    pub total: u64,
    /// Total with the image-loading oracle fragments excluded.
    pub headline_total: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MseEntry {
    pub numerator: u64,
    pub denominator: u64,
    pub value: f64,
}

impl From<Mse> for MseEntry {
    fn from(m: Mse) -> Self {
        MseEntry {
            numerator: m.numerator,
            denominator: m.denominator,
            value: m.as_f64(),
        }
    }
}

/// MSE of the adaptive and fixed-threshold segmentations against a
/// reference mask.
#[derive(Debug, Clone, Serialize)]
pub struct MseSection {
    pub reference: String,
    pub adaptive: MseEntry,
    pub fixed: MseEntry,
    pub fixed_threshold: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SamplingSection {
    pub shots: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TimingSection {
    pub build_ms: f64,
    pub simulate_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub image: ImageMeta,
    pub z: u64,
    pub window: String,
    pub backend: Option<String>,
    pub qubit_total: Option<usize>,
    pub cost: Option<CostSection>,
    /// Present on every quantum run: whether the decoded image equals the
    /// classical oracle bit for bit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mse: Option<MseSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSection>,
    /// Only with --timing; omitted by default so report bytes are
    /// deterministic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<TimingSection>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Render one measured pattern as the flag bit, then the Y bits, then the
/// X bits (each group most-significant first).
pub fn format_pattern(pattern: u64, n: usize) -> String {
    let mask = (1u64 << n) - 1;
    let d0 = pattern & 1;
    let y = (pattern >> 1) & mask;
    let x = (pattern >> (1 + n)) & mask;
    format!("{d0}{y:0width$b}{x:0width$b}", width = n)
}

/// CSV over the measured (flag, Y, X) marginal: `basis_pattern,probability`
/// rows in ascending pattern order.
pub fn histogram_csv(marginal: &BTreeMap<u64, f64>, n: usize) -> String {
    let mut out = String::from("basis_pattern,probability\n");
    for (&pattern, &p) in marginal {
        out.push_str(&format!("{},{}\n", format_pattern(pattern, n), p));
    }
    out
}
