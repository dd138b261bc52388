//! JSON result records. Complex matrices are nested arrays of `[re, im]` pairs.

use nhqc_core::analysis::{FidelityResult, GateKind, ScalingFit};
use nhqc_core::dfs::DephasingOutcome;
use nhqc_core::{ComplexMatrix, HolonomyReport, C64};
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, Schedule};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| [m.get(r, c).re, m.get(r, c).im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Option<ComplexMatrix> {
    let n = rows.first()?.len();
    if rows.iter().any(|r| r.len() != n) {
        return None;
    }
    let entries: Vec<C64> = rows.iter().flatten().map(|[re, im]| C64::new(*re, *im)).collect();
    ComplexMatrix::from_row_slice(rows.len(), n, &entries).ok()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    pub version: String,
    /// Unix seconds; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    pub input: RunConfig,
    pub outputs: Outputs,
}

impl ResultRecord {
    pub fn new(command: &str, input: RunConfig, outputs: Outputs) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
            input,
            outputs,
        }
    }
}

fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return t;
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outputs {
    Gate(GateOutput),
    Sweep(SweepOutput),
    Holonomy(HolonomyOutput),
    Dfs(DfsOutput),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateOutput {
    pub kind: GateKind,
    /// Gate built from its pulse schedule.
    pub ideal: MatrixJson,
    /// Distance from `ideal` to the closed-form target.
    pub target_distance: f64,
    pub matches_target: bool,
    /// One-qubit gates only: `ideal` in the `(e, b, d)` basis.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal_ebd: Option<MatrixJson>,
    /// Two-qubit gates only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entangling: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<MatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<FidelityResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_to_ideal: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub fit: ScalingFit,
    pub csv: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolonomyOutput {
    pub schedule: Schedule,
    pub report: HolonomyReport,
    /// One report per elementary loop, for composite schedules.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub per_loop: Vec<HolonomyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub midpoint_distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfsRow {
    pub kappa: f64,
    pub encoded: DephasingOutcome,
    pub unencoded: DephasingOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfsOutput {
    pub seed: u64,
    pub rows: Vec<DfsRow>,
    pub csv: String,
}
